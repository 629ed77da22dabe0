"""Subspace logic and context-indexed Heyting algebras.

Three structures are implemented: the lattice of closed subspaces with
span/intersection/orthocomplement connectives, its extension by finite
unions of subspaces, and two lattices of context-indexed projection
assignments over a finite poset of abelian algebras (one monotone along
inclusion, one against it).  Within each context everything is an exact
bitmask over that context's atoms; floating point only enters when
projections are related across contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from .quantum import ProjectionOp, _as_matrix

CONTAINMENT_TOL = 1e-9
MAX_SUBSPACE_DIM = 4
MAX_UNION_COMPONENTS = 8
MAX_EXHAUSTIVE_ELEMENTS = 4096


def _range_basis(projection: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(projection)
    return vectors[:, values > 0.5]


def projector_leq(p: np.ndarray, q: np.ndarray) -> bool:
    """Range inclusion P <= Q decided by the norm of QP - P."""
    return float(np.linalg.norm(q @ p - p, 2)) <= CONTAINMENT_TOL


class Subspace:
    """A closed subspace of C^n, held as its orthogonal projection."""

    def __init__(self, projection) -> None:
        mat = _as_matrix(projection)
        if mat.shape[0] > MAX_SUBSPACE_DIM:
            raise ValueError("subspace lattice capped at dimension 4")
        self.projection = ProjectionOp(mat).matrix

    @property
    def dimension(self) -> int:
        return self.projection.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.projection).real))

    @classmethod
    def spanned_by(cls, *vectors) -> "Subspace":
        dim = len(np.asarray(vectors[0]))
        cols = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        keep = u[:, s > CONTAINMENT_TOL]
        return cls(keep @ keep.conj().T)

    @classmethod
    def zero(cls, dimension: int) -> "Subspace":
        return cls(np.zeros((dimension, dimension), dtype=complex))

    @classmethod
    def full(cls, dimension: int) -> "Subspace":
        return cls(np.eye(dimension, dtype=complex))

    def __le__(self, other: "Subspace") -> bool:
        return projector_leq(self.projection, other.projection)

    def isclose(self, other: "Subspace") -> bool:
        return float(np.linalg.norm(self.projection - other.projection, 2)) <= CONTAINMENT_TOL


def ql_join(*subspaces: Subspace) -> Subspace:
    """Projector onto the closed span of the arguments."""
    dim = subspaces[0].dimension
    blocks = [_range_basis(s.projection) for s in subspaces]
    stacked = np.hstack([b for b in blocks if b.shape[1]] or [np.zeros((dim, 1))])
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    keep = u[:, s > CONTAINMENT_TOL]
    return Subspace(keep @ keep.conj().T)


def ql_meet(a: Subspace, b: Subspace) -> Subspace:
    """Projector onto the intersection: the kernel of (1-P) + (1-Q)."""
    dim = a.dimension
    eye = np.eye(dim)
    values, vectors = np.linalg.eigh((eye - a.projection) + (eye - b.projection))
    keep = vectors[:, values <= CONTAINMENT_TOL]
    return Subspace(keep @ keep.conj().T)


def ql_ortho(a: Subspace) -> Subspace:
    return Subspace(np.eye(a.dimension) - a.projection)


def orthomodular_holds(p: Subspace, q: Subspace) -> bool:
    """P <= Q implies Q = P v (Q ^ not-P)."""
    if not p <= q:
        return True
    rebuilt = ql_join(p, ql_meet(q, ql_ortho(p)))
    return rebuilt.isclose(q)


def l1_union(subspaces: Sequence[Subspace]) -> tuple[Subspace, ...]:
    """An element of the union lattice: a finite union of closed subspaces."""
    if len(subspaces) > MAX_UNION_COMPONENTS:
        raise ValueError(f"unions capped at {MAX_UNION_COMPONENTS} components")
    return tuple(subspaces)


def l1_join(a: Sequence[Subspace], b: Sequence[Subspace]) -> tuple[Subspace, ...]:
    return tuple(ql_join(x, y) for x in a for y in b)


def l1_meet(a: Sequence[Subspace], b: Sequence[Subspace]) -> tuple[Subspace, ...]:
    return tuple(ql_meet(x, y) for x in a for y in b)


def l1_negation(a: Sequence[Subspace]) -> Subspace:
    """Vectors orthogonal to every component: the complement of the span."""
    return ql_ortho(ql_join(*a))


def l1_double_negation(a: Sequence[Subspace]) -> Subspace:
    """The smallest closed subspace containing the union."""
    return ql_join(*a)


@dataclass(frozen=True)
class Context:
    """An abelian algebra given by its atoms (a partition of the identity)."""

    atoms: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        dim = self.atoms[0].shape[0]
        total = sum(self.atoms)
        if np.linalg.norm(total - np.eye(dim), 2) > 1e-10:
            raise ValueError(f"atoms of context {self.name!r} do not sum to identity")
        for i, p in enumerate(self.atoms):
            ProjectionOp(p)
            for q in self.atoms[i + 1 :]:
                if np.linalg.norm(p @ q, 2) > 1e-10:
                    raise ValueError(f"atoms of context {self.name!r} are not orthogonal")

    @property
    def size(self) -> int:
        return len(self.atoms)

    def mask_to_projection(self, mask: int) -> np.ndarray:
        dim = self.atoms[0].shape[0]
        out = np.zeros((dim, dim), dtype=complex)
        for k, atom in enumerate(self.atoms):
            if mask >> k & 1:
                out = out + atom
        return out

    def projection_to_mask(self, projection) -> Optional[int]:
        """The atom subset realizing a projection, or None if not in P(C)."""
        mat = _as_matrix(projection)
        mask = 0
        for k, atom in enumerate(self.atoms):
            weight = np.trace(atom @ mat).real / np.trace(atom).real
            if weight > 0.5:
                mask |= 1 << k
        rebuilt = self.mask_to_projection(mask)
        if np.linalg.norm(rebuilt - mat, 2) <= CONTAINMENT_TOL:
            return mask
        return None


class ContextPoset:
    """A finite poset of contexts ordered by algebra inclusion.

    Always contains the trivial context.  Inclusion i <= j means every atom
    of context j refines into (lies below) an atom of context i; refinement
    maps are precomputed so lattice elements are pure bitmask data.
    """

    def __init__(self, contexts: Iterable[Context]) -> None:
        contexts = list(contexts)
        dim = contexts[0].atoms[0].shape[0]
        trivial = Context(atoms=(np.eye(dim, dtype=complex),), name="trivial")
        self.contexts: list[Context] = [trivial]
        for ctx in contexts:
            if ctx.size == 1:
                continue  # another copy of the trivial context
            self.contexts.append(ctx)
        n = len(self.contexts)
        self.dimension = dim
        # refine[i][j][k] = index of the atom of context i containing atom k
        # of context j, present only when context i is included in context j
        self.refine: list[list[Optional[list[int]]]] = [
            [None] * n for _ in range(n)
        ]
        for i in range(n):
            for j in range(n):
                self.refine[i][j] = self._refinement(self.contexts[i], self.contexts[j])

    @staticmethod
    def _refinement(coarse: Context, fine: Context) -> Optional[list[int]]:
        mapping = []
        for q in fine.atoms:
            parent = None
            for idx, p in enumerate(coarse.atoms):
                if projector_leq(q, p):
                    parent = idx
                    break
            if parent is None:
                return None
            mapping.append(parent)
        return mapping

    def included(self, i: int, j: int) -> bool:
        """Whether context i's algebra is contained in context j's."""
        return self.refine[i][j] is not None

    def sub_contexts(self, j: int) -> list[int]:
        return [i for i in range(len(self.contexts)) if self.included(i, j)]

    def super_contexts(self, i: int) -> list[int]:
        return [j for j in range(len(self.contexts)) if self.included(i, j)]

    def expand_mask(self, i: int, j: int, mask: int) -> int:
        """Re-express a projection of context i as an atom mask of finer j."""
        mapping = self.refine[i][j]
        out = 0
        for k, parent in enumerate(mapping):
            if mask >> parent & 1:
                out |= 1 << k
        return out

    def full_mask(self, i: int) -> int:
        return (1 << self.contexts[i].size) - 1


def poset_from_bases(
    bases: Sequence[np.ndarray], include_intermediate: bool = True
) -> ContextPoset:
    """Generate a finite poset from a list of orthonormal bases.

    Each basis contributes its maximal abelian algebra; in dimension >= 3
    the two-block algebras {P_i, 1 - P_i} are included as intermediate
    contexts.  Duplicate algebras are merged.
    """
    contexts: list[Context] = []
    seen_keys: set[frozenset] = set()

    def add(atoms: tuple[np.ndarray, ...], name: str) -> None:
        # order-independent algebra fingerprint (+0.0 normalizes signed zeros)
        key = frozenset((np.round(a, 9) + 0.0).tobytes() for a in atoms)
        if key in seen_keys:
            return
        seen_keys.add(key)
        contexts.append(Context(atoms=atoms, name=name))

    for b_idx, basis in enumerate(bases):
        basis = np.asarray(basis, dtype=complex)
        dim = basis.shape[0]
        atoms = tuple(np.outer(basis[k], basis[k].conj()) for k in range(dim))
        add(atoms, f"basis{b_idx}")
        if include_intermediate and dim >= 3:
            eye = np.eye(dim, dtype=complex)
            for k in range(dim):
                add((atoms[k], eye - atoms[k]), f"basis{b_idx}:block{k}")
    return ContextPoset(contexts)


class ContextFunction:
    """A context-indexed projection assignment as per-context atom masks."""

    __slots__ = ("masks",)

    def __init__(self, masks: Sequence[int]) -> None:
        self.masks = tuple(masks)

    def __eq__(self, other) -> bool:
        return isinstance(other, ContextFunction) and self.masks == other.masks

    def __hash__(self) -> int:
        return hash(self.masks)

    def __repr__(self) -> str:
        return f"ContextFunction{self.masks}"

    def value(self, poset: ContextPoset, i: int) -> np.ndarray:
        return poset.contexts[i].mask_to_projection(self.masks[i])


VARIANT_DOWN = "l3"  # finer contexts carry smaller projections
VARIANT_UP = "l2"  # finer contexts carry larger projections


def is_monotone(poset: ContextPoset, element: ContextFunction, variant: str) -> bool:
    n = len(poset.contexts)
    for i in range(n):
        for j in range(n):
            if i == j or not poset.included(i, j):
                continue
            coarse_in_fine = poset.expand_mask(i, j, element.masks[i])
            if variant == VARIANT_DOWN:
                # S(fine) <= S(coarse)
                if element.masks[j] & ~coarse_in_fine:
                    return False
            elif variant == VARIANT_UP:
                # S(coarse) <= S(fine)
                if coarse_in_fine & ~element.masks[j]:
                    return False
            else:
                raise ValueError(f"unknown variant {variant!r}")
    return True


def bottom(poset: ContextPoset) -> ContextFunction:
    return ContextFunction([0] * len(poset.contexts))


def top(poset: ContextPoset) -> ContextFunction:
    return ContextFunction([poset.full_mask(i) for i in range(len(poset.contexts))])


def cf_leq(a: ContextFunction, b: ContextFunction) -> bool:
    return all((am & ~bm) == 0 for am, bm in zip(a.masks, b.masks))


def cf_join(a: ContextFunction, b: ContextFunction) -> ContextFunction:
    return ContextFunction([am | bm for am, bm in zip(a.masks, b.masks)])


def cf_meet(a: ContextFunction, b: ContextFunction) -> ContextFunction:
    return ContextFunction([am & bm for am, bm in zip(a.masks, b.masks)])


def _require_monotone(poset, elements, variant):
    for el in elements:
        if not is_monotone(poset, el, variant):
            raise ValueError(f"element {el} violates {variant} monotonicity")


def l3_implication(
    poset: ContextPoset, s1: ContextFunction, s2: ContextFunction
) -> ContextFunction:
    """Pointwise meet of complement-joins over all coarser contexts."""
    _require_monotone(poset, (s1, s2), VARIANT_DOWN)
    masks = []
    for c in range(len(poset.contexts)):
        acc = poset.full_mask(c)
        for d in poset.sub_contexts(c):
            local = (poset.full_mask(d) & ~s1.masks[d]) | s2.masks[d]
            acc &= poset.expand_mask(d, c, local)
        masks.append(acc)
    return ContextFunction(masks)


def l3_negation(poset: ContextPoset, s: ContextFunction) -> ContextFunction:
    return l3_implication(poset, s, bottom(poset))


def l2_implication(
    poset: ContextPoset, s1: ContextFunction, s2: ContextFunction
) -> ContextFunction:
    """Largest context projection below every finer complement-join."""
    _require_monotone(poset, (s1, s2), VARIANT_UP)
    masks = []
    for c in range(len(poset.contexts)):
        size = poset.contexts[c].size
        out = 0
        for atom in range(size):
            bit = 1 << atom
            ok = True
            for d in poset.super_contexts(c):
                target = (poset.full_mask(d) & ~s1.masks[d]) | s2.masks[d]
                if poset.expand_mask(c, d, bit) & ~target:
                    ok = False
                    break
            if ok:
                out |= bit
        masks.append(out)
    return ContextFunction(masks)


def embed_projection(poset: ContextPoset, projection) -> ContextFunction:
    """The canonical downward-monotone element of a single projection:
    the projection itself where expressible, the identity elsewhere."""
    masks = []
    for i, ctx in enumerate(poset.contexts):
        mask = ctx.projection_to_mask(projection)
        masks.append(mask if mask is not None else poset.full_mask(i))
    element = ContextFunction(masks)
    if not is_monotone(poset, element, VARIANT_DOWN):
        raise ValueError("projection embedding is not monotone on this poset")
    return element


def enumerate_elements(poset: ContextPoset, variant: str) -> list[ContextFunction]:
    """All monotone elements, by filtered product over per-context masks."""
    sizes = [1 << ctx.size for ctx in poset.contexts]
    total = 1
    for s in sizes:
        total *= s
    if total > MAX_EXHAUSTIVE_ELEMENTS:
        raise ValueError(
            f"poset has {total} candidate assignments, over the exhaustive "
            f"limit of {MAX_EXHAUSTIVE_ELEMENTS}"
        )
    out = []
    for masks in product(*(range(s) for s in sizes)):
        el = ContextFunction(masks)
        if is_monotone(poset, el, variant):
            out.append(el)
    return out


def sample_elements(
    poset: ContextPoset, variant: str, count: int, seed: int
) -> list[ContextFunction]:
    """Seeded random monotone elements, built along a linear extension."""
    rng = np.random.default_rng(seed)
    order = sorted(
        range(len(poset.contexts)), key=lambda i: len(poset.sub_contexts(i))
    )
    out = []
    for _ in range(count):
        masks = [0] * len(poset.contexts)
        for i in order:
            if variant == VARIANT_DOWN:
                bound = poset.full_mask(i)
                for d in poset.sub_contexts(i):
                    if d == i:
                        continue
                    bound &= poset.expand_mask(d, i, masks[d])
                allowed = [k for k in range(poset.contexts[i].size) if bound >> k & 1]
                mask = 0
                for k in allowed:
                    if rng.random() < 0.5:
                        mask |= 1 << k
                masks[i] = mask
            else:
                forced = 0
                for d in poset.sub_contexts(i):
                    if d == i:
                        continue
                    forced |= poset.expand_mask(d, i, masks[d])
                mask = forced
                for k in range(poset.contexts[i].size):
                    if not (forced >> k & 1) and rng.random() < 0.5:
                        mask |= 1 << k
                masks[i] = mask
        out.append(ContextFunction(masks))
    return out


@dataclass(frozen=True)
class LawReport:
    variant: str
    element_count: int
    triples_checked: int
    exhaustive: bool
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_heyting_laws(
    poset: ContextPoset,
    variant: str,
    exhaustive: bool = True,
    sample_count: int = 12,
    seed: int = 0,
) -> LawReport:
    """Verify lattice axioms, distributivity and the implication adjunction.

    Runs over all element triples when exhaustive, otherwise over a seeded
    sample, and reports every counterexample found.
    """
    if exhaustive:
        elements = enumerate_elements(poset, variant)
    else:
        elements = sample_elements(poset, variant, sample_count, seed)
        elements.extend([bottom(poset), top(poset)])
        elements = list(dict.fromkeys(elements))

    implication = l3_implication if variant == VARIANT_DOWN else l2_implication
    violations: list[str] = []
    checked = 0
    for s in elements:
        if cf_join(s, s) != s or cf_meet(s, s) != s:
            violations.append(f"idempotence fails at {s}")
    for s, t in product(elements, repeat=2):
        if cf_join(s, t) != cf_join(t, s) or cf_meet(s, t) != cf_meet(t, s):
            violations.append(f"commutativity fails at {s}, {t}")
        if cf_join(s, cf_meet(s, t)) != s or cf_meet(s, cf_join(s, t)) != s:
            violations.append(f"absorption fails at {s}, {t}")
    for s, t, r in product(elements, repeat=3):
        checked += 1
        if cf_join(s, cf_join(t, r)) != cf_join(cf_join(s, t), r):
            violations.append(f"join associativity fails at {s}, {t}, {r}")
        if cf_meet(s, cf_meet(t, r)) != cf_meet(cf_meet(s, t), r):
            violations.append(f"meet associativity fails at {s}, {t}, {r}")
        if cf_meet(s, cf_join(t, r)) != cf_join(cf_meet(s, t), cf_meet(s, r)):
            violations.append(f"meet-over-join distributivity fails at {s}, {t}, {r}")
        if cf_join(s, cf_meet(t, r)) != cf_meet(cf_join(s, t), cf_join(s, r)):
            violations.append(f"join-over-meet distributivity fails at {s}, {t}, {r}")
        arrow = implication(poset, t, r)
        if (cf_leq(cf_meet(s, t), r)) != cf_leq(s, arrow):
            violations.append(f"adjunction fails at {s}, {t}, {r}")
    return LawReport(
        variant=variant,
        element_count=len(elements),
        triples_checked=checked,
        exhaustive=exhaustive,
        violations=tuple(violations[:16]),
    )


def popper_counterexample() -> dict:
    """The two-dimensional distributivity failure with its probabilities.

    With the diagonal subspace against a coordinate axis and the state on
    that axis, conjoining with the axis-or-complement disjunction keeps the
    full diagonal probability 1/2, while distributing first annihilates it.
    """
    e1 = np.array([1.0, 0.0], dtype=complex)
    f = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    a = Subspace.spanned_by(e1)
    b = Subspace.spanned_by(f)
    excluded_middle = ql_join(a, ql_ortho(a))
    undistributed = ql_meet(b, excluded_middle)
    distributed = ql_join(ql_meet(b, a), ql_meet(b, ql_ortho(a)))
    state = np.outer(e1, e1.conj())
    return {
        "p_undistributed": float(np.trace(state @ undistributed.projection).real),
        "p_distributed": float(np.trace(state @ distributed.projection).real),
        "undistributed_equals_b": undistributed.isclose(b),
        "distributed_rank": distributed.rank,
    }
