"""Non-contextual hidden-variable simulator over finite basis families.

A family is a finite list of pairwise totally incompatible orthonormal
bases; a valuation picks one marked vector per basis, lazily, with the
trace-rule weights.  Sequential measurements re-draw the valuation from
the collapsed state, which is the model's dynamics rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Optional, Sequence

import numpy as np

from .quantum import (
    DensityOperator,
    STRUCT_TOL,
    _as_matrix,
    collapse,
    spectral_projectors,
)

INCOMPATIBILITY_THRESHOLD = 1e-8
RESAMPLE_BUDGET = 1000


class FamilyGenerationError(RuntimeError):
    """Raised when the resample budget is exhausted."""


class NotInFamilyError(ValueError):
    """Raised for projections that belong to no family algebra."""


@dataclass(frozen=True)
class BasisFamily:
    """K orthonormal bases, pairwise totally incompatible.

    bases[m] has the m-th basis vectors as rows.
    """

    dimension: int
    bases: tuple[np.ndarray, ...]
    seed: int

    @property
    def size(self) -> int:
        return len(self.bases)

    def projector(self, m: int, j: int) -> np.ndarray:
        v = self.bases[m][j]
        return np.outer(v, v.conj())

    def atom_probabilities(self, rho: DensityOperator, m: int) -> np.ndarray:
        """Trace-rule weights of the m-th basis vectors, normalized."""
        mat = _as_matrix(rho)
        probs = np.einsum("ki,ij,kj->k", self.bases[m].conj(), mat, self.bases[m])
        probs = np.clip(probs.real, 0.0, None)
        return probs / probs.sum()

    def locate(self, projection) -> tuple[int, tuple[int, ...]] | None:
        """The unique (basis index, atom subset) realizing a projection.

        Returns None for the trivial projections 0 and 1, raises when the
        projection is in no family algebra or in more than one.
        """
        mat = _as_matrix(projection)
        n = self.dimension
        if np.linalg.norm(mat, 2) <= STRUCT_TOL:
            return None
        if np.linalg.norm(mat - np.eye(n), 2) <= STRUCT_TOL:
            return None
        hits = []
        for m, basis in enumerate(self.bases):
            weights = np.einsum("ki,ij,kj->k", basis.conj(), mat, basis).real
            atoms = tuple(j for j in range(n) if weights[j] > 0.5)
            rebuilt = sum(self.projector(m, j) for j in atoms) if atoms else np.zeros((n, n))
            if np.linalg.norm(mat - rebuilt, 2) <= STRUCT_TOL:
                hits.append((m, atoms))
        if not hits:
            raise NotInFamilyError("projection does not belong to any family algebra")
        if len(hits) > 1:
            raise NotInFamilyError(
                f"projection belongs to {len(hits)} family algebras; bases are "
                "not totally incompatible"
            )
        return hits[0]


def _boolean_projectors(basis: np.ndarray) -> list[np.ndarray]:
    """All nontrivial projections of the maximal abelian algebra of a basis."""
    n = basis.shape[0]
    atoms = [np.outer(basis[j], basis[j].conj()) for j in range(n)]
    out = []
    for r in range(1, n):
        for subset in combinations(range(n), r):
            out.append(sum(atoms[j] for j in subset))
    return out


def totally_incompatible(b1: np.ndarray, b2: np.ndarray) -> bool:
    """No nontrivial projection of one algebra commutes with one of the other."""
    for p in _boolean_projectors(b1):
        for q in _boolean_projectors(b2):
            if np.linalg.norm(p @ q - q @ p, 2) <= INCOMPATIBILITY_THRESHOLD:
                return False
    return True


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(raw)
    # fix the QR phase ambiguity for reproducibility
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return q


def _basis_containing(rng: np.random.Generator, vector: np.ndarray) -> np.ndarray:
    """An orthonormal basis whose first vector is the given unit vector."""
    n = vector.shape[0]
    cols = [vector / np.linalg.norm(vector)]
    while len(cols) < n:
        cand = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for existing in cols:
            cand = cand - existing * np.vdot(existing, cand)
        norm = np.linalg.norm(cand)
        if norm > 1e-6:
            cols.append(cand / norm)
    return np.array(cols)


def generate_basis_family(
    n: int,
    size: int,
    seed: int,
    include: Sequence[np.ndarray] = (),
) -> BasisFamily:
    """Seeded family of `size` pairwise totally incompatible bases.

    Optional `include` vectors are planted: each gets one basis containing
    it (random orthonormal completion) before the random bases are drawn.
    Bases violating pairwise total incompatibility are rejected and
    resampled, so the first k accepted bases do not depend on `size`.
    """
    if n not in (2, 3, 4):
        raise ValueError("family dimension must be 2, 3 or 4")
    if size > 64:
        raise ValueError("family size capped at 64")
    if len(include) > size:
        raise ValueError("more planted vectors than bases")
    rng = np.random.default_rng(seed)
    accepted: list[np.ndarray] = []
    attempts = 0
    for vec in include:
        v = np.asarray(vec, dtype=complex)
        while True:
            attempts += 1
            if attempts > RESAMPLE_BUDGET:
                raise FamilyGenerationError("resample budget exhausted")
            basis = _basis_containing(rng, v)
            if all(totally_incompatible(basis, prev) for prev in accepted):
                accepted.append(basis)
                break
    while len(accepted) < size:
        attempts += 1
        if attempts > RESAMPLE_BUDGET:
            raise FamilyGenerationError("resample budget exhausted")
        basis = _random_unitary(rng, n).T  # rows = basis vectors
        if all(totally_incompatible(basis, prev) for prev in accepted):
            accepted.append(basis)
    return BasisFamily(dimension=n, bases=tuple(accepted), seed=seed)


def mkc_probability(rho: DensityOperator, projection, family: BasisFamily) -> float:
    """Model probability of value 1: the sum of the trace-rule weights of
    the atoms below the projection, which equals the trace rule itself."""
    where = family.locate(projection)
    if where is None:
        mat = _as_matrix(projection)
        return 0.0 if np.linalg.norm(mat, 2) <= STRUCT_TOL else 1.0
    m, atoms = where
    rho_mat = _as_matrix(rho)
    return float(
        sum(np.trace(rho_mat @ family.projector(m, j)).real for j in atoms)
    )


@dataclass
class ValuationSeed:
    """Lazily sampled valuation: one marked basis vector per accessed basis.

    The draw for basis m uses an RNG stream derived from (seed, m), so the
    sampled choice does not depend on the order in which bases are queried.
    """

    family: BasisFamily
    rho: DensityOperator
    seed: int
    _choices: dict = field(default_factory=dict)

    def choice(self, m: int) -> int:
        if m not in self._choices:
            probs = self.family.atom_probabilities(self.rho, m)
            rng = np.random.default_rng((self.seed, m))
            self._choices[m] = int(rng.choice(len(probs), p=probs))
        return self._choices[m]

    def value(self, projection) -> int:
        """The 0/1 value assigned to a projection of a family algebra."""
        where = self.family.locate(projection)
        if where is None:
            mat = _as_matrix(projection)
            return 0 if np.linalg.norm(mat, 2) <= STRUCT_TOL else 1
        m, atoms = where
        return 1 if self.choice(m) in atoms else 0


def sample_valuation(
    rho: DensityOperator, family: BasisFamily, seed: int
) -> ValuationSeed:
    return ValuationSeed(family=family, rho=rho, seed=seed)


def sample_choices(
    rho: DensityOperator, family: BasisFamily, m: int, shots: int, seed: int
) -> np.ndarray:
    """Vectorized draw of the basis-m choice over many valuations."""
    probs = family.atom_probabilities(rho, m)
    rng = np.random.default_rng((seed, m))
    return rng.choice(len(probs), size=shots, p=probs)


def nearest_family_observable(
    observable, family: BasisFamily
) -> tuple[np.ndarray, int, float]:
    """Closest family realization of a Hermitian matrix.

    Keeps the observable's eigenvalues and re-attaches them to the basis
    (and vector matching) that minimizes the operator-norm distance.
    Returns (realized matrix, basis index, distance).
    """
    mat = _as_matrix(observable)
    if np.abs(mat - mat.conj().T).max() > STRUCT_TOL:
        raise ValueError("observable must be Hermitian")
    values, vectors = np.linalg.eigh(mat)
    n = mat.shape[0]
    best: Optional[tuple[float, int, np.ndarray]] = None
    for m in range(family.size):
        atoms = [family.projector(m, j) for j in range(n)]
        for perm in permutations(range(n)):
            candidate = sum(values[k] * atoms[perm[k]] for k in range(n))
            dist = float(np.linalg.norm(mat - candidate, 2))
            if best is None or dist < best[0] - 1e-15:
                best = (dist, m, candidate)
    dist, m, realized = best
    return realized, m, dist


def factorization_defect(observable, dims: tuple[int, int] = (2, 2)) -> float:
    """Distance of a two-party operator from the one-sided product form.

    Returns the operator-norm gap between the matrix and X (x) 1 for the
    best X, which is the normalized partial trace over the second factor.
    A realized family observable for a composite system generically has a
    large defect: the family does not respect the tensor-product split.
    """
    mat = _as_matrix(observable)
    d1, d2 = dims
    if mat.shape[0] != d1 * d2:
        raise ValueError(f"operator dimension {mat.shape[0]} is not {d1}*{d2}")
    blocks = mat.reshape(d1, d2, d1, d2)
    partial = np.einsum("ikjk->ij", blocks) / d2
    return float(np.linalg.norm(mat - np.kron(partial, np.eye(d2)), 2))


@dataclass(frozen=True)
class SequenceReport:
    """Aggregated outcomes of a repeated measurement sequence."""

    frequencies: dict
    exact_probabilities: dict
    realized_distances: tuple[float, ...]
    shots: int

    @property
    def total_variation_distance(self) -> float:
        keys = set(self.frequencies) | set(self.exact_probabilities)
        return 0.5 * sum(
            abs(self.frequencies.get(k, 0.0) - self.exact_probabilities.get(k, 0.0))
            for k in keys
        )


def simulate_sequence(
    rho0: DensityOperator,
    observables: Sequence,
    family: BasisFamily,
    seed: int,
    shots: int,
) -> SequenceReport:
    """Monte Carlo over sequential measurements with valuation re-draws.

    Each intended observable is first realized in the family; per shot the
    current valuation supplies the outcome, the state collapses onto the
    outcome's eigenspace, and later valuations are drawn from the collapsed
    state.  Outcome distributions over the whole sequence are exact functions
    of the collapse chain, so the per-prefix branch probabilities are
    precomputed once and shots reduce to categorical sampling.
    """
    realized = []
    distances = []
    for obs in observables:
        matrix, m, dist = nearest_family_observable(obs, family)
        groups = spectral_projectors(matrix)
        realized.append((m, groups))
        distances.append(dist)

    # branch tree: outcome-index prefix -> (cumulative weights, branch indices),
    # with zero-probability branches dropped so samples always land on a branch
    tree: dict[tuple[int, ...], tuple[np.ndarray, list[int], list[float]]] = {}

    def expand(prefix: tuple[int, ...], state: DensityOperator) -> None:
        if len(prefix) == len(realized):
            return
        _, groups = realized[len(prefix)]
        probs = np.array(
            [max(0.0, np.trace(state.matrix @ proj).real) for _, proj in groups]
        )
        total = probs.sum()
        probs = probs / total if total > 0 else probs
        live = [k for k in range(len(groups)) if probs[k] > 1e-12]
        tree[prefix] = (np.cumsum(probs[live]), live, [float(probs[k]) for k in live])
        for k in live:
            expand(prefix + (k,), collapse(state, groups[k][1]))

    expand((), rho0)

    rng = np.random.default_rng((seed, 0x5EC))
    uniforms = rng.random((shots, len(realized)))
    counts: dict[tuple[float, ...], int] = {}
    for s in range(shots):
        prefix: tuple[int, ...] = ()
        values = []
        for step, (_, groups) in enumerate(realized):
            cum, live, _ = tree[prefix]
            pick = min(int(np.searchsorted(cum, uniforms[s, step], side="right")), len(live) - 1)
            k = live[pick]
            values.append(round(groups[k][0], 12) + 0.0)  # +0.0 kills -0.0
            prefix = prefix + (k,)
        key = tuple(values)
        counts[key] = counts.get(key, 0) + 1

    frequencies = {k: v / shots for k, v in sorted(counts.items())}

    exact: dict[tuple[float, ...], float] = {}

    def walk(prefix: tuple[int, ...], acc: float, values: tuple[float, ...]) -> None:
        if len(prefix) == len(realized):
            exact[values] = exact.get(values, 0.0) + acc
            return
        _, live, probs = tree[prefix]
        _, groups = realized[len(prefix)]
        for k, p in zip(live, probs):
            value = groups[k][0]
            walk(prefix + (k,), acc * p, values + (round(value, 12) + 0.0,))

    walk((), 1.0, ())

    return SequenceReport(
        frequencies=frequencies,
        exact_probabilities=exact,
        realized_distances=tuple(distances),
        shots=shots,
    )
