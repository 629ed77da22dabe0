"""Dense complex linear algebra for small Hilbert spaces.

Trace-rule probabilities, projective collapse, spin operators, Kronecker
products, reconstruction of a state from an expectation-value oracle, and
the single-generator construction for tuples of orthogonal projections.

Tolerances used throughout the package:
  ARITH_TOL   1e-12  exact arithmetic identities
  STRUCT_TOL  1e-10  structural invariants (hermiticity, idempotency, trace)
  VERIFY_TOL  1e-8   verification assertions on derived operators
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

ARITH_TOL = 1e-12
STRUCT_TOL = 1e-10
VERIFY_TOL = 1e-8

MAX_DIM = 16
MAX_GENERATOR_TUPLE = 5

# gap threshold for grouping degenerate eigenvalues into one spectral projector
EIGEN_GAP = 1e-8


class ConditioningError(ValueError):
    """Raised when conditioning on an outcome of (numerically) zero probability."""


class InconsistentOracleError(ValueError):
    """Raised when an expectation oracle is not generated by any Hermitian state."""


def _as_matrix(obj) -> np.ndarray:
    mat = obj.matrix if hasattr(obj, "matrix") else obj
    arr = np.asarray(mat, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {arr.shape[0]} exceeds the cap of {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


class DensityOperator:
    """Hermitian, positive-semidefinite, unit-trace matrix."""

    def __init__(self, matrix) -> None:
        mat = _as_matrix(matrix)
        if np.abs(mat - mat.conj().T).max() > ARITH_TOL:
            raise ValueError("density operator must be Hermitian within 1e-12")
        if abs(np.trace(mat).real - 1.0) > ARITH_TOL:
            raise ValueError("density operator must have unit trace within 1e-12")
        eigenvalues = np.linalg.eigvalsh(mat)
        if eigenvalues.min() < -1e-10:
            raise ValueError(f"negative eigenvalue {eigenvalues.min():.3e}")
        self.matrix = mat

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector: Sequence[complex]) -> "DensityOperator":
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dimension: int) -> "DensityOperator":
        return cls(np.eye(dimension, dtype=complex) / dimension)


class ProjectionOp:
    """Hermitian idempotent matrix."""

    def __init__(self, matrix) -> None:
        mat = _as_matrix(matrix)
        if np.abs(mat - mat.conj().T).max() > STRUCT_TOL:
            raise ValueError("projection must be Hermitian")
        if np.linalg.norm(mat @ mat - mat, 2) > STRUCT_TOL:
            raise ValueError("projection must be idempotent within 1e-10")
        self.matrix = mat

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))

    @classmethod
    def onto(cls, vector: Sequence[complex]) -> "ProjectionOp":
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def identity(cls, dimension: int) -> "ProjectionOp":
        return cls(np.eye(dimension, dtype=complex))

    def complement(self) -> "ProjectionOp":
        return ProjectionOp(np.eye(self.dimension) - self.matrix)


def born_probability(rho: DensityOperator, proj: ProjectionOp) -> float:
    """Trace-rule probability of the yes outcome, clamped to [0, 1]."""
    r, p = _as_matrix(rho), _as_matrix(proj)
    if r.shape != p.shape:
        raise ValueError(f"dimension mismatch: {r.shape[0]} vs {p.shape[0]}")
    value = np.trace(r @ p).real
    if value < -STRUCT_TOL or value > 1.0 + STRUCT_TOL:
        raise ValueError(f"trace value {value} outside [0,1] beyond tolerance")
    return min(1.0, max(0.0, value))


def collapse(rho: DensityOperator, proj: ProjectionOp) -> DensityOperator:
    """Post-measurement state P rho P / Tr(rho P) for the yes outcome."""
    r, p = _as_matrix(rho), _as_matrix(proj)
    weight = np.trace(r @ p).real
    if weight <= ARITH_TOL:
        raise ConditioningError(f"outcome probability {weight:.3e} is not positive")
    return DensityOperator(p @ r @ p / weight)


def spin_operator(theta: float, phi: float) -> np.ndarray:
    """Spin along the axis (cos(theta)sin(phi), sin(theta)sin(phi), cos(phi))."""
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    return np.array(
        [[cp, ct * sp - 1j * st * sp], [ct * sp + 1j * st * sp, -cp]], dtype=complex
    )


def spin_projectors(theta: float, phi: float) -> tuple[ProjectionOp, ProjectionOp]:
    """The (up, down) projectors (1 ± sigma_r)/2 for the given axis."""
    sigma = spin_operator(theta, phi)
    eye = np.eye(2)
    return ProjectionOp((eye + sigma) / 2), ProjectionOp((eye - sigma) / 2)


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the first factor varies slowest (e1⊗e1 is the
    first coordinate of the product basis)."""
    am, bm = _as_matrix(a), _as_matrix(b)
    if am.shape[0] * bm.shape[0] > MAX_DIM:
        raise ValueError("tensor product dimension exceeds the cap of 16")
    return np.kron(am, bm)


SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2.0)


def pair_operator_f(e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
    """Hermitian operator psi -> <e2,psi> e1 + <e1,psi> e2."""
    return np.outer(e1, e2.conj()) + np.outer(e2, e1.conj())


def pair_operator_g(e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
    """Hermitian operator psi -> i<e2,psi> e1 - i<e1,psi> e2."""
    return 1j * np.outer(e1, e2.conj()) - 1j * np.outer(e2, e1.conj())


def reconstruct_state(
    expectation: Callable[[np.ndarray], float],
    basis: Sequence[np.ndarray],
) -> np.ndarray:
    """Rebuild the generating operator of an expectation-value oracle.

    Diagonal entries come from rank-1 projections; the (i, j) entry is
    recovered as half the expectation of the symmetric pair operator plus
    i/2 times that of the antisymmetric one.  Both triangle halves are
    queried independently and must agree, otherwise the oracle cannot come
    from any Hermitian operator.
    """
    vecs = [np.asarray(e, dtype=complex) for e in basis]
    n = len(vecs)
    out = np.zeros((n, n), dtype=complex)
    coords = np.zeros((n, n), dtype=complex)
    for i in range(n):
        coords[i, i] = expectation(np.outer(vecs[i], vecs[i].conj()))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            f_val = expectation(pair_operator_f(vecs[i], vecs[j]))
            g_val = expectation(pair_operator_g(vecs[i], vecs[j]))
            coords[i, j] = 0.5 * f_val + 0.5j * g_val
    if np.abs(coords - coords.conj().T).max() > STRUCT_TOL:
        raise InconsistentOracleError(
            "oracle reconstruction is not Hermitian within 1e-10"
        )
    # coords holds <e_i, U e_j>; assemble U in the original coordinates
    b = np.column_stack(vecs)
    out = b @ coords @ b.conj().T
    return out


def dispersive_direction(state: np.ndarray) -> np.ndarray:
    """A unit vector e with 0 < Tr(U P_e) < 1, witnessing dispersion.

    Any unit-trace positive operator admits one: mix the leading eigenvector
    with an orthogonal completion direction.
    """
    mat = _as_matrix(state)
    _, vectors = np.linalg.eigh(mat)
    top = vectors[:, -1]
    other = vectors[:, 0]
    for weight in (0.5, 0.25, 0.75):
        e = math.sqrt(weight) * top + math.sqrt(1 - weight) * other
        e = e / np.linalg.norm(e)
        p = float(np.real(e.conj() @ mat @ e))
        if ARITH_TOL < p < 1 - ARITH_TOL:
            return e
    raise ValueError("no dispersive direction found; operator is not a state")


def generator_alphas(n: int) -> list[float]:
    """Coefficients alpha_1..alpha_n with alpha_1=1 and
    alpha_k = (1 - sqrt(1 - alpha_{k-1})) / 2."""
    if not 1 <= n <= MAX_GENERATOR_TUPLE:
        raise ValueError(f"tuple length must be in 1..{MAX_GENERATOR_TUPLE}")
    alphas = [1.0]
    for _ in range(n - 1):
        alphas.append(0.5 * (1.0 - math.sqrt(1.0 - alphas[-1])))
    return alphas


def _h(mat: np.ndarray) -> np.ndarray:
    return 4.0 * (mat - mat @ mat)


def ks_single_generator(projections: Sequence[ProjectionOp]):
    """Single Hermitian generator for a tuple of orthogonal projections.

    Builds A = sum_k alpha_k P_k and evaluates the recursively defined
    functions that recover each P_k from A alone, returning the generator,
    the coefficients and the per-projection residuals.  The last function is
    the (n-1)-fold iterate of x -> 4(x - x^2); earlier ones peel off the
    recovered projection and recurse.
    """
    mats = [_as_matrix(p) for p in projections]
    n = len(mats)
    if not 1 <= n <= MAX_GENERATOR_TUPLE:
        raise ValueError(f"tuple length must be in 1..{MAX_GENERATOR_TUPLE}")
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(mats[i] @ mats[j], 2) > STRUCT_TOL:
                raise ValueError(f"projections {i} and {j} are not orthogonal")

    alphas = generator_alphas(n)
    gen = sum(alpha * mat for alpha, mat in zip(alphas, mats))

    def evaluate(k: int, m: int, mat: np.ndarray) -> np.ndarray:
        """f_{m,k} applied to a matrix, per the inductive construction."""
        if m == 1:
            return mat
        if k == m:
            out = mat
            for _ in range(m - 1):
                out = _h(out)
            return out
        peeled = mat - alphas[m - 1] * evaluate(m, m, mat)
        return evaluate(k, m - 1, peeled)

    recovered = [evaluate(k + 1, n, gen) for k in range(n)]
    residuals = [
        float(np.linalg.norm(rec - mat, 2)) for rec, mat in zip(recovered, mats)
    ]
    return gen, alphas, residuals


def spectral_projectors(matrix: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Eigenvalue/projector pairs with nearby eigenvalues grouped.

    Eigenvalues closer than the gap threshold are merged into one projector
    so that degeneracies do not split into spurious rank-1 pieces.
    """
    mat = _as_matrix(matrix)
    values, vectors = np.linalg.eigh(mat)
    groups: list[tuple[float, np.ndarray]] = []
    start = 0
    for idx in range(1, len(values) + 1):
        if idx == len(values) or values[idx] - values[idx - 1] > EIGEN_GAP:
            block = vectors[:, start:idx]
            proj = block @ block.conj().T
            groups.append((float(values[start:idx].mean()), proj))
            start = idx
    return groups
