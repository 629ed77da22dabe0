"""Hidden-variable simulator: families, valuations, sequential dynamics."""

import math

import numpy as np
import pytest

from qfoundry import mkc
from qfoundry import quantum as qt

SEED = 0xC0FFEE
SHOTS = 100_000


@pytest.fixture(scope="module")
def family3():
    return mkc.generate_basis_family(3, 16, SEED)


@pytest.fixture(scope="module")
def rho3():
    rng = np.random.default_rng(41)
    raw = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    return qt.DensityOperator(raw @ raw.conj().T / np.trace(raw @ raw.conj().T).real)


def test_single_basis_family_trivially_incompatible():
    family = mkc.generate_basis_family(2, 1, seed=1)
    assert family.size == 1


def test_hand_commutator_dim2():
    b1 = np.eye(2, dtype=complex)
    b2 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    p = np.diag([1.0, 0.0]).astype(complex)
    q = np.outer(b2[0], b2[0].conj())
    assert np.linalg.norm(p @ q - q @ p, 2) == pytest.approx(0.5, abs=1e-12)
    assert mkc.totally_incompatible(b1, b2)


def test_random_family_pairwise_incompatible():
    family = mkc.generate_basis_family(3, 10, seed=42)
    pairs = [(i, j) for i in range(10) for j in range(i + 1, 10)]
    assert len(pairs) == 45
    assert all(mkc.totally_incompatible(family.bases[i], family.bases[j]) for i, j in pairs)


def test_family_reproducible_and_prefix_stable():
    a = mkc.generate_basis_family(3, 12, seed=7)
    b = mkc.generate_basis_family(3, 12, seed=7)
    assert all(np.array_equal(x, y) for x, y in zip(a.bases, b.bases))
    prefix = mkc.generate_basis_family(3, 5, seed=7)
    assert all(np.array_equal(x, y) for x, y in zip(prefix.bases, a.bases[:5]))


def test_probability_trivial_projections(family3, rho3):
    n = family3.dimension
    assert mkc.mkc_probability(rho3, np.eye(n), family3) == pytest.approx(1.0)
    assert mkc.mkc_probability(rho3, np.zeros((n, n)), family3) == pytest.approx(0.0)


def test_probability_matches_trace_rule(family3, rho3):
    for m in (0, 3, 7):
        atom = family3.projector(m, 1)
        assert mkc.mkc_probability(rho3, atom, family3) == pytest.approx(
            qt.born_probability(rho3, qt.ProjectionOp(atom)), abs=1e-12
        )
        rank2 = family3.projector(m, 0) + family3.projector(m, 2)
        assert mkc.mkc_probability(rho3, rank2, family3) == pytest.approx(
            qt.born_probability(rho3, qt.ProjectionOp(rank2)), abs=1e-12
        )


def test_probability_outside_family(family3, rho3):
    rogue = qt.ProjectionOp.onto([1.0, 2.0, 3.0]).matrix
    with pytest.raises(mkc.NotInFamilyError):
        mkc.mkc_probability(rho3, rogue, family3)


def test_valuation_sum_rule(family3, rho3):
    valuation = mkc.sample_valuation(rho3, family3, seed=5)
    for m in range(family3.size):
        values = [valuation.value(family3.projector(m, j)) for j in range(3)]
        assert sum(values) == 1


def test_valuation_deterministic_on_eigenstate(family3):
    rho = qt.DensityOperator.pure(family3.bases[2][0])
    for seed in range(10):
        valuation = mkc.sample_valuation(rho, family3, seed)
        assert valuation.choice(2) == 0


def test_valuation_query_order_independent(family3, rho3):
    a = mkc.sample_valuation(rho3, family3, seed=9)
    b = mkc.sample_valuation(rho3, family3, seed=9)
    order_a = [a.choice(m) for m in range(8)]
    order_b = [b.choice(m) for m in reversed(range(8))]
    assert order_a == list(reversed(order_b))


def test_uniform_marginal_dim2():
    family = mkc.generate_basis_family(2, 4, seed=3)
    rho = qt.DensityOperator.maximally_mixed(2)
    choices = mkc.sample_choices(rho, family, 0, SHOTS, seed=3)
    freq = float(np.mean(choices == 0))
    sigma = math.sqrt(0.25 / SHOTS)
    assert abs(freq - 0.5) <= 3 * sigma


def test_joint_frequencies_factorize(family3, rho3):
    c0 = mkc.sample_choices(rho3, family3, 0, SHOTS, seed=SEED)
    c1 = mkc.sample_choices(rho3, family3, 1, SHOTS, seed=SEED)
    p = family3.atom_probabilities(rho3, 0)[0]
    q = family3.atom_probabilities(rho3, 1)[0]
    joint = float(np.mean((c0 == 0) & (c1 == 0)))
    sigma = math.sqrt(p * q * (1 - p * q) / SHOTS)
    assert abs(joint - p * q) <= 3 * sigma


def test_commuting_projections_functionally_dependent(family3, rho3):
    valuation = mkc.sample_valuation(rho3, family3, seed=2)
    atom = family3.projector(4, 1)
    rank2 = family3.projector(4, 1) + family3.projector(4, 2)
    # same-basis projections: value of the larger is implied by the atom
    assert valuation.value(rank2) >= valuation.value(atom)


def test_nearest_observable_exact_when_diagonal(family3):
    values = np.array([2.0, -1.0, 0.5])
    target = sum(values[k] * family3.projector(5, k) for k in range(3))
    realized, m, dist = mkc.nearest_family_observable(target, family3)
    assert m == 5
    assert dist < 1e-12
    assert np.allclose(realized, target, atol=1e-12)


def test_nearest_observable_probability_shift_bound(family3, rho3):
    proj = qt.ProjectionOp.onto([1.0, 1.0, 1.0]).matrix
    realized, _, dist = mkc.nearest_family_observable(proj, family3)
    groups = qt.spectral_projectors(realized)
    near = max(groups, key=lambda g: g[0])[1]
    shift = abs(
        qt.born_probability(rho3, qt.ProjectionOp(near))
        - qt.born_probability(rho3, qt.ProjectionOp(proj))
    )
    assert shift <= np.linalg.norm(near - proj, 2) + 1e-12


def test_nearest_observable_distance_monotone_in_size():
    rng = np.random.default_rng(17)
    raw = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    observable = raw + raw.conj().T
    small = mkc.generate_basis_family(3, 8, seed=1)
    large = mkc.generate_basis_family(3, 32, seed=1)
    _, _, d_small = mkc.nearest_family_observable(observable, small)
    _, _, d_large = mkc.nearest_family_observable(observable, large)
    assert d_large <= d_small + 1e-12


def test_sequence_repeatability(family3):
    rho = qt.DensityOperator.maximally_mixed(3)
    proj = family3.projector(1, 0)
    report = mkc.simulate_sequence(rho, [proj, proj], family3, seed=3, shots=20_000)
    repeated = sum(v for k, v in report.frequencies.items() if k[0] == k[1])
    assert repeated == pytest.approx(1.0)


def test_sequence_small_overlap_small_joint():
    e1 = np.array([1.0, 0.0, 0.0])
    tilted = np.array([0.12, 1.0, 0.0])
    tilted = tilted / np.linalg.norm(tilted)
    family = mkc.generate_basis_family(3, 8, seed=11, include=[e1, tilted])
    rho = qt.DensityOperator.pure(e1)
    p1 = np.outer(e1, e1.conj())
    p2 = np.outer(tilted, tilted.conj())
    report = mkc.simulate_sequence(rho, [p1, p2], family, seed=11, shots=50_000)
    overlap = float(abs(np.vdot(e1, tilted)) ** 2)
    joint = report.frequencies.get((1.0, 1.0), 0.0)
    sigma = math.sqrt(overlap * (1 - overlap) / 50_000)
    assert abs(joint - overlap) <= 4 * sigma
    assert joint < 0.05


def test_sequence_cabello_one_ninth():
    e1 = np.ones(3) / math.sqrt(3)
    e2 = np.array([1.0, 1.0, -1.0]) / math.sqrt(3)
    family = mkc.generate_basis_family(3, 16, SEED, include=[e1, e2])
    report = mkc.simulate_sequence(
        qt.DensityOperator.pure(e1),
        [np.outer(e1, e1.conj()), np.outer(e2, e2.conj())],
        family,
        seed=SEED,
        shots=SHOTS,
    )
    assert max(report.realized_distances) < 1e-12
    joint = report.frequencies.get((1.0, 1.0), 0.0)
    sigma = math.sqrt((1 / 9) * (8 / 9) / SHOTS)
    assert abs(joint - 1 / 9) <= 3 * sigma
    assert report.exact_probabilities[(1.0, 1.0)] == pytest.approx(1 / 9, abs=1e-10)


def test_family_generation_validation():
    with pytest.raises(ValueError):
        mkc.generate_basis_family(5, 4, seed=0)
    with pytest.raises(ValueError):
        mkc.generate_basis_family(3, 65, seed=0)


def test_composite_family_not_factorizable():
    # a one-sided observable realized in a dim-4 family is generically
    # non-local: its realization is far from every X (x) 1
    family = mkc.generate_basis_family(4, 6, seed=19)
    sigma_z = np.diag([1.0, -1.0]).astype(complex)
    one_sided = np.kron(sigma_z, np.eye(2))
    assert mkc.factorization_defect(one_sided) < 1e-12
    realized, _, dist = mkc.nearest_family_observable(one_sided, family)
    assert dist > 0.1  # random bases never contain the product observable
    assert mkc.factorization_defect(realized) > 0.05


def test_factorization_defect_validation():
    with pytest.raises(ValueError):
        mkc.factorization_defect(np.eye(6))
