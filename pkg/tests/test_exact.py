"""Exact scalar and vector arithmetic."""

from fractions import Fraction as Q

import pytest

from qfoundry.exact import (
    DegenerateInputError,
    DimensionMismatchError,
    ExactVector,
    QuadScalar,
    RationalPoint,
    VectorSet,
    cross_product,
    inner_product,
    orthogonal,
)

R2 = QuadScalar.sqrt2()
R3 = QuadScalar.sqrt3()
R6 = QuadScalar.sqrt6()


def test_generator_products():
    assert R2 * R3 == R6
    assert R2 * R2 == QuadScalar(2)
    assert R3 * R3 == QuadScalar(3)
    assert R2 * R6 == QuadScalar(0, 0, 2, 0)  # 2*sqrt3
    assert R3 * R6 == QuadScalar(0, 3, 0, 0)  # 3*sqrt2


def test_conjugate_product():
    # (1 + sqrt2)(1 - sqrt2) = -1
    assert (QuadScalar(1) + R2) * (QuadScalar(1) - R2) == QuadScalar(-1)


def _random_scalar(rng):
    return QuadScalar(
        Q(int(rng.integers(-9, 10)), int(rng.integers(1, 7))),
        Q(int(rng.integers(-9, 10)), int(rng.integers(1, 7))),
        Q(int(rng.integers(-9, 10)), int(rng.integers(1, 7))),
        Q(int(rng.integers(-9, 10)), int(rng.integers(1, 7))),
    )


def test_ring_axioms_random():
    import numpy as np

    rng = np.random.default_rng(23)
    for _ in range(200):
        s, t, r = (_random_scalar(rng) for _ in range(3))
        assert (s * t) * r == s * (t * r)
        assert s * t == t * s
        assert s * (t + r) == s * t + s * r
        assert s + t == t + s
        assert s - s == QuadScalar(0)


def test_float_embedding_consistent():
    import math

    x = QuadScalar(1, 2, -3, Q(1, 2))
    expected = 1 + 2 * math.sqrt(2) - 3 * math.sqrt(3) + 0.5 * math.sqrt(6)
    assert abs(x.to_float() - expected) < 1e-14


def test_inverse_random():
    import numpy as np

    rng = np.random.default_rng(5)
    for _ in range(100):
        s = _random_scalar(rng)
        if s.is_zero():
            continue
        assert s * s.inverse() == QuadScalar(1)
    with pytest.raises(ZeroDivisionError):
        QuadScalar(0).inverse()


def test_inner_product_examples():
    e1 = ExactVector([1, 0, 0])
    e2 = ExactVector([0, 1, 0])
    assert inner_product(e1, e2).is_zero()

    g31 = ExactVector([QuadScalar(1), R2, QuadScalar(0)])
    h11 = ExactVector([R2, QuadScalar(-1), QuadScalar(1)])
    assert inner_product(g31, h11).is_zero()

    u = ExactVector([1, 1, 0, 0])
    v = ExactVector([1, -1, 0, 0])
    assert inner_product(u, v).is_zero()


def test_inner_product_symmetry_random():
    import numpy as np

    rng = np.random.default_rng(11)
    for _ in range(50):
        u = ExactVector([_random_scalar(rng) + QuadScalar(1) for _ in range(3)])
        v = ExactVector([_random_scalar(rng) + QuadScalar(1) for _ in range(3)])
        assert inner_product(u, v) == inner_product(v, u)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        inner_product(ExactVector([1, 0]), ExactVector([1, 0, 0]))


def test_cross_product_examples():
    e1 = ExactVector([1, 0, 0])
    e2 = ExactVector([0, 1, 0])
    assert cross_product(e1, e2) == ExactVector([0, 0, 1])

    u = ExactVector([QuadScalar(1), R2, QuadScalar(0)])
    v = ExactVector([R2, QuadScalar(-1), QuadScalar(1)])
    w = cross_product(u, v)
    assert w == ExactVector([R2, QuadScalar(-1), QuadScalar(-3)])
    assert inner_product(u, w).is_zero()
    assert inner_product(v, w).is_zero()

    f11 = ExactVector([0, 1, 1])
    f12 = ExactVector([0, -1, 1])
    assert cross_product(f11, f12) == ExactVector([1, 0, 0])  # ray of (2,0,0)


def test_cross_product_degenerate():
    u = ExactVector([1, 2, 0])
    with pytest.raises(DegenerateInputError):
        cross_product(u, u.scaled(3))


def test_cross_product_orthogonal_to_inputs_random():
    import numpy as np

    rng = np.random.default_rng(37)
    built = 0
    while built < 30:
        u = ExactVector([_random_scalar(rng) + QuadScalar(1) for _ in range(3)])
        v = ExactVector([_random_scalar(rng) + QuadScalar(2) for _ in range(3)])
        try:
            w = cross_product(u, v)
        except DegenerateInputError:
            continue
        assert inner_product(u, w).is_zero()
        assert inner_product(v, w).is_zero()
        built += 1


def test_ray_equality_rational_scale():
    u = ExactVector([QuadScalar(1), R2, QuadScalar(0)])
    assert u == u.scaled(Q(7, 3))
    assert u == u.scaled(-2)
    assert hash(u) == hash(u.scaled(5))


def test_ray_equality_field_scale():
    # the same ray written with entries scaled by sqrt3
    u = ExactVector([QuadScalar(0), R3, R6])
    v = ExactVector([QuadScalar(0), QuadScalar(1), R2])
    assert u == v
    assert u.scaled(R2) == u


def test_zero_vector_rejected():
    with pytest.raises(DegenerateInputError):
        ExactVector([0, 0, 0])


def test_rational_point_validation():
    RationalPoint(Q(3, 5), Q(-4, 5), 0)
    with pytest.raises(ValueError):
        RationalPoint(Q(1, 2), Q(1, 2), 0)


def test_vector_set_json_roundtrip(tmp_path):
    vset = VectorSet(
        3,
        [
            ExactVector([QuadScalar(1), R2, QuadScalar(0)], "a"),
            ExactVector([0, 1, 1], "b"),
        ],
    )
    path = tmp_path / "set.json"
    vset.dump(path)
    loaded = VectorSet.load(path)
    assert loaded.dimension == 3
    assert [v.label for v in loaded] == ["a", "b"]
    assert all(x == y for x, y in zip(loaded, vset))


def test_vector_set_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValueError, match="malformed"):
        VectorSet.load(path)


def test_orthogonality_scale_invariant():
    u = ExactVector([QuadScalar(1), R2, QuadScalar(0)])
    v = ExactVector([R2, QuadScalar(-1), QuadScalar(1)])
    assert orthogonal(u, v)
    assert orthogonal(u.scaled(R3), v.scaled(Q(-5, 2)))
