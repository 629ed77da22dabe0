"""Pythagorean coloring of the rational sphere."""

import math
from fractions import Fraction as Q

import pytest

from qfoundry.exact import RationalPoint
from qfoundry.meyer import (
    PythTriple,
    enumerate_pyth_points,
    meyer_color,
    to_primitive_pyth,
    verify_meyer_conditions,
)

# frozen counts for the corpus at max_n = 25, cross-checked below by an
# independent enumeration over non-primitive triples
RAYS_25 = 543
PAIRS_25 = 735
TRIADS_25 = 205


def test_primitive_examples():
    assert to_primitive_pyth(RationalPoint(0, 0, 1)) == PythTriple(0, 0, 1, 1)
    assert to_primitive_pyth(RationalPoint(Q(2, 3), Q(2, 3), Q(1, 3))) == PythTriple(2, 2, 1, 3)
    assert to_primitive_pyth(RationalPoint(Q(3, 5), Q(-4, 5), 0)) == PythTriple(3, -4, 0, 5)


def test_pyth_triple_validation():
    with pytest.raises(ValueError):
        PythTriple(1, 1, 1, 2)


def test_color_examples():
    assert meyer_color(RationalPoint(0, 0, 1)) == 0
    assert meyer_color(RationalPoint(1, 0, 0)) == 1
    assert meyer_color(RationalPoint(Q(2, 3), Q(2, 3), Q(1, 3))) == 0


def test_coordinate_triad_colors():
    triad = [RationalPoint(1, 0, 0), RationalPoint(0, 1, 0), RationalPoint(0, 0, 1)]
    colors = [meyer_color(p) for p in triad]
    assert colors == [1, 1, 0]
    assert sum(colors) == 2


def test_primitive_triad_colors():
    # pairwise orthogonal integer triples on the n=3 sphere
    triad = [(2, 2, 1), (2, -1, -2), (1, -2, 2)]
    for a in range(3):
        for b in range(a + 1, 3):
            assert sum(x * y for x, y in zip(triad[a], triad[b])) == 0
    points = [RationalPoint(Q(x, 3), Q(y, 3), Q(z, 3)) for x, y, z in triad]
    colors = [meyer_color(p) for p in points]
    assert colors == [0, 1, 1]
    assert sum(colors) == 2


def test_orthogonal_pair_rule():
    pair = [RationalPoint(0, 0, 1), RationalPoint(1, 0, 0)]
    assert meyer_color(pair[0]) + meyer_color(pair[1]) >= 1


def test_enumerate_n1():
    points = enumerate_pyth_points(1)
    assert len(points) == 3  # the three coordinate axes as rays


def test_enumerate_n3_contains_221():
    points = enumerate_pyth_points(3)
    triples = {to_primitive_pyth(p).coords() for p in points}
    # the (2,2,1) ray in canonical sign, and permuted/sign variants
    assert (2, 2, 1) in triples
    assert (2, -2, 1) in triples or (-2, 2, -1) in triples
    assert (1, 2, 2) in triples
    assert (2, 1, 2) in triples


def test_exactly_one_odd_coordinate():
    for p in enumerate_pyth_points(15):
        t = to_primitive_pyth(p)
        assert t.is_primitive()
        odd = sum(1 for c in t.coords() if c % 2)
        assert odd == 1


def test_antipodal_invariance():
    for p in enumerate_pyth_points(10):
        assert meyer_color(p) == meyer_color(-p)


def test_frozen_counts_and_no_violations():
    report = verify_meyer_conditions(enumerate_pyth_points(25))
    assert report.rays == RAYS_25
    assert report.pairs == PAIRS_25
    assert report.triads == TRIADS_25
    assert report.violations == 0


def test_ray_count_oracle_n12():
    """Independent oracle: enumerate all (not only primitive) triples and
    reduce each to its primitive ray."""
    max_n = 12
    rays = set()
    for x in range(-max_n, max_n + 1):
        for y in range(-max_n, max_n + 1):
            for z in range(-max_n, max_n + 1):
                if x == y == z == 0:
                    continue
                nn = x * x + y * y + z * z
                n = math.isqrt(nn)
                if n * n != nn or n > max_n:
                    continue
                g = math.gcd(x, y, z)
                t = (x // g, y // g, z // g)
                for v in t:
                    if v:
                        if v < 0:
                            t = tuple(-c for c in t)
                        break
                rays.add(t)
    expected = len(rays)
    assert len(enumerate_pyth_points(max_n)) == expected


def test_report_structure_small():
    report = verify_meyer_conditions(enumerate_pyth_points(5))
    assert report.violations == 0
    assert report.rays >= 3
    assert report.triads >= 1
