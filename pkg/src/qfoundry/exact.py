"""Exact arithmetic in the ring generated by sqrt(2) and sqrt(3).

Scalars are stored as a + b*sqrt2 + c*sqrt3 + d*sqrt6 with rational
coefficients, so orthogonality of the embedded vector tables is decided
exactly, never through floating point.  Direction vectors are kept
unnormalized; ray identity and orthogonality are scale invariant.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction as Q
from functools import reduce
from typing import Iterable, Sequence

SQRT2_F = math.sqrt(2.0)
SQRT3_F = math.sqrt(3.0)
SQRT6_F = math.sqrt(6.0)

RationalLike = int | Q


class DimensionMismatchError(ValueError):
    """Raised when two vectors of different ambient dimension are combined."""


class DegenerateInputError(ValueError):
    """Raised when an operation receives parallel or zero input vectors."""


class QuadScalar:
    """An exact element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(
        self,
        a: RationalLike = 0,
        b: RationalLike = 0,
        c: RationalLike = 0,
        d: RationalLike = 0,
    ) -> None:
        self.a = Q(a)
        self.b = Q(b)
        self.c = Q(c)
        self.d = Q(d)

    @classmethod
    def sqrt2(cls) -> "QuadScalar":
        return cls(0, 1, 0, 0)

    @classmethod
    def sqrt3(cls) -> "QuadScalar":
        return cls(0, 0, 1, 0)

    @classmethod
    def sqrt6(cls) -> "QuadScalar":
        return cls(0, 0, 0, 1)

    def coefficients(self) -> tuple[Q, Q, Q, Q]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Q)):
            other = QuadScalar(other)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self) -> int:
        return hash(self.coefficients())

    def __neg__(self) -> "QuadScalar":
        return QuadScalar(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other) -> "QuadScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return QuadScalar(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    __radd__ = __add__

    def __sub__(self, other) -> "QuadScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QuadScalar":
        return (-self) + other

    def __mul__(self, other) -> "QuadScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a1, b1, c1, d1 = self.coefficients()
        a2, b2, c2, d2 = other.coefficients()
        # sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3, sqrt3*sqrt6 = 3*sqrt2
        return QuadScalar(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj_sqrt2(self) -> "QuadScalar":
        """Conjugate sending sqrt2 -> -sqrt2 (also flips sqrt6)."""
        return QuadScalar(self.a, -self.b, self.c, -self.d)

    def conj_sqrt3(self) -> "QuadScalar":
        """Conjugate sending sqrt3 -> -sqrt3 (also flips sqrt6)."""
        return QuadScalar(self.a, self.b, -self.c, -self.d)

    def inverse(self) -> "QuadScalar":
        """Multiplicative inverse; Q(sqrt2, sqrt3) is a field."""
        if self.is_zero():
            raise ZeroDivisionError("zero element of Q(sqrt2, sqrt3)")
        # x * conj2(x) lies in Q(sqrt3); rationalize once more over sqrt3.
        partial = self * self.conj_sqrt2()
        norm = partial * partial.conj_sqrt3()
        assert not (norm.b or norm.c or norm.d)
        scale = 1 / norm.a
        out = self.conj_sqrt2() * partial.conj_sqrt3()
        return QuadScalar(out.a * scale, out.b * scale, out.c * scale, out.d * scale)

    def __truediv__(self, other) -> "QuadScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def to_float(self) -> float:
        return (
            float(self.a)
            + float(self.b) * SQRT2_F
            + float(self.c) * SQRT3_F
            + float(self.d) * SQRT6_F
        )

    def __repr__(self) -> str:
        return f"QuadScalar({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def __str__(self) -> str:
        parts = []
        for coef, symbol in zip(self.coefficients(), ("", "√2", "√3", "√6")):
            if coef == 0:
                continue
            sign = "-" if coef < 0 else ("+" if parts else "")
            mag = abs(coef)
            if symbol and mag == 1:
                parts.append(f"{sign}{symbol}")
            else:
                parts.append(f"{sign}{mag}{symbol}")
        return "".join(parts) if parts else "0"


def _coerce(value) -> QuadScalar | None:
    if isinstance(value, QuadScalar):
        return value
    if isinstance(value, (int, Q)):
        return QuadScalar(value)
    return None


ZERO = QuadScalar()
ONE = QuadScalar(1)


class ExactVector:
    """An unnormalized direction vector with entries in Q(sqrt2, sqrt3).

    Vectors on the same ray (scalar multiples over the field, either sign)
    compare equal and hash equal.  The canonical form divides by the first
    nonzero entry and rescales to a primitive integer-coefficient tuple, so
    ray identity is a plain tuple comparison.
    """

    __slots__ = ("entries", "label", "_key")

    def __init__(self, entries: Sequence[QuadScalar], label: str = "") -> None:
        entries = tuple(
            e if isinstance(e, QuadScalar) else QuadScalar(e) for e in entries
        )
        if all(e.is_zero() for e in entries):
            raise DegenerateInputError("zero vector is not a direction")
        self.entries = entries
        self.label = label
        self._key = _ray_key(entries)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def ray_key(self) -> tuple:
        """Canonical primitive coefficient tuple identifying the ray."""
        return self._key

    def canonical(self) -> "ExactVector":
        """The canonical representative of this vector's ray."""
        entries = tuple(QuadScalar(*coeffs) for coeffs in self._key)
        return ExactVector(entries, self.label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactVector):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def scaled(self, factor: QuadScalar | RationalLike) -> "ExactVector":
        factor = factor if isinstance(factor, QuadScalar) else QuadScalar(factor)
        if factor.is_zero():
            raise DegenerateInputError("cannot scale a direction by zero")
        return ExactVector(tuple(e * factor for e in self.entries), self.label)

    def to_floats(self) -> list[float]:
        return [e.to_float() for e in self.entries]

    def unit_floats(self) -> list[float]:
        floats = self.to_floats()
        norm = math.sqrt(sum(x * x for x in floats))
        return [x / norm for x in floats]

    def __repr__(self) -> str:
        body = ", ".join(str(e) for e in self.entries)
        tag = f" {self.label}" if self.label else ""
        return f"<ExactVector{tag} ({body})>"


def _ray_key(entries: tuple[QuadScalar, ...]) -> tuple:
    lead = next(e for e in entries if not e.is_zero())
    scaled = [e * lead.inverse() for e in entries]
    denom_lcm = reduce(
        math.lcm, (coef.denominator for e in scaled for coef in e.coefficients()), 1
    )
    ints = [
        [coef.numerator * (denom_lcm // coef.denominator) for coef in e.coefficients()]
        for e in scaled
    ]
    common = reduce(math.gcd, (abs(x) for row in ints for x in row), 0)
    # first nonzero entry became 1, then denom_lcm/common > 0: leading
    # rational coefficient is automatically positive.
    return tuple(tuple(x // common for x in row) for row in ints)


def inner_product(u: ExactVector, v: ExactVector) -> QuadScalar:
    """Exact real inner product of two unnormalized vectors."""
    if u.dimension != v.dimension:
        raise DimensionMismatchError(
            f"dimension mismatch: {u.dimension} vs {v.dimension}"
        )
    out = ZERO
    for x, y in zip(u.entries, v.entries):
        out = out + x * y
    return out


def orthogonal(u: ExactVector, v: ExactVector) -> bool:
    return inner_product(u, v).is_zero()


def cross_product(u: ExactVector, v: ExactVector) -> ExactVector:
    """Exact exterior product of two independent vectors in dimension 3."""
    if u.dimension != 3 or v.dimension != 3:
        raise DimensionMismatchError("cross product requires dimension 3")
    a, b = u.entries, v.entries
    entries = (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
    if all(e.is_zero() for e in entries):
        raise DegenerateInputError("cross product of parallel vectors")
    return ExactVector(entries, f"({u.label})x({v.label})" if u.label else "")


class RationalPoint:
    """A point of the rational unit sphere S^2 ∩ Q^3."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: RationalLike, y: RationalLike, z: RationalLike) -> None:
        self.x, self.y, self.z = Q(x), Q(y), Q(z)
        if self.x * self.x + self.y * self.y + self.z * self.z != 1:
            raise ValueError(f"({self.x}, {self.y}, {self.z}) is not on the unit sphere")

    def coords(self) -> tuple[Q, Q, Q]:
        return (self.x, self.y, self.z)

    def __neg__(self) -> "RationalPoint":
        return RationalPoint(-self.x, -self.y, -self.z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalPoint):
            return NotImplemented
        return self.coords() == other.coords()

    def __hash__(self) -> int:
        return hash(self.coords())

    def __repr__(self) -> str:
        return f"RationalPoint({self.x}, {self.y}, {self.z})"


class VectorSet:
    """A labelled set of exact direction vectors sharing one dimension."""

    def __init__(self, dimension: int, vectors: Iterable[ExactVector]) -> None:
        self.dimension = dimension
        self.vectors = list(vectors)
        for v in self.vectors:
            if v.dimension != dimension:
                raise DimensionMismatchError(
                    f"vector {v.label!r} has dimension {v.dimension}, expected {dimension}"
                )

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def to_json_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "vectors": [
                {
                    "label": v.label,
                    "entries": [
                        [[coef.numerator, coef.denominator] for coef in e.coefficients()]
                        for e in v.entries
                    ],
                }
                for v in self.vectors
            ],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "VectorSet":
        try:
            dimension = int(payload["dimension"])
            raw = payload["vectors"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed vector-set payload: {exc}") from exc
        vectors = []
        for item in raw:
            entries = [
                QuadScalar(*(Q(num, den) for num, den in coeffs))
                for coeffs in item["entries"]
            ]
            vectors.append(ExactVector(entries, item.get("label", "")))
        return cls(dimension, vectors)

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "VectorSet":
        with open(path, encoding="utf-8") as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed vector-set JSON in {path}: {exc}") from exc
        return cls.from_json_dict(payload)
