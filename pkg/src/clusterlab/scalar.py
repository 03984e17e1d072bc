"""Exact ordered-field scalars.

Three representations share one interface:

* ``Fraction`` (aliased as :data:`Rational`) for rational numbers,
* :class:`Quadratic` for ``c0 + c1*sqrt(d)`` with ``d`` square-free,
* :class:`Algebraic` for polynomials in a real root of an irreducible
  integer polynomial, located by a rational isolating interval.

Arithmetic is closed inside one field.  Rationals embed into every field;
anything else mixing two different fields raises :class:`MixedFieldError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Union

Rational = Fraction


class MixedFieldError(TypeError):
    """Arithmetic between two different number fields."""


class UnsupportedTower(ArithmeticError):
    """A square root that leaves the implemented scalar tower."""


class NotQuasiWeight(ValueError):
    """A weight whose square is not a non-negative integer."""


# ---------------------------------------------------------------------------
# integer helpers


def square_free_split(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s*s*f`` and ``f`` square-free (trial division)."""
    if n < 0:
        raise ValueError("negative input")
    if n == 0:
        return 0, 0
    s, f = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            f *= p
        p += 1 if p == 2 else 2
    return s, f * n


def is_square_free(n: int) -> bool:
    return n > 0 and square_free_split(n)[0] == 1


def _sqrt_fraction(x: Fraction) -> Fraction | None:
    """Exact rational square root or None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational")


# ---------------------------------------------------------------------------
# quadratic fields


class Quadratic:
    """``c0 + c1*sqrt(d)`` with ``c1 != 0`` and ``d >= 2`` square-free.

    Build values with :func:`quadratic`, which normalizes ``d`` and returns
    a plain ``Fraction`` when the irrational part vanishes.
    """

    __slots__ = ("c0", "c1", "d")

    def __init__(self, c0: Fraction, c1: Fraction, d: int):
        self.c0 = c0
        self.c1 = c1
        self.d = d

    # coercion -------------------------------------------------------------
    def _parts(self, other):
        if isinstance(other, (Fraction, int)):
            return other, 0
        if isinstance(other, Quadratic):
            if other.d != self.d:
                raise MixedFieldError(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
            return other.c0, other.c1
        if isinstance(other, Algebraic):
            raise MixedFieldError("quadratic vs algebraic field")
        return None

    def _make(self, c0, c1):
        if c1 == 0:
            return Fraction(c0)
        return Quadratic(Fraction(c0), Fraction(c1), self.d)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self._make(self.c0 + p[0], self.c1 + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self._make(self.c0 - p[0], self.c1 - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self._make(p[0] - self.c0, p[1] - self.c1)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        if b == 0:
            if a == 0:
                return Fraction(0)
            return Quadratic(self.c0 * a, self.c1 * a, self.d)
        return self._make(self.c0 * a + self.c1 * b * self.d, self.c0 * b + self.c1 * a)

    __rmul__ = __mul__

    def inverse(self) -> "Quadratic":
        n = self.c0 * self.c0 - self.c1 * self.c1 * self.d
        return Quadratic(self.c0 / n, -self.c1 / n, self.d)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        if p[1] == 0:
            if p[0] == 0:
                raise ZeroDivisionError("division by zero")
            return Quadratic(self.c0 / p[0], self.c1 / p[0], self.d)
        return self * other.inverse()

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out, base = Fraction(1), self
        while e:
            if e & 1:
                out = base * out
            base = base * base
            e >>= 1
        return out

    def __neg__(self):
        return Quadratic(-self.c0, -self.c1, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def conjugate(self) -> "Quadratic":
        return Quadratic(self.c0, -self.c1, self.d)

    # order ----------------------------------------------------------------
    def sign(self) -> int:
        s0 = (self.c0 > 0) - (self.c0 < 0)
        s1 = 1 if self.c1 > 0 else -1
        if s0 == 0 or s0 == s1:
            return s1
        # opposite signs: compare c0^2 with c1^2 d
        return s0 if self.c0 * self.c0 > self.c1 * self.c1 * self.d else s1

    def _cmp(self, other) -> int | None:
        p = self._parts(other)
        if p is None:
            return None
        if p[1] == self.c1:
            c = self.c0 - p[0]
            return (c > 0) - (c < 0)
        return sign(self - other)

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __eq__(self, other):
        if isinstance(other, Quadratic):
            return self.d == other.d and self.c0 == other.c0 and self.c1 == other.c1
        if isinstance(other, (Fraction, int, Algebraic)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash(("quad", self.c0, self.c1, self.d))

    def __bool__(self):
        return True

    def __float__(self):
        return float(self.c0) + float(self.c1) * self.d ** 0.5

    def __repr__(self):
        return f"Quadratic({self.c0!s}, {self.c1!s}, {self.d})"

    def __str__(self):
        rad = f"√{self.d}"
        c1 = self.c1
        if c1 == 1:
            tail = rad
        elif c1 == -1:
            tail = "-" + rad
        else:
            tail = f"{c1}{rad}" if c1.denominator == 1 else f"({c1}){rad}"
        if self.c0 == 0:
            return tail
        if tail.startswith("-"):
            return f"{self.c0}{tail}"
        return f"{self.c0}+{tail}"


def quadratic(c0, c1, d: int):
    """Normalized constructor for ``c0 + c1*sqrt(d)``."""
    c0, c1 = _frac(c0), _frac(c1)
    if d < 0:
        raise ValueError("only real quadratic fields are supported")
    s, f = square_free_split(d)
    c1 = c1 * s
    if f == 1:
        return c0 + c1
    if c1 == 0 or f == 0:
        return c0
    return Quadratic(c0, c1, f)


# ---------------------------------------------------------------------------
# polynomials over Q (coefficient lists, lowest degree first)


def _ptrim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = Fraction(a[-1]) / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a.pop()
        _ptrim(a)
    return _ptrim(q), a


def _psub_mul(a: list, b: list, c: list) -> list:
    """a - b*c."""
    out = list(a) + [Fraction(0)] * max(0, len(b) + len(c) - 1 - len(a))
    for i, bi in enumerate(b):
        if bi:
            for j, cj in enumerate(c):
                out[i + j] -= bi * cj
    return _ptrim(out)


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pmul_interval(lo: Fraction, hi: Fraction, a: Fraction, b: Fraction):
    cands = (lo * a, lo * b, hi * a, hi * b)
    return min(cands), max(cands)


# ---------------------------------------------------------------------------
# algebraic number fields


class AlgebraicField:
    """``Q(alpha)`` for a real root ``alpha`` of an irreducible integer polynomial.

    Instances are interned by root so equal fields are the same object.
    ``minpoly`` is stored highest degree first.
    """

    _registry: dict[tuple[int, ...], list["AlgebraicField"]] = {}

    def __init__(self, minpoly: tuple[int, ...], interval: tuple[Fraction, Fraction]):
        self.minpoly = minpoly
        self.interval = interval
        self.degree = len(minpoly) - 1
        self.label: str | None = None
        self._low = [Fraction(c) for c in reversed(minpoly)]
        lead = self._low[-1]
        self._monic = [c / lead for c in self._low]
        self._lo, self._hi = interval
        self._flo = _peval(self._low, self._lo)
        # alpha**k for k = degree .. 2*degree-2, in the power basis
        self._powers = []
        n = self.degree
        cur = [-c for c in self._monic[:-1]]
        for _ in range(max(n - 1, 0)):
            self._powers.append(cur)
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            nxt = [x - top * m for x, m in zip(nxt, self._monic[:-1])]
            cur = nxt
        self.generator = Algebraic(self, tuple(Fraction(int(i == 1)) for i in range(n)))

    # construction ---------------------------------------------------------
    @classmethod
    def get(cls, minpoly, interval) -> "AlgebraicField":
        minpoly = tuple(int(c) for c in minpoly)
        if minpoly[0] < 0:
            minpoly = tuple(-c for c in minpoly)
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if len(minpoly) < 3:
            raise ValueError("minimal polynomial must have degree >= 2")
        bucket = cls._registry.setdefault(minpoly, [])
        for f in bucket:
            if f._root_in(lo, hi):
                return f
        _validate_field(minpoly, lo, hi)
        f = cls(minpoly, (lo, hi))
        bucket.append(f)
        return f

    def _root_in(self, lo: Fraction, hi: Fraction) -> bool:
        while True:
            a, b = self._lo, self._hi
            if b < lo or a > hi:
                return False
            if lo <= a and b <= hi:
                return True
            self.refine()

    def refine(self) -> None:
        """Halve the isolating interval."""
        a, b = self._lo, self._hi
        m = (a + b) / 2
        fm = _peval(self._low, m)
        if fm == 0:  # cannot happen for irreducible degree >= 2
            self._lo = self._hi = m
            return
        if (fm > 0) == (self._flo > 0):
            self._lo, self._flo = m, fm
        else:
            self._hi = m

    def approx_interval(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    # element helpers ------------------------------------------------------
    def reduce(self, prod: list) -> tuple:
        n = self.degree
        out = list(prod[:n]) + [Fraction(0)] * max(0, n - len(prod))
        for k in range(n, len(prod)):
            c = prod[k]
            if c:
                for i, v in enumerate(self._powers[k - n]):
                    out[i] += c * v
        return tuple(out)

    def __repr__(self):
        return f"AlgebraicField({list(self.minpoly)}, [{self.interval[0]}, {self.interval[1]}])"


def _validate_field(minpoly, lo, hi):
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(minpoly), x, domain="ZZ")
    if not poly.is_irreducible:
        raise ValueError(f"{list(minpoly)} is not irreducible over Q")
    if poly.count_roots(lo, hi) != 1 or poly.eval(lo) == 0 or poly.eval(hi) == 0:
        raise ValueError("interval does not isolate exactly one root")


class Algebraic:
    """Element of an :class:`AlgebraicField` in the power basis of its root."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: AlgebraicField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _other(self, other):
        if isinstance(other, (Fraction, int)):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        if isinstance(other, Algebraic):
            if other.field is not self.field:
                raise MixedFieldError("different algebraic fields")
            return other.coeffs
        if isinstance(other, Quadratic):
            raise MixedFieldError("algebraic vs quadratic field")
        return None

    def _make(self, coeffs):
        if not any(coeffs[1:]):
            return Fraction(coeffs[0])
        return Algebraic(self.field, tuple(coeffs))

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._make([a + b for a, b in zip(self.coeffs, o)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._make([a - b for a, b in zip(self.coeffs, o)])

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._make([b - a for a, b in zip(self.coeffs, o)])

    def __mul__(self, other):
        if isinstance(other, (Fraction, int)):
            if other == 0:
                return Fraction(0)
            return Algebraic(self.field, tuple(c * other for c in self.coeffs))
        o = self._other(other)
        if o is None:
            return NotImplemented
        a = self.coeffs
        prod = [Fraction(0)] * (len(a) + len(o) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(o):
                    if bj:
                        prod[i + j] += ai * bj
        return self._make(self.field.reduce(prod))

    __rmul__ = __mul__

    def inverse(self):
        # extended Euclid: find s with s*self == 1 mod minpoly
        f = list(self.field._low)
        g = _ptrim(list(self.coeffs))
        r0, r1 = f, g
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub_mul(s0, q, s1)
        if not r1:
            raise ZeroDivisionError("division by zero")
        c = r1[0]
        coeffs = [x / c for x in s1] + [Fraction(0)] * self.field.degree
        return self._make(tuple(coeffs[: self.field.degree]))

    def __truediv__(self, other):
        if isinstance(other, (Fraction, int)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Algebraic(self.field, tuple(c / other for c in self.coeffs))
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if self._other(other) is None:
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out, base = Fraction(1), self
        while e:
            if e & 1:
                out = base * out
            base = base * base
            e >>= 1
        return out

    def __neg__(self):
        return Algebraic(self.field, tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sign(self) -> int:
        # nonzero by construction (zero collapses to Fraction), so refinement stops
        field = self.field
        poly = self.coeffs
        while True:
            lo, hi = field.approx_interval()
            vlo = vhi = poly[-1]
            for c in reversed(poly[:-1]):
                vlo, vhi = _pmul_interval(vlo, vhi, lo, hi)
                vlo, vhi = vlo + c, vhi + c
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            field.refine()

    def _cmp(self, other):
        if self._other(other) is None:
            return None
        return sign(self - other)

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __eq__(self, other):
        if isinstance(other, Algebraic):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (Fraction, int, Quadratic)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash(("alg", id(self.field), self.coeffs))

    def __bool__(self):
        return True

    def __float__(self):
        lo, hi = self.field.approx_interval()
        while hi - lo > Fraction(1, 10**18):
            self.field.refine()
            lo, hi = self.field.approx_interval()
        x = (lo + hi) / 2
        return float(_peval(list(self.coeffs), x))

    def __repr__(self):
        return f"Algebraic({self.field!r}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}")
        body = "+".join(terms).replace("+-", "-")
        label = self.field.label or f"{float(self.field.generator):.6g}"
        return f"{body} [a={label}]"


Scalar = Union[Fraction, Quadratic, Algebraic]


# ---------------------------------------------------------------------------
# operations


def sign(x) -> int:
    """Exact sign of a scalar: -1, 0 or +1."""
    if isinstance(x, (Fraction, int)):
        return (x > 0) - (x < 0)
    return x.sign()


def as_scalar(x) -> Scalar:
    """Coerce ints and rational strings to ``Fraction``; pass scalars through."""
    if isinstance(x, (Fraction, Quadratic, Algebraic)):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def field_of(x):
    """Hashable tag of the smallest implemented field containing ``x``."""
    if isinstance(x, Quadratic):
        return ("quad", x.d)
    if isinstance(x, Algebraic):
        return ("alg", id(x.field))
    return ("rat",)


def sqrt_nonneg(x) -> Scalar:
    """Non-negative square root, staying inside the tower or raising."""
    s = sign(x)
    if s < 0:
        raise ValueError("square root of a negative number")
    if s == 0:
        return Fraction(0)
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        k, f = square_free_split(p * q)
        return quadratic(0, Fraction(k, q), f)
    if isinstance(x, Quadratic):
        # (a + b sqrt d)^2 = x  <=>  a^2 + d b^2 = c0, 2ab = c1
        disc = x.c0 * x.c0 - x.c1 * x.c1 * x.d
        r = _sqrt_fraction(disc)
        if r is not None:
            for t in ((x.c0 + r) / 2, (x.c0 - r) / 2):
                a = _sqrt_fraction(t)
                if a:
                    y = Quadratic(a, x.c1 / (2 * a), x.d)
                    return y if y.sign() > 0 else -y
        raise UnsupportedTower(f"sqrt({x}) is not in Q(sqrt {x.d})")
    raise UnsupportedTower("square roots of algebraic elements are not supported")


@dataclass(frozen=True)
class SquareFreePair:
    """``q = m * sqrt(a)`` with ``a`` square-free; ``(0, 0)`` encodes zero."""

    m: int
    a: int

    def value(self) -> Scalar:
        return quadratic(self.m, 0, 0) if self.a == 0 else quadratic(0, self.m, self.a)


def square_free_decompose(q) -> SquareFreePair:
    """Write ``q`` as ``m*sqrt(a)``; requires ``q**2`` to be an integer."""
    q = as_scalar(q)
    sq = q * q
    if not isinstance(sq, Fraction) or sq.denominator != 1:
        raise NotQuasiWeight(f"square of {q} is {sq}, not an integer")
    n = sq.numerator
    if n == 0:
        return SquareFreePair(0, 0)
    s, f = square_free_split(n)
    return SquareFreePair(s * sign(q), f)


# ---------------------------------------------------------------------------
# 2cos(pi/m)


def _lucas_plus_two(m: int) -> list[int]:
    """Coefficients (highest first) of V_m(x) + 2 where V_m(2cos t) = 2cos(m t)."""
    v0, v1 = [2], [1, 0]
    if m == 0:
        v = v0
    else:
        for _ in range(m - 1):
            nxt = v1 + [0]
            pad = [0] * (len(nxt) - len(v0)) + v0
            v0, v1 = v1, [a - b for a, b in zip(nxt, pad)]
        v = v1
    v = list(v)
    v[-1] += 2
    return v


@lru_cache(maxsize=None)
def cos_field(m: int) -> AlgebraicField:
    """Field generated by 2cos(pi/m), built from the Chebyshev identity.

    2cos(pi/m) is a root of V_m(x) + 2; the irreducible factor carrying it
    is the one with the largest real root.
    """
    import math

    import sympy

    x = sympy.Symbol("x")
    target = 2 * math.cos(math.pi / m)
    poly = sympy.Poly(_lucas_plus_two(m), x, domain="ZZ")
    found = None
    for fac, _mult in poly.factor_list()[1]:
        for (lo, hi), _ in fac.intervals(eps=sympy.Rational(1, 10**12)):
            if lo <= target <= hi:
                found = (fac, lo, hi)
    fac, lo, hi = found
    coeffs = [int(c) for c in fac.all_coeffs()]
    lo, hi = Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))
    field = AlgebraicField.get(coeffs, (lo, hi))
    field.label = field.label or f"2cos(pi/{m})"
    return field


def chebyshev_value(m: int) -> Scalar:
    """Exact ``2cos(pi/m)`` for ``m >= 2``."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if m == 2:
        return Fraction(0)
    if m == 3:
        return Fraction(1)
    if m == 4:
        return quadratic(0, 1, 2)
    if m == 5:
        return quadratic(Fraction(1, 2), Fraction(1, 2), 5)
    if m == 6:
        return quadratic(0, 1, 3)
    return cos_field(m).generator


# ---------------------------------------------------------------------------
# JSON encoding


def _pq(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def to_json(x) -> dict:
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return {"rat": _pq(x)}
    if isinstance(x, Quadratic):
        return {"quad": {"c0": _pq(x.c0), "c1": _pq(x.c1), "d": x.d}}
    f = x.field
    return {
        "alg": {
            "minpoly": list(f.minpoly),
            "coeffs": [_pq(c) for c in x.coeffs],
            "interval": [_pq(f.interval[0]), _pq(f.interval[1])],
        }
    }


def from_json(obj) -> Scalar:
    """Decode a scalar; bare ints and text such as ``"3/2"`` or ``"sqrt(2)"`` are accepted too."""
    if isinstance(obj, bool):
        raise ValueError("bool is not a scalar")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return parse_scalar(obj)
    if isinstance(obj, float):
        raise ValueError(f"floats are not exact scalars: {obj!r}; write a fraction string instead")
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"bad scalar encoding: {obj!r}")
    (tag, body), = obj.items()
    if tag == "rat":
        return Fraction(int(body[0]), int(body[1]))
    if tag == "quad":
        return quadratic(Fraction(*body["c0"]), Fraction(*body["c1"]), int(body["d"]))
    if tag == "cos":
        return chebyshev_value(int(body))
    if tag == "alg":
        field = AlgebraicField.get(
            body["minpoly"], (Fraction(*body["interval"][0]), Fraction(*body["interval"][1]))
        )
        coeffs = [Fraction(*c) for c in body["coeffs"]]
        if len(coeffs) > field.degree:
            coeffs = list(field.reduce(coeffs))
        coeffs += [Fraction(0)] * (field.degree - len(coeffs))
        if not any(coeffs[1:]):
            return coeffs[0]
        return Algebraic(field, tuple(coeffs))
    raise ValueError(f"unknown scalar tag {tag!r}")


def parse_scalar(text: str) -> Scalar:
    """Parse CLI-style text: ``3/2``, ``sqrt(2)``, ``cos(7)``, ``a+b*sqrt(d)`` or JSON."""
    import json
    import re

    t = text.strip().replace(" ", "")
    if t.startswith("{"):
        return from_json(json.loads(t))
    m = re.fullmatch(r"([+-]?)(?:cos\((\d+)\)|\[(\d+)\])", t)
    if m:
        v = chebyshev_value(int(m.group(2) or m.group(3)))
        return -v if m.group(1) == "-" else v
    m = re.fullmatch(r"([+-]?\d+(?:/\d+)?)?(?:([+-])?(?:(\d+(?:/\d+)?)\*?)?sqrt\((\d+)\))?", t)
    if m and t:
        c0 = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        if m.group(4) is None:
            return c0
        c1 = Fraction(m.group(3)) if m.group(3) else Fraction(1)
        if m.group(2) == "-":
            c1 = -c1
        return quadratic(c0, c1, int(m.group(4)))
    raise ValueError(f"cannot parse scalar {text!r}")


def scalar_str(x) -> str:
    x = as_scalar(x)
    return str(x)


def gcd_int(a: int, b: int) -> int:
    return gcd(a, b)
