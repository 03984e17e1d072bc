"""Rank-2 exchange matrices ``[[0, -a], [b, 0]]``.

With ``p = sqrt(ab)`` the C-matrices along the two branches from the root
are explicit in the Chebyshev-type sequence ``u_n(p)``; the pattern is
sign-coherent exactly when ``p = 2cos(pi/m)`` or ``p >= 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .core import Matrix, Node, Permutation, column_sign, identity, step
from .scalar import Algebraic, Quadratic, as_scalar, sign


class HypothesisFails(ValueError):
    """A u-value sign breaks the assumed tropical-sign sequence at step ``i``."""

    def __init__(self, i: int):
        super().__init__(f"tropical-sign hypothesis fails at step {i}")
        self.i = i


class IncoherentInput(ValueError):
    """The rank-2 pattern is not sign-coherent, so it has no fan."""


# ---------------------------------------------------------------------------
# Chebyshev sequence


class ChebyshevSeq:
    """``u_{-2} = -1``, ``u_{-1} = 0``, ``u_{n+2} = p u_{n+1} - u_n`` (memoized)."""

    def __init__(self, p):
        self.p = as_scalar(p)
        self._vals = [Fraction(-1), Fraction(0)]

    def __getitem__(self, n: int):
        if n < -2:
            raise IndexError("u_n is defined for n >= -2")
        while len(self._vals) <= n + 2:
            self._vals.append(self.p * self._vals[-1] - self._vals[-2])
        return self._vals[n + 2]


def chebyshev_u(n: int, p):
    return ChebyshevSeq(p)[n]


# ---------------------------------------------------------------------------
# closed forms


def branch_word(i: int, branch: int) -> tuple:
    """``(2, 1, 2, ...)`` for branch 2 and ``(1, 2, 1, ...)`` for branch 1, length ``i``."""
    first, other = (2, 1) if branch == 2 else (1, 2)
    return tuple(first if j % 2 == 0 else other for j in range(i))


def _u_matrix(i: int, branch: int, u: ChebyshevSeq) -> Matrix:
    if branch == 2:
        if i % 2 == 0:
            return ((-u[i - 2], u[i - 1]), (-u[i - 1], u[i]))
        return ((u[i - 1], -u[i - 2]), (u[i], -u[i - 1]))
    if i == 0:
        return identity(2)
    if i == 1:
        return ((Fraction(-1), Fraction(0)), (Fraction(0), Fraction(1)))
    if i % 2 == 0:
        return ((-u[i - 2], u[i - 3]), (-u[i - 3], u[i - 4]))
    return ((u[i - 3], -u[i - 2]), (u[i - 4], -u[i - 3]))


def _expected_signs(j: int, branch: int) -> tuple:
    if j == 0:
        return (1, 1)
    if branch == 1 and j == 1:
        return (-1, 1)
    if branch == 1 and j == 2:
        return (-1, -1)
    return (1, -1) if j % 2 else (-1, 1)


def closed_form_c(i: int, branch: int, p) -> Matrix:
    """C-matrix of ``[[0,-p],[p,0]]`` at the ``i``-th vertex of the given branch.

    Every earlier vertex must carry the expected tropical signs; otherwise
    :class:`HypothesisFails` names the first vertex that does not.
    """
    if branch not in (1, 2):
        raise ValueError("branch must be 1 or 2")
    u = ChebyshevSeq(p)
    for j in range(i):
        m = _u_matrix(j, branch, u)
        got = tuple(column_sign(m, c) for c in range(2))
        if got != _expected_signs(j, branch):
            raise HypothesisFails(j)
    return _u_matrix(i, branch, u)


def skew_rank2(p) -> Matrix:
    p = as_scalar(p)
    return ((Fraction(0), -p), (p, Fraction(0)))


def rank2_matrix(a, b) -> Matrix:
    a, b = as_scalar(a), as_scalar(b)
    return ((Fraction(0), -a), (b, Fraction(0)))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class CoxeterFinite:
    m: int

    kind = "CoxeterFinite"
    coherent = True


@dataclass(frozen=True)
class CoherentInfinite:
    certificate: str

    kind = "CoherentInfinite"
    coherent = True


@dataclass(frozen=True)
class Incoherent:
    word: tuple
    column: int
    vector: tuple

    kind = "Incoherent"
    coherent = False

    @property
    def depth(self) -> int:
        return len(self.word)


Rank2Verdict = Union[CoxeterFinite, CoherentInfinite, Incoherent]


def _degree(x) -> int:
    if isinstance(x, Algebraic):
        return x.field.degree
    if isinstance(x, Quadratic):
        return 2
    return 1


@lru_cache(maxsize=None)
def coxeter_square_poly(m: int) -> tuple:
    """Minimal polynomial (highest first) of ``4cos^2(pi/m)`` and an isolating interval."""
    import sympy

    from .scalar import _lucas_plus_two

    x, y = sympy.symbols("x y")
    target = 4 * math.cos(math.pi / m) ** 2
    half = 2 * math.cos(math.pi / m)
    base = sympy.Poly(_lucas_plus_two(m), x, domain="ZZ")
    fac = _nearest_root(base, half)[0]
    res = sympy.Poly(sympy.resultant(fac.as_expr(), y - x**2, x), y, domain="ZZ")
    g, lo, hi = _nearest_root(res, target)
    coeffs = tuple(int(c) for c in g.all_coeffs())
    return coeffs, (Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q)))


def _nearest_root(poly, target: float) -> tuple:
    """Irreducible factor and isolating interval of the root closest to ``target``."""
    import sympy

    best = None
    for f, _ in poly.factor_list()[1]:
        for (lo, hi), _ in f.intervals(eps=sympy.Rational(1, 10**12)):
            gap = max(float(lo) - target, target - float(hi), 0.0)
            if best is None or gap < best[0]:
                best = (gap, f, lo, hi)
    return best[1:]


def _horner(coeffs: tuple, x):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def is_coxeter_square(q, m: int) -> bool:
    """Exact test ``q == 4cos^2(pi/m)``."""
    if m == 2:
        return q == 0
    coeffs, (lo, hi) = coxeter_square_poly(m)
    return lo <= q <= hi and _horner(coeffs, q) == 0


def coxeter_search_bound(q) -> int:
    """Largest m worth testing; ``phi(m)/2`` must divide the degree N of ``q``.

    Since ``phi(m) >= sqrt(m/2)``, any match satisfies ``m <= 8 N^2``.
    """
    n = _degree(q)
    return max(30, 8 * n * n)


def find_coxeter_m(q) -> Optional[int]:
    from sympy import totient

    if q == 0:
        return 2
    n = _degree(q)
    for m in range(3, coxeter_search_bound(q) + 1):
        if n % (int(totient(m)) // 2):
            continue
        if is_coxeter_square(q, m):
            return m
    return None


def first_incoherent(b: Matrix, limit: int = 100000) -> Optional[Incoherent]:
    """Walk both branches in step order; first non-sign-coherent c-vector."""
    nodes = {1: Node.initial(b), 2: Node.initial(b)}
    for i in range(1, limit + 1):
        for br in (2, 1):
            nd = nodes[br]
            k = branch_word(i, br)[-1]
            nd = step(nd, k)
            nodes[br] = nd
            for c in range(2):
                if column_sign(nd.C, c) is None:
                    return Incoherent(nd.word, c + 1, tuple(row[c] for row in nd.C))
    return None


def classify_rank2(a, b) -> Rank2Verdict:
    a, b = as_scalar(a), as_scalar(b)
    if sign(a) < 0 or sign(b) < 0:
        raise ValueError("a and b must be non-negative")
    q = a * b
    if sign(q - 4) >= 0:
        return CoherentInfinite(
            "p = sqrt(ab) >= 2 gives u_{n+1} - u_n >= u_n - u_{n-1} >= ... >= 1, "
            "so every u_n >= 1 and the tropical signs alternate forever"
        )
    m = find_coxeter_m(q)
    if m is not None:
        return CoxeterFinite(m)
    wit = first_incoherent(rank2_matrix(a, b))
    if wit is None:
        raise ArithmeticError("no incoherent vector found within the search limit")
    return wit


def monotone_certificate(p, upto: int) -> bool:
    """Check ``u_{n+1} >= u_n >= 1`` for ``0 <= n < upto`` (for ``p >= 2``)."""
    u = ChebyshevSeq(p)
    return all(u[n + 1] >= u[n] >= 1 for n in range(upto))


def coxeter_period(p, limit: int = 200) -> Optional[tuple]:
    """Smallest ``i > 0`` on branch 2 with ``C = sigma~ I`` and ``B = sigma B_0``."""
    b0 = skew_rank2(p)
    node = Node.initial(b0)
    for i in range(1, limit + 1):
        node = step(node, branch_word(i, 2)[-1])
        for perm in (Permutation((0, 1)), Permutation((1, 0))):
            if node.C == perm.act_c(identity(2)) and node.B == perm.act_b(b0):
                return i, perm
    return None


# ---------------------------------------------------------------------------
# fan and SVG


@dataclass
class Rank2Fan:
    a: object
    b: object
    verdict: object
    cones: list
    wedge: Optional[tuple]

    def to_svg(self) -> str:
        return render_svg(self)


def rank2_fan(a, b=None, depth: int = 20) -> Rank2Fan:
    """G-cones along both branches up to ``depth``; with the uncovered wedge for ``ab >= 4``."""
    from .geometry import distinct_cones, g_cone

    a = as_scalar(a)
    b = a if b is None else as_scalar(b)
    verdict = classify_rank2(a, b)
    if not verdict.coherent:
        raise IncoherentInput(f"incoherent at {list(verdict.word)}")
    mat = rank2_matrix(a, b)
    from .skewsym import find_skew_symmetrizer

    d = find_skew_symmetrizer(mat) if a != 0 else (Fraction(1), Fraction(1))
    cones = []
    for br in (2, 1):
        node = Node.initial(mat, d)
        cones.append(g_cone(node))
        for i in range(1, depth + 1):
            node = step(node, branch_word(i, br)[-1])
            cones.append(g_cone(node))
    cones = distinct_cones(cones)
    wedge = None
    if isinstance(verdict, CoherentInfinite):
        wedge = uncovered_wedge(a, b)
    return Rank2Fan(a, b, verdict, cones, wedge)


def uncovered_wedge(a, b) -> tuple:
    """Float endpoints of the region missed by the fan (equal rays when ``ab = 4``).

    For ``[[0,-p],[p,0]]`` the limit rays are ``(p -+ sqrt(p^2-4), -2)``; for
    ``a != b`` they are rescaled by the diagonal conjugation to ``Sk``.
    """
    a, b = float(a), float(b)
    p = math.sqrt(a * b)
    r = math.sqrt(max(p * p - 4, 0.0))
    v1, v2 = (p - r, -2.0), (p + r, -2.0)
    # G-cones of B are H^-1 times those of Sk(B) with H = diag(sqrt(b), sqrt(a))
    h1, h2 = math.sqrt(b), math.sqrt(a)
    return (v1[0] / h1, v1[1] / h2), (v2[0] / h1, v2[1] / h2)


def _unit(v) -> tuple:
    x, y = float(v[0]), float(v[1])
    n = math.hypot(x, y)
    return x / n, y / n


def render_svg(fan: Rank2Fan, size: int = 400) -> str:
    """Deterministic drawing: fixed viewport, rays sorted by angle."""
    c = size / 2
    r = size * 0.45
    rays = set()
    for cone in fan.cones:
        for j in range(2):
            rays.add(_unit((cone.generators[0][j], cone.generators[1][j])))
    ordered = sorted(rays, key=lambda u: (round(math.atan2(u[1], u[0]), 12), u))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="0" y1="{c:.1f}" x2="{size}" y2="{c:.1f}" stroke="#ccc"/>',
        f'<line x1="{c:.1f}" y1="0" x2="{c:.1f}" y2="{size}" stroke="#ccc"/>',
    ]
    if fan.wedge is not None:
        w1, w2 = _unit(fan.wedge[0]), _unit(fan.wedge[1])
        if abs(w1[0] - w2[0]) < 1e-12 and abs(w1[1] - w2[1]) < 1e-12:
            out.append(
                f'<line x1="{c:.1f}" y1="{c:.1f}" x2="{c + r * w1[0]:.3f}" y2="{c - r * w1[1]:.3f}" '
                'stroke="red" stroke-dasharray="6,4"/>'
            )
        else:
            out.append(
                f'<polygon points="{c:.1f},{c:.1f} {c + r * w1[0]:.3f},{c - r * w1[1]:.3f} '
                f'{c + r * w2[0]:.3f},{c - r * w2[1]:.3f}" fill="#f6c" fill-opacity="0.4" stroke="red"/>'
            )
    for u in ordered:
        out.append(f'<line x1="{c:.1f}" y1="{c:.1f}" x2="{c + r * u[0]:.3f}" y2="{c - r * u[1]:.3f}" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = [
    "ChebyshevSeq",
    "CoherentInfinite",
    "CoxeterFinite",
    "HypothesisFails",
    "Incoherent",
    "IncoherentInput",
    "branch_word",
    "chebyshev_u",
    "classify_rank2",
    "closed_form_c",
    "coxeter_period",
    "rank2_fan",
]
