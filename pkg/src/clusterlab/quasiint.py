"""Quasi-integer quivers: classification and integer certificates.

A quiver is of quasi-integer type when it is ``Sk`` of some integer
skew-symmetrizable matrix.  Writing each weight as ``m_ij * sqrt(a_ij)``,
that happens iff every ``a_ij`` is defined (squares are integers) and the
product of the ``a_ij`` around every chordless cycle is a perfect square.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Optional, Union

from .core import Matrix, as_matrix, _entries
from .scalar import NotQuasiWeight, is_square_free, square_free_decompose
from .skewsym import Quiver, chordless_cycles, sk


class NotQuasiInteger(ValueError):
    """The construction met a quiver outside the quasi-integer class."""


@dataclass(frozen=True)
class QuasiDecomposition:
    """``q_ij = M[i][j] * sqrt(A[i][j])`` with ``A`` symmetric and square-free."""

    M: tuple
    A: tuple


@dataclass(frozen=True)
class QuasiInteger:
    decomposition: QuasiDecomposition
    cycles: tuple = ()

    ok = True


@dataclass(frozen=True)
class NotQuasi:
    """Failure witness: a weight (``pair``) or a chordless ``cycle``."""

    reason: str
    pair: Optional[tuple] = None
    cycle: Optional[tuple] = None

    ok = False


def _as_quiver(q) -> Quiver:
    if isinstance(q, Quiver):
        return q
    return Quiver.from_matrix(q)


def decompose(q: Quiver) -> QuasiDecomposition:
    n = q.n
    M = [[0] * n for _ in range(n)]
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            p = square_free_decompose(q.weights[i][j])
            M[i][j], A[i][j] = p.m, p.a
    return QuasiDecomposition(tuple(map(tuple, M)), tuple(map(tuple, A)))


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def classify_quasi_integer(b) -> Union[QuasiInteger, NotQuasi]:
    """Decide quasi-integer type; non-skew-symmetric input goes through ``sk``."""
    q = _as_quiver(b)
    n = q.n
    for i in range(n):
        for j in range(i + 1, n):
            try:
                square_free_decompose(q.weights[i][j])
            except NotQuasiWeight:
                w = q.weights[i][j]
                return NotQuasi(f"weight {w} has non-integer square {w * w}", pair=(i + 1, j + 1))
    dec = decompose(q)
    cycles = chordless_cycles(q.adjacency())
    for cyc in cycles:
        prod = 1
        for a, b2 in zip(cyc, cyc[1:] + cyc[:1]):
            prod *= dec.A[a][b2]
        if not _is_square(prod):
            return NotQuasi(f"cycle weight product is irrational (square-free parts multiply to {prod})",
                            cycle=tuple(v + 1 for v in cyc))
    return QuasiInteger(dec, tuple(tuple(v + 1 for v in c) for c in cycles))


# ---------------------------------------------------------------------------
# construction


@dataclass
class IntegerCertificate:
    """Integer ``B`` with skew-symmetrizer ``D`` and ``Sk(B) = Q``.

    ``B``, ``D`` and ``Atilde`` use the input labelling; ``perm`` lists the
    (1-indexed) vertex order used by the construction.
    """

    B: tuple
    D: tuple
    Atilde: tuple
    perm: tuple
    verified: bool = False
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "B": [list(r) for r in self.B],
            "D": list(self.D),
            "perm": list(self.perm),
            "verified": self.verified,
        }


def _bfs_order(adj: list) -> list:
    n = len(adj)
    seen = [False] * n
    order = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        comp = []
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in sorted(adj[u]):
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        order.append(comp)
    return order


def _build_component(comp: list, A: tuple, at: list, d: list) -> None:
    """Fill ``at`` (A-tilde) and ``d`` for one connected component in prefix order."""
    first = comp[0]
    if len(comp) == 1:
        d[first] = 1
        return
    v1, v2 = comp[0], comp[1]
    alpha, beta = A[v1][v2], 1
    at[v1][v2], at[v2][v1] = beta, alpha
    d[v1], d[v2] = alpha, beta
    done = [v1, v2]
    for new in comp[2:]:
        candidates = []
        for i in done:
            a = A[i][new]
            if a == 0:
                continue
            g = gcd(d[i], a)
            gbar = a // g
            at[i][new], at[new][i] = gbar, g
            if (d[i] * gbar) % g:
                raise NotQuasiInteger("d_k * gbar_k not divisible by g_k")
            candidates.append(d[i] * gbar // g)
        if not candidates:
            raise NotQuasiInteger("vertex order is not prefix-connected")
        if len(set(candidates)) != 1:
            raise NotQuasiInteger(f"new symmetrizer entry depends on k: {candidates}")
        d[new] = candidates[0]
        done.append(new)


def construct_integer_matrix(b) -> IntegerCertificate:
    """Integer skew-symmetrizable ``B`` and ``D`` with ``Sk(B)`` equal to the quiver."""
    q = _as_quiver(b)
    verdict = classify_quasi_integer(q)
    if not verdict.ok:
        raise NotQuasiInteger(verdict.reason)
    A, M = verdict.decomposition.A, verdict.decomposition.M
    n = q.n
    comps = _bfs_order(q.adjacency())
    at = [[0] * n for _ in range(n)]
    d = [0] * n
    for comp in comps:
        _build_component(comp, A, at, d)
    B = tuple(tuple(M[i][j] * at[i][j] for j in range(n)) for i in range(n))
    cert = IntegerCertificate(
        B=B,
        D=tuple(d),
        Atilde=tuple(map(tuple, at)),
        perm=tuple(v + 1 for comp in comps for v in comp),
    )
    cert.checks = verify_certificate(cert, q)
    cert.verified = all(cert.checks.values())
    if not cert.verified:
        raise NotQuasiInteger(f"certificate failed self-check: {cert.checks}")
    return cert


def verify_certificate(cert: IntegerCertificate, q: Quiver) -> dict:
    n = len(cert.B)
    B, D, At = cert.B, cert.D, cert.Atilde
    A = decompose(q).A
    checks = {}
    checks["D_symmetrizes_Atilde"] = all(D[i] * At[i][j] == D[j] * At[j][i] for i in range(n) for j in range(n))
    checks["DB_skew_symmetric"] = all(D[i] * B[i][j] == -D[j] * B[j][i] for i in range(n) for j in range(n))
    checks["Sk_B_equals_Q"] = sk(as_matrix(B)) == q.weights
    checks["D_square_free"] = all(is_square_free(x) for x in D)
    checks["Atilde_coprime"] = all(
        gcd(At[i][j], At[j][i]) == 1 and At[i][j] * At[j][i] == A[i][j]
        for i in range(n)
        for j in range(n)
        if A[i][j]
    )
    return checks


# ---------------------------------------------------------------------------
# square-free inversion


@dataclass(frozen=True)
class InversionReport:
    u: int
    x: int
    y: int
    y_square_free: bool
    u_factors: bool
    x_recovered: bool

    @property
    def passed(self) -> bool:
        return self.y_square_free and self.u_factors and self.x_recovered


def square_free_inversion_check(u: int, x: int) -> InversionReport:
    """``y = xu/gcd(x,u)^2``; check ``u = gcd(x,u) gcd(y,u)`` and ``x = yu/gcd(y,u)^2``."""
    if not (is_square_free(u) and is_square_free(x)):
        raise ValueError("u and x must be square-free positive integers")
    g = gcd(x, u)
    y = x * u // (g * g)
    h = gcd(y, u)
    return InversionReport(
        u=u,
        x=x,
        y=y,
        y_square_free=is_square_free(y),
        u_factors=u == g * h,
        x_recovered=x == y * u // (h * h) and (y * u) % (h * h) == 0,
    )


def inversion_sweep(limit: int = 200) -> list:
    """Failing reports over all square-free ``u, x <= limit`` (empty when all pass)."""
    sf = [k for k in range(1, limit + 1) if is_square_free(k)]
    return [r for u in sf for x in sf if not (r := square_free_inversion_check(u, x)).passed]
