"""Skew-symmetrizers, the Sk map, positive conjugation and quiver cycles."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    ExchangeMatrix,
    Matrix,
    NotSignSkewSymmetric,
    Node,
    ZERO,
    _entries,
    as_matrix,
    check_sign_skew_symmetric,
    normalize_symmetrizer,
    step,
)
from .scalar import Scalar, as_scalar, from_json, sign, sqrt_nonneg, to_json


class CycleInconsistent(ValueError):
    """The cycle criterion for skew-symmetrizability fails on ``cycle``."""

    def __init__(self, cycle: list):
        super().__init__(f"cycle {cycle} breaks the product condition")
        self.cycle = cycle


def _tree_path(parent: dict, u: int) -> list:
    path = [u]
    while parent[u] is not None:
        u = parent[u]
        path.append(u)
    return path


def find_skew_symmetrizer(b) -> tuple:
    """Positive diagonal D (as a tuple) with ``DB`` skew-symmetric.

    Propagates ``d_j = -d_i b_ij / b_ji`` along a spanning forest, then checks
    every non-tree edge.  A failing edge yields the witness cycle.
    """
    mat = as_matrix(_entries(b))
    check_sign_skew_symmetric(mat)
    n = len(mat)
    d: list = [None] * n
    parent: dict = {}
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        parent[root] = None
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if mat[i][j] != 0 and d[j] is None:
                    d[j] = -d[i] * mat[i][j] / mat[j][i]
                    parent[j] = i
                    queue.append(j)
    for i in range(n):
        for j in range(i + 1, n):
            if mat[i][j] != 0 and d[i] * mat[i][j] != -(d[j] * mat[j][i]):
                pi, pj = _tree_path(parent, i), _tree_path(parent, j)
                common = next(v for v in pi if v in pj)
                cyc = pi[: pi.index(common) + 1] + list(reversed(pj[: pj.index(common)]))
                raise CycleInconsistent([v + 1 for v in cyc])
    return normalize_symmetrizer(d)


def symmetrized(b) -> ExchangeMatrix:
    """Attach the normalized skew-symmetrizer to ``b``."""
    return ExchangeMatrix(_entries(b), find_skew_symmetrizer(b))


def sk(b) -> Matrix:
    """Entries ``sign(b_ij) * sqrt(|b_ij b_ji|)``; fixes skew-symmetric input."""
    mat = as_matrix(_entries(b))
    find_skew_symmetrizer(mat)
    n = len(mat)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x, y = mat[i][j], mat[j][i]
            if x == 0:
                row.append(ZERO)
            elif x == -y:
                row.append(x)
            else:
                r = sqrt_nonneg(-(x * y))
                row.append(r if sign(x) > 0 else -r)
        out.append(tuple(row))
    return tuple(out)


def positive_conjugate(b, h: Sequence) -> Matrix:
    """``H B H^-1`` for a positive diagonal ``H = diag(h)``."""
    mat = as_matrix(_entries(b))
    h = [as_scalar(x) for x in h]
    if any(sign(x) <= 0 for x in h):
        raise ValueError("H must be positive")
    n = len(mat)
    return tuple(tuple(h[i] * mat[i][j] / h[j] if mat[i][j] != 0 else ZERO for j in range(n)) for i in range(n))


def sqrt_diagonal(d: Sequence) -> Optional[tuple]:
    """``D^{1/2}`` if every root stays in one implemented field, else None."""
    from .scalar import UnsupportedTower, field_of

    try:
        roots = tuple(sqrt_nonneg(as_scalar(x)) for x in d)
    except UnsupportedTower:
        return None
    fields = {field_of(r) for r in roots} - {("rat",)}
    return roots if len(fields) <= 1 else None


@dataclass
class RecoveryReport:
    """Outcome of recovering the pattern of ``B`` from the pattern of ``Sk(B)``."""

    nodes: int = 0
    failures: list = field(default_factory=list)
    skipped: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.skipped is None and not self.failures


def recovery_check(b, depth: int) -> RecoveryReport:
    """Compare ``B_t, C_t, G_t`` with ``D^-1/2 (hatted) D^1/2`` on every reduced word up to ``depth``.

    Hatted matrices come from the pattern started at ``Sk(B)``.  When
    ``D^{1/2}`` leaves the supported fields nothing is compared and the
    report says so.
    """
    mat = as_matrix(_entries(b))
    d = find_skew_symmetrizer(mat)
    h = sqrt_diagonal(d)
    if h is None:
        return RecoveryReport(skipped=f"sqrt of D={list(map(str, d))} is outside the supported fields")
    hinv = [1 / x for x in h]
    rep = RecoveryReport()
    if positive_conjugate(mat, h) != sk(mat):
        rep.failures.append(())
    frontier = [(Node.initial(mat, d), Node.initial(sk(mat)))]
    while frontier:
        nxt = []
        for node, hat in frontier:
            rep.nodes += 1
            for x, y in ((node.B, hat.B), (node.C, hat.C), (node.G, hat.G)):
                if x != positive_conjugate(y, hinv):
                    rep.failures.append(node.word)
                    break
            if node.depth < depth:
                for k in range(1, len(mat) + 1):
                    if not node.word or node.word[-1] != k:
                        nxt.append((step(node, k), step(hat, k)))
        frontier = nxt
    return rep


# ---------------------------------------------------------------------------
# quivers


@dataclass(frozen=True)
class Quiver:
    """Skew-symmetric weight matrix; ``q_ij > 0`` means an arrow ``i -> j``."""

    weights: Matrix

    def __post_init__(self):
        w = as_matrix(self.weights)
        n = len(w)
        for i in range(n):
            if w[i][i] != 0:
                raise ValueError("quivers have no loops")
            for j in range(n):
                if w[i][j] != -w[j][i]:
                    raise ValueError("quiver weights must be skew-symmetric")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    @classmethod
    def from_matrix(cls, b) -> "Quiver":
        mat = as_matrix(_entries(b))
        try:
            return cls(mat)
        except ValueError:
            return cls(sk(mat))

    def edges(self) -> list:
        """Undirected edges ``(i, j, |q_ij|)`` with ``i < j`` (0-indexed)."""
        w = self.weights
        return [(i, j, abs(w[i][j])) for i in range(self.n) for j in range(i + 1, self.n) if w[i][j] != 0]

    def adjacency(self) -> list:
        adj = [set() for _ in range(self.n)]
        for i, j, _ in self.edges():
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_json(self) -> dict:
        arrows = []
        w = self.weights
        for i in range(self.n):
            for j in range(self.n):
                if sign(w[i][j]) > 0:
                    arrows.append({"from": i + 1, "to": j + 1, "weight": to_json(w[i][j])})
        return {"n": self.n, "arrows": arrows}

    @classmethod
    def from_json(cls, obj: dict) -> "Quiver":
        n = int(obj["n"])
        w = [[ZERO] * n for _ in range(n)]
        for a in obj["arrows"]:
            i, j = int(a["from"]) - 1, int(a["to"]) - 1
            x = from_json(a["weight"])
            if sign(x) <= 0:
                raise ValueError("arrow weights must be positive")
            if w[i][j] != 0:
                raise ValueError(f"duplicate arrow between {i + 1} and {j + 1}")
            w[i][j], w[j][i] = x, -x
        return cls(tuple(tuple(r) for r in w))


def chordless_cycles(adj: Sequence) -> list:
    """All chordless cycles of an undirected graph, each once.

    ``adj`` is a list of neighbour sets (0-indexed).  Each cycle is returned
    as a vertex list starting at its smallest vertex, with the second vertex
    smaller than the last.  DFS over induced paths, pruning any vertex that
    would create a chord.
    """
    n = len(adj)
    out = []

    def extend(path: list, onpath: set, s: int):
        u = path[-1]
        for v in sorted(adj[u]):
            if v <= s or v in onpath:
                continue
            # v may touch only u and, to close the cycle, s
            if any(w in onpath and w not in (u, s) for w in adj[v]):
                continue
            if s in adj[v]:
                if len(path) >= 2 and path[1] < v:
                    out.append(path + [v])
                continue
            path.append(v)
            onpath.add(v)
            extend(path, onpath, s)
            path.pop()
            onpath.discard(v)

    for s in range(n):
        for v in sorted(adj[s]):
            if v > s:
                extend([s, v], {s, v}, s)
    return sorted(out)


def is_skew_symmetrizable(b) -> bool:
    try:
        find_skew_symmetrizer(b)
    except (NotSignSkewSymmetric, CycleInconsistent):
        return False
    return True


__all__ = [
    "CycleInconsistent",
    "NotSignSkewSymmetric",
    "Quiver",
    "chordless_cycles",
    "find_skew_symmetrizer",
    "is_skew_symmetrizable",
    "RecoveryReport",
    "positive_conjugate",
    "recovery_check",
    "sk",
    "sqrt_diagonal",
    "symmetrized",
]
