"""G-cones, fan verification, modified-pattern equivalence and exchange graphs.

Rays are compared through a canonical representative, so no square roots
are ever taken: the modified vectors ``c / sqrt(d_i)`` are keyed by their
ray together with ``f^2 / d_i`` where ``f`` is the scale of the vector.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    Matrix,
    Node,
    Permutation,
    _entries,
    as_matrix,
    inverse,
    step,
    transpose,
)
from .scalar import as_scalar, sign, to_json
from .skewsym import find_skew_symmetrizer


class IncoherentNode(ValueError):
    """G-cones need a sign-coherent C-matrix."""


class IncoherentPattern(ValueError):
    """The fan exchange graph met an incoherent node."""


class DimensionTooLarge(ValueError):
    """Exact fan verification is limited to rank at most 4."""


EXACT_RANK_LIMIT = 4


def _abs(x):
    return -x if sign(x) < 0 else x


def _column(m: Matrix, j: int) -> tuple:
    return tuple(row[j] for row in m)


@dataclass(frozen=True)
class Ray:
    """Nonzero vector up to positive scaling; first nonzero entry is +-1."""

    vector: tuple

    @classmethod
    def of(cls, v: Sequence) -> "Ray":
        return cls(ray_normal(v)[0])

    def to_json(self) -> list:
        return [to_json(x) for x in self.vector]


def ray_normal(v: Sequence) -> tuple:
    """``(normalized vector, f)`` with ``v = f * normalized`` and ``f > 0``."""
    for x in v:
        if x != 0:
            f = _abs(x)
            return tuple(y / f if y != 0 else y for y in v), f
    raise ValueError("zero vector has no ray")


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class GCone:
    """Simplicial cone on the columns of ``generators``; ``normals`` are dual under ``<,>_D``."""

    generators: Matrix
    normals: Matrix
    weight: tuple
    word: tuple = ()

    @property
    def n(self) -> int:
        return len(self.generators)

    @classmethod
    def from_generators(cls, gens: Matrix, weight: Optional[Sequence] = None, word: tuple = ()) -> "GCone":
        """Normals ``D^-1 G^-T D`` so that ``<g_i, c_j>_D = d_i delta_ij``."""
        gens = as_matrix(gens)
        n = len(gens)
        d = tuple(weight) if weight is not None else (1,) * n
        git = transpose(inverse(gens))
        normals = tuple(tuple(git[i][j] * d[j] / d[i] for j in range(n)) for i in range(n))
        return cls(gens, normals, tuple(as_scalar(x) for x in d), word)

    def rays(self) -> frozenset:
        return frozenset(Ray.of(_column(self.generators, j)) for j in range(self.n))

    def pairing(self, x: Sequence, j: int):
        """``<x, c_j>_D``."""
        d = self.weight
        return sum((x[r] * d[r] * self.normals[r][j] for r in range(self.n) if x[r] != 0 and self.normals[r][j] != 0), 0)

    def contains(self, x: Sequence) -> bool:
        return all(sign(self.pairing(x, j)) >= 0 for j in range(self.n))

    def contains_by_generators(self, x: Sequence) -> bool:
        lam = _solve(self.generators, x)
        return all(sign(v) >= 0 for v in lam)

    def to_json(self) -> dict:
        enc = lambda m: [[to_json(x) for x in _column(m, j)] for j in range(self.n)]  # noqa: E731
        return {"word": list(self.word), "generators": enc(self.generators), "normals": enc(self.normals)}


def _solve(a: Matrix, x: Sequence) -> tuple:
    inv = inverse(a)
    n = len(a)
    return tuple(sum((inv[i][j] * x[j] for j in range(n) if x[j] != 0), 0) for i in range(n))


def g_cone(node: Node) -> GCone:
    if not node.is_coherent():
        raise IncoherentNode(f"C-matrix at {list(node.word)} is not sign-coherent")
    d = node.D if node.D is not None else (1,) * node.n
    return GCone(node.G, node.C, tuple(d), node.word)


# ---------------------------------------------------------------------------
# exact feasibility


def _normalize(row: list, const):
    for x in row:
        if x != 0:
            f = _abs(x)
            return [y / f if y != 0 else y for y in row], const / f if const != 0 else const
    return row, const


def fm_feasible(ineqs: list, nvars: int) -> bool:
    """Is ``{x : a.x + b >= 0 for (a, b) in ineqs}`` nonempty?  Fourier-Motzkin."""
    rows = []
    seen = set()
    for a, b in ineqs:
        a, b = _normalize([as_scalar(x) for x in a], as_scalar(b))
        key = (tuple(a), b)
        if key not in seen:
            seen.add(key)
            rows.append((a, b))
    for v in range(nvars):
        pos, neg, rest = [], [], []
        for a, b in rows:
            s = sign(a[v])
            (pos if s > 0 else neg if s < 0 else rest).append((a, b))
        out = list(rest)
        seen = {(tuple(a), b) for a, b in rest}
        for ap, bp in pos:
            for an, bn in neg:
                mp, mn = -an[v], ap[v]
                a = [mp * x + mn * y for x, y in zip(ap, an)]
                a[v] = 0
                a, b = _normalize(a, mp * bp + mn * bn)
                key = (tuple(a), b)
                if key not in seen:
                    seen.add(key)
                    out.append((a, b))
        rows = out
        if any(all(x == 0 for x in a) and sign(b) < 0 for a, b in rows):
            return False
    return all(sign(b) >= 0 for _, b in rows)


def _escapes_face(a: GCone, b: GCone, i: int) -> bool:
    """Does ``A cap B`` contain a point with positive ``i``-th coordinate in A's generators?"""
    n = a.n
    # lambda_i = 1; variables are the other n-1 coordinates
    others = [l for l in range(n) if l != i]
    gram = [[b.pairing(_column(a.generators, l), k) for k in range(n)] for l in range(n)]
    ineqs = []
    for t in range(len(others)):
        e = [0] * len(others)
        e[t] = 1
        ineqs.append((e, 0))
    for k in range(n):
        ineqs.append(([gram[l][k] for l in others], gram[i][k]))
    return fm_feasible(ineqs, len(others))


@dataclass
class FanVerdict:
    passed: bool
    partial: bool = False
    witness: Optional[tuple] = None
    pairs: int = 0


def _pair_ok(a: GCone, b: GCone) -> bool:
    rb = b.rays()
    for i in range(a.n):
        if Ray.of(_column(a.generators, i)) in rb:
            continue
        if _escapes_face(a, b, i):
            return False
    return True


def _pair_ok_sampled(a: GCone, b: GCone, rng: random.Random, samples: int) -> bool:
    n = a.n
    for _ in range(samples):
        lam = [rng.randint(1, 9) for _ in range(n)]
        x = [sum(lam[j] * a.generators[r][j] for j in range(n)) for r in range(n)]
        if all(sign(b.pairing(x, k)) > 0 for k in range(n)):
            return False
    return True


def fan_verify(cones: Sequence[GCone], exact: Optional[bool] = None, samples: int = 16, seed: int = 0) -> FanVerdict:
    """Check that every two cones meet in the cone spanned by their shared rays.

    For rank at most 4 this is exact.  Above that, ``exact=True`` raises
    :class:`DimensionTooLarge`; otherwise interiors are sampled and the
    verdict is marked partial.
    """
    uniq = {}
    for c in cones:
        uniq.setdefault(c.rays(), c)
    cs = list(uniq.values())
    if not cs:
        return FanVerdict(True)
    n = cs[0].n
    large = n > EXACT_RANK_LIMIT
    if large and exact:
        raise DimensionTooLarge(f"rank {n} exceeds {EXACT_RANK_LIMIT}")
    rng = random.Random(seed)
    pairs = 0
    for x in range(len(cs)):
        for y in range(x + 1, len(cs)):
            a, b = cs[x], cs[y]
            pairs += 1
            if large:
                ok = _pair_ok_sampled(a, b, rng, samples) and _pair_ok_sampled(b, a, rng, samples)
            else:
                ok = _pair_ok(a, b)
            if not ok:
                return FanVerdict(False, large, (list(a.word), list(b.word)), pairs)
    return FanVerdict(True, large, None, pairs)


def count_rays(cones: Sequence[GCone]) -> int:
    rays = set()
    for c in cones:
        rays |= c.rays()
    return len(rays)


def distinct_cones(cones: Sequence[GCone]) -> list:
    uniq = {}
    for c in cones:
        uniq.setdefault(c.rays(), c)
    return list(uniq.values())


# ---------------------------------------------------------------------------
# modified patterns


def _modified_key(v: Sequence, d_i) -> tuple:
    ray, f = ray_normal(v)
    return ray, f * f / d_i


def modified_equal(a: Node, b: Node) -> Optional[tuple]:
    """``(sigma, lambda)`` with ``c_{sigma(i)}(b) = lambda_i c_i(a)`` and ``lambda_i^2 d_i = d_sigma(i)``.

    Returns None when no such permutation exists.  The same relation is
    asserted for the G-matrices.
    """
    if not (a.is_coherent() and b.is_coherent()):
        raise IncoherentNode("modified comparison needs sign-coherent nodes")
    n = a.n
    d = a.D if a.D is not None else (1,) * n
    images = []
    lams = []
    used = set()
    for i in range(n):
        ci = _column(a.C, i)
        ri, fi = ray_normal(ci)
        hit = None
        for j in range(n):
            if j in used:
                continue
            rj, fj = ray_normal(_column(b.C, j))
            if rj == ri:
                lam = fj / fi
                if lam * lam * d[i] == d[j]:
                    hit = (j, lam)
                    break
        if hit is None:
            return None
        used.add(hit[0])
        images.append(hit[0])
        lams.append(hit[1])
    for i, j in enumerate(images):
        gi, gj = _column(a.G, i), _column(b.G, j)
        if any(y != lams[i] * x for x, y in zip(gi, gj)):
            raise AssertionError(f"modified C and G disagree between {list(a.word)} and {list(b.word)}")
    return Permutation(tuple(images)), tuple(lams)


# ---------------------------------------------------------------------------
# state graph and exchange graphs


KINDS = ("C", "G", "fan", "modC", "modG")


@dataclass
class StateGraph:
    """Labelled nodes reachable within ``depth`` and their mutation edges."""

    nodes: list
    edges: list
    depth: int


def explore_states(b0, depth: int, d: Optional[Sequence] = None) -> StateGraph:
    """BFS over exact (B, C, G) states; every state within ``depth - 1`` gets all n edges."""
    mat = as_matrix(_entries(b0))
    if d is None:
        d = find_skew_symmetrizer(mat)
    n = len(mat)
    root = Node.initial(mat, d)
    index = {(root.B, root.C, root.G): 0}
    nodes = [root]
    dist = [0]
    edges = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if dist[s] >= depth:
            continue
        for k in range(1, n + 1):
            child = step(nodes[s], k)
            key = (child.B, child.C, child.G)
            t = index.get(key)
            if t is None:
                t = len(nodes)
                index[key] = t
                nodes.append(child)
                dist.append(dist[s] + 1)
                queue.append(t)
            edges.append((s, t, k))
    return StateGraph(nodes, edges, depth)


def _kind_key(node: Node, kind: str):
    n = node.n
    d = node.D if node.D is not None else (1,) * n
    if kind == "C":
        return tuple(sorted(_column(node.C, j) for j in range(n)))
    if kind == "G":
        return tuple(sorted(_column(node.G, j) for j in range(n)))
    if kind == "fan":
        if not node.is_coherent():
            raise IncoherentPattern(f"incoherent node {list(node.word)}")
        return frozenset(Ray.of(_column(node.G, j)) for j in range(n))
    if kind in ("modC", "modG"):
        m = node.C if kind == "modC" else node.G
        return tuple(sorted(_modified_key(_column(m, j), d[j]) for j in range(n)))
    raise ValueError(f"unknown kind {kind!r}")


@dataclass
class ExchangeGraph:
    kind: str
    words: list
    adjacency: list
    state_class: list
    n: int

    @property
    def size(self) -> int:
        return len(self.words)

    def degrees(self) -> list:
        return [len(a) for a in self.adjacency]

    def is_regular(self) -> bool:
        return all(x == self.n for x in self.degrees())

    def is_cycle(self, length: int) -> bool:
        if self.size != length or any(len(a) != 2 for a in self.adjacency):
            return False
        seen = {0}
        stack = [0]
        while stack:
            for v in self.adjacency[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == length

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [list(w) for w in self.words],
            "adjacency": {str(list(self.words[i])): [list(self.words[j]) for j in sorted(a)] for i, a in enumerate(self.adjacency)},
            "regular": self.is_regular(),
        }


def quotient(states: StateGraph, kind: str) -> ExchangeGraph:
    """Quotient of the state graph by the equivalence of ``kind``; loops are dropped."""
    ids = {}
    words = []
    cls = []
    order = sorted(range(len(states.nodes)), key=lambda s: (len(states.nodes[s].word), states.nodes[s].word))
    for s in order:
        key = _kind_key(states.nodes[s], kind)
        if key not in ids:
            ids[key] = len(words)
            words.append(states.nodes[s].word)
    for node in states.nodes:
        cls.append(ids[_kind_key(node, kind)])
    adj = [set() for _ in words]
    for s, t, _ in states.edges:
        a, b = cls[s], cls[t]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    n = len(states.nodes[0].B)
    return ExchangeGraph(kind, words, adj, cls, n)


def build_exchange_graph(b0, kind: str, depth: int, d: Optional[Sequence] = None) -> ExchangeGraph:
    return quotient(explore_states(b0, depth, d), kind)


def graphs_isomorphic(g1: ExchangeGraph, g2: ExchangeGraph) -> Optional[dict]:
    """Canonical isomorphism: both graphs must induce the same partition of states."""
    if len(g1.state_class) != len(g2.state_class):
        return None
    fwd, back = {}, {}
    for a, b in zip(g1.state_class, g2.state_class):
        if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
            return None
    for a, nbrs in enumerate(g1.adjacency):
        if {fwd[x] for x in nbrs} != g2.adjacency[fwd[a]]:
            return None
    return {tuple(g1.words[a]): tuple(g2.words[b]) for a, b in fwd.items()}


def ray_quotient(g: ExchangeGraph, states: StateGraph) -> ExchangeGraph:
    """Merge classes whose clusters agree up to positive rescaling of each vector."""
    cols = "C" if g.kind in ("C", "modC") else "G"
    ids = {}
    remap = []
    words = []
    for i, w in enumerate(g.words):
        s = g.state_class.index(i)
        node = states.nodes[s]
        m = node.C if cols == "C" else node.G
        key = frozenset(Ray.of(_column(m, j)) for j in range(node.n))
        if key not in ids:
            ids[key] = len(words)
            words.append(w)
        remap.append(ids[key])
    adj = [set() for _ in words]
    for a, nbrs in enumerate(g.adjacency):
        for b in nbrs:
            if remap[a] != remap[b]:
                adj[remap[a]].add(remap[b])
    return ExchangeGraph(g.kind + "~", words, adj, [remap[c] for c in g.state_class], g.n)


# ---------------------------------------------------------------------------
# fans


@dataclass
class FanReport:
    cones: list
    rays: int
    verdict: Optional[FanVerdict] = None

    def to_json(self) -> dict:
        out = {"cones": [c.to_json() for c in self.cones], "rays": self.rays, "cone_count": len(self.cones)}
        if self.verdict is not None:
            out["fan_verified"] = self.verdict.passed
            out["partial"] = self.verdict.partial
            if self.verdict.witness:
                out["witness"] = self.verdict.witness
        return out


def g_fan(b0, depth: int, d: Optional[Sequence] = None, verify: bool = False) -> FanReport:
    """Distinct G-cones among the nodes within ``depth`` of the root."""
    states = explore_states(b0, depth, d)
    cones = []
    for node in sorted(states.nodes, key=lambda x: (len(x.word), x.word)):
        cones.append(g_cone(node))
    cones = distinct_cones(cones)
    rep = FanReport(cones, count_rays(cones))
    if verify:
        rep.verdict = fan_verify(cones)
    return rep


def orthant_signs_ok(cone: GCone) -> bool:
    """Every generator lies in the closed orthant given by the row signs of G."""
    n = cone.n
    for r in range(n):
        row = cone.generators[r]
        if any(sign(x) > 0 for x in row) and any(sign(x) < 0 for x in row):
            return False
    return True


__all__ = [
    "DimensionTooLarge",
    "ExchangeGraph",
    "FanVerdict",
    "GCone",
    "IncoherentNode",
    "IncoherentPattern",
    "Ray",
    "build_exchange_graph",
    "count_rays",
    "explore_states",
    "fan_verify",
    "fm_feasible",
    "g_cone",
    "g_fan",
    "graphs_isomorphic",
    "modified_equal",
    "quotient",
]
