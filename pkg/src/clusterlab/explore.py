"""Breadth-first exploration of B- and C-patterns up to permutation.

Nodes are expanded in BFS order, directions ascending, and only the first
node of each equivalence class is expanded further.  The first word that
reaches a class is its representative.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    ExchangeMatrix,
    Matrix,
    Node,
    Permutation,
    _entries,
    _mutate_b,
    as_matrix,
    check_dualities,
    column_sign,
    matrix_str,
    mutate_b,
    pos,
    replay,
    row_sign,
    step,
    transpose,
)
from .scalar import to_json
from .skewsym import find_skew_symmetrizer


class UndefinedTau(ValueError):
    """Row k of the G-matrix is not sign-coherent."""


def worker_count() -> int:
    """Worker cap from ``CLUSTERLAB_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("CLUSTERLAB_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True)
class CanonicalKey:
    """``form`` is the minimal flattening; ``perm`` maps the input onto it."""

    form: tuple
    perm: Permutation


def _b_block(b: Matrix, chosen: tuple, v: int) -> tuple:
    return tuple(b[v][p] for p in chosen) + tuple(b[p][v] for p in chosen)


def _canonical(n: int, contrib) -> tuple:
    """Greedy level-by-level minimization over vertex orders.

    ``contrib(chosen, v)`` is the key block added when ``v`` takes the next
    position.  Every surviving prefix carries the same key so far, which
    makes the greedy result the exact minimum over all ``n!`` orders.
    """
    partials = [()]
    key = []
    for _ in range(n):
        best = None
        nxt = []
        for chosen in partials:
            for v in range(n):
                if v in chosen:
                    continue
                c = contrib(chosen, v)
                if best is None or c < best:
                    best, nxt = c, [chosen + (v,)]
                elif c == best:
                    nxt.append(chosen + (v,))
        key.append(best)
        partials = nxt
    order = partials[0]
    images = [0] * n
    for k, v in enumerate(order):
        images[v] = k
    return tuple(x for blk in key for x in blk), Permutation(tuple(images))


def canonical_b(b: Matrix) -> CanonicalKey:
    """Canonical form of ``B`` under ``sigma B = P^T B P``."""
    form, perm = _canonical(len(b), lambda chosen, v: _b_block(b, chosen, v))
    return CanonicalKey(form, perm)


def canonical_pair(c: Matrix, b: Matrix) -> CanonicalKey:
    """Canonical form of ``(C, B)`` under ``(sigma~, sigma)``."""
    cols = tuple(zip(*c))
    form, perm = _canonical(len(b), lambda chosen, v: cols[v] + _b_block(b, chosen, v))
    return CanonicalKey(form, perm)


def flatten_b(b: Matrix) -> tuple:
    n = len(b)
    return tuple(x for k in range(n) for x in _b_block(b, tuple(range(k)), k))


def flatten_pair(c: Matrix, b: Matrix) -> tuple:
    n = len(b)
    cols = tuple(zip(*c))
    return tuple(x for k in range(n) for x in cols[k] + _b_block(b, tuple(range(k)), k))


def brute_canonical_b(b: Matrix) -> tuple:
    """Reference: minimum of the flattening over all ``n!`` permutations."""
    n = len(b)
    return min(flatten_b(Permutation(p).act_b(b)) for p in itertools.permutations(range(n)))


def brute_canonical_pair(c: Matrix, b: Matrix) -> tuple:
    n = len(b)
    return min(
        flatten_pair(Permutation(p).act_c(c), Permutation(p).act_b(b))
        for p in itertools.permutations(range(n))
    )


def relating_permutation(src: CanonicalKey, dst: CanonicalKey) -> Permutation:
    """sigma with ``dst-matrix = sigma . src-matrix`` when both keys agree."""
    return dst.perm.inverse().compose(src.perm)


# ---------------------------------------------------------------------------
# reports


@dataclass
class PatternClass:
    word: tuple
    depth: int
    B: Matrix
    C: Optional[Matrix] = None
    G: Optional[Matrix] = None
    coherent: Optional[bool] = None


@dataclass
class Periodicity:
    """``same_as``-matrix equals ``perm`` applied to the matrix at ``word``."""

    word: tuple
    perm: Permutation
    same_as: tuple


@dataclass
class ExplorationReport:
    kind: str
    depth: int
    classes: list
    periodicities: list
    finite: bool
    max_depth: int
    incoherent: list = field(default_factory=list)
    duality_failures: list = field(default_factory=list)
    nodes_checked: int = 0

    @property
    def size(self) -> int:
        return len(self.classes)

    @property
    def coherent(self) -> bool:
        return not self.incoherent

    def finiteness_text(self) -> str:
        return f"finite, maximum depth = {self.max_depth}" if self.finite else "undeterminable"

    def coherence_text(self) -> str:
        if self.kind != "C":
            return ""
        if self.coherent:
            return f"sign-coherent up to {self.depth}"
        return "incoherent " + ", ".join(str(list(w)) for w in self.incoherent)

    def to_text(self) -> str:
        lines = []
        for cl in self.classes:
            lines.append(str(list(cl.word)))
            lines.append(matrix_str(cl.C if self.kind == "C" else cl.B))
        lines.append("Periodicity")
        for p in self.periodicities:
            lines.append(f"{list(p.word)} {p.perm.one_line()} same as {list(p.same_as)}")
        lines.append("Finiteness")
        lines.append(self.finiteness_text())
        lines.append("Size")
        lines.append(str(self.size))
        if self.kind == "C":
            lines.append("Coherence")
            lines.append(self.coherence_text())
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        enc = lambda m: [[to_json(x) for x in row] for row in m]  # noqa: E731
        classes = []
        for cl in self.classes:
            item = {"word": list(cl.word), "depth": cl.depth, "B": enc(cl.B)}
            if cl.C is not None:
                item["C"] = enc(cl.C)
                item["G"] = enc(cl.G)
                item["coherent"] = cl.coherent
            classes.append(item)
        out = {
            "kind": self.kind,
            "depth": self.depth,
            "classes": classes,
            "periodicities": [
                {"word": list(p.word), "perm": p.perm.one_line(), "same_as": list(p.same_as)}
                for p in self.periodicities
            ],
            "finiteness": {"finite": self.finite, "max_depth": self.max_depth if self.finite else None},
            "size": self.size,
        }
        if self.kind == "C":
            out["coherence"] = {
                "coherent": self.coherent,
                "up_to": self.depth if self.coherent else None,
                "incoherent_words": [list(w) for w in self.incoherent],
            }
            out["duality_failures"] = self.duality_failures
        return out


def minimal_periodicities(records: list) -> list:
    """Keep, per target class, only the witnesses of smallest word length."""
    best = {}
    for r in records:
        best[r.same_as] = min(best.get(r.same_as, len(r.word)), len(r.word))
    return [r for r in records if len(r.word) == best[r.same_as]]


def _b0_and_d(b0, d=None):
    if isinstance(b0, ExchangeMatrix):
        d = b0.symmetrizer if d is None else d
    mat = as_matrix(_entries(b0))
    if d is None:
        d = find_skew_symmetrizer(mat)
    return mat, tuple(d)


# ---------------------------------------------------------------------------
# B-pattern


def enumerate_b_pattern(b0, depth: int) -> ExplorationReport:
    """Distinct B-matrices up to permutation within ``depth`` mutations."""
    mat = as_matrix(_entries(b0))
    n = len(mat)
    key0 = canonical_b(mat)
    index = {key0.form: 0}
    keys = [key0]
    classes = [PatternClass((), 0, mat)]
    periods = []
    frontier = [0]
    new_at_last = False
    for d in range(depth):
        nxt = []
        for ci in frontier:
            cl = classes[ci]
            for k in range(1, n + 1):
                if cl.word and cl.word[-1] == k:
                    continue
                child = _mutate_b(cl.B, k - 1)
                word = cl.word + (k,)
                key = canonical_b(child)
                hit = index.get(key.form)
                if hit is None:
                    index[key.form] = len(classes)
                    keys.append(key)
                    nxt.append(len(classes))
                    classes.append(PatternClass(word, d + 1, child))
                else:
                    perm = relating_permutation(key, keys[hit])
                    periods.append(Periodicity(word, perm, classes[hit].word))
        frontier = nxt
        new_at_last = bool(nxt) and d == depth - 1
    finite = depth > 0 and not new_at_last
    return ExplorationReport(
        kind="B",
        depth=depth,
        classes=classes,
        periodicities=minimal_periodicities(periods),
        finite=finite,
        max_depth=max(c.depth for c in classes),
    )


# ---------------------------------------------------------------------------
# C-pattern


def enumerate_c_pattern(b0, depth: int, d: Optional[Sequence] = None, verify: bool = False) -> ExplorationReport:
    """Distinct (B, C) pairs up to ``(sigma, sigma~)`` within ``depth`` mutations.

    With ``verify`` every generated node is checked against the three
    duality identities (the last two only along sign-coherent paths) and the
    coherent recursion is cross-checked with the sign-free one.
    """
    mat, dd = _b0_and_d(b0, d)
    n = len(mat)
    root = Node.initial(mat, dd)
    key0 = canonical_pair(root.C, root.B)
    index = {key0.form: 0}
    keys = [key0]
    nodes = [root]
    path_ok = [True]  # sign-coherent along the whole representative path
    classes = [PatternClass((), 0, root.B, root.C, root.G, True)]
    periods = []
    failures = []
    checked = 0

    def audit(node: Node, coherent: bool):
        nonlocal checked
        checked += 1
        rep = check_dualities(node)
        bad = {"first": rep.first}
        if coherent:
            bad["second"], bad["third"] = rep.second, rep.third
        for name, where in bad.items():
            if where:
                failures.append({"word": list(node.word), "identity": name, "entries": where})

    if verify:
        audit(root, True)
    frontier = [0]
    new_at_last = False
    for dpt in range(depth):
        nxt = []
        for ci in frontier:
            node = nodes[ci]
            for k in range(1, n + 1):
                if node.word and node.word[-1] == k:
                    continue
                child = step(node, k, verify=verify)
                coherent = child.is_coherent()
                if verify:
                    audit(child, coherent and path_ok[ci])
                key = canonical_pair(child.C, child.B)
                hit = index.get(key.form)
                if hit is None:
                    index[key.form] = len(classes)
                    keys.append(key)
                    nxt.append(len(classes))
                    nodes.append(child)
                    path_ok.append(coherent and path_ok[ci])
                    classes.append(PatternClass(child.word, dpt + 1, child.B, child.C, child.G, coherent))
                else:
                    perm = relating_permutation(key, keys[hit])
                    periods.append(Periodicity(child.word, perm, classes[hit].word))
        frontier = nxt
        new_at_last = bool(nxt) and dpt == depth - 1
    return ExplorationReport(
        kind="C",
        depth=depth,
        classes=classes,
        periodicities=minimal_periodicities(periods),
        finite=depth > 0 and not new_at_last,
        max_depth=max(c.depth for c in classes),
        incoherent=[c.word for c in classes if not c.coherent],
        duality_failures=failures,
        nodes_checked=checked,
    )


def class_nodes(b0, report: ExplorationReport, d: Optional[Sequence] = None) -> list:
    """Rebuild full nodes for the representatives of a C-pattern report."""
    mat, dd = _b0_and_d(b0, d)
    return [Node(c.word, c.B, c.C, c.G, mat, dd) for c in report.classes]


# ---------------------------------------------------------------------------
# conjecture checkers


@dataclass
class HypothesisEntry:
    variant: str
    word: tuple
    B: Matrix
    coherent: bool
    size: int
    finite: bool


@dataclass
class ConjectureReport:
    entries: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.coherent for e in self.entries) and all(w["pass"] for w in self.witnesses)


def _coherence_job(args):
    variant, word, mat, depth = args
    rep = enumerate_c_pattern(mat, depth)
    return HypothesisEntry(variant, word, mat, rep.coherent, rep.size, rep.finite)


def check_standard_hypothesis(b0, depth: int, transpose_too: bool = False, negative_too: bool = False,
                              b_depth: Optional[int] = None) -> ConjectureReport:
    """Run the C-pattern coherence check on every B' found in the B-pattern."""
    mat = as_matrix(_entries(b0))
    seeds = [("B", mat)]
    if transpose_too:
        seeds.append(("B^T", transpose(mat)))
    if negative_too:
        seeds.append(("-B", tuple(tuple(-x for x in r) for r in mat)))
    jobs = []
    for variant, m in seeds:
        bp = enumerate_b_pattern(m, depth if b_depth is None else b_depth)
        for cl in bp.classes:
            jobs.append((variant, cl.word, cl.B, depth))
    workers = worker_count()
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_coherence_job, jobs))
    else:
        entries = [_coherence_job(j) for j in jobs]
    return ConjectureReport(entries=entries)


def discreteness_witnesses(node: Node) -> list:
    """Axis-parallel c-vectors ``alpha e_j`` at column i with their checks."""
    n = node.n
    d = node.D
    out = []
    for i in range(n):
        nz = [r for r in range(n) if node.C[r][i] != 0]
        if len(nz) != 1:
            continue
        j = nz[0]
        alpha = node.C[j][i]
        beta = node.G[j][i]
        row_clear = all(node.G[j][l] == 0 for l in range(n) if l != i)
        ok_len = alpha * alpha * d[j] == d[i]
        ok_beta = alpha * beta == d[i] / d[j]
        out.append({
            "word": list(node.word),
            "i": i + 1,
            "j": j + 1,
            "alpha": alpha,
            "beta": beta,
            "pass": bool(ok_len and ok_beta and row_clear),
        })
    return out


def check_discreteness(b0, depth: int, d: Optional[Sequence] = None) -> ConjectureReport:
    """Square-root-free length test ``alpha^2 d_j = d_i`` on every enumerated class."""
    mat, dd = _b0_and_d(b0, d)
    rep = enumerate_c_pattern(mat, depth, dd)
    out = ConjectureReport()
    for node in class_nodes(mat, rep, dd):
        if node.is_coherent():
            out.witnesses.extend(discreteness_witnesses(node))
    return out


# ---------------------------------------------------------------------------
# dual mutation and third duality


def dual_mutate(node: Node, k: int) -> tuple:
    """``(C^{t1}_t, G^{t1}_t)`` for the vertex ``t1`` k-adjacent to the initial one."""
    k0 = k - 1
    tau = row_sign(node.G, k0)
    if tau is None:
        raise UndefinedTau(f"row {k} of G at {list(node.word)} is not sign-coherent")
    b0 = node.B0
    n = node.n
    # (J_k + [-tau B0]_+^{k.}) C : only row k changes
    gain = [pos(-tau * b0[k0][l]) for l in range(n)]
    crow = []
    for j in range(n):
        v = -node.C[k0][j]
        for l in range(n):
            if gain[l] and node.C[l][j]:
                v = v + gain[l] * node.C[l][j]
        crow.append(v)
    c1 = tuple(tuple(crow) if i == k0 else node.C[i] for i in range(n))
    # (J_k + [tau B0]_+^{.k}) G : row i gains [tau b_ik]_+ * g_k, row k negated
    col = [pos(tau * b0[i][k0]) for i in range(n)]
    g1 = []
    for i in range(n):
        if i == k0:
            g1.append(tuple(-x for x in node.G[k0]))
        elif col[i]:
            g1.append(tuple(x + col[i] * y for x, y in zip(node.G[i], node.G[k0])))
        else:
            g1.append(node.G[i])
    return c1, tuple(g1)


def dual_mutation_check(b0, word: Sequence[int], k: int) -> bool:
    """Compare :func:`dual_mutate` against a fresh walk from ``mu_k(B0)``."""
    mat = as_matrix(_entries(b0))
    node = replay(mat, word)
    c1, g1 = dual_mutate(node, k)
    ref = replay(mutate_b(mat, k), (k,) + tuple(word))
    return ref.C == c1 and ref.G == g1


def tree_words(n: int, depth: int) -> list:
    """All reduced words (no immediate repeats) of length at most ``depth``."""
    out = [()]
    level = [()]
    for _ in range(depth):
        level = [w + (k,) for w in level for k in range(1, n + 1) if not w or w[-1] != k]
        out.extend(level)
    return out


def tree_path(u: Sequence[int], v: Sequence[int]) -> tuple:
    """Word leading from the vertex at ``u`` to the vertex at ``v``."""
    c = 0
    while c < min(len(u), len(v)) and u[c] == v[c]:
        c += 1
    return tuple(reversed(u[c:])) + tuple(v[c:])


def third_duality_pair(b0, u: Sequence[int], v: Sequence[int]) -> bool:
    """``C^{t0}_t = (G~^t_{t0})^T`` and ``G^{t0}_t = (C~^t_{t0})^T`` for t0 at u, t at v."""
    mat = as_matrix(_entries(b0))
    bt0 = mat
    for k in u:
        bt0 = _mutate_b(bt0, k - 1)
    path = tree_path(u, v)
    fwd = replay(bt0, path)
    back = replay(transpose(fwd.B), tuple(reversed(path)))
    return fwd.C == transpose(back.G) and fwd.G == transpose(back.C)


@dataclass
class PairReport:
    pairs: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def third_duality_check(b0, depth: int, samples: Optional[int] = None, seed: int = 0) -> PairReport:
    """Exhaustive over vertex pairs within ``depth`` or a seeded sample of them."""
    n = len(_entries(b0))
    words = tree_words(n, depth)
    if samples is None:
        pairs = [(u, v) for u in words for v in words]
    else:
        rng = random.Random(seed)
        pairs = [(rng.choice(words), rng.choice(words)) for _ in range(samples)]
    bad = [(list(u), list(v)) for u, v in pairs if not third_duality_pair(b0, u, v)]
    return PairReport(len(pairs), bad)


def dual_mutation_sweep(b0, depth: int, samples: Optional[int] = None, seed: int = 0) -> PairReport:
    n = len(_entries(b0))
    words = tree_words(n, depth)
    items = [(w, k) for w in words for k in range(1, n + 1)]
    if samples is not None:
        rng = random.Random(seed)
        items = [rng.choice(items) for _ in range(samples)]
    bad = [(list(w), k) for w, k in items if not dual_mutation_check(b0, w, k)]
    return PairReport(len(items), bad)


__all__ = [
    "CanonicalKey",
    "ConjectureReport",
    "ExplorationReport",
    "UndefinedTau",
    "canonical_b",
    "canonical_pair",
    "check_discreteness",
    "check_standard_hypothesis",
    "dual_mutate",
    "dual_mutation_check",
    "dual_mutation_sweep",
    "third_duality_pair",
    "tree_words",
    "enumerate_b_pattern",
    "enumerate_c_pattern",
    "third_duality_check",
]
