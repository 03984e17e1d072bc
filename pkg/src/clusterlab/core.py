"""Exchange matrices, C/G-matrices and their mutations.

Matrices are tuples of row tuples of exact scalars.  Public functions take
mutation directions 1-indexed; the ``_``-prefixed kernels are 0-indexed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .scalar import Scalar, as_scalar, sign

Matrix = tuple  # tuple[tuple[Scalar, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class NotSignSkewSymmetric(ValueError):
    """``sign(b_ij) != -sign(b_ji)`` for some pair."""

    def __init__(self, i: int, j: int):
        super().__init__(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not sign-skew-symmetric")
        self.pair = (i + 1, j + 1)


class IncoherentColumn(ValueError):
    """Tropical sign requested for a column that is not sign-coherent."""


class WordLeavesJ(ValueError):
    """Restriction asked for a word that mutates outside the index set."""


class ConsistencyError(AssertionError):
    """An identity that must hold exactly was violated."""


# ---------------------------------------------------------------------------
# matrix helpers


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(tuple(as_scalar(x) for x in row) for row in rows)
    n = len(out)
    if any(len(r) != n for r in out):
        raise ValueError("matrix must be square")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(n: int) -> Matrix:
    return tuple((ZERO,) * n for _ in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    out = []
    for row in a:
        r = []
        for col in bt:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            r.append(acc)
        out.append(tuple(r))
    return tuple(out)


def diag(d: Sequence) -> Matrix:
    n = len(d)
    return tuple(tuple(as_scalar(d[i]) if i == j else ZERO for j in range(n)) for i in range(n))


def neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def submatrix(a: Matrix, idx: Sequence[int]) -> Matrix:
    return tuple(tuple(a[i][j] for j in idx) for i in idx)


def det(a: Matrix) -> Scalar:
    """Determinant by Gaussian elimination over the field."""
    m = [list(r) for r in a]
    n = len(m)
    out = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        p = m[c][c]
        out = out * p
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / p
                for k in range(c, n):
                    m[r][k] = m[r][k] - f * m[c][k]
    return out


def inverse(a: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination."""
    n = len(a)
    m = [list(a[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def pos(x):
    """``[x]_+ = max(x, 0)``."""
    return x if sign(x) > 0 else ZERO


def matrix_str(a: Matrix) -> str:
    cells = [[str(x) for x in row] for row in a]
    w = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[" + " ".join(c.rjust(w) for c in row) + "]" for row in cells)


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0..n-1}``; ``images[i]`` is sigma(i)."""

    images: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_one_line(cls, values: Sequence[int]) -> "Permutation":
        """From the 1-indexed one-line form ``[sigma(1), ..., sigma(n)]``."""
        imgs = tuple(v - 1 for v in values)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"{list(values)} is not a permutation")
        return cls(imgs)

    def one_line(self) -> list[int]:
        return [i + 1 for i in self.images]

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``."""
        return Permutation(tuple(self.images[j] for j in other.images))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def act_b(self, a: Matrix) -> Matrix:
        """``(sigma A)_ij = a_{sigma^-1(i), sigma^-1(j)}``."""
        inv = self.inverse().images
        return tuple(tuple(a[inv[i]][inv[j]] for j in range(len(a))) for i in range(len(a)))

    def act_c(self, a: Matrix) -> Matrix:
        """``(sigma~ A)_ij = a_{i, sigma^-1(j)}``: columns are moved, rows kept."""
        inv = self.inverse().images
        return tuple(tuple(row[inv[j]] for j in range(len(row))) for row in a)

    def matrix(self) -> Matrix:
        """``P_sigma`` with entries ``delta_{i, sigma^-1(j)}``."""
        inv = self.inverse().images
        n = len(inv)
        return tuple(tuple(ONE if i == inv[j] else ZERO for j in range(n)) for i in range(n))

    def __str__(self):
        return str(self.one_line())


# ---------------------------------------------------------------------------
# exchange matrices


def check_sign_skew_symmetric(b: Matrix) -> None:
    n = len(b)
    for i in range(n):
        if b[i][i] != 0:
            raise NotSignSkewSymmetric(i, i)
        for j in range(i + 1, n):
            if sign(b[i][j]) != -sign(b[j][i]):
                raise NotSignSkewSymmetric(i, j)


def normalize_symmetrizer(ds: Sequence) -> tuple:
    """Smallest positive integers if the ratios are rational, else ``d_1 = 1``."""
    ds = [as_scalar(d) for d in ds]
    if all(isinstance(d, Fraction) for d in ds):
        lcm = 1
        for d in ds:
            lcm = lcm * d.denominator // gcd(lcm, d.denominator)
        ints = [int(d * lcm) for d in ds]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return tuple(Fraction(v // g) for v in ints)
    first = ds[0]
    return tuple(d / first for d in ds)


@dataclass(frozen=True)
class ExchangeMatrix:
    """Sign-skew-symmetric matrix with an optional skew-symmetrizer."""

    entries: Matrix
    symmetrizer: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "entries", as_matrix(self.entries))
        check_sign_skew_symmetric(self.entries)
        if self.symmetrizer is not None:
            d = tuple(as_scalar(x) for x in self.symmetrizer)
            if len(d) != self.n or any(sign(x) <= 0 for x in d):
                raise ValueError("symmetrizer must be positive and of length n")
            b = self.entries
            for i in range(self.n):
                for j in range(self.n):
                    if d[i] * b[i][j] != -(d[j] * b[j][i]):
                        raise ValueError(f"D does not skew-symmetrize B at ({i + 1},{j + 1})")
            object.__setattr__(self, "symmetrizer", d)

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_skew_symmetric(self) -> bool:
        b = self.entries
        return all(b[i][j] == -b[j][i] for i in range(self.n) for j in range(self.n))

    def transpose(self) -> "ExchangeMatrix":
        d = None
        if self.symmetrizer is not None:
            d = normalize_symmetrizer([ONE / as_scalar(x) for x in self.symmetrizer])
        return ExchangeMatrix(transpose(self.entries), d)

    def __str__(self):
        return matrix_str(self.entries)


def _mutate_b(b: Matrix, k: int) -> Matrix:
    n = len(b)
    bk = b[k]
    out = []
    for i in range(n):
        row = b[i]
        bik = row[k]
        if i == k:
            out.append(tuple(-x for x in row))
            continue
        si = sign(bik)
        new = []
        for j in range(n):
            if j == k:
                new.append(-bik)
                continue
            x = row[j]
            if si:
                bkj = bk[j]
                if bkj and sign(bkj) == si:
                    p = bik * bkj
                    x = x + p if si > 0 else x - p
            new.append(x)
        out.append(tuple(new))
    return tuple(out)


def _entries(b) -> Matrix:
    return b.entries if isinstance(b, ExchangeMatrix) else b


def mutate_b(b, k: int):
    """``mu_k(B) = (J_k + [-B]_+^{.k}) B (J_k + [B]_+^{k.})`` (entrywise form)."""
    mat = _entries(b)
    if not 1 <= k <= len(mat):
        raise IndexError(f"direction {k} out of range 1..{len(mat)}")
    out = _mutate_b(mat, k - 1)
    if isinstance(b, ExchangeMatrix):
        return ExchangeMatrix(out, b.symmetrizer)
    return out


def mutate_b_word(b, word: Sequence[int]):
    for k in word:
        b = mutate_b(b, k)
    return b


# ---------------------------------------------------------------------------
# C/G kernels (0-indexed)


def column_sign(a: Matrix, j: int) -> Optional[int]:
    """Common sign of column ``j`` (+1/-1), or None if mixed or zero."""
    s = 0
    for row in a:
        t = sign(row[j])
        if t:
            if s and t != s:
                return None
            s = t
    return s or None


def row_sign(a: Matrix, i: int) -> Optional[int]:
    s = 0
    for x in a[i]:
        t = sign(x)
        if t:
            if s and t != s:
                return None
            s = t
    return s or None


def _mutate_c_general(c: Matrix, b: Matrix, k: int, eps: int) -> Matrix:
    # C' = C J_k + C [eps B]_+^{k.} + [-eps C]_+^{.k} B
    n = len(c)
    bk = b[k]
    gain = [pos(eps * x) for x in bk]
    out = []
    for i in range(n):
        row = c[i]
        cik = row[k]
        lift = pos(-eps * cik) if cik else ZERO
        new = []
        for j in range(n):
            if j == k:
                new.append(-cik)
                continue
            x = row[j]
            if cik and gain[j]:
                x = x + cik * gain[j]
            if lift and bk[j]:
                x = x + lift * bk[j]
            new.append(x)
        out.append(tuple(new))
    return tuple(out)


def _mutate_g_general(g: Matrix, b: Matrix, b0: Matrix, c: Matrix, k: int, eps: int) -> Matrix:
    # G' = G J_k + G [-eps B]_+^{.k} - B0 [-eps C]_+^{.k}
    n = len(g)
    colb = [pos(-eps * b[l][k]) for l in range(n)]
    colc = [pos(-eps * c[l][k]) for l in range(n)]
    out = []
    for i in range(n):
        row = g[i]
        v = -row[k]
        for l in range(n):
            if row[l] and colb[l]:
                v = v + row[l] * colb[l]
            if b0[i][l] and colc[l]:
                v = v - b0[i][l] * colc[l]
        out.append(row[:k] + (v,) + row[k + 1:])
    return tuple(out)


def _mutate_c_coherent(c: Matrix, b: Matrix, k: int, eps: int) -> Matrix:
    # C' = C (J_k + [eps B]_+^{k.})
    gain = [pos(eps * x) for x in b[k]]
    out = []
    for row in c:
        cik = row[k]
        if not cik:
            out.append(row)
            continue
        out.append(tuple(-cik if j == k else (x + cik * gain[j] if gain[j] else x) for j, x in enumerate(row)))
    return tuple(out)


def _mutate_g_coherent(g: Matrix, b: Matrix, k: int, eps: int) -> Matrix:
    # G' = G (J_k + [-eps B]_+^{.k})
    n = len(g)
    colb = [pos(-eps * b[l][k]) for l in range(n)]
    out = []
    for row in g:
        v = -row[k]
        for l in range(n):
            if row[l] and colb[l]:
                v = v + row[l] * colb[l]
        out.append(row[:k] + (v,) + row[k + 1:])
    return tuple(out)


# ---------------------------------------------------------------------------
# nodes


@dataclass(frozen=True)
class TropicalSigns:
    """Column signs of C and row signs of G; None marks Undefined."""

    epsilon: tuple
    tau: tuple

    @property
    def coherent(self) -> bool:
        return None not in self.epsilon


@dataclass(frozen=True)
class Node:
    """One vertex of the explored tree: word (1-indexed), B_t, C_t, G_t, B_0, D."""

    word: tuple
    B: Matrix
    C: Matrix
    G: Matrix
    B0: Matrix
    D: Optional[tuple] = None

    def __post_init__(self):
        if self.D is not None:
            object.__setattr__(self, "D", tuple(as_scalar(x) for x in self.D))

    @classmethod
    def initial(cls, b0, d: Optional[Sequence] = None) -> "Node":
        if isinstance(b0, ExchangeMatrix):
            d = b0.symmetrizer if d is None else d
            b0 = b0.entries
        else:
            b0 = as_matrix(b0)
        n = len(b0)
        dd = tuple(as_scalar(x) for x in d) if d is not None else None
        return cls((), b0, identity(n), identity(n), b0, dd)

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def depth(self) -> int:
        return len(self.word)

    def signs(self) -> TropicalSigns:
        return TropicalSigns(
            tuple(column_sign(self.C, j) for j in range(self.n)),
            tuple(row_sign(self.G, i) for i in range(self.n)),
        )

    def is_coherent(self) -> bool:
        return all(column_sign(self.C, j) is not None for j in range(self.n))

    def to_json(self) -> dict:
        from .scalar import to_json

        enc = lambda m: [[to_json(x) for x in row] for row in m]  # noqa: E731
        out = {"word": list(self.word), "B": enc(self.B), "C": enc(self.C), "G": enc(self.G)}
        if self.D is not None:
            out["D"] = [to_json(x) for x in self.D]
        return out


def mutate_cg(node: Node, k: int, eps: Optional[int] = None, check: bool = True) -> Node:
    """Mutate (B, C, G) at direction ``k`` with the sign-free recursion.

    ``eps`` defaults to +1; with ``check`` the opposite sign is computed too
    and the two results must agree.
    """
    if not 1 <= k <= node.n:
        raise IndexError(f"direction {k} out of range 1..{node.n}")
    k0 = k - 1
    e = 1 if eps is None else eps
    if e not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    c = _mutate_c_general(node.C, node.B, k0, e)
    g = _mutate_g_general(node.G, node.B, node.B0, node.C, k0, e)
    if check:
        c2 = _mutate_c_general(node.C, node.B, k0, -e)
        g2 = _mutate_g_general(node.G, node.B, node.B0, node.C, k0, -e)
        if c != c2 or g != g2:
            raise ConsistencyError(f"eps-dependence at word {list(node.word)} direction {k}")
    return Node(node.word + (k,), _mutate_b(node.B, k0), c, g, node.B0, node.D)


def mutate_c_coherent(c: Matrix, b: Matrix, k: int, eps_k: Optional[int]) -> Matrix:
    """``C (J_k + [eps_k B]_+^{k.})``; ``eps_k`` is the tropical sign of column k."""
    if eps_k is None:
        raise IncoherentColumn(f"column {k} has no tropical sign")
    return _mutate_c_coherent(c, b, k - 1, eps_k)


def mutate_g_coherent(g: Matrix, b: Matrix, k: int, eps_k: Optional[int]) -> Matrix:
    """``G (J_k + [-eps_k B]_+^{.k})``."""
    if eps_k is None:
        raise IncoherentColumn(f"column {k} has no tropical sign")
    return _mutate_g_coherent(g, b, k - 1, eps_k)


def step(node: Node, k: int, verify: bool = False) -> Node:
    """Mutate a node, using the tropical-sign recursion when column k is coherent."""
    k0 = k - 1
    e = column_sign(node.C, k0)
    if e is None:
        return mutate_cg(node, k, check=verify)
    c = _mutate_c_coherent(node.C, node.B, k0, e)
    g = _mutate_g_coherent(node.G, node.B, k0, e)
    out = Node(node.word + (k,), _mutate_b(node.B, k0), c, g, node.B0, node.D)
    if verify:
        ref = mutate_cg(node, k, check=True)
        if ref.C != c or ref.G != g:
            raise ConsistencyError(f"coherent recursion disagrees at word {list(out.word)}")
    return out


def replay(b0, word: Sequence[int], d: Optional[Sequence] = None, verify: bool = False) -> Node:
    node = Node.initial(b0, d)
    for k in word:
        node = step(node, k, verify)
    return node


# ---------------------------------------------------------------------------
# dualities


@dataclass
class DualityReport:
    """Offending (i, j) positions (1-indexed) for each identity."""

    first: list = field(default_factory=list)
    second: list = field(default_factory=list)
    third: list = field(default_factory=list)
    symmetrizer_known: bool = True

    @property
    def passed(self) -> bool:
        return not (self.first or self.second or self.third)


def _diff(a: Matrix, b: Matrix) -> list:
    return [(i + 1, j + 1) for i, (ra, rb) in enumerate(zip(a, b)) for j, (x, y) in enumerate(zip(ra, rb)) if x != y]


def check_dualities(node: Node) -> DualityReport:
    """``G B_t = B_0 C``, ``D^-1 G^T D C = I`` and ``D B_t = C^T D B_0 C``."""
    rep = DualityReport()
    rep.first = _diff(matmul(node.G, node.B), matmul(node.B0, node.C))
    if node.D is None:
        rep.symmetrizer_known = False
        return rep
    n = node.n
    dm = diag(node.D)
    dinv = diag([ONE / x for x in node.D])
    rep.second = _diff(matmul(matmul(dinv, transpose(node.G)), matmul(dm, node.C)), identity(n))
    lhs = matmul(dm, node.B)
    rhs = matmul(matmul(transpose(node.C), matmul(dm, node.B0)), node.C)
    rep.third = _diff(lhs, rhs)
    return rep


def orthogonality_defects(node: Node) -> list:
    """Pairs (i, j) where ``<g_i, c_j>_D != d_i delta_ij``."""
    if node.D is None:
        raise ValueError("symmetrizer required")
    n = node.n
    bad = []
    for i in range(n):
        for j in range(n):
            v = ZERO
            for r in range(n):
                gi, cj = node.G[r][i], node.C[r][j]
                if gi and cj:
                    v = v + gi * node.D[r] * cj
            if v != (node.D[i] if i == j else ZERO):
                bad.append((i + 1, j + 1))
    return bad


# ---------------------------------------------------------------------------
# restriction


def restrict(node: Node, J: Sequence[int]) -> Node:
    """Node of the pattern of ``B_0|_J`` along the same word; asserts the block identities."""
    idx = sorted({j - 1 for j in J})
    if not idx:
        raise ValueError("J must be nonempty")
    pos_of = {j: p for p, j in enumerate(idx)}
    for k in node.word:
        if k - 1 not in pos_of:
            raise WordLeavesJ(f"direction {k} is outside J")
    d = tuple(node.D[j] for j in idx) if node.D is not None else None
    sub = Node.initial(submatrix(node.B0, idx), d)
    for k in node.word:
        sub = mutate_cg(sub, pos_of[k - 1] + 1, check=False)
    for name in ("B", "C", "G"):
        if submatrix(getattr(node, name), idx) != getattr(sub, name):
            raise ConsistencyError(f"restriction of {name} disagrees on J={list(J)}")
    return sub
