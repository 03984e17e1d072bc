"""Coxeter quivers of finite type plus two affine extras.

Paths are oriented with ``b_{i,i+1} = -w`` and ``b_{i+1,i} = w``, so every
arrow points from the larger label to the smaller one.  ``[m]`` stands for
the weight ``2cos(pi/m)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import Matrix
from .scalar import chebyshev_value
from .skewsym import Quiver


class UnknownType(ValueError):
    """Name or rank not in the catalog."""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    edges: tuple  # (i, j, weight) with 1-indexed i < j; b_ij = -weight
    n: int

    def matrix(self) -> Matrix:
        w = [[Fraction(0)] * self.n for _ in range(self.n)]
        for i, j, x in self.edges:
            w[i - 1][j - 1] = -x
            w[j - 1][i - 1] = x
        return tuple(tuple(r) for r in w)

    def quiver(self) -> Quiver:
        return Quiver(self.matrix())


# Depths at which the pattern search reaches its last new class, plus one.
DEFAULT_DEPTHS = {"H3": 7, "H4": 11}


def _path(weights: list) -> tuple:
    return tuple((i + 1, i + 2, w) for i, w in enumerate(weights))


def _parse(name: str) -> tuple:
    s = name.strip().replace(" ", "").replace("_", "")
    m = re.fullmatch(r"I2\((\d+)\)|I2\[(\d+)\]|I2-(\d+)", s, re.IGNORECASE)
    if m:
        return "I2", int(next(g for g in m.groups() if g))
    m = re.fullmatch(r"([A-Za-z])(~?)(\d+)", s)
    if not m:
        raise UnknownType(f"cannot parse type name {name!r}")
    return m.group(1).upper() + m.group(2), int(m.group(3))


def catalog_entry(name: str) -> CatalogEntry:
    fam, r = _parse(name)
    one = Fraction(1)
    if fam == "A" and r >= 1:
        return CatalogEntry(f"A{r}", _path([one] * (r - 1)), r)
    if fam in ("B", "C") and r >= 2:
        return CatalogEntry(f"{fam}{r}", _path([one] * (r - 2) + [chebyshev_value(4)]), r)
    if fam == "D" and r >= 4:
        return CatalogEntry(f"D{r}", _path([one] * (r - 2)) + ((r - 2, r, one),), r)
    if fam == "E" and r in (6, 7, 8):
        return CatalogEntry(f"E{r}", _path([one] * (r - 2)) + ((3, r, one),), r)
    if fam == "F" and r == 4:
        return CatalogEntry("F4", _path([one, chebyshev_value(4), one]), 4)
    if fam == "G" and r == 2:
        return CatalogEntry("G2", _path([chebyshev_value(6)]), 2)
    if fam == "H" and r == 3:
        return CatalogEntry("H3", _path([one, chebyshev_value(5)]), 3)
    if fam == "H" and r == 4:
        return CatalogEntry("H4", _path([one, one, chebyshev_value(5)]), 4)
    if fam == "I2" and r >= 2:
        return CatalogEntry(f"I2({r})", _path([chebyshev_value(r)]), 2)
    if fam == "A~" and r >= 2:
        return CatalogEntry(f"A~{r}", _path([one] * r) + ((1, r + 1, one),), r + 1)
    if fam == "F~" and r == 4:
        return CatalogEntry("F~4", _path([one, chebyshev_value(4), one, one]), 5)
    raise UnknownType(f"unknown type {name!r}")


def catalog(name: str) -> Quiver:
    return catalog_entry(name).quiver()


def integer_matrix(name: str) -> Matrix:
    """Integer skew-symmetrizable matrix whose Sk is the Coxeter quiver (crystallographic types)."""
    fam, r = _parse(name)
    ent = catalog_entry(name)
    n = ent.n
    w = [[0] * n for _ in range(n)]
    for i, j, x in ent.edges:
        x2 = x * x
        if x2 == 1:
            w[i - 1][j - 1], w[j - 1][i - 1] = -1, 1
        elif x2 in (2, 3):
            w[i - 1][j - 1], w[j - 1][i - 1] = -int(x2), 1
        else:
            raise UnknownType(f"{ent.name} is not crystallographic")
    if fam == "C":
        w = [[-v for v in row] for row in zip(*w)]  # transpose, then restore the orientation
    return tuple(tuple(Fraction(v) for v in row) for row in w)


NAMES = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(m)", "A~n", "F~4")


def default_depth(name: str) -> int:
    ent = catalog_entry(name)
    return DEFAULT_DEPTHS.get(ent.name, 2 * ent.n + 4)


__all__ = ["CatalogEntry", "UnknownType", "catalog", "catalog_entry", "default_depth", "integer_matrix"]
