import json
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import strategies as st

from clusterlab.catalog import catalog_entry, integer_matrix
from clusterlab.scalar import chebyshev_value
from clusterlab.skewsym import find_skew_symmetrizer

P = chebyshev_value(5)

H3_CYCLE = ((0, -P, P), (P, 0, -P), (-P, P, 0))
H3_PATH = ((0, -P, 0), (P, 0, -1), (0, 1, 0))
H4_PATH = ((0, -P, 0, 0), (P, 0, -1, 0), (0, 1, 0, -1), (0, 0, 1, 0))
BAD_RANK2 = ((F(0), F(-1, 2)), (F(2), F(0)))
INCOHERENT = ((F(0), F(1, 2)), (F(-1, 2), F(0)))


def _seeds():
    out = {name: catalog_entry(name).matrix() for name in ("A3", "B3", "D4", "F4", "H3", "H4", "I2(5)", "I2(7)", "A~2")}
    out["F4-int"] = integer_matrix("F4")
    out["C3-int"] = integer_matrix("C3")
    out["rank2-bad"] = BAD_RANK2
    out["incoherent"] = INCOHERENT
    return out


SEEDS = _seeds()
SYMMETRIZERS = {name: find_skew_symmetrizer(m) for name, m in SEEDS.items()}


@st.composite
def seeded_words(draw, max_len: int = 7, names=None):
    """(name, B0, D, word) with a reduced random word."""
    name = draw(st.sampled_from(sorted(names or SEEDS)))
    b0 = SEEDS[name]
    n = len(b0)
    length = draw(st.integers(0, max_len))
    word = []
    for _ in range(length):
        k = draw(st.integers(1, n).filter(lambda x: not word or x != word[-1]))
        word.append(k)
    return name, b0, SYMMETRIZERS[name], tuple(word)


DATA = Path(__file__).parent / "data"


@pytest.fixture
def quiver5():
    from clusterlab.skewsym import Quiver

    return Quiver.from_json(json.loads((DATA / "quiver5.json").read_text()))


# acceptance lines, filled by test_acceptance.py
RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
