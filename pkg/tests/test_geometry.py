import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from clusterlab.catalog import catalog_entry, integer_matrix
from clusterlab.core import Node, Permutation, column_sign, identity, replay
from clusterlab.explore import class_nodes, enumerate_c_pattern
from clusterlab.geometry import (
    DimensionTooLarge,
    GCone,
    IncoherentNode,
    IncoherentPattern,
    Ray,
    build_exchange_graph,
    count_rays,
    explore_states,
    fan_verify,
    fm_feasible,
    g_cone,
    g_fan,
    graphs_isomorphic,
    modified_equal,
    orthant_signs_ok,
    quotient,
    ray_quotient,
)
from conftest import BAD_RANK2, H3_CYCLE, INCOHERENT, SEEDS, seeded_words


def col(m, j):
    return tuple(r[j] for r in m)


# --- cones --------------------------------------------------------------


def test_root_cone_is_positive_orthant():
    c = g_cone(Node.initial(H3_CYCLE))
    assert c.generators == identity(3) and c.normals == identity(3)
    assert c.contains((1, 2, 0))
    assert not c.contains((1, -1, 0))


def test_boxed_cone_is_positive_orthant_again():
    node = replay(BAD_RANK2, [1, 2, 1, 2, 1], (4, 1))
    c = g_cone(node)
    assert {col(c.generators, j) for j in range(2)} == {(0, 2), (F(1, 2), 0)}
    assert c.rays() == g_cone(Node.initial(BAD_RANK2, (4, 1))).rays()


def test_h3_last_cone_is_negative_orthant():
    c = g_cone(replay(H3_CYCLE, [1, 2, 1, 3, 2, 1]))
    assert c.rays() == {Ray((-1, 0, 0)), Ray((0, -1, 0)), Ray((0, 0, -1))}


def test_incoherent_node_has_no_cone():
    with pytest.raises(IncoherentNode):
        g_cone(replay(INCOHERENT, [1, 2]))


def test_rays_ignore_positive_scaling():
    assert Ray.of((0, 3, -6)) == Ray.of((0, F(1, 2), -1))
    assert Ray.of((1, 1)) != Ray.of((-1, -1))
    with pytest.raises(ValueError):
        Ray.of((0, 0))


def test_from_generators_gives_dual_normals():
    c = GCone.from_generators(((1, -1), (1, 1)), (2, 1))
    for i in range(2):
        for j in range(2):
            assert c.pairing(col(c.generators, i), j) == (c.weight[i] if i == j else 0)


@given(seeded_words(names=[n for n in SEEDS if n != "incoherent"]), st.data())
@settings(max_examples=100, deadline=None)
def test_membership_agrees_with_generators(case, data):
    _, b0, d, word = case
    c = g_cone(replay(b0, word, d))
    n = c.n
    x = tuple(F(data.draw(st.integers(-5, 5))) for _ in range(n))
    assert c.contains(x) == c.contains_by_generators(x)


@given(seeded_words(names=[n for n in SEEDS if n != "incoherent"]))
@settings(max_examples=100, deadline=None)
def test_orthant_confinement_and_hyperplanes(case):
    _, b0, d, word = case
    node = replay(b0, word, d)
    c = g_cone(node)
    assert orthant_signs_ok(c)
    for j in range(node.n):
        # a sign-coherent normal is strictly signed on the open orthants
        assert column_sign(node.C, j) in (1, -1)


def _orthant_face_ok(c: GCone) -> bool:
    """``cone cap (closed positive orthant)`` is spanned by the unit vectors it contains."""
    n = c.n
    inside = [r for r in range(n) if c.contains(tuple(1 if i == r else 0 for i in range(n)))]
    for r in range(n):
        if r in inside:
            continue
        # x >= 0, x in cone, x_r = 1: variables are the other coordinates
        others = [i for i in range(n) if i != r]
        ineqs = []
        for t in range(n - 1):
            e = [0] * (n - 1)
            e[t] = 1
            ineqs.append((e, 0))
        for j in range(n):
            w = [c.weight[i] * c.normals[i][j] for i in range(n)]
            ineqs.append(([w[i] for i in others], w[r]))
        if fm_feasible(ineqs, n - 1):
            return False
    return True


@given(seeded_words(names=[n for n in SEEDS if n != "incoherent"]))
@settings(max_examples=60, deadline=None)
def test_orthant_intersection_is_a_face(case):
    _, b0, d, word = case
    assert _orthant_face_ok(g_cone(replay(b0, word, d)))


# --- Fourier-Motzkin ----------------------------------------------------


def test_fm_simple_systems():
    assert fm_feasible([([1, 0], 0), ([0, 1], 0), ([-1, -1], 1)], 2)
    assert not fm_feasible([([1], -2), ([-1], 1)], 1)
    assert fm_feasible([], 3)


@given(st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(-3, 3)),
                min_size=1, max_size=6))
@settings(max_examples=150, deadline=None)
def test_fm_agrees_with_candidate_points(rows):
    # a nonempty polygon in the plane contains a vertex, or a point where a boundary line
    # meets an axis, or (all rows constant) any grid point
    cands = [(F(x), F(y)) for x in range(-2, 3) for y in range(-2, 3)]
    for (a1, b1), (a2, b2) in itertools.combinations(rows, 2):
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if det:
            cands.append((F(-b1 * a2[1] + b2 * a1[1], det), F(-a1[0] * b2 + a2[0] * b1, det)))
    for a, b in rows:
        for t in range(2):
            if a[t]:
                p = [F(0), F(0)]
                p[t] = F(-b, a[t])
                cands.append(tuple(p))
    found = any(all(a[0] * x + a[1] * y + b >= 0 for a, b in rows) for x, y in cands)
    assert fm_feasible([(a, b) for a, b in rows], 2) == found


# --- fans ---------------------------------------------------------------


def test_overlapping_pair_fails():
    a = GCone.from_generators(((1, 0), (0, 1)), word=("a",))
    b = GCone.from_generators(((1, -1), (1, 1)), word=("b",))
    v = fan_verify([a, b])
    assert not v.passed
    assert v.witness == (["a"], ["b"])


def test_adjacent_pair_passes():
    a = GCone.from_generators(((1, 0), (0, 1)))
    b = GCone.from_generators(((-1, 0), (0, 1)))
    assert fan_verify([a, b]).passed


def test_large_rank_sampling_is_partial():
    cones = [GCone.from_generators(identity(5))]
    with pytest.raises(DimensionTooLarge):
        fan_verify(cones, exact=True)
    assert fan_verify(cones).partial


@pytest.mark.parametrize("m", range(3, 9))
def test_dihedral_fans(m):
    rep = g_fan(catalog_entry(f"I2({m})").matrix(), m + 3, verify=True)
    assert len(rep.cones) == m + 2
    assert rep.rays == m + 2
    assert rep.verdict.passed


@pytest.mark.parametrize("name,cones,rays", [
    ("A2", 5, 5), ("A3", 14, 9), ("B3", 20, 12), ("G2", 8, 8), ("H3", 32, 18),
])
def test_catalog_fans(name, cones, rays):
    b = catalog_entry(name).matrix()
    rep = g_fan(b, 2 * len(b) + 4, verify=True)
    assert (len(rep.cones), rep.rays) == (cones, rays)
    assert rep.verdict.passed


def test_integer_c3_fan_matches_sk():
    a = g_fan(integer_matrix("C3"), 10)
    assert (len(a.cones), a.rays) == (20, 12)


def test_fan_json():
    obj = g_fan(BAD_RANK2, 8, verify=True).to_json()
    assert obj["rays"] == 5 and obj["fan_verified"] is True
    assert set(obj["cones"][0]) == {"word", "generators", "normals"}


# --- modified patterns --------------------------------------------------


def test_modified_equal_worked_example():
    a = Node.initial(BAD_RANK2, (4, 1))
    b = replay(BAD_RANK2, [1, 2, 1, 2, 1], (4, 1))
    sigma, lam = modified_equal(a, b)
    assert sigma == Permutation((1, 0))
    assert lam == (F(1, 2), 2)


def test_modified_equal_self():
    node = replay(BAD_RANK2, [1, 2], (4, 1))
    sigma, lam = modified_equal(node, node)
    assert sigma.is_identity() and lam == (1, 1)


def test_modified_equal_skew_symmetric_is_plain():
    rep = enumerate_c_pattern(H3_CYCLE, 7)
    nodes = class_nodes(H3_CYCLE, rep)[:12]
    for a, b in itertools.combinations(nodes, 2):
        plain = any(Permutation(p).act_c(a.C) == b.C for p in itertools.permutations(range(3)))
        assert (modified_equal(a, b) is not None) == plain


@pytest.mark.parametrize("b0,depth", [(BAD_RANK2, 12), (SEEDS["C3-int"], 5), (SEEDS["I2(5)"], 8)])
def test_cone_equality_iff_modified_equal(b0, depth):
    states = explore_states(b0, depth)
    nodes = states.nodes[:80]
    for a, b in itertools.combinations(nodes, 2):
        same_cone = g_cone(a).rays() == g_cone(b).rays()
        assert same_cone == (modified_equal(a, b) is not None)


# --- exchange graphs ----------------------------------------------------


@pytest.fixture(scope="module")
def rank2_graphs():
    states = explore_states(BAD_RANK2, 14)
    return states, {k: quotient(states, k) for k in ("C", "G", "fan", "modC", "modG")}


def test_rank2_exchange_graphs(rank2_graphs):
    _, g = rank2_graphs
    assert g["C"].is_cycle(10) and g["G"].is_cycle(10)
    for k in ("fan", "modC", "modG"):
        assert g[k].is_cycle(5)
    assert all(x.is_regular() for x in g.values())


def test_rank2_canonical_isomorphisms(rank2_graphs):
    _, g = rank2_graphs
    assert graphs_isomorphic(g["C"], g["G"])
    assert graphs_isomorphic(g["modC"], g["fan"])
    assert graphs_isomorphic(g["modG"], g["fan"])
    assert graphs_isomorphic(g["G"], g["fan"]) is None


def test_ray_quotients(rank2_graphs):
    states, g = rank2_graphs
    for k in ("C", "G"):
        assert graphs_isomorphic(ray_quotient(g[k], states), g["fan"])


def test_depth_zero_graphs():
    a = build_exchange_graph(H3_CYCLE, "C", 0)
    b = build_exchange_graph(H3_CYCLE, "fan", 0)
    assert a.size == b.size == 1
    assert graphs_isomorphic(a, b)


def test_h3_fan_graph():
    g = build_exchange_graph(H3_CYCLE, "fan", 8)
    assert g.size == 32
    assert g.is_regular()


def test_fan_graph_needs_coherence():
    with pytest.raises(IncoherentPattern):
        build_exchange_graph(INCOHERENT, "fan", 3)


def test_unknown_kind():
    with pytest.raises(ValueError):
        build_exchange_graph(H3_CYCLE, "X", 1)


def test_graph_json():
    obj = build_exchange_graph(BAD_RANK2, "fan", 14).to_json()
    assert obj["regular"] and len(obj["vertices"]) == 5
