import itertools

import pytest

from matchent import graphs
from matchent.errors import ResourceLimitError
from matchent.graphs import (
    Graph,
    LayeredFamily,
    biadjacency_graph,
    build_layer_graph,
    classify_wiring,
    enumerate_connections,
    enumerate_regular_bipartite_class,
    even_odd_connection,
    graph_from_text,
    graph_to_text,
    identity_connection,
    make_bethe_sequence_element,
    make_complete_bipartite,
    make_cycle,
    make_edgeless,
    make_torus,
    proper_two_coloring,
    random_bipartite_glue,
    regular_biadjacency_matrices,
    shift_connection,
)

from oracles import brute_two_coloring_exists, count_regular_biadjacency


# ---------------------------------------------------------------------------
# Basic generators
# ---------------------------------------------------------------------------

def test_cycle_even_is_bipartite_2_regular():
    g = make_cycle(4)
    assert g.is_r_regular(2)
    assert g.bipartition is not None
    assert brute_two_coloring_exists(g)


def test_cycle_odd_has_no_bipartition():
    g = make_cycle(3)
    assert g.bipartition is None
    assert not brute_two_coloring_exists(g)


def test_cycle_length_10():
    g = make_cycle(10)
    assert g.vertex_count == 10 and g.is_r_regular(2)


def test_cycle_too_short():
    with pytest.raises(ValueError):
        make_cycle(2)


def test_torus_1d_is_cycle():
    assert make_torus([4]).edges == make_cycle(4).edges


def test_torus_4x4():
    g = make_torus([4, 4])
    assert g.vertex_count == 16
    assert g.is_r_regular(4)
    assert g.bipartition is not None


def test_torus_3x3_not_bipartite():
    g = make_torus([3, 3])
    assert g.vertex_count == 9
    assert g.is_r_regular(4)
    assert g.bipartition is None
    assert not brute_two_coloring_exists(g)


def test_torus_degenerate_dimension():
    with pytest.raises(ValueError):
        make_torus([2, 4])


def test_torus_degrees_match_dimension_count():
    for dims in ([3], [4, 5], [3, 3, 3]):
        assert make_torus(dims).is_r_regular(2 * len(dims))


def test_complete_bipartite():
    g = make_complete_bipartite(3)
    assert g.vertex_count == 6
    assert g.edge_total == 9
    assert g.is_r_regular(3)
    assert make_complete_bipartite(2).edges == make_cycle(4).edges or \
        sorted(make_complete_bipartite(2).degrees) == sorted(make_cycle(4).degrees)


def test_graph_rejects_self_loop_and_bad_bipartition():
    with pytest.raises(ValueError):
        graphs._make_graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, ((0, 1, 1),), (0, 0))


def test_two_coloring_agrees_with_oracle():
    cases = [make_cycle(4), make_cycle(5), make_torus([3, 3]),
             make_torus([4, 4]), make_complete_bipartite(3)]
    for g in cases:
        coloring = proper_two_coloring(g)
        assert (coloring is not None) == brute_two_coloring_exists(g)
        if coloring is not None:
            for u, v, _ in g.edges:
                assert coloring[u] != coloring[v]


# ---------------------------------------------------------------------------
# Layered builds
# ---------------------------------------------------------------------------

def test_single_vertex_chain_closes_into_cycle():
    fam = LayeredFamily(make_edgeless(1), ((1,),), name="chain")
    g = build_layer_graph(fam, 5)
    assert g.edges == make_cycle(5).edges


def test_c4_identity_4_layers_equals_torus():
    fam = LayeredFamily(make_cycle(4), identity_connection(4))
    layered = build_layer_graph(fam, 4)
    torus = make_torus([4, 4])
    # explicit bijection: layered (u, k) -> torus coordinates (u, k)
    n = 4
    mapping = {k * 4 + u: u * n + k for k in range(n) for u in range(4)}
    relabeled = sorted(
        (min(mapping[u], mapping[v]), max(mapping[u], mapping[v]), m)
        for u, v, m in layered.edges)
    assert relabeled == list(torus.edges)


def test_two_layer_identity_stacks_multi_edges():
    fam = LayeredFamily(make_cycle(4), identity_connection(4))
    g = build_layer_graph(fam, 2)
    multiplicities = {m for _, _, m in g.edges}
    assert 2 in multiplicities
    assert g.edge_total == 2 * 4 + 2 * 4


def test_layer_edge_count_invariant():
    for fam, n in [
        (LayeredFamily(make_cycle(6), even_odd_connection(6)), 5),
        (LayeredFamily(make_cycle(4), shift_connection(4)), 3),
        (LayeredFamily(make_cycle(8), identity_connection(8)), 4),
    ]:
        g = build_layer_graph(fam, n)
        ones = sum(sum(row) for row in fam.connection)
        assert g.edge_total == n * fam.base.edge_total + n * ones


def test_layer_regularity_p_plus_2q():
    base = make_cycle(6)
    for conn, degree in [(identity_connection(6), 4), (shift_connection(6), 4)]:
        fam = LayeredFamily(base, conn)
        for n in (3, 4, 5):
            assert build_layer_graph(fam, n).is_r_regular(degree)


def test_even_odd_cubic_family():
    fam = LayeredFamily(make_cycle(6), even_odd_connection(6))
    g = build_layer_graph(fam, 4)
    assert g.is_r_regular(3)
    assert g.bipartition is not None
    assert brute_two_coloring_exists(g)


def test_even_n_bipartite_for_wiring_modes():
    base = make_cycle(6)
    for conn in (identity_connection(6), shift_connection(6)):
        fam = LayeredFamily(base, conn)
        g = build_layer_graph(fam, 4)
        assert g.bipartition is not None
        assert brute_two_coloring_exists(g)


def test_disjoint_family_flag():
    fam = LayeredFamily(make_complete_bipartite(2), graphs.zero_connection(4))
    assert fam.is_disjoint and not fam.is_permutation
    assert LayeredFamily(make_cycle(4), shift_connection(4)).is_permutation


def test_row_col_sums_consistency():
    fam = LayeredFamily(make_cycle(6), even_odd_connection(6))
    assert sum(fam.row_sums) == sum(fam.col_sums) == 3


# ---------------------------------------------------------------------------
# Connection enumeration
# ---------------------------------------------------------------------------

def _assemble_permutation(perm):
    n = len(perm)
    return tuple(tuple(1 if perm[u] == v else 0 for v in range(n)) for u in range(n))


def test_enumerate_permutation_bipartite_c4_against_brute_force():
    base = make_cycle(4)
    returned = enumerate_connections(base, "permutation-bipartite")
    # oracle: all 24 permutations whose 4-layer graph 2-colors
    good = set()
    for perm in itertools.permutations(range(4)):
        mat = _assemble_permutation(perm)
        g = build_layer_graph(LayeredFamily(base, mat), 4)
        if brute_two_coloring_exists(g):
            good.add(mat)
    assert set(returned) <= good
    # every bipartite permutation is rotation-equivalent to a returned one
    def conjugates(mat):
        n = 4
        return {tuple(tuple(mat[(u - k) % n][(v - k) % n] for v in range(n))
                      for u in range(n)) for k in range(n)}
    covered = set()
    for mat in returned:
        covered |= conjugates(mat)
    assert good <= covered
    for mat in returned:
        g = build_layer_graph(LayeredFamily(base, mat), 4)
        assert g.is_r_regular(4)


def test_enumerate_permutation_bipartite_requires_bipartition():
    with pytest.raises(ValueError):
        enumerate_connections(make_cycle(3), "permutation-bipartite")


def test_enumerate_two_per_row_c4():
    base = make_cycle(4)
    mats = enumerate_connections(base, "two-per-row")
    assert mats
    for mat in mats:
        assert all(sum(row) == 2 for row in mat)
        assert all(sum(mat[u][v] for u in range(4)) == 2 for v in range(4))
        assert classify_wiring(base, mat) is not None
        g = build_layer_graph(LayeredFamily(base, mat), 4)
        assert g.is_r_regular(6)
        assert brute_two_coloring_exists(g)


def test_enumerate_even_odd_matchings_count():
    base = make_cycle(6)
    mats = enumerate_connections(base, "even-odd-cubic")
    for mat in mats:
        assert sum(sum(row) for row in mat) == 3
        g = build_layer_graph(LayeredFamily(base, mat), 4)
        assert g.is_r_regular(3)
        assert brute_two_coloring_exists(g)
    # 3! matchings fall into rotation classes, at least two distinct
    assert 2 <= len(mats) <= 6


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        enumerate_connections(make_cycle(4), "nonsense")


def test_enumerate_without_dedup_returns_all():
    full = enumerate_connections(make_cycle(6), "permutation-bipartite", dedup=False)
    assert len(full) == 2 * 6 * 6  # class-preserving plus class-swapping


def test_classify_wiring_tags():
    base = make_cycle(4)
    assert classify_wiring(base, identity_connection(4)).mode == "within-class"
    assert classify_wiring(base, shift_connection(4)).mode == "cross-class"
    mixed = ((0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 0))
    assert classify_wiring(base, mixed) is None
    with pytest.raises(ValueError):
        classify_wiring(make_cycle(3), identity_connection(3))
    from matchent.graphs import BipartiteLayerTag
    with pytest.raises(ValueError):
        BipartiteLayerTag("sideways")


# ---------------------------------------------------------------------------
# Bethe approximants
# ---------------------------------------------------------------------------

def test_bethe_r2_is_hexagon():
    glue = Graph(2, ((0, 1, 1),), (0, 1))
    g = make_bethe_sequence_element(2, 2, glue)
    assert g.vertex_count == 6
    assert g.is_r_regular(2)
    assert g.bipartition is not None
    # connected 2-regular bipartite on 6 vertices is the 6-cycle
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for u, _ in g.adjacency[v]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    assert seen == set(range(6))


def test_bethe_r3_depth1():
    glue = make_complete_bipartite(2)
    g = make_bethe_sequence_element(3, 1, glue)
    assert g.vertex_count == 6
    assert g.is_r_regular(3)
    assert g.bipartition is not None


def test_bethe_r3_depth1_cycle_glue_same_size():
    glue = make_cycle(4)
    g = make_bethe_sequence_element(3, 1, glue)
    assert g.vertex_count == 6
    assert g.is_r_regular(3)


def test_bethe_r3_depth2_with_random_glue():
    glue = random_bipartite_glue(3, 2, seed=7)
    g = make_bethe_sequence_element(3, 2, glue)
    assert g.vertex_count == 1 + 3 * (1 + 2) + 4
    assert g.is_r_regular(3)
    assert brute_two_coloring_exists(g)


def test_bethe_rejects_wrong_glue():
    with pytest.raises(ValueError):
        make_bethe_sequence_element(3, 1, make_complete_bipartite(3))
    with pytest.raises(ValueError):
        make_bethe_sequence_element(3, 1, make_cycle(6))


def test_random_glue_is_deterministic_per_seed():
    a = random_bipartite_glue(3, 2, seed=11)
    b = random_bipartite_glue(3, 2, seed=11)
    c = random_bipartite_glue(3, 2, seed=12)
    assert a.edges == b.edges
    assert a.edges != c.edges
    assert a.is_r_regular(2)


# ---------------------------------------------------------------------------
# Regular bipartite classes
# ---------------------------------------------------------------------------

def test_class_1_by_r_is_parallel_edges():
    members = list(enumerate_regular_bipartite_class(1, 3))
    assert len(members) == 1
    assert members[0].edges == ((0, 1, 3),)


def test_class_2_2_matches_spec():
    mats = list(regular_biadjacency_matrices(2, 2))
    assert sorted(mats) == sorted([
        ((2, 0), (0, 2)), ((0, 2), (2, 0)), ((1, 1), (1, 1))])


@pytest.mark.parametrize("n,r", [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3)])
def test_class_count_matches_independent_dp(n, r):
    produced = sum(1 for _ in regular_biadjacency_matrices(n, r))
    assert produced == count_regular_biadjacency(n, r)


def test_class_row_col_sums(n=3, r=2):
    for mat in regular_biadjacency_matrices(n, r):
        assert all(sum(row) == r for row in mat)
        assert all(sum(mat[i][j] for i in range(n)) == r for j in range(n))


def test_class_guard():
    with pytest.raises(ResourceLimitError):
        list(regular_biadjacency_matrices(6, 2))
    with pytest.raises(ResourceLimitError):
        list(regular_biadjacency_matrices(2, 4))


def test_biadjacency_graph_shape():
    g = biadjacency_graph(((1, 1), (1, 1)))
    assert g.is_r_regular(2)
    assert g.bipartition == (0, 0, 1, 1)


# ---------------------------------------------------------------------------
# Interchange format
# ---------------------------------------------------------------------------

def test_text_round_trip():
    for g in (make_cycle(5), make_torus([4, 4]),
              biadjacency_graph(((2, 0), (0, 2))), make_edgeless(3)):
        assert graph_from_text(graph_to_text(g)) == g


def test_text_format_shape():
    text = graph_to_text(biadjacency_graph(((1, 1), (1, 1))))
    lines = text.strip().splitlines()
    assert lines[0] == "vertices 4"
    assert lines[1] == "bipartition 0011"
    assert lines[2] == "edge 0 2 1"


def test_text_rejects_garbage():
    with pytest.raises(ValueError):
        graph_from_text("vertices 2\nwhatever 1 2\n")
