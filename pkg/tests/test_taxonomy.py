import itertools

import pytest
from hypothesis import given, settings, strategies as st

from artinlab.diagram import linear_diagram, make_diagram
from artinlab.taxonomy import (
    CoreConfig,
    LikeSubdiagram,
    TaxonomyError,
    atomicity,
    enumerate_like,
    extremal_class,
    find_robust_core,
    is_admissible,
    is_ctilde_elementary,
    is_ctilde_elementary_shape,
    reduction_certificate,
)


def _tripod(r, s, t):
    vs = ["c"]
    edges = []
    for arm, k in zip("abd", (r, s, t)):
        prev = "c"
        for i in range(1, k + 1):
            v = "%s%d" % (arm, i)
            vs.append(v)
            edges.append((prev, v, 3))
            prev = v
    return make_diagram(vs, edges)


def _small_trees(max_n, labels):
    """Every labeled tree up to max_n vertices over the label alphabet,
    one representative per shape (local enumeration, no external oracle)."""
    for n in range(1, max_n + 1):
        for shape_edges in _tree_shapes(n):
            vs = ["v%d" % k for k in range(n)]
            for labs in itertools.product(labels, repeat=len(shape_edges)):
                yield make_diagram(
                    vs, [(vs[a], vs[b], m) for (a, b), m in zip(shape_edges, labs)]
                )


def _tree_shapes(n):
    """All labeled trees on vertices 0..n-1 via parent sequences; includes
    isomorphic duplicates, which only costs time."""
    if n == 1:
        yield []
        return
    for parents in itertools.product(*[range(k) for k in range(1, n)]):
        yield [(parents[k - 1], k) for k in range(1, n)]


# -- admissibility -----------------------------------------------------------


def test_admissible_all_connected_subsets_of_a_tree():
    d = _tripod(2, 2, 1)
    vs = d.vertices
    for size in range(1, len(vs) + 1):
        for combo in itertools.combinations(vs, size):
            sub = [v for v in combo]
            comps = set()
            # only connected subsets are legal inputs
            try:
                verdict = is_admissible(d, sub)
            except TaxonomyError:
                continue
            assert bool(verdict), (sub, verdict.witness)


def test_admissible_cycle_witness():
    d = make_diagram(
        ["a", "b", "c", "e"],
        [("a", "b", 3), ("b", "c", 3), ("c", "e", 3), ("e", "a", 3)],
    )
    verdict = is_admissible(d, ["a", "b", "c"])
    assert not verdict
    assert verdict.witness == ("b", "a", "c")


def test_admissible_single_vertex():
    d = linear_diagram([3, 3])
    assert bool(is_admissible(d, ["s2"]))


def test_admissible_rejects_disconnected_subset():
    d = linear_diagram([3, 3])
    with pytest.raises(TaxonomyError):
        is_admissible(d, ["s1", "s3"])


def test_admissible_rejects_unknown_vertex():
    d = linear_diagram([3])
    with pytest.raises(TaxonomyError):
        is_admissible(d, ["s1", "zz"])


# -- enumeration -------------------------------------------------------------


def test_enumerate_b_like_lists_every_occurrence():
    # on the (3,4) line both the heavy edge and the whole line qualify
    d = linear_diagram([3, 4])
    items = enumerate_like(d, "B-like")
    assert [(it.name, it.vertices, it.base_vertex) for it in items] == [
        ("B2-like", ("s2", "s3"), None),
        ("B3-like", ("s1", "s2", "s3"), "s1"),
    ]


def test_enumerate_ctilde_whole_line():
    d = linear_diagram([4, 3, 4])
    items = enumerate_like(d, "C~-like")
    assert [(it.name, it.vertices) for it in items] == [
        ("C~3-like", ("s1", "s2", "s3", "s4"))
    ]


def test_enumerate_dtilde_star_once_per_vertex_set():
    d = make_diagram(
        ["c", "a", "b", "e", "f", "g"],
        [("c", "a", 3), ("c", "b", 3), ("c", "e", 3), ("c", "f", 3), ("f", "g", 3)],
    )
    items = enumerate_like(d, "D~-like")
    assert [it.vertices for it in items] == [("a", "b", "c", "e", "f")]


def test_enumerate_d_like_base_vertex_by_size():
    d = _tripod(3, 1, 1)  # classical 6-vertex fork
    by_size = {}
    for it in enumerate_like(d, "D-like"):
        by_size.setdefault(len(it.vertices), []).append(it)
    # 3-vertex forks: midpoint is the base
    assert all(it.base_vertex == it.vertices[2] for it in by_size[3])
    # 4-vertex stars have no canonical base
    assert all(it.base_vertex is None for it in by_size[4])
    # longer forks: the far tail end
    assert all(it.base_vertex == it.vertices[-1] for it in by_size[5])
    assert by_size[6][0].base_vertex == "a3"


def test_enumerate_heavy_star_gives_one_btilde_per_heavy_spoke():
    d = make_diagram(
        ["c", "x", "y", "z"], [("c", "x", 4), ("c", "y", 4), ("c", "z", 3)]
    )
    items = enumerate_like(d, "B~-like")
    assert [it.vertices for it in items] == [
        ("y", "z", "c", "x"),
        ("x", "z", "c", "y"),
    ]


def test_enumerate_core_kind_merges_and_sorts():
    d = linear_diagram([4, 3, 4])
    cores = enumerate_like(d, "C~-core")
    assert [it.kind for it in cores] == ["C~-like"]
    two = enumerate_like(make_diagram(
        ["c", "x", "y", "z"], [("c", "x", 4), ("c", "y", 3), ("c", "z", 3)]
    ), "C~-core")
    assert [(it.kind, it.vertices) for it in two] == [("B~-like", ("y", "z", "c", "x"))]


def test_enumerate_unknown_kind_rejected():
    with pytest.raises(TaxonomyError):
        enumerate_like(linear_diagram([3]), "Z-like")


def test_enumerate_is_deterministic():
    d = _tripod(2, 2, 2)
    assert enumerate_like(d, "D-like") == enumerate_like(d, "D-like")


def test_like_names_and_subscripts():
    assert LikeSubdiagram("B-like", ("a", "b")).name == "B2-like"
    assert LikeSubdiagram("C~-like", ("a", "b", "c")).subscript == 2
    assert LikeSubdiagram("D~-like", ("a", "b", "c", "d", "e")).name == "D~4-like"


# -- atomicity ---------------------------------------------------------------


def test_atomic_b_like_inside_heavy_line():
    d = linear_diagram([4, 3, 4])
    sub = LikeSubdiagram("B-like", ("s2", "s3", "s4"), "s2")
    assert atomicity(d, sub) == "atomic"


def test_atomicity_ignores_ambient_edges_at_exempt_positions():
    # extra leaves at the second and second-to-last vertex do not matter
    d = make_diagram(
        ["s1", "s2", "s3", "s4", "t", "u"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "s4", 4), ("s2", "t", 3), ("s3", "u", 3)],
    )
    sub = LikeSubdiagram("B-like", ("s1", "s2", "s3", "s4"), "s1")
    assert atomicity(d, sub) == "atomic"


def test_atomicity_none_for_branch_at_interior():
    d = make_diagram(
        ["s1", "s2", "s3", "s4", "s5", "t"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "s4", 3), ("s4", "s5", 4), ("s3", "t", 3)],
    )
    sub = LikeSubdiagram("B-like", ("s1", "s2", "s3", "s4", "s5"), "s1")
    assert atomicity(d, sub) == "none"


def test_atomicity_none_for_heavy_inner_edge():
    d = linear_diagram([4, 4])
    sub = LikeSubdiagram("B-like", ("s1", "s2", "s3"), "s1")
    assert atomicity(d, sub) == "none"


def test_weakly_atomic_fork():
    d = make_diagram(["a", "b", "c"], [("a", "c", 4), ("b", "c", 3)])
    sub = LikeSubdiagram("D-like", ("a", "b", "c"), "c")
    assert atomicity(d, sub) == "weakly_atomic"


def test_two_heavy_fork_edges_grade_none():
    d = make_diagram(["a", "b", "c"], [("a", "c", 4), ("b", "c", 5)])
    sub = LikeSubdiagram("D-like", ("a", "b", "c"), "c")
    assert atomicity(d, sub) == "none"


def test_fork_atomicity_exempts_branch_and_second_to_last():
    d = make_diagram(
        ["b1", "b2", "c", "b4", "b5", "t", "u"],
        [("c", "b1", 3), ("c", "b2", 3), ("c", "b4", 3), ("b4", "b5", 3),
         ("c", "t", 3), ("b4", "u", 3)],
    )
    sub = LikeSubdiagram("D-like", ("b1", "b2", "c", "b4", "b5"), "b5")
    assert atomicity(d, sub) == "atomic"


def test_fork_atomicity_none_for_interior_branch():
    d = make_diagram(
        ["b1", "b2", "c", "b4", "b5", "b6", "t"],
        [("c", "b1", 3), ("c", "b2", 3), ("c", "b4", 3), ("b4", "b5", 3),
         ("b5", "b6", 3), ("b4", "t", 3)],
    )
    sub = LikeSubdiagram("D-like", ("b1", "b2", "c", "b4", "b5", "b6"), "b6")
    assert atomicity(d, sub) == "none"


def test_atomicity_rejects_core_kinds():
    d = linear_diagram([4, 3, 4])
    with pytest.raises(TaxonomyError):
        atomicity(d, LikeSubdiagram("C~-like", ("s1", "s2", "s3", "s4")))


def test_validation_rejects_wrong_order():
    d = linear_diagram([4, 3])
    with pytest.raises(TaxonomyError):
        atomicity(d, LikeSubdiagram("B-like", ("s2", "s3", "s1")))


# -- core avoidance ----------------------------------------------------------


def test_all3_tripods_are_elementary():
    assert is_ctilde_elementary(_tripod(2, 2, 1))
    assert is_ctilde_elementary(_tripod(3, 1, 1))


def test_two_heavy_line_is_not_elementary():
    assert not is_ctilde_elementary(linear_diagram([4, 3, 3, 4]))


def test_one_heavy_line_is_elementary():
    assert is_ctilde_elementary(linear_diagram([3, 4, 3]))
    assert is_ctilde_elementary_shape(linear_diagram([3, 4, 3]))


def test_heavy_fork_is_not_elementary():
    d = make_diagram(["a", "b", "c", "t"], [("c", "a", 3), ("c", "b", 3), ("c", "t", 4)])
    assert not is_ctilde_elementary(d)


def test_all3_double_fork_is_not_elementary():
    d = make_diagram(
        ["a", "b", "c", "e", "f"],
        [("c", "a", 3), ("c", "b", 3), ("c", "e", 3), ("c", "f", 3)],
    )
    assert not is_ctilde_elementary(d)


def test_elementary_requires_a_tree():
    d = make_diagram(
        ["a", "b", "c"], [("a", "b", 3), ("b", "c", 3), ("a", "c", 3)]
    )
    with pytest.raises(TaxonomyError):
        is_ctilde_elementary(d)


def test_elementary_routes_agree_small_trees():
    # exhaustive up to 5 vertices over labels {3,4,5}; the larger sweep runs
    # in the acceptance gate
    for d in _small_trees(5, (3, 4, 5)):
        assert is_ctilde_elementary(d) == is_ctilde_elementary_shape(d), d.edge_list


# -- core growth: one fixture per picture ------------------------------------


def _grown(d, seed, want_label):
    cc = find_robust_core(d, seed)
    assert cc.config_label == want_label, (cc.config_label, want_label)
    assert cc.contains_seed == (want_label >= 11)
    assert cc.core in enumerate_like(d, "C~-core")
    for v in set(seed.vertices) - set(cc.core.vertices):
        assert extremal_class(d, cc.core, v) in ("extremal_min", "extremal_max")
    for cond in cc.side_conditions:
        assert cond is None or cond is True
    return cc


def test_config_1_branch_beyond_the_heavy_end():
    d = make_diagram(
        ["s1", "s2", "s3", "u", "p", "q"],
        [("s1", "s2", 3), ("s2", "s3", 4), ("s3", "u", 3), ("u", "p", 3), ("u", "q", 3)],
    )
    cc = _grown(d, LikeSubdiagram("B-like", ("s1", "s2", "s3"), "s1"), 1)
    assert cc.core.vertices == ("p", "q", "u", "s3", "s2")
    assert cc.exempt_vertices == ("u",)


def test_config_2_second_heavy_edge_beyond():
    d = linear_diagram([3, 4, 3, 4])
    cc = _grown(d, LikeSubdiagram("B-like", ("s1", "s2", "s3"), "s1"), 2)
    assert cc.core.vertices == ("s2", "s3", "s4", "s5")


def test_config_3_extra_spoke_at_long_fork_branch():
    d = make_diagram(
        ["b1", "b2", "c", "b4", "b5", "t"],
        [("c", "b1", 3), ("c", "b2", 3), ("c", "b4", 3), ("b4", "b5", 3), ("c", "t", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("b1", "b2", "c", "b4", "b5"), "b5"), 3)
    assert cc.core.name == "D~4-like"
    assert set(cc.core.vertices) == {"b1", "b2", "c", "b4", "t"}


def test_config_4_heavy_edge_off_the_fork_side():
    d = make_diagram(
        ["b1", "b2", "c", "b4", "b5", "u"],
        [("c", "b1", 3), ("c", "b2", 3), ("c", "b4", 3), ("b4", "b5", 3), ("b1", "u", 4)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("b1", "b2", "c", "b4", "b5"), "b5"), 4)
    assert cc.core.vertices == ("b2", "b4", "c", "b1", "u")


def test_config_5_branch_at_second_to_last():
    d = make_diagram(
        ["s1", "s2", "s3", "s4", "s5", "t"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "s4", 3), ("s4", "s5", 4), ("s4", "t", 3)],
    )
    cc = _grown(d, LikeSubdiagram("B-like", ("s1", "s2", "s3", "s4", "s5"), "s1"), 5)
    assert set(cc.core.vertices) == {"s3", "s4", "s5", "t"}


def test_config_6_two_heavy_edges_one_side():
    d = linear_diagram([3, 3, 4, 3, 4])
    cc = _grown(d, LikeSubdiagram("D-like", ("s1", "s3", "s2"), "s2"), 6)
    assert cc.core.vertices == ("s3", "s4", "s5", "s6")


def test_config_7_heavy_edge_then_branch_one_side():
    d = make_diagram(
        ["s1", "s2", "s3", "s4", "s5", "p", "q"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "s4", 4), ("s4", "s5", 3),
         ("s5", "p", 3), ("s5", "q", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("s1", "s3", "s2"), "s2"), 7)
    assert cc.core.vertices == ("p", "q", "s5", "s4", "s3")


def test_config_8_branch_then_heavy_edge_one_side():
    d = make_diagram(
        ["s1", "s2", "s3", "v", "w", "x", "y"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "v", 3), ("v", "w", 3),
         ("w", "x", 4), ("v", "y", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("s1", "s3", "s2"), "s2"), 8)
    assert cc.core.vertices == ("s3", "y", "v", "w", "x")


def test_config_9_two_branch_vertices_one_side():
    d = make_diagram(
        ["s1", "s2", "s3", "v", "y", "w", "p", "q"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "v", 3), ("v", "y", 3),
         ("v", "w", 3), ("w", "p", 3), ("w", "q", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("s1", "s3", "s2"), "s2"), 9)
    assert cc.core.name == "D~5-like"
    assert cc.exempt_vertices == ("v", "w")


def test_config_9_single_valence_four_vertex():
    d = make_diagram(
        ["s1", "s2", "s3", "v", "a", "b", "c"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "v", 3), ("v", "a", 3),
         ("v", "b", 3), ("v", "c", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("s1", "s3", "s2"), "s2"), 9)
    assert cc.core.name == "D~4-like"


def test_config_10_branch_on_a_heavy_edge():
    d = make_diagram(
        ["s1", "s2", "s3", "v", "h", "o"],
        [("s1", "s2", 3), ("s2", "s3", 3), ("s3", "v", 3), ("v", "h", 4), ("v", "o", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("s1", "s3", "s2"), "s2"), 10)
    # three-edge star at the coincident feature, heavy spoke as the tail
    assert cc.core.vertices == ("s3", "o", "v", "h")


def test_config_11_containing_both_heavy_edges():
    d = linear_diagram([4, 3, 4])
    cc = _grown(d, LikeSubdiagram("B-like", ("s1", "s2")), 11)
    assert cc.core.vertices == ("s1", "s2", "s3", "s4")


def test_config_12_branch_at_the_second_vertex():
    d = make_diagram(
        ["s1", "s2", "s3", "t"], [("s1", "s2", 3), ("s2", "s3", 4), ("s2", "t", 3)]
    )
    cc = _grown(d, LikeSubdiagram("B-like", ("s1", "s2", "s3"), "s1"), 12)
    assert set(cc.core.vertices) == {"s1", "s2", "s3", "t"}
    assert cc.exempt_vertices == ("s2",)


def test_config_12_fork_grown_at_a_heavy_edge_end():
    d = make_diagram(
        ["c", "x", "y", "z"], [("c", "x", 4), ("c", "y", 3), ("c", "z", 3)]
    )
    cc = _grown(d, LikeSubdiagram("B-like", ("c", "x")), 12)
    assert cc.core.vertices == ("y", "z", "c", "x")


def test_config_13_heavy_spoke_at_the_fork_midpoint():
    d = make_diagram(["a", "b", "c", "t"], [("c", "a", 3), ("c", "b", 3), ("c", "t", 4)])
    cc = _grown(d, LikeSubdiagram("D-like", ("a", "b", "c"), "c"), 13)
    assert cc.core.vertices == ("a", "b", "c", "t")


def test_config_13_tripod_with_far_heavy_edge():
    # branch midpoint of valence 3 forces the containing route: the seed is
    # first extended through its third edge, then the far heavy edge is the
    # nearest feature, landing in picture 13 with the whole arm as the tail
    d = make_diagram(
        ["a1", "b1", "c", "d1", "d2", "e"],
        [("c", "a1", 3), ("c", "b1", 3), ("c", "d1", 3), ("d1", "d2", 3), ("d2", "e", 4)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("a1", "b1", "c"), "c"), 13)
    assert cc.core.vertices == ("a1", "b1", "c", "d1", "d2", "e")
    assert cc.notes  # records the extension step


def test_config_14_leaf_at_second_to_last_tail_vertex():
    d = make_diagram(
        ["b1", "b2", "c", "b4", "b5", "t"],
        [("c", "b1", 3), ("c", "b2", 3), ("c", "b4", 3), ("b4", "b5", 3), ("b4", "t", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("b1", "b2", "c", "b4", "b5"), "b5"), 14)
    assert cc.core.name == "D~5-like"
    assert cc.exempt_vertices == ("b4",)


def test_config_15_heavy_edge_at_a_fork_leaf_of_a_star():
    d = make_diagram(
        ["b1", "b2", "c", "b4", "u"],
        [("c", "b1", 3), ("c", "b2", 3), ("c", "b4", 3), ("b1", "u", 4)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("b1", "b2", "c", "b4")), 15)
    assert cc.core.vertices == ("b2", "b4", "c", "b1", "u")


def test_config_16_star_with_an_extra_spoke():
    d = make_diagram(
        ["b1", "b2", "c", "b4", "t"],
        [("c", "b1", 3), ("c", "b2", 3), ("c", "b4", 3), ("c", "t", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("b1", "b2", "c", "b4")), 16)
    assert cc.core.name == "D~4-like"


def test_config_17_heavy_edges_on_both_sides():
    d = linear_diagram([4, 3, 3, 4])
    cc = _grown(d, LikeSubdiagram("D-like", ("s2", "s4", "s3"), "s3"), 17)
    assert cc.core.vertices == ("s1", "s2", "s3", "s4", "s5")


def test_config_18_heavy_edge_and_branch_on_opposite_sides():
    d = make_diagram(
        ["u", "v", "a", "c", "b", "w", "p", "q"],
        [("u", "v", 4), ("v", "a", 3), ("a", "c", 3), ("c", "b", 3),
         ("b", "w", 3), ("w", "p", 3), ("w", "q", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("a", "b", "c"), "c"), 18)
    assert cc.core.name == "B~7-like"
    assert cc.exempt_vertices == ("w",)


def test_config_19_branches_on_both_sides():
    d = make_diagram(
        ["p1", "p2", "x", "a", "c", "b", "y", "q1", "q2"],
        [("p1", "x", 3), ("p2", "x", 3), ("x", "a", 3), ("a", "c", 3),
         ("c", "b", 3), ("b", "y", 3), ("y", "q1", 3), ("y", "q2", 3)],
    )
    cc = _grown(d, LikeSubdiagram("D-like", ("a", "b", "c"), "c"), 19)
    assert cc.core.name == "D~8-like"
    assert set(cc.exempt_vertices) == {"x", "y"}


def test_core_growth_rejects_elementary_diagrams():
    d = linear_diagram([3, 4])
    with pytest.raises(TaxonomyError):
        find_robust_core(d, LikeSubdiagram("B-like", ("s2", "s3")))


def test_core_growth_rejects_non_atomic_seeds():
    d = linear_diagram([4, 4])
    with pytest.raises(TaxonomyError):
        find_robust_core(d, LikeSubdiagram("B-like", ("s1", "s2", "s3"), "s1"))


def test_tie_break_is_reported():
    # two equally near heavy edges on the same side of a line seed
    d = make_diagram(
        ["s1", "s2", "s3", "a", "b"],
        [("s1", "s2", 3), ("s2", "s3", 4), ("s3", "a", 4), ("s3", "b", 4)],
    )
    cc = find_robust_core(d, LikeSubdiagram("B-like", ("s1", "s2", "s3"), "s1"))
    assert cc.tie_break
    assert cc.config_label == 2
    assert cc.core.vertices == ("s2", "s3", "a")


# -- exhaustive invariants over small trees ----------------------------------


def test_every_atomic_seed_grows_a_valid_core():
    from artinlab.diagram import tree_certificate

    labels_pool = (3, 4)
    seen = set()
    for d in _small_trees(6, labels_pool):
        if len(d.vertices) < 2:
            continue
        key = tree_certificate(d)
        if key in seen:
            continue
        seen.add(key)
        if is_ctilde_elementary(d):
            continue
        cores = enumerate_like(d, "C~-core")
        for seed in enumerate_like(d, "B-like") + enumerate_like(d, "D-like"):
            if atomicity(d, seed) != "atomic":
                continue
            cc = find_robust_core(d, seed)
            assert 1 <= cc.config_label <= 19
            assert cc.contains_seed == (cc.config_label >= 11)
            assert cc.core in cores
            for v in set(seed.vertices) - set(cc.core.vertices):
                assert extremal_class(d, cc.core, v) in ("extremal_min", "extremal_max")


def test_adding_a_leaf_at_an_exempt_vertex_keeps_atomicity():
    for d in _small_trees(5, (3, 4)):
        if len(d.vertices) < 2:
            continue
        for seed in enumerate_like(d, "B-like") + enumerate_like(d, "D-like"):
            if atomicity(d, seed) != "atomic":
                continue
            vs = seed.vertices
            exempt = vs[1] if seed.kind == "B-like" else vs[2]
            grown = make_diagram(
                list(d.vertices) + ["zz"],
                [(a, b, m) for a, b, m in d.edge_list] + [(exempt, "zz", 3)],
            )
            assert atomicity(grown, seed) == "atomic"
            second = vs[-2]
            grown2 = make_diagram(
                list(d.vertices) + ["zz"],
                [(a, b, m) for a, b, m in d.edge_list] + [(second, "zz", 3)],
            )
            assert atomicity(grown2, seed) == "atomic"


# -- extremal classes --------------------------------------------------------


def test_extremal_classes_on_a_line_core():
    d = linear_diagram([4, 3, 4, 3])
    core = LikeSubdiagram("C~-like", ("s1", "s2", "s3", "s4"))
    assert extremal_class(d, core, "s1") == "extremal_min"
    assert extremal_class(d, core, "s2") == "not_extremal"
    assert extremal_class(d, core, "s4") == "extremal_max"
    assert extremal_class(d, core, "s5") == "extremal_max"


def test_extremal_classes_on_a_fork_core():
    d = make_diagram(
        ["y", "z", "c", "x", "w"],
        [("c", "y", 3), ("c", "z", 3), ("c", "x", 4), ("y", "w", 3)],
    )
    core = LikeSubdiagram("B~-like", ("y", "z", "c", "x"))
    assert extremal_class(d, core, "w") == "extremal_min"
    assert extremal_class(d, core, "x") == "extremal_max"
    assert extremal_class(d, core, "c") == "not_extremal"


def test_extremal_class_requires_core_kind():
    d = linear_diagram([3, 4])
    with pytest.raises(TaxonomyError):
        extremal_class(d, LikeSubdiagram("B-like", ("s2", "s3")), "s1")


# -- reduction certificates --------------------------------------------------


def test_certificate_all3_fork_is_an_obligation():
    rep = reduction_certificate(_tripod(1, 1, 1))
    tags = [(e["family_tag"], e["status"]) for e in rep["elementary_leaves"]]
    assert ("E(1,1,1)", "obligation") in tags
    assert rep["verdict"] == "open"


def test_certificate_single_vertex_settled():
    rep = reduction_certificate(make_diagram(["a"], []))
    assert rep["verdict"] == "settled"
    assert [e["family_tag"] for e in rep["elementary_leaves"]] == ["A1"]


def test_certificate_interior_heavy_line_families():
    rep = reduction_certificate(linear_diagram([3, 4, 3]))
    tags = {e["family_tag"]: e["status"] for e in rep["elementary_leaves"]}
    assert tags["F(1,1)"] == "obligation"
    assert rep["verdict"] == "open"
    rep = reduction_certificate(linear_diagram([5, 3]))
    tags = {e["family_tag"]: e["status"] for e in rep["elementary_leaves"]}
    assert tags["H(1,0)"] == "obligation"
    rep = reduction_certificate(linear_diagram([5, 3, 3]))
    tags = {e["family_tag"]: e["status"] for e in rep["elementary_leaves"]}
    assert tags["H(2,0)"] == "obligation"


def test_certificate_high_label_line_settled():
    rep = reduction_certificate(linear_diagram([3, 6]))
    assert rep["verdict"] == "settled"
    assert all(e["status"] == "settled" for e in rep["elementary_leaves"])


def test_certificate_pentagon_settled():
    rep = reduction_certificate(linear_diagram([5]))
    assert rep["verdict"] == "settled"
    assert {e["family_tag"] for e in rep["elementary_leaves"]} == {"A1", "I2(5)"}


def test_certificate_forest_deduplicates_leaves():
    d = make_diagram(["a", "b", "c", "e"], [("a", "b", 3), ("c", "e", 3)])
    rep = reduction_certificate(d)
    assert [e["family_tag"] for e in rep["elementary_leaves"]] == ["A1", "A2"]


def test_certificate_rejects_cycles():
    d = make_diagram(
        ["a", "b", "c"], [("a", "b", 3), ("b", "c", 3), ("a", "c", 3)]
    )
    with pytest.raises(TaxonomyError):
        reduction_certificate(d)


def test_certificate_abi_small_labels_settled():
    rep = reduction_certificate(linear_diagram([4, 4]))
    assert rep["abi"] and rep["max_label"] == 4
    assert rep["verdict"] == "settled"


def test_abi_trees_with_small_labels_are_always_settled():
    from artinlab.diagram import is_ABI

    for d in _small_trees(5, (3, 4, 5)):
        if is_ABI(d)[0]:
            assert reduction_certificate(d)["verdict"] == "settled", d.edge_list


# -- property tests ----------------------------------------------------------


@st.composite
def labeled_trees(draw, max_n=8, labels=(3, 3, 3, 4, 5)):
    n = draw(st.integers(min_value=1, max_value=max_n))
    edges = []
    for k in range(1, n):
        p = draw(st.integers(min_value=0, max_value=k - 1))
        m = draw(st.sampled_from(labels))
        edges.append(("v%d" % p, "v%d" % k, m))
    return make_diagram(["v%d" % k for k in range(n)], edges)


@given(labeled_trees())
@settings(max_examples=120, deadline=None)
def test_elementary_routes_agree_on_random_trees(d):
    assert is_ctilde_elementary(d) == is_ctilde_elementary_shape(d)


@given(labeled_trees(max_n=7))
@settings(max_examples=80, deadline=None)
def test_random_atomic_seeds_grow_enumerated_cores(d):
    if len(d.vertices) < 2 or is_ctilde_elementary(d):
        return
    cores = enumerate_like(d, "C~-core")
    for seed in enumerate_like(d, "B-like") + enumerate_like(d, "D-like"):
        if atomicity(d, seed) != "atomic":
            continue
        cc = find_robust_core(d, seed)
        assert cc.core in cores
        assert isinstance(cc, CoreConfig)
