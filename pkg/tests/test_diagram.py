import json

import pytest
from hypothesis import given, settings, strategies as st

from artinlab.diagram import (
    CoxeterDiagram,
    DiagramError,
    classify_family,
    dominates,
    induced_subdiagram,
    is_ABI,
    linear_diagram,
    make_diagram,
    parse_diagram,
    path_order,
    serialize_diagram,
    shape,
    tree_certificate,
)


def _tripod(r, s, t, labels3=True):
    """Tripod with arm edge counts r, s, t; all labels 3."""
    vs = ["c"]
    edges = []
    for arm, k in zip("abd", (r, s, t)):
        prev = "c"
        for i in range(1, k + 1):
            v = "%s%d" % (arm, i)
            vs.append(v)
            edges.append((prev, v, 3))
            prev = v
    assert labels3
    return make_diagram(vs, edges)


# -- parsing ---------------------------------------------------------------


def test_parse_round_trip_explicit():
    text = json.dumps(
        {"vertices": ["a", "b", "c"], "edges": [["a", "b", 3], ["b", "c", 4]]}
    )
    d = parse_diagram(text)
    assert d.vertices == ("a", "b", "c")
    assert d.label("a", "b") == 3
    assert d.label("b", "c") == 4
    assert d.label("a", "c") == 2
    assert parse_diagram(serialize_diagram(d)) == d


@pytest.mark.parametrize(
    "payload",
    [
        '{"vertices": ["a", "b"], "edges": [["a", "b", 2]]}',
        '{"vertices": ["a", "b"], "edges": [["a", "b", 1]]}',
        '{"vertices": ["a"], "edges": [["a", "a", 3]]}',
        '{"vertices": ["a", "b"], "edges": [["a", "c", 3]]}',
        '{"vertices": ["a", "b"], "edges": [["a", "b", 3], ["b", "a", 4]]}',
        '{"vertices": ["a", "a"], "edges": []}',
        '{"vertices": ["a", "b"], "edges": [["a", "b", "inf"]]}',
        '{"vertices": ["a", "b"]}',
        "not json",
    ],
)
def test_parse_rejects_bad_input(payload):
    with pytest.raises(DiagramError):
        parse_diagram(payload)


def test_explicit_commuting_label_rejected_in_constructor():
    with pytest.raises(DiagramError):
        make_diagram(["a", "b"], [("a", "b", 2)])


# -- shape -----------------------------------------------------------------


def test_shape_reports():
    path = linear_diagram([3, 3, 3])
    sh = shape(path)
    assert sh.is_tree and sh.is_linear and not sh.is_tripod
    assert path_order(path) == ["s1", "s2", "s3", "s4"]

    star = _tripod(1, 1, 1)
    sh = shape(star)
    assert sh.is_tree and sh.is_tripod and not sh.is_linear

    square = make_diagram(
        ["a", "b", "c", "d"],
        [("a", "b", 3), ("b", "c", 3), ("c", "d", 3), ("d", "a", 3)],
    )
    sh = shape(square)
    assert sh.is_connected and not sh.is_tree


def test_path_order_is_orientation_stable():
    d = make_diagram(["m", "z", "a"], [("m", "z", 3), ("m", "a", 4)])
    # leaves are z and a; the one earlier in vertex order (z) starts the path
    assert path_order(d) == ["z", "m", "a"]


# -- classification --------------------------------------------------------

# each row: constructor args, expected kind, expected full name tuple
_FAMILY_TABLE = [
    (linear_diagram([3, 4, 3]), "F4", ("F4", "F(1,1)")),
    (linear_diagram([3, 4, 3, 3]), "F", ("F(1,2)", "F~4")),
    (linear_diagram([5, 3]), "H3", ("H3", "H(1,0)")),
    (linear_diagram([3, 3, 5]), "H4", ("H4", "H(2,0)")),
    (_tripod(2, 2, 1), "E6", ("E6", "E(2,2,1)")),
    (_tripod(2, 1, 1), "D", ("D5", "E(2,1,1)")),
    (_tripod(1, 1, 1), "D", ("D4", "E(1,1,1)")),
    (_tripod(3, 2, 1), "E7", ("E7", "E(3,2,1)")),
    (_tripod(4, 2, 1), "E8", ("E8", "E(4,2,1)")),
    (_tripod(2, 2, 2), "E", ("E(2,2,2)", "E~6")),
    (_tripod(3, 3, 1), "E", ("E(3,3,1)", "E~7")),
    (_tripod(5, 2, 1), "E", ("E(5,2,1)", "E~8")),
    (linear_diagram([3]), "A", ("A2",)),
    (linear_diagram([3, 3, 3, 3]), "A", ("A5",)),
    (linear_diagram([4]), "B", ("B2", "I2(4)")),
    (linear_diagram([3, 4]), "B", ("B3",)),
    (linear_diagram([3, 3, 4]), "B", ("B4",)),
    (linear_diagram([6]), "I2", ("I2(6)",)),
    (linear_diagram([7]), "I2", ("I2(7)",)),
    (linear_diagram([4, 4]), "C~", ("C~2",)),
    (linear_diagram([4, 3, 4]), "C~", ("C~3",)),
    (linear_diagram([3, 5, 3]), "H", ("H(1,1)",)),
    (linear_diagram([3, 3, 5, 3]), "H", ("H(2,1)",)),
    (linear_diagram([3, 3, 4, 3, 3]), "F", ("F(2,2)",)),
    (linear_diagram([4, 5]), "other", ("other",)),
    (linear_diagram([4, 3, 3, 4, 3]), "other", ("other",)),
]


@pytest.mark.parametrize("d, kind, names", _FAMILY_TABLE, ids=lambda x: str(x)[:24])
def test_family_table(d, kind, names):
    tag = classify_family(d)
    assert tag.kind == kind
    assert tag.names == names


def test_family_affine_forks():
    bt3 = make_diagram(
        ["c", "x", "y", "z"], [("c", "x", 3), ("c", "y", 3), ("c", "z", 4)]
    )
    assert classify_family(bt3).names == ("B~3",)

    bt4 = make_diagram(
        ["c", "x", "y", "p", "q"],
        [("c", "x", 3), ("c", "y", 3), ("c", "p", 3), ("p", "q", 4)],
    )
    assert classify_family(bt4).names == ("B~4",)

    dt4 = make_diagram(
        ["c", "w", "x", "y", "z"],
        [("c", "w", 3), ("c", "x", 3), ("c", "y", 3), ("c", "z", 3)],
    )
    assert classify_family(dt4).names == ("D~4",)

    dt5 = make_diagram(
        ["a", "b", "c", "d", "e", "f"],
        [("c", "a", 3), ("c", "b", 3), ("c", "d", 3), ("d", "e", 3), ("d", "f", 3)],
    )
    assert classify_family(dt5).names == ("D~5",)

    # one heavy edge breaks the all-3 double fork
    dt_bad = make_diagram(
        ["a", "b", "c", "d", "e", "f"],
        [("c", "a", 3), ("c", "b", 4), ("c", "d", 3), ("d", "e", 3), ("d", "f", 3)],
    )
    assert classify_family(dt_bad).kind == "other"


def test_family_parameters_small_sweep():
    """One-heavy-edge path and all-3 tripod parameters recovered exactly."""
    for r in range(1, 5):
        for s in range(r, 6 - r):
            d = linear_diagram([3] * r + [4] + [3] * s)
            tag = classify_family(d)
            assert ("F(%d,%d)" % (r, s)) in tag.names
            assert ("F" == tag.kind) or (r, s) == (1, 1)
    for r in range(1, 6):
        for s in range(0, min(r, 6 - r) + 1):
            d = linear_diagram([3] * r + [5] + [3] * s)
            tag = classify_family(d)
            assert ("H(%d,%d)" % (max(r, s), min(r, s))) in tag.names
    for r in range(1, 4):
        for s in range(1, r + 1):
            for t in range(1, s + 1):
                tag = classify_family(_tripod(r, s, t))
                assert ("E(%d,%d,%d)" % (r, s, t)) in tag.names


def test_classification_ignores_vertex_names_and_order():
    a = linear_diagram([3, 4, 3, 3])
    b = linear_diagram([3, 3, 4, 3], names=["q5", "q4", "q3", "q2", "q1"])
    assert classify_family(a) == classify_family(b)


# -- domination ------------------------------------------------------------


def test_dominates_examples():
    heavier = linear_diagram([4, 3])
    lighter = linear_diagram([3, 3])
    f = dominates(heavier, lighter)
    assert f == {"s1": "s1", "s2": "s2", "s3": "s3"}
    assert dominates(lighter, heavier) is None
    assert dominates(lighter, linear_diagram([3])) is None


def test_dominates_picks_least_image():
    # the target square has one light edge; two rotations work, the mapping
    # sending the first source vertex to the earliest possible target wins
    src = make_diagram(
        ["a", "b", "c", "d"],
        [("a", "b", 4), ("b", "c", 4), ("c", "d", 4), ("d", "a", 4)],
    )
    dst = make_diagram(
        ["p", "q", "r", "t"],
        [("p", "q", 3), ("q", "r", 4), ("r", "t", 3), ("t", "p", 4)],
    )
    f = dominates(src, dst)
    assert f is not None
    assert f["a"] == "p"
    # verify the domination property explicitly
    for x, y, m in src.edge_list:
        assert dst.label(f[x], f[y]) <= m
        assert dst.adjacent(f[x], f[y])


@st.composite
def _tree_diagrams(draw, max_n=6, labels=(3, 4, 5)):
    n = draw(st.integers(min_value=1, max_value=max_n))
    edges = []
    for i in range(1, n):
        p = draw(st.integers(min_value=0, max_value=i - 1))
        m = draw(st.sampled_from(labels))
        edges.append(("v%d" % p, "v%d" % i, m))
    return make_diagram(["v%d" % i for i in range(n)], edges)


@given(_tree_diagrams())
@settings(max_examples=120, deadline=None)
def test_round_trip_random_trees(d):
    assert parse_diagram(serialize_diagram(d)) == d


@given(_tree_diagrams())
@settings(max_examples=80, deadline=None)
def test_dominates_is_reflexive(d):
    assert dominates(d, d) is not None


@given(_tree_diagrams(max_n=5), st.data())
@settings(max_examples=60, deadline=None)
def test_dominates_transitive_through_lowered_labels(d, data):
    """Lowering labels twice: if d >= d1 >= d2 edge-wise then d >= d2."""

    def lower(src):
        edges = []
        for a, b, m in src.edge_list:
            m2 = data.draw(st.integers(min_value=3, max_value=m))
            edges.append((a, b, m2))
        return make_diagram(src.vertices, edges)

    d1 = lower(d)
    d2 = lower(d1)
    assert dominates(d, d1) is not None
    assert dominates(d1, d2) is not None
    assert dominates(d, d2) is not None


# -- spherical-content predicate --------------------------------------------


def test_is_ABI_frozen_cases():
    assert is_ABI(linear_diagram([3, 3, 3])) == (True, None)
    assert is_ABI(linear_diagram([3, 3, 4])) == (True, None)
    assert is_ABI(linear_diagram([9])) == (True, None)

    flag, witness = is_ABI(_tripod(1, 1, 1))
    assert not flag
    assert witness == ("c", "a1", "b1", "d1")

    flag, witness = is_ABI(linear_diagram([3, 4, 3]))
    assert not flag
    assert witness == ("s1", "s2", "s3", "s4")

    flag, witness = is_ABI(linear_diagram([5, 3]))
    assert not flag
    assert witness == ("s1", "s2", "s3")

    # heavy fork: every connected spherical piece is A, B or a single edge
    bt3 = make_diagram(
        ["c", "x", "y", "z"], [("c", "x", 3), ("c", "y", 3), ("c", "z", 4)]
    )
    assert is_ABI(bt3) == (True, None)


def test_is_ABI_witness_is_smallest_then_least():
    # two violations: a 5-edge path at the end and the tripod core; the
    # 3-vertex one must win over the 4-vertex one
    d = make_diagram(
        ["c", "x", "y", "z", "w"],
        [("c", "x", 3), ("c", "y", 3), ("c", "z", 3), ("z", "w", 5)],
    )
    flag, witness = is_ABI(d)
    assert not flag
    assert len(witness) == 3
    assert witness == ("c", "z", "w")


@given(_tree_diagrams(max_n=6, labels=(3, 4, 5)), st.data())
@settings(max_examples=60, deadline=None)
def test_is_ABI_antitone_under_induced_subdiagrams(d, data):
    """If the whole tree passes, so does every induced subdiagram."""
    flag, _ = is_ABI(d)
    keep = data.draw(
        st.lists(st.sampled_from(list(d.vertices)), unique=True, min_size=1)
    )
    sub = induced_subdiagram(d, keep)
    if flag:
        assert is_ABI(sub)[0]


# -- canonical tree form -----------------------------------------------------


def test_tree_certificate_invariance():
    a = linear_diagram([3, 4, 3, 3])
    b = linear_diagram([3, 3, 4, 3], names=["w", "x", "y", "z", "u"])
    assert tree_certificate(a) == tree_certificate(b)
    c = linear_diagram([3, 4, 4, 3])
    assert tree_certificate(a) != tree_certificate(c)

    t1 = _tripod(2, 1, 1)
    t2 = make_diagram(
        ["p", "q", "r", "s", "t"],
        [("r", "p", 3), ("r", "q", 3), ("r", "s", 3), ("s", "t", 3)],
    )
    assert tree_certificate(t1) == tree_certificate(t2)


def test_tree_certificate_rejects_cycles():
    square = make_diagram(
        ["a", "b", "c", "d"],
        [("a", "b", 3), ("b", "c", 3), ("c", "d", 3), ("d", "a", 3)],
    )
    with pytest.raises(DiagramError):
        tree_certificate(square)


def test_induced_subdiagram_keeps_vertex_order():
    d = linear_diagram([3, 4, 3])
    sub = induced_subdiagram(d, ["s4", "s2", "s1"])
    assert sub.vertices == ("s1", "s2", "s4")
    assert sub.label("s1", "s2") == 3
    assert sub.label("s2", "s4") == 2


def test_diagram_equality_is_structural():
    d1 = make_diagram(["a", "b"], [("a", "b", 3)])
    d2 = CoxeterDiagram(("a", "b"), {frozenset(("a", "b")): 3})
    assert d1 == d2
