import itertools

import numpy as np
import pytest

from troploc.core import max_hull_sample
from troploc.phylo import (
    CONSENSUS_METHODS,
    NewickError,
    UltrametricMatrix,
    absence_threshold,
    consensus,
    consensus_run,
    has_nesting,
    is_ultrametric,
    majority_threshold,
    parse_newick,
    parse_newick_file,
    tree_to_ultrametric,
    ultrametric_to_tree,
    write_newick,
)

from conftest import all_nestings, random_newick, random_topology, same_class

THREE = "((a:1,b:1):1,c:2);"
D3 = np.array([[0.0, 2.0, 4.0], [2.0, 0.0, 4.0], [4.0, 4.0, 0.0]])


def test_parse_three_leaf():
    t = parse_newick(THREE)
    assert t.taxa == ["a", "b", "c"]
    assert t.is_equidistant()
    assert t.height() == pytest.approx(2.0)


def test_parse_single_leaf():
    t = parse_newick("(a:1);")
    assert t.taxa == ["a"]
    assert write_newick(t) == "(a:1);"


def test_parse_not_equidistant():
    t = parse_newick("((a:1,b:2):1,c:2);")
    assert not t.is_equidistant()
    with pytest.raises(ValueError):
        tree_to_ultrametric(t)


def test_normalize_heights():
    U = tree_to_ultrametric(parse_newick("((a:1,b:2):1,c:2);"), normalize=True)
    assert U.is_ultrametric()


@pytest.mark.parametrize(
    "text",
    ["((a:1,b:1):1,c:2)", "((a:1,b):1,c:2);", "((a:1,a:1):1,c:2);", "((a:1,b:1):1,c:2);x", "((a:1,:1):1,c:2);", "((a:1,b:x):1,c:2);"],
)
def test_parse_errors(text):
    with pytest.raises(NewickError) as info:
        parse_newick(text)
    assert info.value.offset is not None or "duplicate" in str(info.value)


def test_whitespace_and_internal_labels():
    t = parse_newick(" ( (a : 1 , b:1 )ab:1, c:2 ) root ; ")
    assert write_newick(t) == "((a:1,b:1)ab:1,c:2)root;"
    assert tree_to_ultrametric(t).D.tolist() == D3.tolist()


def test_write_canonical_order():
    assert write_newick(parse_newick("(c:2,(b:1,a:1):1);")) == "((a:1,b:1):1,c:2);"
    assert write_newick(parse_newick(THREE)) == THREE


def test_tree_to_ultrametric_examples():
    U = tree_to_ultrametric(parse_newick(THREE))
    np.testing.assert_array_equal(U.D, D3)
    U2 = tree_to_ultrametric(parse_newick("(a:1,b:1);"))
    assert U2.D[0, 1] == 2.0
    star = tree_to_ultrametric(parse_newick("(a:1.5,b:1.5,c:1.5,d:1.5);"))
    assert np.all(star.vector() == 3.0)


def test_is_ultrametric_examples():
    assert is_ultrametric(D3)
    bad = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 4.0], [2.0, 4.0, 0.0]])
    assert not is_ultrametric(bad)
    assert is_ultrametric(np.full((4, 4), 3.0) - 3.0 * np.eye(4))
    with pytest.raises(ValueError):
        is_ultrametric(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(ValueError):
        is_ultrametric(np.array([[1.0, 1.0], [1.0, 0.0]]))


def test_ultrametric_to_tree_examples():
    assert write_newick(ultrametric_to_tree(UltrametricMatrix(["a", "b", "c"], D3))) == THREE
    assert write_newick(ultrametric_to_tree(UltrametricMatrix(["x", "y"], np.array([[0.0, 3.0], [3.0, 0.0]])))) == "(x:1.5,y:1.5);"
    with pytest.raises(ValueError):
        ultrametric_to_tree(UltrametricMatrix(["a", "b", "c"], np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 4.0], [2.0, 4.0, 0.0]])))


def test_vector_order_and_permutation_independence():
    U = UltrametricMatrix(["c", "a", "b"], np.array([[0.0, 4.0, 4.0], [4.0, 0.0, 2.0], [4.0, 2.0, 0.0]]))
    assert U.taxa == ["a", "b", "c"]
    np.testing.assert_array_equal(U.vector(), [2.0, 4.0, 4.0])
    V = UltrametricMatrix.from_vector(["a", "b", "c"], U.vector())
    np.testing.assert_array_equal(V.D, U.D)


def test_round_trip(rng):
    for _ in range(50):
        taxa = [f"t{i}" for i in range(int(rng.integers(2, 9)))]
        t = parse_newick(random_newick(rng, taxa))
        U = tree_to_ultrametric(t)
        back = ultrametric_to_tree(U)
        assert write_newick(back) == write_newick(t)
        assert parse_newick(write_newick(t)) == t
        np.testing.assert_array_equal(tree_to_ultrametric(back).D, U.D)


def test_ultrametric_hull_closed(rng):
    for _ in range(20):
        taxa = list("abcde")
        pts = np.array([tree_to_ultrametric(parse_newick(random_newick(rng, taxa, dyadic=False))).vector() for _ in range(3)])
        for s in max_hull_sample(pts, rng.uniform(-3, 3, size=(50, 3))):
            assert UltrametricMatrix.from_vector(taxa, s - s.min() + 1.0).is_ultrametric()


def test_has_nesting_examples():
    U = UltrametricMatrix(["a", "b", "c"], D3)
    assert has_nesting(U, ["a", "b"], ["c"])
    assert not has_nesting(U, ["a", "c"], ["b"])
    assert has_nesting(U, ["a"], ["b"])
    with pytest.raises(ValueError):
        has_nesting(U, ["a"], ["a", "b"])
    with pytest.raises(ValueError):
        has_nesting(U, ["a"], ["z"])


def test_has_nesting_matches_oracle(rng):
    for _ in range(20):
        taxa = list("abcde")
        U = tree_to_ultrametric(parse_newick(random_newick(rng, taxa)))
        nest = all_nestings(U.D)
        for A, B in itertools.islice(itertools.product(range(1, 32), repeat=2), 0, None, 7):
            if A & B:
                continue
            names = lambda S: [taxa[i] for i in range(5) if S >> i & 1]
            assert has_nesting(U, names(A), names(B)) == ((A, B) in nest)


def test_thresholds():
    assert majority_threshold(3) == pytest.approx(2 / 3)
    assert majority_threshold(4) == pytest.approx(5 / 6)
    assert absence_threshold(3) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        majority_threshold(2)


def test_identical_inputs():
    t = parse_newick(THREE)
    for method in CONSENSUS_METHODS:
        assert write_newick(consensus([t, t, t], method)) == THREE


def test_two_cherries():
    t1 = parse_newick("((a:1,b:1):1,c:2);")
    t2 = parse_newick("((a:1,b:1):2,c:3);")
    for method in CONSENSUS_METHODS:
        res = consensus_run([t1, t2], method)
        assert res.in_hull
        assert res.ultrametric.is_ultrametric()
        assert has_nesting(res.ultrametric, ["a", "b"], ["c"])


def test_taxa_mismatch():
    with pytest.raises(ValueError):
        consensus([parse_newick(THREE), parse_newick("((a:1,b:1):1,d:2);")])


def test_pareto_and_co_pareto(rng):
    for _ in range(10):
        taxa = list("abcde")[: int(rng.integers(3, 6))]
        base = random_topology(rng, taxa)
        trees = [parse_newick(random_newick(rng, taxa, base if rng.random() < 0.7 else None, dyadic=False)) for _ in range(4)]
        inputs = [all_nestings(tree_to_ultrametric(t).D) for t in trees]
        common = set.intersection(*inputs)
        anywhere = set.union(*inputs)
        for method in CONSENSUS_METHODS:
            out = all_nestings(consensus_run(trees, method).ultrametric.D)
            assert common <= out, method
            assert not (out - anywhere), method


def test_doubling_invariance(rng):
    for _ in range(5):
        taxa = list("abcd")
        trees = [parse_newick(random_newick(rng, taxa, dyadic=False)) for _ in range(3)]
        for method in ("center", "frechet"):
            a = consensus_run(trees, method).ultrametric.vector()
            b = consensus_run(trees + trees, method).ultrametric.vector()
            assert same_class(a, b, 1e-6), method
        a = consensus_run(trees, "median").report.objective
        b = consensus_run(trees + trees, "median").report.objective
        assert b == pytest.approx(2 * a, abs=1e-8)


def test_frechet_uniqueness_flag(rng):
    taxa = list("abcd")
    trees = [parse_newick(random_newick(rng, taxa, dyadic=False)) for _ in range(3)]
    assert consensus_run(trees, "frechet").unique in (True, False)


def test_parse_newick_file():
    trees = parse_newick_file(THREE + "\n\n" + "((a:1,c:1):1,b:2);\n")
    assert len(trees) == 2


def test_report_dict():
    t1 = parse_newick("((a:1,b:1):1,c:2);")
    t2 = parse_newick("((a:1,b:1):2,c:3);")
    d = consensus_run([t1, t2], "median").to_dict(inputs=[t1, t2])
    assert d["ultrametric"] and d["in_hull"]
    assert ["a", "b"] in [x[0] for x in d["nestings"]["unanimous_kept"]]
    assert d["nestings"]["unsupported_shown"] == []
