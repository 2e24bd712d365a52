import itertools
import math

import numpy as np
import pytest

from quantum3 import builtins
from quantum3 import diagram as D
from quantum3.category import ModularData, delta_pm, global_dim
from oracles import s_matrix_formula


def _labels(cat):
    return range(cat.rank)


def test_unknot(mod_cat):
    for i in _labels(mod_cat):
        assert abs(D.evaluate(mod_cat, D.unknot(i)) - mod_cat.qdim[i]) < 1e-12


@pytest.mark.parametrize("n", [-2, -1, 1, 2, 3])
def test_framed_unknot_matches_explicit_curls(mod_cat, n):
    for i in _labels(mod_cat):
        want = mod_cat.twist[i] ** n * mod_cat.qdim[i]
        assert abs(D.evaluate(mod_cat, D.unknot(i, n)) - want) < 1e-12
        curled = D.add_curls(D.unknot(i), "K", n)
        info = D.analyze(curled)
        assert info.writhe("K") == n
        assert curled.component("K").framing == n
        assert abs(D.evaluate(mod_cat, curled) - want) < 1e-12


def test_curl_without_declared_framing_is_cancelled(mod_cat):
    # blackboard curls are corrected back to the declared framing
    d = D.add_curls(D.unknot(1), "K", 2).with_framings({"K": 0})
    assert abs(D.evaluate(mod_cat, d) - mod_cat.qdim[1]) < 1e-12


def test_hopf_is_s_matrix(mod_cat):
    s = s_matrix_formula(mod_cat.ring.fusion, mod_cat.dual, mod_cat.qdim, mod_cat.twist)
    for i, j in itertools.product(_labels(mod_cat), repeat=2):
        assert abs(D.evaluate(mod_cat, D.hopf_link(i, j)) - s[i, j]) < 1e-12
        assert abs(D.evaluate(mod_cat, D.hopf_link(i, j, sign=-1)) - np.conj(s[i, j])) < 1e-12


def test_kirby_unknots(mod_cat):
    dp, dm = delta_pm(mod_cat)
    assert abs(D.evaluate_kirby(mod_cat, D.unknot(None, 1), ["K"]) - dp) < 1e-12
    assert abs(D.evaluate_kirby(mod_cat, D.unknot(None, -1), ["K"]) - dm) < 1e-12
    assert abs(D.evaluate_kirby(mod_cat, D.unknot(None, 0), ["K"]) - global_dim(mod_cat)) < 1e-12


@pytest.mark.parametrize("a,b", [(0, 1), (0, -1), (1, 2), (-1, -2), (2, 1)])
def test_sliding_property(mod_cat, a, b):
    """A colored knot slid over an Omega-colored unknot keeps the evaluation."""
    for x in _labels(mod_cat):
        before = D.disjoint_union(D.unknot(x, a, "X"), D.unknot(None, b, "W"))
        word = [1 if b > 0 else -1] * (2 * abs(b))
        after = D.rename(D.braid_closure(2, word, [x, None], [a + b, b]), {"L1": "X", "L2": "W"})
        assert D.analyze(after).linking("X", "W") == b
        lhs = D.evaluate_kirby(mod_cat, before, ["W"])
        rhs = D.evaluate_kirby(mod_cat, after, ["W"])
        assert abs(lhs - rhs) < 1e-9


def test_reidemeister_two(mod_cat):
    for i, j in itertools.product(_labels(mod_cat), repeat=2):
        d = D.braid_closure(2, [1, -1], [i, j])
        assert abs(D.evaluate(mod_cat, d) - mod_cat.qdim[i] * mod_cat.qdim[j]) < 1e-12


def test_reidemeister_three(mod_cat):
    for cols in itertools.product(_labels(mod_cat), repeat=2):
        a = D.evaluate(mod_cat, D.braid_closure(3, [1, 2, 1], list(cols)))
        b = D.evaluate(mod_cat, D.braid_closure(3, [2, 1, 2], list(cols)))
        assert abs(a - b) < 1e-12


def test_markov_stabilization(mod_cat):
    # adding a strand with one positive crossing adds a positive curl, removed by the framing
    for i in _labels(mod_cat):
        a = D.evaluate(mod_cat, D.braid_closure(2, [1, 1, 1], [i]))
        b = D.evaluate(mod_cat, D.braid_closure(3, [1, 1, 1, 2], [i]))
        assert abs(a - b) < 1e-12


def test_mirror_is_conjugate(mod_cat):
    diagrams = [D.braid_closure(2, [1, 1, 1], [1], [2]), D.braid_closure(2, [1, 1, 1, 1], [1, 1], [1, -1]),
                D.hopf_link(1, 1, framings=(3, 0))]
    for d in diagrams:
        assert abs(D.evaluate(mod_cat, D.mirror(d)) - np.conj(D.evaluate(mod_cat, d))) < 1e-12


def test_linking_and_writhe():
    assert D.analyze(D.hopf_link()).linking("L1", "L2") == 1
    assert D.analyze(D.hopf_link(sign=-1)).linking("L1", "L2") == -1
    info = D.analyze(D.braid_closure(2, [1, 1, 1, 1]))
    assert info.linking("L1", "L2") == 2
    assert D.analyze(D.braid_closure(2, [1, 1, 1])).writhe("L1") == 3


def _zigzag(right: bool):
    if right:
        events = [D.Event("cup", 1, "K", "up"), D.Event("cap", 0)]
    else:
        events = [D.Event("cup", 0, "K", "down"), D.Event("cap", 1)]
    return D.MorseDiagram((D.Component("K", 1, 0),), D._slices(events), (("K", "down"),))


@pytest.mark.parametrize("right", [True, False])
def test_zigzag_is_identity(mod_cat, right):
    out = D.evaluate_tangle(mod_cat, _zigzag(right))
    assert list(out) == [(1,)]
    assert out[(1,)].keys() == {(1,)}
    assert abs(out[(1,)][(1,)] - 1) < 1e-12


def test_crossing_then_inverse_is_identity(mod_cat):
    comps = (D.Component("A", 1, 0), D.Component("B", 1, 0))
    d = D.MorseDiagram(comps, D._slices([D.Event("pos", 0), D.Event("neg", 0)]), (("A", "down"), ("B", "down")))
    out = D.evaluate_tangle(mod_cat, d)
    for tree, image in out.items():
        assert image.keys() == {tree}
        assert abs(image[tree] - 1) < 1e-12


def test_tree_basis(mod_cat):
    trees = D.tree_basis(mod_cat, [1, 1, 1])
    assert all(t[0] == 1 for t in trees)
    assert len(trees) == sum(len(mod_cat.ring.products(t[1], 1)) for t in D.tree_basis(mod_cat, [1, 1]))


def test_frobenius_schur_guard():
    ising = builtins.ising()
    h = 1 / math.sqrt(2)
    block = {0: {0: -h, 2: -h}, 2: {0: -h, 2: h}}

    def fmove(a, b, c, d, e, f):
        if (a, b, c, d) == (1, 1, 1, 1):
            return block[e][f]
        if (a, b, c, d) in ((2, 1, 2, 1), (1, 2, 1, 2)):
            return -1.0
        return 1.0

    base = builtins._from_associator(ising.ring, ising.qdim, fmove)
    with pytest.raises(D.DiagramError, match="zigzag"):
        D.evaluate(ModularData(base, ising.rsym, ising.twist), D.unknot(1))


def test_workers_reproduce_serial(mod_cat):
    d = D.braid_closure(2, [1, 1, 1, 1], framings=[1, -1])
    serial = D.evaluate_kirby(mod_cat, d, ["L1", "L2"], workers=1)
    parallel = D.evaluate_kirby(mod_cat, d, ["L1", "L2"], workers=3)
    assert serial == parallel


# --- errors and file format ---------------------------------------------------


def _diag(events, comps=("K",)):
    return D.MorseDiagram(tuple(D.Component(c, 1, 0) for c in comps), D._slices(events))


@pytest.mark.parametrize("events,match", [
    ([D.Event("cup", 0, "K", "down"), D.Event("cap", 1)], "needs two strands"),
    ([D.Event("cup", 2, "K", "down")], "outside"),
    ([D.Event("cup", 0, "Q", "down")], "unknown component"),
    ([D.Event("cup", 0, "K", "sideways")], "direction"),
    ([D.Event("cup", 0, "K", "down"), D.Event("cup", 0, "K", "down"), D.Event("pos", 1),
      D.Event("cap", 0), D.Event("cap", 0)], "cap at 0"),
    ([D.Event("cup", 0, "K", "down"), D.Event("cap", 0), D.Event("cup", 0, "K", "down"), D.Event("cap", 0)],
     "single closed curve"),
    ([D.Event("twist", 0)], "unknown event"),
])
def test_analyze_errors(events, match):
    with pytest.raises(D.DiagramError, match=match):
        D.analyze(_diag(events))


def test_overlapping_events():
    d = D.MorseDiagram((D.Component("K", 1, 0),),
                       ((D.Event("cup", 0, "K", "down"),), (D.Event("cup", 0, "K", "down"),),
                        (D.Event("cap", 0), D.Event("cap", 1))))
    with pytest.raises(D.DiagramError, match="overlapping"):
        D.analyze(d)


def test_same_slice_events_apply_right_to_left(mod_cat):
    d = D.MorseDiagram((D.Component("A", 1, 0), D.Component("B", 2 % mod_cat.rank, 0)),
                       ((D.Event("cup", 0, "A", "down"), D.Event("cup", 0, "B", "down")),
                        (D.Event("cap", 0), D.Event("cap", 2))))
    want = mod_cat.qdim[1] * mod_cat.qdim[2 % mod_cat.rank]
    assert abs(D.evaluate(mod_cat, d) - want) < 1e-12


def test_evaluate_rejects_bad_input(mod_cat):
    with pytest.raises(D.DiagramError, match="no color"):
        D.evaluate(mod_cat, D.unknot(None))
    with pytest.raises(D.DiagramError, match="unknown color"):
        D.evaluate(mod_cat, D.unknot(7))
    with pytest.raises(D.DiagramError, match="closed"):
        D.evaluate(mod_cat, _zigzag(True))
    with pytest.raises(D.DiagramError, match="Kirby"):
        D.evaluate_kirby(mod_cat, D.unknot(1), ["K"])


def test_json_round_trip(tmp_path, mod_cat):
    d = D.braid_closure(3, [1, 1, -2], [1, None], [2, 0])
    path = tmp_path / "d.json"
    D.save_diagram(d, path)
    back, _ = D.load_diagram(path)
    assert back == d
    colored = back.with_colors({"L2": 1})
    assert abs(D.evaluate(mod_cat, colored) - D.evaluate(mod_cat, d.with_colors({"L2": 1}))) == 0


def test_json_errors_name_file_and_index(tmp_path):
    obj = D.hopf_link(1, 1).to_json()
    obj["slices"][2][0]["type"] = "swirl"
    with pytest.raises(D.DiagramError, match=r"x\.json.*slices.*index 2\.0"):
        D.diagram_from_json(obj, "x.json")
    obj = D.hopf_link(1, 1).to_json()
    obj["components"][1]["colour"] = 2
    with pytest.raises(D.DiagramError, match="components.*index 1"):
        D.diagram_from_json(obj, "x.json")
    obj = D.hopf_link(1, 1).to_json()
    obj["wires"] = []
    with pytest.raises(D.DiagramError, match="unknown field"):
        D.diagram_from_json(obj)
    path = tmp_path / "bad.json"
    path.write_text("[")
    with pytest.raises(D.DiagramError, match="bad.json"):
        D.load_diagram(path)
