import numpy as np
import pytest

import oracles
from powergraph_lab.connectivity import INFINITE
from powergraph_lab.errors import NotAPGroup
from powergraph_lab.families import catalog, dihedral
from powergraph_lab.groups import validate_group
from powergraph_lab.theorems import (
    LEMMA_IDS,
    Options,
    lemma_suite,
    quaternion_presentation,
    remark_verify,
    survey,
    thm1_case_iii,
    thm1_verify,
    thm2_condition,
    thm2_verify,
)


def _pairs(G):
    """Exhaustive scan of maximal cyclic pairs, from the naive oracle."""
    mcs = oracles.maximal_cyclic(G.table.tolist())
    return [(M, N) for i, M in enumerate(mcs) for N in mcs[i + 1 :]]


def test_case_iii_examples(grp):
    assert thm1_case_iii(grp("product(cyclic:5,cyclic:5)"))[0] == "a"
    assert thm1_case_iii(grp("dicyclic:2")) is None
    assert thm1_case_iii(grp("product(cyclic:3,cyclic:9)"))[0] == "b"
    G = grp("product(cyclic:2,cyclic:4)")
    # no pair of maximal cyclic subgroups of order > 2 meets trivially
    assert not any(len(M) > 2 and len(N) > 2 and M & N == {0} for M, N in _pairs(G))
    assert thm1_case_iii(G) is None
    with pytest.raises(NotAPGroup):
        thm1_case_iii(grp("dihedral:20"))


def test_case_c_tags(grp):
    assert thm1_case_iii(grp("product(cyclic:2,cyclic:8)"))[0] == "c1"
    # D16: one maximal cyclic subgroup of order 8, the rest have order 2
    assert thm1_case_iii(grp("dihedral:8")) is None
    # Z4xZ4: every maximal cyclic subgroup has order 4, so only c2 can fire
    tag, (H, K) = thm1_case_iii(grp("product(cyclic:4,cyclic:4)"))
    assert tag == "c2"
    assert H.element_set & K.element_set == {0}


def test_thm1_examples(grp):
    t = thm1_verify(grp("product(cyclic:3,cyclic:3)"))
    assert (t.sep_graph, t.delta_ge_3, t.case_iii, t.all_agree) == (False, False, None, True)
    t = thm1_verify(grp("product(cyclic:3,cyclic:9)"))
    assert (t.sep_graph, t.delta_ge_3, t.case_iii, t.all_agree) == (True, True, "b", True)
    t = thm1_verify(grp("dicyclic:2"))
    assert (t.sep_graph, t.delta_ge_3, t.case_iii, t.all_agree) == (False, False, None, True)
    assert t.delta == 2


def test_thm2_examples(grp):
    v = thm2_verify(grp("product(cyclic:5,cyclic:5)"))
    assert (v.kappa, v.ckappa, v.case, v.agree) == (1, 1, "i", True)
    v = thm2_verify(grp("product(cyclic:3,cyclic:9)"))
    assert (v.kappa, v.ckappa, v.condition_group, v.agree) == (1, 3, False, True)
    v = thm2_verify(grp("dicyclic:2"))
    assert (v.kappa, v.ckappa, v.condition_group, v.agree) == (2, INFINITE, False, True)
    assert not v.equality_graph
    v = thm2_verify(grp("product(cyclic:2,cyclic:8)"))
    assert v.kappa == 1 and v.ckappa != 1 and v.agree


def test_thm2_condition_matches_pair_scan(grp):
    for text in ("product(cyclic:2,cyclic:2,cyclic:4)", "product(cyclic:4,cyclic:4)", "dicyclic:4",
                 "product(cyclic:3,cyclic:9)", "heisenberg:3", "modular:3,3", "product(cyclic:9,cyclic:9)"):
        G = grp(text)
        p = int(min(o for o in G.element_orders if o > 1))
        expect = any(len(M) > p and len(N) > p and M & N == {0} for M, N in _pairs(G))
        assert (thm2_condition(G) is not None) == expect, text


def test_remark(grp):
    r = remark_verify(grp("dicyclic:2"))
    assert r.equal_graphs and r.identical and r.holds
    assert remark_verify(grp("product(cyclic:3,cyclic:9)")).equal_graphs
    with pytest.raises(NotAPGroup):
        remark_verify(grp("dihedral:20"))


def test_quaternion_presentation(grp):
    for text in ("dicyclic:2", "dicyclic:4", "dicyclic:8"):
        G = grp(text)
        a, b = quaternion_presentation(G)
        m = G.element_orders[a]
        assert m == G.n // 2
        assert G.power(a, m // 2) == G.power(b, 2)
        assert G.mul(G.mul(b, a), G.inverse(b)) == G.inverse(a)
    for text in ("dihedral:4", "cyclic:8", "semidihedral:4", "product(cyclic:2,cyclic:4)"):
        assert quaternion_presentation(grp(text)) is None


def _status(verdicts):
    return {v.lemma_id: v.status for v in verdicts}


def test_lemma_examples(grp):
    d40 = lemma_suite(grp("dihedral:20"))
    s = _status(d40)
    assert s["L-delta3-sep"] == "pass"
    assert "converse fails" in next(v.note for v in d40 if v.lemma_id == "L-delta3-sep")
    assert s["L-unique-p"] == "skipped" and s["L-complete"] == "pass" and s["L-adjacency"] == "pass"
    assert _status(lemma_suite(grp("dicyclic:2")))["L-unique-p"] == "pass"
    z33 = lemma_suite(grp("product(cyclic:3,cyclic:3)"))
    comp = next(v for v in z33 if v.lemma_id == "L-components-p")
    assert comp.status == "pass" and comp.note == "4 components"


def test_lemma_ids_and_statuses(grp):
    for text in ("cyclic:8", "dicyclic:2", "dihedral:20", "product(cyclic:4,cyclic:2)"):
        verdicts = lemma_suite(grp(text))
        assert sorted(v.lemma_id for v in verdicts) == sorted(LEMMA_IDS)
        assert all(v.status != "fail" for v in verdicts)
        for v in verdicts:
            assert (v.holds is None) == (v.status in ("skipped", "reported"))


def test_delta2_readings_reported(grp):
    s = {v.lemma_id: v for v in lemma_suite(grp("product(cyclic:4,cyclic:2)"))}
    assert s["L-delta2-cyclic-reading"].status == "reported"
    assert "inconsistent" in s["L-delta2-cyclic-reading"].note
    assert s["L-delta2"].status == "pass"


def test_adjacency_sampling_counts(grp):
    v = next(v for v in lemma_suite(grp("dicyclic:2"), Options(adjacency_samples=500)) if v.lemma_id == "L-adjacency")
    assert v.checked == 500


def test_survey_small():
    rep = survey(catalog({2: 16, 3: 27, 5: 25}))
    assert rep.ok and rep.summary()["failures"] == 0
    assert rep.summary()["converse_counterexamples"] == ["D40"]
    assert survey([]).rows == []
    only = survey([e for e in catalog({2: 2}) if e.name == "D40"])
    (row,) = only.rows
    assert row.thm1 is None and row.thm1_tag == "skipped:not-p-group"
    assert {v.lemma_id for v in row.lemmas if v.status == "pass"} >= {"L-complete", "L-adjacency", "L-delta3-sep"}


def test_survey_parallel_matches_serial():
    entries = catalog({2: 16, 3: 27})
    a = [r.to_dict() for r in survey(entries).rows]
    b = [r.to_dict() for r in survey(entries, jobs=2).rows]
    assert a == b


def test_verdicts_invariant_under_relabelling():
    rng = np.random.default_rng(11)
    for e in catalog({2: 16, 3: 27, 5: 25}):
        if e.p is None:
            continue
        G0 = e.group
        G = validate_group(oracles.relabel(G0.table, rng.permutation(G0.n)), G0.name)
        a, b = thm1_verify(G0), thm1_verify(G)
        assert (a.sep_graph, a.delta_ge_3, a.case_iii is None) == (b.sep_graph, b.delta_ge_3, b.case_iii is None)
        c, d = thm2_verify(G0), thm2_verify(G)
        assert (c.kappa, c.ckappa, c.condition_group) == (d.kappa, d.ckappa, d.condition_group)
        assert [v.status for v in lemma_suite(G0)] == [v.status for v in lemma_suite(G)]


def test_d40_not_p_group():
    from powergraph_lab.families import build

    with pytest.raises(NotAPGroup):
        thm1_verify(build(dihedral(20)))
