"""Group-side characterizations checked against graph-side ground truth.

Group predicates here never look at a graph, and graph quantities never look
at the group, so every agreement reported is a genuine cross-check.
"""

from __future__ import annotations

import random
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np

from .connectivity import (
    DEFAULT_BRUTE_FORCE_LIMIT,
    DEFAULT_CYCLE_BOUND,
    INFINITE,
    CutValue,
    cyclic_vertex_connectivity,
    cyclically_separable,
    edge_connectivity,
    format_cut_value,
    min_degree,
    vertex_connectivity,
)
from .errors import InstanceTooLargeForExact, NotAPGroup
from .families import CatalogEntry
from .graph import components
from .groups import (
    CyclicSubgroup,
    FiniteGroup,
    count_subgroups_of_order_p,
    difference_number,
    is_p_group,
)
from .powergraph import build_graph, enhanced_power_graph, power_graph, punctured


@dataclass(frozen=True)
class Options:
    cycle_bound: int | None = DEFAULT_CYCLE_BOUND
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT
    adjacency_samples: int = 256
    seed: int = 0


def _require_p(G: FiniteGroup) -> int:
    p = is_p_group(G)
    if p is None:
        raise NotAPGroup(f"{G.name} has order {G.n}, which is not a prime power")
    return p


def _trivial_meet(M: CyclicSubgroup, N: CyclicSubgroup) -> bool:
    return len(M.element_set & N.element_set) == 1


def _describe(H: CyclicSubgroup) -> dict:
    return {"generator": H.generators[0], "order": H.order}


# --- group side ---------------------------------------------------------------------


def thm1_case_iii(G: FiniteGroup) -> tuple[str, tuple[CyclicSubgroup, CyclicSubgroup]] | None:
    """First satisfied sub-case among a, b, c1, c2 with a witnessing pair."""
    p = _require_p(G)
    mcs = G.maximal_cyclic_subgroups
    if p > 3 and not G.is_cyclic:
        return "a", (mcs[0], mcs[1])
    if p == 3:
        big = [M for M in mcs if M.order > 3]
        if len(big) >= 2:
            return "b", (big[0], big[1])
    if p == 2:
        big = [M for M in mcs if M.order > 4]
        if len(big) >= 2:
            return "c1", (big[0], big[1])
        mid = [M for M in mcs if M.order > 2]
        for M, N in combinations(mid, 2):
            if _trivial_meet(M, N):
                return "c2", (M, N)
    return None


def thm2_condition(G: FiniteGroup) -> tuple[str, tuple[CyclicSubgroup, ...]] | None:
    p = _require_p(G)
    mcs = G.maximal_cyclic_subgroups
    if p > 3 and not G.is_cyclic:
        return "i", (mcs[0], mcs[1])
    if p in (2, 3):
        big = [M for M in mcs if M.order > p]
        for M, N in combinations(big, 2):
            if _trivial_meet(M, N):
                return "ii", (M, N)
    return None


def quaternion_presentation(G: FiniteGroup) -> tuple[int, int] | None:
    """Elements (a, b) with a^(2m) = e, a^m = b^2, b a b^-1 = a^-1, |G| = 4m, m a power of 2.

    Found by direct search, independent of involution counting.
    """
    n = G.n
    if n < 8 or n & (n - 1):
        return None
    m = n // 4
    orders = G.element_orders
    T = G.table
    for a in np.flatnonzero(orders == 2 * m):
        a = int(a)
        in_a = G.membership[a]
        am = G.power(a, m)
        a_inv = G.inverse(a)
        for b in np.flatnonzero(~in_a):
            b = int(b)
            if T[b, b] != am:
                continue
            if T[T[b, a], G.inverse(b)] == a_inv:
                return a, b
    return None


def _generated(G: FiniteGroup, gens: list[int]) -> np.ndarray:
    inside = np.zeros(G.n, dtype=bool)
    inside[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.table[x, g])
                if not inside[y]:
                    inside[y] = True
                    nxt.append(y)
        frontier = nxt
    return inside


def has_maximal_subgroup_of_order_2(G: FiniteGroup) -> bool:
    """Literal reading: some subgroup of order 2 is maximal among all proper subgroups."""
    for t in np.flatnonzero(G.element_orders == 2):
        t = int(t)
        if G.n == 2:
            continue
        if all(_generated(G, [t, x]).all() for x in range(G.n) if x not in (0, t)):
            return True
    return False


# --- graph facts -------------------------------------------------------------------


@dataclass
class GraphFacts:
    kind: str
    separable: bool
    separability_witness: Any
    kappa: int
    kappa_witness: Any
    ckappa: CutValue
    ckappa_witness: Any


def graph_facts(G: FiniteGroup, kind: str = "power", options: Options = Options()) -> GraphFacts:
    g = build_graph(G, kind).graph
    sep, sw = cyclically_separable(g, options.cycle_bound, options.brute_force_limit)
    kappa, kw = vertex_connectivity(g)
    ck, cw = cyclic_vertex_connectivity(g, options.cycle_bound, options.brute_force_limit)
    return GraphFacts(kind, sep, sw, kappa, kw, ck, cw)


# --- verdicts ----------------------------------------------------------------------


@dataclass
class Thm1Predicates:
    sep_graph: bool
    delta_ge_3: bool
    case_iii: str | None
    case_witness: tuple[dict, dict] | None
    separability_witness: Any = None
    delta: int = 0

    @property
    def all_agree(self) -> bool:
        return self.sep_graph == self.delta_ge_3 == (self.case_iii is not None)

    def to_dict(self) -> dict:
        return {
            "sep_graph": self.sep_graph,
            "delta": self.delta,
            "delta_ge_3": self.delta_ge_3,
            "case_iii": self.case_iii,
            "case_witness": None if self.case_witness is None else list(self.case_witness),
            "all_agree": self.all_agree,
        }


@dataclass
class Thm2Verdict:
    kappa: int
    ckappa: CutValue
    condition_group: bool
    case: str | None
    case_witness: tuple[dict, dict] | None

    @property
    def equality_graph(self) -> bool:
        return self.ckappa != INFINITE and self.kappa == self.ckappa

    @property
    def agree(self) -> bool:
        return self.equality_graph == self.condition_group

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "ckappa": format_cut_value(self.ckappa),
            "equality_graph": self.equality_graph,
            "condition_group": self.condition_group,
            "case": self.case,
            "case_witness": None if self.case_witness is None else list(self.case_witness),
            "agree": self.agree,
        }


def thm1_verify(G: FiniteGroup, kind: str = "power", options: Options = Options(), facts: GraphFacts | None = None) -> Thm1Predicates:
    _require_p(G)
    if facts is None:
        g = build_graph(G, kind).graph
        sep, sw = cyclically_separable(g, options.cycle_bound, options.brute_force_limit)
    else:
        sep, sw = facts.separable, facts.separability_witness
    delta = difference_number(G)
    case = thm1_case_iii(G)
    return Thm1Predicates(
        sep_graph=sep,
        delta_ge_3=delta >= 3,
        case_iii=None if case is None else case[0],
        case_witness=None if case is None else tuple(_describe(H) for H in case[1]),
        separability_witness=sw,
        delta=delta,
    )


def thm2_verify(G: FiniteGroup, kind: str = "power", options: Options = Options(), facts: GraphFacts | None = None) -> Thm2Verdict:
    _require_p(G)
    if facts is None:
        facts = graph_facts(G, kind, options)
    cond = thm2_condition(G)
    return Thm2Verdict(
        kappa=facts.kappa,
        ckappa=facts.ckappa,
        condition_group=cond is not None,
        case=None if cond is None else cond[0],
        case_witness=None if cond is None else tuple(_describe(H) for H in cond[1]),
    )


@dataclass
class RemarkVerdict:
    equal_graphs: bool
    thm1: Thm1Predicates
    thm2: Thm2Verdict
    identical: bool

    @property
    def holds(self) -> bool:
        return self.equal_graphs and self.identical and self.thm1.all_agree and self.thm2.agree


def _thm_key(t1: Thm1Predicates, t2: Thm2Verdict) -> tuple:
    return (t1.sep_graph, t1.delta_ge_3, t1.case_iii, t1.all_agree, t2.kappa, t2.ckappa, t2.condition_group, t2.agree)


def remark_verify(
    G: FiniteGroup,
    options: Options = Options(),
    power_facts: GraphFacts | None = None,
) -> RemarkVerdict:
    _require_p(G)
    equal = power_graph(G).graph == enhanced_power_graph(G).graph
    pf = power_facts or graph_facts(G, "power", options)
    ef = graph_facts(G, "enhanced", options)
    p1, p2 = thm1_verify(G, options=options, facts=pf), thm2_verify(G, options=options, facts=pf)
    e1, e2 = thm1_verify(G, options=options, facts=ef), thm2_verify(G, options=options, facts=ef)
    return RemarkVerdict(equal, e1, e2, _thm_key(p1, p2) == _thm_key(e1, e2))


# --- lemmas ------------------------------------------------------------------------


@dataclass
class LemmaVerdict:
    lemma_id: str
    status: str  # "pass", "fail", "skipped", "reported"
    counterexample: Any = None
    note: str = ""
    checked: int = 0

    @property
    def holds(self) -> bool | None:
        if self.status in ("skipped", "reported"):
            return None
        return self.counterexample is None

    def to_dict(self) -> dict:
        d = {"lemma": self.lemma_id, "status": self.status}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        if self.note:
            d["note"] = self.note
        if self.checked:
            d["checked"] = self.checked
        return d


LEMMA_IDS = (
    "L-complete",
    "L-adjacency",
    "L-delta3-sep",
    "L-pgroup-conditions",
    "L-unique-p",
    "L-punctured-connected",
    "L-components-p",
    "L-delta1-noncyclic",
    "L-delta2",
    "L-delta2-cyclic-reading",
    "L-delta2-literal-reading",
)


def _verdict(lemma_id: str, ok: bool, counterexample: Any, **kw) -> LemmaVerdict:
    return LemmaVerdict(lemma_id, "pass" if ok else "fail", None if ok else counterexample, **kw)


def _group_seed(name: str, seed: int) -> int:
    return zlib.crc32(f"{seed}:{name}".encode())


def lemma_suite(
    G: FiniteGroup,
    options: Options = Options(),
    separable: bool | None = None,
) -> list[LemmaVerdict]:
    out: list[LemmaVerdict] = []
    pg = power_graph(G)
    g = pg.graph
    p = is_p_group(G)
    delta = difference_number(G)
    mcs = G.maximal_cyclic_subgroups

    prime_power_cyclic = G.is_cyclic and (G.n == 1 or p is not None)
    out.append(
        _verdict("L-complete", g.is_complete() == prime_power_cyclic,
                 {"complete": g.is_complete(), "cyclic_prime_power": prime_power_cyclic})
    )

    rng = random.Random(_group_seed(G.name, options.seed))
    subs = G.cyclic_subgroups
    bad = None
    for _ in range(options.adjacency_samples):
        H, K = rng.choice(subs), rng.choice(subs)
        hk = sorted(H.element_set - K.element_set)
        kh = sorted(K.element_set - H.element_set)
        if hk and kh:
            block = g.adj[np.ix_(hk, kh)]
            if block.any():
                i, j = np.argwhere(block)[0]
                bad = {"x": hk[i], "y": kh[j], "H": _describe(H), "K": _describe(K)}
                break
    out.append(_verdict("L-adjacency", bad is None, bad, checked=options.adjacency_samples))

    if separable is None:
        separable = cyclically_separable(g, options.cycle_bound, options.brute_force_limit)[0]
    note = ""
    if separable and delta < 3:
        note = f"converse fails: separable with difference number {delta}"
    out.append(_verdict("L-delta3-sep", delta < 3 or separable, {"delta": delta, "separable": separable}, note=note))

    out.append(_verdict("L-delta1-noncyclic", (delta >= 1) == (not G.is_cyclic), {"delta": delta}))
    # the stated "delta >= 2 iff no maximal subgroup of order 2" is only
    # reported, under both readings; Z4xZ2 and Z2xZ2xZ2 refute it
    has_mcs2 = any(M.order == 2 for M in mcs)
    literal = has_maximal_subgroup_of_order_2(G)
    for lid, has2 in (("L-delta2-cyclic-reading", has_mcs2), ("L-delta2-literal-reading", literal)):
        agrees = (delta >= 2) == (not has2)
        out.append(LemmaVerdict(lid, "reported", note=f"delta={delta}, order-2 maximal={has2}: "
                                f"{'consistent' if agrees else 'inconsistent'}"))
    big = sum(M.order > 2 for M in mcs)
    out.append(_verdict("L-delta2", (delta >= 2) == (big >= 2), {"delta": delta, "maximal_cyclic_order_gt_2": big}))

    p_lemmas = ("L-pgroup-conditions", "L-unique-p", "L-punctured-connected", "L-components-p")
    if p is None:
        out += [LemmaVerdict(lid, "skipped", note="not a p-group") for lid in p_lemmas]
        return out

    case = thm1_case_iii(G)
    out.append(_verdict("L-pgroup-conditions", case is None or delta >= 3,
                        {"case_iii": None if case is None else case[0], "delta": delta}))

    quaternion = quaternion_presentation(G) is not None
    unique = count_subgroups_of_order_p(G, p) == 1
    out.append(_verdict("L-unique-p", unique == (G.is_cyclic or quaternion),
                        {"unique_subgroup_of_order_p": unique, "cyclic": G.is_cyclic, "quaternion": quaternion}))

    star = punctured(pg)
    dec = components(star)
    connected = len(dec) == 1
    out.append(_verdict("L-punctured-connected", connected == (G.is_cyclic or quaternion),
                        {"connected": connected, "cyclic": G.is_cyclic, "quaternion": quaternion}))

    orders = G.element_orders[1:]  # punctured vertex i is element i + 1
    counts = [int((orders[list(c)] == p).sum()) for c in dec.components]
    wrong = [i for i, c in enumerate(counts) if c != p - 1]
    out.append(_verdict("L-components-p", not wrong,
                        {"component": [v + 1 for v in dec.components[wrong[0]]] if wrong else None,
                         "count": counts[wrong[0]] if wrong else None},
                        note=f"{len(dec)} components"))
    return out


# --- survey ------------------------------------------------------------------------


@dataclass
class SurveyRow:
    name: str
    order: int
    p: int | None
    tags: list[str]
    delta: int
    kappa: int | None = None
    ckappa: CutValue | None = None
    separable: bool | None = None
    min_degree: int | None = None
    edge_connectivity: int | None = None
    thm1: Thm1Predicates | None = None
    thm2: Thm2Verdict | None = None
    remark: RemarkVerdict | None = None
    lemmas: list[LemmaVerdict] = field(default_factory=list)
    skipped: str = ""
    failures: list[str] = field(default_factory=list)

    @property
    def thm1_tag(self) -> str:
        if self.thm1 is None:
            return f"skipped:{self.skipped or 'not-p-group'}"
        return ("agree:" if self.thm1.all_agree else "FAIL:") + (self.thm1.case_iii or "none")

    @property
    def thm2_tag(self) -> str:
        if self.thm2 is None:
            return f"skipped:{self.skipped or 'not-p-group'}"
        return ("agree:" if self.thm2.agree else "FAIL:") + (self.thm2.case or "none")

    @property
    def lemma_tag(self) -> str:
        return ";".join(f"{v.lemma_id}={v.status}" for v in self.lemmas)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "p": self.p,
            "tags": self.tags,
            "delta": self.delta,
            "kappa": self.kappa,
            "ckappa": None if self.ckappa is None else format_cut_value(self.ckappa),
            "separable": self.separable,
            "min_degree": self.min_degree,
            "edge_connectivity": self.edge_connectivity,
            "thm1": None if self.thm1 is None else self.thm1.to_dict(),
            "thm2": None if self.thm2 is None else self.thm2.to_dict(),
            "remark": None
            if self.remark is None
            else {"equal_graphs": self.remark.equal_graphs, "identical_verdicts": self.remark.identical},
            "lemmas": [v.to_dict() for v in self.lemmas],
            "skipped": self.skipped or None,
            "failures": self.failures,
        }


@dataclass
class SurveyReport:
    rows: list[SurveyRow]

    @property
    def failures(self) -> list[tuple[str, str]]:
        return [(r.name, f) for r in self.rows for f in r.failures]

    @property
    def skipped(self) -> list[str]:
        return [r.name for r in self.rows if r.skipped]

    def summary(self) -> dict:
        def count(attr: str) -> dict:
            c = {"pass": 0, "fail": 0, "skipped": 0}
            for r in self.rows:
                v = getattr(r, attr)
                if v is None:
                    c["skipped"] += 1
                elif (v.all_agree if attr == "thm1" else v.agree if attr == "thm2" else v.holds):
                    c["pass"] += 1
                else:
                    c["fail"] += 1
            return c

        lem: dict[str, dict[str, int]] = {}
        for r in self.rows:
            for v in r.lemmas:
                lem.setdefault(v.lemma_id, {"pass": 0, "fail": 0, "skipped": 0, "reported": 0})[v.status] += 1
        return {
            "groups": len(self.rows),
            "thm1": count("thm1"),
            "thm2": count("thm2"),
            "remark": count("remark"),
            "lemmas": {k: lem[k] for k in LEMMA_IDS if k in lem},
            "converse_counterexamples": [
                r.name for r in self.rows for v in r.lemmas if v.lemma_id == "L-delta3-sep" and v.note
            ],
            "skipped": self.skipped,
            "failures": len(self.failures),
        }

    @property
    def ok(self) -> bool:
        return not self.failures


def survey_entry(entry: CatalogEntry, options: Options = Options()) -> SurveyRow:
    G = entry.group
    row = SurveyRow(G.name, G.n, entry.p, sorted(entry.tags), difference_number(G))
    g = power_graph(G).graph
    row.min_degree = min_degree(g)
    if g.n >= 2:
        row.edge_connectivity = edge_connectivity(g)
        if row.edge_connectivity != row.min_degree:
            row.failures.append("edge connectivity differs from minimum degree")
    facts = None
    try:
        facts = graph_facts(G, "power", options)
    except InstanceTooLargeForExact as exc:
        row.skipped = f"size ({exc.stage})"
    if facts is not None:
        row.kappa, row.ckappa, row.separable = facts.kappa, facts.ckappa, facts.separable
        if facts.ckappa != INFINITE and facts.kappa > facts.ckappa:
            row.failures.append("kappa exceeds cyclic vertex connectivity")
    row.lemmas = lemma_suite(G, options, separable=row.separable)
    for v in row.lemmas:
        if v.status == "fail":
            row.failures.append(f"{v.lemma_id} violated: {v.counterexample}")
    if entry.p is None or facts is None:
        return row
    row.thm1 = thm1_verify(G, options=options, facts=facts)
    row.thm2 = thm2_verify(G, options=options, facts=facts)
    if not row.thm1.all_agree:
        row.failures.append(f"theorem 1 disagreement: {row.thm1.to_dict()}")
    if not row.thm2.agree:
        row.failures.append(f"theorem 2 disagreement: {row.thm2.to_dict()}")
    try:
        row.remark = remark_verify(G, options, power_facts=facts)
    except InstanceTooLargeForExact as exc:
        row.skipped = f"size ({exc.stage})"
    else:
        if not row.remark.holds:
            row.failures.append("enhanced power graph verdicts differ")
    return row


def _survey_star(args):
    return survey_entry(*args)


def survey(entries: list[CatalogEntry], options: Options = Options(), jobs: int = 1) -> SurveyReport:
    """Run every applicable check on every entry; rows keep the input order."""
    if jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_survey_star, [(e, options) for e in entries]))
    else:
        rows = [survey_entry(e, options) for e in entries]
    return SurveyReport(rows)
