"""Vertex connectivity, edge connectivity and cyclic vertex connectivity.

Cyclic vertex connectivity is solved exactly on the *twin quotient* of the
graph: vertices with equal closed neighbourhoods (for power graphs, the
generators of one cyclic subgroup) are merged into one weighted node.  A
minimum cyclic vertex cutset never splits such a class, so nothing is lost,
and the quotient of a power graph has one node per cyclic subgroup.

On the quotient, every cycle-bearing component contains a minimal "core":
one class of size >= 3, two adjacent classes of total size >= 3, or a
chordless cycle through singleton classes (only triangles when that part of
the graph is chordal).  The answer is the cheapest weighted vertex cut
separating two disjoint, non-adjacent cores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Union

import numpy as np

from . import _kernels
from .errors import EmptyGraph, InstanceTooLargeForExact, SetsIntersect
from .graph import Graph, chordless_cycles, components, find_cycle, is_chordal

INFINITE = math.inf
CutValue = Union[int, float]

DEFAULT_CYCLE_BOUND = 6
DEFAULT_BRUTE_FORCE_LIMIT = 16


def format_cut_value(value: CutValue) -> int | str:
    return "infinite" if value == INFINITE else int(value)


# --- kappa ------------------------------------------------------------------------


def vertex_connectivity(g: Graph) -> tuple[int, Union[tuple[int, ...], str]]:
    """kappa(g) with a witness: a minimum separating set, "complete" or "trivial"."""
    n = g.n
    if n == 0:
        raise EmptyGraph("vertex connectivity of the empty graph is undefined")
    if n == 1:
        return 0, "trivial"
    if g.is_complete():
        return n - 1, "complete"
    if len(components(g)) > 1:
        return 0, ()
    indptr, indices = g.csr
    ones = np.ones(n, dtype=np.int64)
    v = int(np.argmin(g.degrees))
    best, cut = int(g.degrees[v]), tuple(g.neighbors(v))
    for i in range(n):
        if i > best:
            break
        for j in np.flatnonzero(~g.adj[i]):
            j = int(j)
            if j <= i:
                continue
            src = np.zeros(n, dtype=bool)
            snk = np.zeros(n, dtype=bool)
            src[i] = snk[j] = True
            flow, mask = _kernels.vertex_flow(indptr, indices, ones, src, snk, best)
            if flow < best:
                best, cut = flow, tuple(int(x) for x in np.flatnonzero(mask))
    return best, cut


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise EmptyGraph("minimum degree of the empty graph is undefined")
    return int(g.degrees.min())


def edge_connectivity(g: Graph) -> int:
    """lambda(g) via unit-capacity max flow from vertex 0 to every other vertex."""
    if g.n < 2:
        raise EmptyGraph("edge connectivity needs at least two vertices")
    indptr, indices = g.csr
    best = min_degree(g)
    for t in range(1, g.n):
        if best == 0:
            break
        best = min(best, _kernels.edge_flow(indptr, indices, 0, t, best))
    return best


# --- cuts between vertex sets -----------------------------------------------------


def _min_cut(g: Graph, weights, A, B, limit) -> tuple[CutValue, tuple[int, ...] | None]:
    n = g.n
    src = np.zeros(n, dtype=bool)
    snk = np.zeros(n, dtype=bool)
    src[list(A)] = True
    snk[list(B)] = True
    if (g.adj[src][:, snk]).any():
        return INFINITE, None
    indptr, indices = g.csr
    flow, mask = _kernels.vertex_flow(indptr, indices, weights, src, snk, limit)
    if flow >= limit:
        return flow, None
    return flow, tuple(int(x) for x in np.flatnonzero(mask))


def min_vertex_cut_between_sets(
    g: Graph, A: Iterable[int], B: Iterable[int], weights=None
) -> tuple[CutValue, tuple[int, ...] | None]:
    """Fewest vertices outside A and B whose deletion separates A from B.

    Infinite (with no witness) when an edge joins A to B.  ``weights`` turns
    this into a minimum-weight vertex cut.
    """
    A, B = set(A), set(B)
    if not A or not B:
        raise ValueError("terminal sets must be non-empty")
    if A & B:
        raise SetsIntersect(f"terminal sets share {sorted(A & B)}")
    w = np.ones(g.n, dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)
    return _min_cut(g, w, A, B, int(w.sum()) + 1)


# --- brute-force oracles ----------------------------------------------------------


def _check_limit(g: Graph, limit: int) -> None:
    if g.n > limit:
        raise InstanceTooLargeForExact(
            f"subset search limited to {limit} vertices, graph has {g.n}", stage="subset search"
        )


def _mask_to_tuple(mask: int) -> tuple[int, ...]:
    out, v = [], 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def smallest_cyclic_cutset(
    g: Graph,
    max_size: int | None = None,
    must_contain: Iterable[int] = (),
    limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
) -> tuple[int, ...] | None:
    """Exhaustive search for a smallest cyclic vertex cutset.

    Sizes 0, 1, 2, ... are tried in turn (subsets in lexicographic order);
    with ``must_contain`` only supersets of it are examined and ``max_size``
    counts the extra vertices.  Returns None when nothing is found.
    """
    _check_limit(g, limit)
    must = sorted(set(must_contain))
    pool = [v for v in range(g.n) if v not in must]
    kmax = len(pool) if max_size is None else max_size
    found = _kernels.subset_search(g.bitmasks, g.n, pool, sum(1 << v for v in must), kmax, 0)
    return None if found is None else _mask_to_tuple(found)


def brute_force_ckappa(g: Graph, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> CutValue:
    cut = smallest_cyclic_cutset(g, limit=limit)
    return INFINITE if cut is None else len(cut)


def brute_force_kappa(g: Graph, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> int:
    """Smallest S with g - S disconnected or on at most one vertex."""
    if g.n == 0:
        raise EmptyGraph("vertex connectivity of the empty graph is undefined")
    _check_limit(g, limit)
    found = _kernels.subset_search(g.bitmasks, g.n, list(range(g.n)), 0, g.n, 1)
    return len(_mask_to_tuple(found))


# --- twin quotient and cycle cores ------------------------------------------------


@dataclass
class _Quotient:
    classes: list[list[int]]
    graph: Graph
    weights: np.ndarray
    cores: list[tuple[int, ...]] = field(default_factory=list)
    resolved: bool = True


def twin_classes(g: Graph) -> list[list[int]]:
    """Vertices grouped by closed neighbourhood, ordered by least member."""
    closed = g.adj | np.eye(g.n, dtype=bool)
    groups: dict[bytes, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(closed[v].tobytes(), []).append(v)
    return sorted(groups.values())


def _quotient(g: Graph, cycle_bound: int | None, budget: int) -> _Quotient:
    classes = twin_classes(g)
    reps = [c[0] for c in classes]
    qg = Graph(g.adj[np.ix_(reps, reps)])
    w = np.array([len(c) for c in classes], dtype=np.int64)
    q = _Quotient(classes, qg, w)
    m = len(classes)
    for c in range(m):
        if w[c] >= 3:
            q.cores.append((c,))
    for a, b in qg.edges():
        if w[a] < 3 and w[b] < 3 and w[a] + w[b] >= 3:
            q.cores.append((a, b))
    light = [c for c in range(m) if w[c] == 1]
    sub = qg.induced_subgraph(light)
    if is_chordal(sub):
        adj = sub.adj
        for a, b in sub.edges():
            for c in np.flatnonzero(adj[a] & adj[b]):
                if c > b:
                    q.cores.append((light[a], light[b], light[int(c)]))
    else:
        cycles, complete = chordless_cycles(sub, cycle_bound, budget)
        q.cores.extend(tuple(light[v] for v in cyc) for cyc in cycles)
        q.resolved = complete
    return q


def _core_cycle(q: _Quotient, core: tuple[int, ...]) -> list[int]:
    """An actual cycle of the original graph inside the classes of ``core``."""
    cls = q.classes
    if len(core) == 1:
        return cls[core[0]][:3]
    if len(core) == 2:
        a, b = core
        return cls[a][:2] + cls[b][:1] if len(cls[a]) >= 2 else cls[a][:1] + cls[b][:2]
    return [cls[c][0] for c in core]


def _compatible_pairs(q: _Quotient):
    closed = [
        sum(1 << int(u) for u in np.flatnonzero(row)) | (1 << v) for v, row in enumerate(q.graph.adj)
    ]
    masks = [sum(1 << c for c in core) for core in q.cores]
    reach = [0] * len(masks)
    for i, core in enumerate(q.cores):
        for c in core:
            reach[i] |= closed[c]
    for i, j in combinations(range(len(masks)), 2):
        if masks[j] & reach[i] == 0:
            yield i, j


def _too_large(g: Graph, cycle_bound, stage: str):
    return InstanceTooLargeForExact(
        f"graph on {g.n} vertices is not chordal and has chordless cycles beyond length "
        f"{cycle_bound}; exhaustive search is limited to smaller graphs",
        stage=stage,
    )


def cyclically_separable(
    g: Graph,
    cycle_bound: int | None = DEFAULT_CYCLE_BOUND,
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
    budget: int = 2_000_000,
) -> tuple[bool, tuple[list[int], list[int]] | None]:
    """Whether g has two vertex-disjoint cycles with no edge between them.

    The witness is such a pair of cycles (vertex lists in cyclic order);
    deleting everything else is a cyclic vertex cutset.
    """
    q = _quotient(g, cycle_bound, budget)
    if not q.resolved:
        if g.n > brute_force_limit:
            raise _too_large(g, cycle_bound, "cyclic separability")
        cut = smallest_cyclic_cutset(g, limit=brute_force_limit)
        if cut is None:
            return False, None
        rest = g.kept_after_delete(cut)
        dec = components(g.induced_subgraph(rest))
        cyc = [[rest[v] for v in comp] for comp, h in zip(dec.components, dec.has_cycle) if h]
        return True, (find_cycle(g, cyc[0]), find_cycle(g, cyc[1]))
    for i, j in _compatible_pairs(q):
        return True, (_core_cycle(q, q.cores[i]), _core_cycle(q, q.cores[j]))
    return False, None


def cyclic_vertex_connectivity(
    g: Graph,
    cycle_bound: int | None = DEFAULT_CYCLE_BOUND,
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
    budget: int = 2_000_000,
) -> tuple[CutValue, tuple[int, ...] | None]:
    """Exact cyclic vertex connectivity with a minimum cyclic cutset.

    Returns ``(INFINITE, None)`` when g is not cyclically separable.  Raises
    InstanceTooLargeForExact when g is not chordal, has chordless cycles
    longer than ``cycle_bound`` and exceeds ``brute_force_limit`` vertices.
    """
    q = _quotient(g, cycle_bound, budget)
    if not q.resolved:
        if g.n > brute_force_limit:
            raise _too_large(g, cycle_bound, "cyclic vertex connectivity")
        cut = smallest_cyclic_cutset(g, limit=brute_force_limit)
        return (INFINITE, None) if cut is None else (len(cut), cut)
    qg, w = q.graph, q.weights
    # every cyclic cutset contains all universal vertices
    universal = qg.degrees == qg.n - 1
    lower = int(w[universal].sum())
    best: CutValue = INFINITE
    best_cut = None
    total = int(w.sum()) + 1
    for i, j in _compatible_pairs(q):
        limit = total if best == INFINITE else int(best)
        value, cut = _min_cut(qg, w, q.cores[i], q.cores[j], limit)
        if value < best:
            best, best_cut = value, cut
            if best <= lower:
                break
    if best_cut is None:
        return INFINITE, None
    witness = tuple(sorted(v for c in best_cut for v in q.classes[c]))
    return int(best), witness


def is_cyclic_cutset(g: Graph, S: Iterable[int]) -> bool:
    return components(g.delete_vertices(S)).cyclic_count >= 2


# --- report -------------------------------------------------------------------------


@dataclass
class ConnectivityReport:
    kappa: int
    kappa_witness: Union[tuple[int, ...], str]
    min_degree: int
    edge_connectivity: int | None
    cyclically_separable: bool
    separability_witness: tuple[list[int], list[int]] | None
    ckappa: CutValue
    ckappa_witness: tuple[int, ...] | None

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "kappa_witness": self.kappa_witness if isinstance(self.kappa_witness, str) else list(self.kappa_witness),
            "min_degree": self.min_degree,
            "edge_connectivity": self.edge_connectivity,
            "cyclically_separable": self.cyclically_separable,
            "separability_witness": None
            if self.separability_witness is None
            else [list(c) for c in self.separability_witness],
            "ckappa": format_cut_value(self.ckappa),
            "ckappa_witness": None if self.ckappa_witness is None else list(self.ckappa_witness),
        }


def connectivity_report(
    g: Graph,
    cycle_bound: int | None = DEFAULT_CYCLE_BOUND,
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
) -> ConnectivityReport:
    kappa, kw = vertex_connectivity(g)
    ck, cw = cyclic_vertex_connectivity(g, cycle_bound, brute_force_limit)
    sep, sw = cyclically_separable(g, cycle_bound, brute_force_limit)
    return ConnectivityReport(
        kappa=kappa,
        kappa_witness=kw,
        min_degree=min_degree(g),
        edge_connectivity=edge_connectivity(g) if g.n >= 2 else None,
        cyclically_separable=sep,
        separability_witness=sw,
        ckappa=ck,
        ckappa_witness=cw,
    )
