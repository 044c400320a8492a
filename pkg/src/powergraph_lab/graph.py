"""Undirected simple graphs on indexed vertices.

Adjacency is a dense read-only boolean matrix; power graphs are dense and
small enough (a few hundred vertices) that this is the right trade-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import TooLargeForExactIso, VertexOutOfRange

ISO_LIMIT = 12


class Graph:
    def __init__(self, adjacency, labels: Sequence[str] | None = None):
        adj = np.array(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        adj.setflags(write=False)
        self.adj = adj
        if labels is not None and len(labels) != adj.shape[0]:
            raise ValueError("one label per vertex required")
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u}, {v}) leaves 0..{n - 1}")
            adj[u, v] = adj[v, u] = True
        return cls(adj, labels)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    num_vertices = n

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    @cached_property
    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def neighbors(self, v: int) -> list[int]:
        return [int(u) for u in np.flatnonzero(self.adj[v])]

    def edges(self) -> list[tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        us, vs = np.nonzero(np.triu(self.adj, 1))
        return [(int(u), int(v)) for u, v in zip(us, vs)]

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.concatenate(([0], np.cumsum(self.degrees))).astype(np.int64)
        indices = np.nonzero(self.adj)[1].astype(np.int64)
        return indptr, indices

    @cached_property
    def bitmasks(self) -> list[int]:
        return [sum(1 << int(u) for u in np.flatnonzero(row)) for row in self.adj]

    def is_complete(self) -> bool:
        return self.num_edges == self.n * (self.n - 1) // 2

    def _check(self, vertices: Iterable[int]) -> list[int]:
        vs = sorted({int(v) for v in vertices})
        if vs and (vs[0] < 0 or vs[-1] >= self.n):
            bad = vs[0] if vs[0] < 0 else vs[-1]
            raise VertexOutOfRange(f"vertex {bad} not in 0..{self.n - 1}")
        return vs

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph on ``vertices``, renumbered in increasing order, labels kept."""
        vs = self._check(vertices)
        labels = [self.label(v) for v in vs]
        return Graph(self.adj[np.ix_(vs, vs)], labels)

    def delete_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = set(self._check(vertices))
        return self.induced_subgraph(v for v in range(self.n) if v not in drop)

    def kept_after_delete(self, vertices: Iterable[int]) -> list[int]:
        """Original indices of the vertices that survive :meth:`delete_vertices`."""
        drop = set(self._check(vertices))
        return [v for v in range(self.n) if v not in drop]


# --- constructions -------------------------------------------------------------


def empty(n: int = 0) -> Graph:
    return Graph(np.zeros((n, n), dtype=bool))


def complete(n: int) -> Graph:
    return Graph(~np.eye(n, dtype=bool))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    n = sum(g.n for g in graphs)
    adj = np.zeros((n, n), dtype=bool)
    labels = []
    off = 0
    for g in graphs:
        adj[off : off + g.n, off : off + g.n] = g.adj
        labels += [g.label(v) for v in range(g.n)]
        off += g.n
    return Graph(adj, labels if any(g.labels for g in graphs) else None)


def join(g1: Graph, g2: Graph) -> Graph:
    g = disjoint_union([g1, g2])
    adj = g.adj.copy()
    adj[: g1.n, g1.n :] = True
    adj[g1.n :, : g1.n] = True
    return Graph(adj, g.labels)


def multiple(r: int, g: Graph) -> Graph:
    """``r`` disjoint copies of ``g``."""
    return disjoint_union([g] * r)


# --- components ----------------------------------------------------------------


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[tuple[int, ...], ...]
    has_cycle: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.components)

    @property
    def cyclic_count(self) -> int:
        return sum(self.has_cycle)


def components(g: Graph) -> ComponentDecomposition:
    """Connected components ordered by least vertex.

    A connected component carries a cycle iff it has at least as many edges
    as vertices.
    """
    seen = np.zeros(g.n, dtype=bool)
    comps, cyc = [], []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            v = stack.pop()
            for u in np.flatnonzero(g.adj[v] & ~seen):
                seen[u] = True
                stack.append(int(u))
                comp.append(int(u))
        comp.sort()
        comps.append(tuple(comp))
        edges = int(g.adj[np.ix_(comp, comp)].sum()) // 2
        cyc.append(edges >= len(comp))
    return ComponentDecomposition(tuple(comps), tuple(cyc))


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(components(g)) == 1


def find_cycle(g: Graph, within: Iterable[int] | None = None) -> list[int] | None:
    """Vertices of some cycle (in cyclic order) inside ``within``, or None."""
    allowed = np.zeros(g.n, dtype=bool)
    allowed[list(range(g.n)) if within is None else list(within)] = True
    parent = np.full(g.n, -1)
    depth = np.full(g.n, -1)
    for s in np.flatnonzero(allowed):
        if depth[s] >= 0:
            continue
        depth[s] = 0
        stack = [int(s)]
        while stack:
            v = stack.pop()
            for u in np.flatnonzero(g.adj[v] & allowed):
                u = int(u)
                if u == parent[v]:
                    continue
                if depth[u] >= 0:
                    # non-tree edge: walk both ends up to their common ancestor
                    a, b = v, u
                    left, right = [a], [b]
                    while a != b:
                        if depth[a] >= depth[b]:
                            a = int(parent[a])
                            left.append(a)
                        else:
                            b = int(parent[b])
                            right.append(b)
                    return left + right[-2::-1]
                depth[u] = depth[v] + 1
                parent[u] = v
                stack.append(u)
    return None


# --- isomorphism -----------------------------------------------------------------


def _refine(g: Graph) -> list[int]:
    colors = [int(d) for d in g.degrees]
    while True:
        sig = [(colors[v], tuple(sorted(colors[u] for u in g.neighbors(v)))) for v in range(g.n)]
        palette = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [palette[s] for s in sig]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def is_isomorphic_small(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism test for graphs on at most 12 vertices."""
    if max(g1.n, g2.n) > ISO_LIMIT:
        raise TooLargeForExactIso(f"exact isomorphism is limited to {ISO_LIMIT} vertices")
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return False
    if sorted(g1.degrees.tolist()) != sorted(g2.degrees.tolist()):
        return False
    # refine jointly so colour names are comparable across the two graphs
    both = disjoint_union([g1, g2])
    colors = _refine(both)
    c1, c2 = colors[: g1.n], colors[g1.n :]
    if sorted(c1) != sorted(c2):
        return False
    n = g1.n
    order = sorted(range(n), key=lambda v: (c1.count(c1[v]), v))
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or c2[w] != c1[v]:
                continue
            if all(g1.adj[v, order[j]] == g2.adj[w, image[order[j]]] for j in range(i)):
                image[v] = w
                used[w] = True
                if extend(i + 1):
                    return True
                used[w] = False
        return False

    return extend(0)


# --- chordality --------------------------------------------------------------------


def maximum_cardinality_search(g: Graph) -> list[int]:
    """MCS visit order; its reverse is a perfect elimination ordering iff g is chordal."""
    weight = np.zeros(g.n, dtype=np.int64)
    done = np.zeros(g.n, dtype=bool)
    order = []
    for _ in range(g.n):
        cand = np.where(done, -1, weight)
        v = int(np.argmax(cand))
        order.append(v)
        done[v] = True
        weight[g.adj[v] & ~done] += 1
    return order


def perfect_elimination_ordering(g: Graph) -> list[int] | None:
    order = maximum_cardinality_search(g)[::-1]
    pos = np.empty(g.n, dtype=np.int64)
    pos[order] = np.arange(g.n)
    for v in order:
        later = [int(u) for u in np.flatnonzero(g.adj[v]) if pos[u] > pos[v]]
        if len(later) < 2:
            continue
        # the earliest later neighbour must see all the others
        w = min(later, key=lambda u: pos[u])
        rest = [u for u in later if u != w]
        if not g.adj[w, rest].all():
            return None
    return order


def is_chordal(g: Graph) -> bool:
    return perfect_elimination_ordering(g) is not None


def chordless_cycles(g: Graph, max_length: int | None = None, budget: int = 2_000_000):
    """Enumerate chordless cycles (length >= 3, triangles included).

    Each cycle is reported once, as a vertex tuple starting at its least
    vertex.  Returns ``(cycles, complete)``: ``complete`` is False when a
    chordless cycle longer than ``max_length`` exists or the search budget
    ran out, i.e. when the returned list may miss relevant cycles.
    """
    n = g.n
    adj = g.adj
    limit = max_length if max_length is not None else n
    found: list[tuple[int, ...]] = []
    steps = 0
    complete = True

    for s in range(n):
        # induced paths s = p0, p1, ..., pk with all p_i > s
        nbrs = [int(u) for u in np.flatnonzero(adj[s]) if u > s]
        for a, b in ((a, b) for i, a in enumerate(nbrs) for b in nbrs[i + 1 :]):
            if adj[a, b]:
                found.append((s, a, b))
        stack = [[s, u] for u in nbrs]
        while stack:
            pth = stack.pop()
            steps += 1
            if steps > budget:
                return found, False
            last = pth[-1]
            # forbidden: vertices adjacent to any interior vertex p1..p_{k-1}
            interior = pth[1:-1]
            for w in np.flatnonzero(adj[last]):
                w = int(w)
                if w <= s or w in pth:
                    continue
                if interior and adj[w, interior].any():
                    continue
                if adj[w, s]:
                    if len(pth) >= 3 and pth[1] < w:
                        # closes s, p1, ..., last, w
                        if len(pth) + 1 > limit:
                            complete = False
                            if max_length is not None:
                                return found, False
                        else:
                            found.append(tuple(pth + [w]))
                    continue
                stack.append(pth + [w])
    return found, complete


# --- export -------------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {_quote(name)} {{"]
    for v in range(g.n):
        lines.append(f"  {v} [label={_quote(g.label(v))}];")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())
