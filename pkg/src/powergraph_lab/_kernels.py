"""Hot numeric kernels.

Every kernel exists twice: a numba ``@njit`` version and a plain numpy/scipy
version.  The public wrappers at the bottom pick one at call time.  Set
``POWERGRAPH_LAB_NO_NUMBA=1`` (or uninstall numba) to force the fallback path.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def numba_enabled() -> bool:
    flag = os.environ.get("POWERGRAPH_LAB_NO_NUMBA", "").strip().lower()
    return NUMBA_AVAILABLE and flag in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# associativity


@njit(cache=True)
def _first_nonassociative_nb(table):
    n = table.shape[0]
    for i in range(n):
        for j in range(n):
            ij = table[i, j]
            for k in range(n):
                if table[ij, k] != table[i, table[j, k]]:
                    return i, j, k
    return -1, -1, -1


def _first_nonassociative_np(table):
    for i in range(table.shape[0]):
        lhs = table[table[i]]  # lhs[j, k] = (i*j)*k
        rhs = table[i][table]  # rhs[j, k] = i*(j*k)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return i, int(bad[0, 0]), int(bad[0, 1])
    return -1, -1, -1


# ---------------------------------------------------------------------------
# vertex-capacitated max flow on the split digraph
#
# Node v becomes v_in -> v_out with capacity cap[v]; every undirected edge uv
# becomes u_out -> v_in and v_out -> u_in with unbounded capacity.  Sources
# and sinks have unbounded internal capacity.  The search state is (v, side)
# with side 0 = in, 1 = out.


@njit(cache=True)
def _vertex_flow_nb(indptr, indices, cap, src, snk, limit):
    n = cap.shape[0]
    big = np.int64(1) << np.int64(60)
    internal = np.zeros(n, dtype=np.int64)
    for v in range(n):
        internal[v] = big if (src[v] or snk[v]) else cap[v]
    fint = np.zeros(n, dtype=np.int64)
    # fedge[u, v]: flow on the arc u_out -> v_in
    fedge = np.zeros((n, n), dtype=np.int64)
    # parent encoding: -1 unvisited, -2 reached from the super source,
    # otherwise 2 * node + side of the predecessor
    par_in = np.empty(n, dtype=np.int64)
    par_out = np.empty(n, dtype=np.int64)
    queue = np.empty(2 * n, dtype=np.int64)
    total = np.int64(0)
    while total < limit:
        par_in[:] = -1
        par_out[:] = -1
        head = 0
        tail = 0
        for v in range(n):
            if src[v]:
                par_in[v] = -2
                queue[tail] = 2 * v
                tail += 1
        end = -1
        while head < tail and end < 0:
            code = queue[head]
            head += 1
            v = code // 2
            if code % 2 == 0:
                if par_out[v] == -1 and fint[v] < internal[v]:
                    par_out[v] = code
                    queue[tail] = 2 * v + 1
                    tail += 1
                    if snk[v]:
                        end = v
                        break
                for p in range(indptr[v], indptr[v + 1]):
                    u = indices[p]
                    if par_out[u] == -1 and fedge[u, v] > 0:
                        par_out[u] = code
                        queue[tail] = 2 * u + 1
                        tail += 1
                        if snk[u]:
                            end = u
                            break
            else:
                if snk[v]:
                    end = v
                    break
                if par_in[v] == -1 and fint[v] > 0:
                    par_in[v] = code
                    queue[tail] = 2 * v
                    tail += 1
                for p in range(indptr[v], indptr[v + 1]):
                    u = indices[p]
                    if par_in[u] == -1:
                        par_in[u] = code
                        queue[tail] = 2 * u
                        tail += 1
        if end < 0:
            break
        # bottleneck
        bott = limit - total
        code = 2 * end + 1
        while True:
            v = code // 2
            if code % 2 == 1:
                prev = par_out[v]
                pv = prev // 2
                if prev % 2 == 0 and pv == v:
                    r = internal[v] - fint[v]
                    if r < bott:
                        bott = r
                elif prev % 2 == 0:
                    # reverse of v_out -> pv_in
                    if fedge[v, pv] < bott:
                        bott = fedge[v, pv]
            else:
                prev = par_in[v]
                if prev == -2:
                    break
                pv = prev // 2
                if pv == v:
                    if fint[v] < bott:
                        bott = fint[v]
            code = prev
        # augment
        code = 2 * end + 1
        while True:
            v = code // 2
            if code % 2 == 1:
                prev = par_out[v]
                pv = prev // 2
                if pv == v:
                    fint[v] += bott
                else:
                    fedge[v, pv] -= bott
            else:
                prev = par_in[v]
                if prev == -2:
                    break
                pv = prev // 2
                if pv == v:
                    fint[v] -= bott
                else:
                    fedge[pv, v] += bott
            code = prev
        total += bott
    cut = np.zeros(n, dtype=np.bool_)
    if total < limit:
        # last BFS left par_* as the residual reachability from the source
        for v in range(n):
            if par_in[v] != -1 and par_out[v] == -1:
                cut[v] = True
    return total, cut


def _vertex_flow_np(indptr, indices, cap, src, snk, limit):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import breadth_first_order, maximum_flow

    n = cap.shape[0]
    big = int(cap.sum()) + 1
    internal = np.where(src | snk, big, cap).astype(np.int64)
    s, t = 2 * n, 2 * n + 1
    rows = [np.arange(n), np.repeat(np.arange(n), np.diff(indptr)) + n]
    cols = [np.arange(n) + n, indices.astype(np.int64)]
    caps = [internal, np.full(len(indices), big)]
    srcs = np.flatnonzero(src)
    snks = np.flatnonzero(snk)
    rows += [np.full(len(srcs), s), snks + n]
    cols += [srcs, np.full(len(snks), t)]
    caps += [np.full(len(srcs), big), np.full(len(snks), big)]
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    w = np.concatenate(caps).astype(np.int32)
    graph = csr_matrix((w, (r, c)), shape=(2 * n + 2, 2 * n + 2))
    res = maximum_flow(graph, s, t)
    total = int(res.flow_value)
    residual = (graph - res.flow).tocsr()
    residual.data = (residual.data > 0).astype(np.int8)
    residual.eliminate_zeros()
    order = breadth_first_order(residual, s, directed=True, return_predecessors=False)
    seen = np.zeros(2 * n + 2, dtype=bool)
    seen[order] = True
    cut = seen[:n] & ~seen[n : 2 * n]
    if total >= limit:
        return int(limit), np.zeros(n, dtype=bool)
    return total, cut


# ---------------------------------------------------------------------------
# unit edge-capacity max flow


@njit(cache=True)
def _edge_flow_nb(indptr, indices, s, t, limit):
    n = indptr.shape[0] - 1
    res = np.zeros((n, n), dtype=np.int64)
    for v in range(n):
        for p in range(indptr[v], indptr[v + 1]):
            res[v, indices[p]] = 1
    parent = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    while total < limit:
        parent[:] = -1
        parent[s] = s
        queue[0] = s
        head = 0
        tail = 1
        while head < tail and parent[t] == -1:
            v = queue[head]
            head += 1
            for u in range(n):
                if parent[u] == -1 and res[v, u] > 0:
                    parent[u] = v
                    queue[tail] = u
                    tail += 1
        if parent[t] == -1:
            break
        v = t
        while v != s:
            p = parent[v]
            res[p, v] -= 1
            res[v, p] += 1
            v = p
        total += 1
    return total


def _edge_flow_np(indptr, indices, s, t, limit):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_flow

    n = indptr.shape[0] - 1
    data = np.ones(len(indices), dtype=np.int32)
    graph = csr_matrix((data, indices, indptr), shape=(n, n))
    return min(int(maximum_flow(graph, s, t).flow_value), int(limit))


# ---------------------------------------------------------------------------
# exhaustive subset search on bitmask adjacency (n <= 64)
#
# mode 0: smallest S with at least two cycle-bearing components in G - S
# mode 1: smallest S with G - S disconnected or on at most one vertex


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@njit(cache=True)
def _subset_ok_nb(masks, n, removed, mode):
    one = np.uint64(1)
    full = np.uint64(0)
    for v in range(n):
        full |= one << np.uint64(v)
    rem = full & ~removed
    if mode == 1 and _popcount(rem) <= 1:
        return True
    left = rem
    ncomp = 0
    ncyc = 0
    while left:
        v = 0
        while not (left >> np.uint64(v)) & one:
            v += 1
        comp = one << np.uint64(v)
        frontier = comp
        while frontier:
            nb = np.uint64(0)
            for u in range(n):
                if (frontier >> np.uint64(u)) & one:
                    nb |= masks[u]
            nb &= rem & ~comp
            comp |= nb
            frontier = nb
        left &= ~comp
        ncomp += 1
        if mode == 1:
            if ncomp >= 2:
                return True
        else:
            twice_edges = 0
            for u in range(n):
                if (comp >> np.uint64(u)) & one:
                    twice_edges += _popcount(masks[u] & comp)
            if twice_edges // 2 >= _popcount(comp):
                ncyc += 1
                if ncyc >= 2:
                    return True
    return False


@njit(cache=True)
def _subset_search_nb(masks, n, pool, must, kmax, mode):
    one = np.uint64(1)
    m = pool.shape[0]
    idx = np.empty(max(kmax, 1), dtype=np.int64)
    for k in range(0, min(kmax, m) + 1):
        for i in range(k):
            idx[i] = i
        while True:
            removed = must
            for i in range(k):
                removed |= one << np.uint64(pool[idx[i]])
            if _subset_ok_nb(masks, n, removed, mode):
                return True, removed
            # next combination
            i = k - 1
            while i >= 0 and idx[i] == m - k + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, k):
                idx[j] = idx[j - 1] + 1
    return False, np.uint64(0)


def _subset_ok_py(masks, n, removed, mode):
    rem = ((1 << n) - 1) & ~removed
    if mode == 1 and bin(rem).count("1") <= 1:
        return True
    left = rem
    ncomp = ncyc = 0
    while left:
        comp = left & -left
        frontier = comp
        while frontier:
            nb = 0
            f = frontier
            while f:
                low = f & -f
                nb |= masks[low.bit_length() - 1]
                f ^= low
            nb &= rem & ~comp
            comp |= nb
            frontier = nb
        left &= ~comp
        ncomp += 1
        if mode == 1:
            if ncomp >= 2:
                return True
            continue
        twice_edges = 0
        f = comp
        while f:
            low = f & -f
            twice_edges += bin(masks[low.bit_length() - 1] & comp).count("1")
            f ^= low
        if twice_edges // 2 >= bin(comp).count("1"):
            ncyc += 1
            if ncyc >= 2:
                return True
    return False


def _subset_search_py(masks, n, pool, must, kmax, mode):
    masks = [int(x) for x in masks]
    must = int(must)
    for k in range(0, min(kmax, len(pool)) + 1):
        for combo in itertools.combinations([int(v) for v in pool], k):
            removed = must
            for v in combo:
                removed |= 1 << v
            if _subset_ok_py(masks, n, removed, mode):
                return True, removed
    return False, 0


# ---------------------------------------------------------------------------
# public dispatch


def first_nonassociative(table: np.ndarray) -> tuple[int, int, int] | None:
    table = np.ascontiguousarray(table, dtype=np.int64)
    fn = _first_nonassociative_nb if numba_enabled() else _first_nonassociative_np
    i, j, k = fn(table)
    return None if i < 0 else (int(i), int(j), int(k))


def vertex_flow(indptr, indices, cap, src, snk, limit) -> tuple[int, np.ndarray]:
    """Max flow between vertex sets with vertex capacities ``cap``.

    Flow is truncated at ``limit``; when it is reached the returned cut mask is
    all-False.  Otherwise the mask marks a minimum separating vertex set.  The
    caller guarantees ``src`` and ``snk`` are disjoint and non-adjacent.
    """
    args = (
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(cap, dtype=np.int64),
        np.ascontiguousarray(src, dtype=np.bool_),
        np.ascontiguousarray(snk, dtype=np.bool_),
        np.int64(limit),
    )
    fn = _vertex_flow_nb if numba_enabled() else _vertex_flow_np
    total, cut = fn(*args)
    return int(total), np.asarray(cut, dtype=bool)


def edge_flow(indptr, indices, s: int, t: int, limit: int) -> int:
    args = (
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        int(s),
        int(t),
        int(limit),
    )
    fn = _edge_flow_nb if numba_enabled() else _edge_flow_np
    return int(fn(*args))


def subset_search(masks, n: int, pool, must: int, kmax: int, mode: int) -> int | None:
    """Smallest ``must | S`` (S drawn from ``pool``, |S| <= kmax) meeting ``mode``.

    Returns the removed-vertex bitmask, or None when the search is exhausted.
    """
    if n > 64:
        raise ValueError("subset search is limited to 64 vertices")
    if numba_enabled():
        found, removed = _subset_search_nb(
            np.asarray(masks, dtype=np.uint64),
            n,
            np.asarray(pool, dtype=np.int64),
            np.uint64(must),
            int(kmax),
            int(mode),
        )
    else:
        found, removed = _subset_search_py(masks, n, list(pool), must, kmax, mode)
    return int(removed) if found else None
