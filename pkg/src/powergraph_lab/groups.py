"""Finite groups given by Cayley tables, and their cyclic-subgroup invariants."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np
from sympy import factorint, isprime, totient

from . import _kernels
from .errors import NoIdentity, NotAssociative, NotLatinSquare, PDoesNotDivideOrder, PNotPrime

ASSOCIATIVITY_CHECK_LIMIT = 512


@dataclass(frozen=True)
class CyclicSubgroup:
    elements: tuple[int, ...]
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.element_set


class FiniteGroup:
    """A finite group stored as a Cayley table with the identity at index 0.

    Instances are treated as immutable; element orders and the cyclic
    subgroup structure are computed lazily and cached.
    """

    def __init__(self, table: np.ndarray, name: str = ""):
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        self.table = table
        self.name = name or f"G{table.shape[0]}"

    @property
    def n(self) -> int:
        return self.table.shape[0]

    identity = 0

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, n={self.n})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def power(self, x: int, k: int) -> int:
        k %= self.element_orders[x]
        y = 0
        for _ in range(k):
            y = int(self.table[y, x])
        return y

    def inverse(self, x: int) -> int:
        return int(np.flatnonzero(self.table[x] == 0)[0])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.n
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        cur = idx.copy()  # cur[x] = x^k
        for k in range(1, n + 1):
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, idx]
        orders.setflags(write=False)
        return orders

    @cached_property
    def membership(self) -> np.ndarray:
        """Boolean matrix ``m`` with ``m[x, y]`` true iff ``y`` lies in ``<x>``."""
        n = self.n
        idx = np.arange(n)
        mem = np.zeros((n, n), dtype=bool)
        cur = np.zeros(n, dtype=np.int64)
        for _ in range(int(self.element_orders.max())):
            mem[idx, cur] = True
            cur = self.table[cur, idx]
        mem.setflags(write=False)
        return mem

    @cached_property
    def cyclic_subgroups(self) -> tuple[CyclicSubgroup, ...]:
        """All distinct cyclic subgroups, ordered by (order, elements)."""
        groups: dict[bytes, list[int]] = {}
        for x in range(self.n):
            groups.setdefault(self.membership[x].tobytes(), []).append(x)
        subs = [
            CyclicSubgroup(tuple(int(v) for v in np.flatnonzero(self.membership[gens[0]])), tuple(gens))
            for gens in groups.values()
        ]
        subs.sort(key=lambda h: (h.order, h.elements))
        return tuple(subs)

    def cyclic_subgroup(self, x: int) -> CyclicSubgroup:
        if not 0 <= x < self.n:
            raise IndexError(f"element {x} out of range for group of order {self.n}")
        for h in self.cyclic_subgroups:
            if x in h.generators:
                return h
        raise AssertionError(f"no cyclic subgroup found for {x}")  # unreachable

    @cached_property
    def maximal_cyclic_subgroups(self) -> tuple[CyclicSubgroup, ...]:
        subs = self.cyclic_subgroups
        rows = np.array([self.membership[h.generators[0]] for h in subs], dtype=np.int64)
        sizes = rows.sum(axis=1)
        inter = rows @ rows.T
        # proper[i, j]: subgroup i is a proper subset of subgroup j
        proper = (inter == sizes[:, None]) & (sizes[:, None] < sizes[None, :])
        return tuple(h for h, p in zip(subs, proper.any(axis=1)) if not p)

    @cached_property
    def is_cyclic(self) -> bool:
        return int(self.element_orders.max()) == self.n

    @cached_property
    def order_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.element_orders, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}


def _check_latin(table: np.ndarray) -> None:
    n = table.shape[0]
    target = np.arange(n)
    for kind, mat in (("row", table), ("column", table.T)):
        srt = np.sort(mat, axis=1)
        bad = np.flatnonzero((srt != target).any(axis=1))
        if len(bad):
            i = int(bad[0])
            vals, counts = np.unique(mat[i], return_counts=True)
            rep = vals[counts > 1]
            detail = f"repeated entry {int(rep[0])}" if len(rep) else "entry out of range"
            raise NotLatinSquare(kind, i, detail)


def validate_group(table, name: str = "", check_associativity: bool = True) -> FiniteGroup:
    """Validate a Cayley table and return it normalized so the identity is 0.

    Raises NotLatinSquare, NoIdentity or NotAssociative, naming the first
    offending row/column or triple (in the caller's original labelling).
    """
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotLatinSquare("row", 0, f"table must be a non-empty square array, got shape {t.shape}")
    t = t.astype(np.int64)
    n = t.shape[0]
    _check_latin(t)
    idx = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)]
    if not ids:
        raise NoIdentity("no element acts as a two-sided identity")
    if check_associativity:
        if n > ASSOCIATIVITY_CHECK_LIMIT:
            raise ValueError(f"associativity check is limited to n <= {ASSOCIATIVITY_CHECK_LIMIT}")
        bad = _kernels.first_nonassociative(t)
        if bad is not None:
            raise NotAssociative(bad)
    e = ids[0]
    if e != 0:
        perm = idx.copy()
        perm[0], perm[e] = e, 0  # an involution, so it is its own inverse
        t = perm[t[np.ix_(perm, perm)]]
    return FiniteGroup(t, name)


def element_order(G: FiniteGroup, x: int) -> int:
    return int(G.element_orders[x])


def cyclic_subgroup(G: FiniteGroup, x: int) -> CyclicSubgroup:
    return G.cyclic_subgroup(x)


def maximal_cyclic_subgroups(G: FiniteGroup) -> tuple[CyclicSubgroup, ...]:
    return G.maximal_cyclic_subgroups


def difference_d(M: CyclicSubgroup, N: CyclicSubgroup) -> int:
    """min(|M \\ N|, |N \\ M|)."""
    common = len(M.element_set & N.element_set)
    return min(M.order - common, N.order - common)


def difference_number(G: FiniteGroup) -> int:
    """Maximum of :func:`difference_d` over pairs of maximal cyclic subgroups.

    Zero for cyclic groups, where there is only one maximal cyclic subgroup.
    """
    return max((difference_d(M, N) for M, N in combinations(G.maximal_cyclic_subgroups, 2)), default=0)


def difference_pair(G: FiniteGroup) -> tuple[CyclicSubgroup, CyclicSubgroup] | None:
    """A pair attaining the difference number, or None for cyclic groups."""
    best = None
    for M, N in combinations(G.maximal_cyclic_subgroups, 2):
        d = difference_d(M, N)
        if best is None or d > best[0]:
            best = (d, M, N)
    return None if best is None else (best[1], best[2])


def count_subgroups_of_order_p(G: FiniteGroup, p: int) -> int:
    if not isprime(p):
        raise PNotPrime(f"{p} is not prime")
    if G.n % p:
        raise PDoesNotDivideOrder(f"{p} does not divide |G| = {G.n}")
    return int((G.element_orders == p).sum()) // (p - 1)


def is_p_group(G: FiniteGroup) -> int | None:
    """The prime p when |G| = p^k with k >= 1, else None (also for |G| = 1)."""
    f = factorint(G.n)
    if len(f) == 1:
        return int(next(iter(f)))
    return None


def is_generalized_quaternion(G: FiniteGroup) -> bool:
    # a non-cyclic 2-group with a unique involution is generalized quaternion
    n = G.n
    if n < 8 or n & (n - 1):
        return False
    return not G.is_cyclic and int((G.element_orders == 2).sum()) == 1


def all_cyclic_subgroups_prime_power(G: FiniteGroup) -> bool:
    return all(o == 1 or len(factorint(int(o))) == 1 for o in np.unique(G.element_orders))


def euler_phi(n: int) -> int:
    return int(totient(n))
