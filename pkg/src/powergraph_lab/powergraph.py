"""Power graphs and enhanced power graphs of finite groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .graph import Graph
from .groups import FiniteGroup, all_cyclic_subgroups_prime_power

Kind = Literal["power", "enhanced"]


@dataclass(frozen=True)
class PowerGraph:
    graph: Graph
    group: FiniteGroup
    kind: Kind

    @property
    def adj(self) -> np.ndarray:
        return self.graph.adj


def _labels(G: FiniteGroup) -> list[str]:
    return [f"g{x}(ord {int(o)})" for x, o in enumerate(G.element_orders)]


def power_graph(G: FiniteGroup) -> PowerGraph:
    """x ~ y iff x != y and one of them lies in the cyclic subgroup of the other."""
    mem = G.membership
    adj = mem | mem.T
    np.fill_diagonal(adj, False)
    return PowerGraph(Graph(adj, _labels(G)), G, "power")


def enhanced_power_graph(G: FiniteGroup) -> PowerGraph:
    """x ~ y iff x != y and some cyclic subgroup contains both."""
    mem = G.membership.astype(np.int32)
    adj = (mem.T @ mem) > 0
    np.fill_diagonal(adj, False)
    return PowerGraph(Graph(adj, _labels(G)), G, "enhanced")


def build_graph(G: FiniteGroup, kind: Kind = "power") -> PowerGraph:
    if kind == "power":
        return power_graph(G)
    if kind == "enhanced":
        return enhanced_power_graph(G)
    raise ValueError(f"unknown graph kind {kind!r}")


def power_equals_enhanced(G: FiniteGroup) -> tuple[bool, bool]:
    """(graph-side edge-set equality, group-side prime-power criterion)."""
    equal = power_graph(G).graph == enhanced_power_graph(G).graph
    return equal, all_cyclic_subgroups_prime_power(G)


def punctured(pg: PowerGraph) -> Graph:
    """The graph with the identity vertex removed; vertex i here is element i + 1."""
    return pg.graph.delete_vertices([0])
