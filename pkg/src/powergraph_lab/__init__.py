"""Power graphs of finite groups and their (cyclic) vertex connectivity."""

__version__ = "0.1.0"

from .connectivity import (
    INFINITE,
    ConnectivityReport,
    brute_force_ckappa,
    brute_force_kappa,
    connectivity_report,
    cyclic_vertex_connectivity,
    cyclically_separable,
    edge_connectivity,
    min_degree,
    min_vertex_cut_between_sets,
    vertex_connectivity,
)
from .families import FamilySpec, build, catalog, parse_family, read_cayley_table, write_cayley_table
from .graph import Graph, components
from .groups import (
    CyclicSubgroup,
    FiniteGroup,
    difference_d,
    difference_number,
    is_generalized_quaternion,
    is_p_group,
    maximal_cyclic_subgroups,
    validate_group,
)
from .powergraph import enhanced_power_graph, power_graph, punctured
from .theorems import lemma_suite, remark_verify, survey, thm1_verify, thm2_verify
