"""First homology of finite graphs and invariant distributions on the
boundary of the universal covering tree, computed exactly."""

from .coefficients import CoefficientGroup, Z, Zmod
from .cover import ClopenSet, CoverSlice, check_additivity, complement, cone_measure, expand, measure_clopen, refine
from .distributions import (
    Distribution,
    check_diagram,
    check_prop_k,
    check_prop_L3,
    enumerate_invariant,
    from_cycle,
    ker_T_minus_I,
    to_cycle,
    transfer_matrix,
    validate,
)
from .graph import Graph, euler_characteristic, min_degree, parse_graph
from .homology import Chain, boundary_matrix, h1_basis_Z, h1_elements, is_cycle, parse_chain
from .linalg import integer_kernel_basis, kernel_mod, smith_normal_form

__version__ = "0.1.0"
