"""Valid support tuples over an interval space, their lattices, and noncrossing partitions."""

from .core import Box, Interval, Parity, Space, box_parity, enumerate_intervals, maximal_box
from .correspondence import (
    TwoBlockDecomposition,
    box_union_meet,
    interval_to_two_block,
    ncp_lattice,
    plocal_lattice,
    product_lattice,
    psi,
    psi_inverse,
    separating_decomposition,
)
from .lattice import FiniteLattice, are_isomorphic, direct_product, is_distributive, is_self_dual
from .ncp import (
    NoncrossingPartition,
    catalan,
    enumerate_ncp,
    is_noncrossing,
    kreweras_complement,
    refinement_leq,
)
from .supports import (
    FgGroup,
    PLocalTuple,
    SpectrumSet,
    SupportTuple,
    brute_force_valid_plocal,
    enumerate_valid_plocal,
    is_valid,
    is_valid_plocal,
    supp_of_group,
    tuple_from_generators,
    u_from_v,
    v_from_u,
)

__all__ = [
    "Box",
    "FgGroup",
    "FiniteLattice",
    "Interval",
    "NoncrossingPartition",
    "PLocalTuple",
    "Parity",
    "Space",
    "SpectrumSet",
    "SupportTuple",
    "TwoBlockDecomposition",
    "are_isomorphic",
    "box_parity",
    "box_union_meet",
    "brute_force_valid_plocal",
    "catalan",
    "direct_product",
    "enumerate_intervals",
    "enumerate_ncp",
    "enumerate_valid_plocal",
    "interval_to_two_block",
    "is_distributive",
    "is_noncrossing",
    "is_self_dual",
    "is_valid",
    "is_valid_plocal",
    "kreweras_complement",
    "maximal_box",
    "ncp_lattice",
    "plocal_lattice",
    "product_lattice",
    "psi",
    "psi_inverse",
    "refinement_leq",
    "separating_decomposition",
    "supp_of_group",
    "tuple_from_generators",
    "u_from_v",
    "v_from_u",
]
