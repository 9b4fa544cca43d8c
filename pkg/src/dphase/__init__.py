"""Discrete s-ordered phase-space functions on odd-dimensional state spaces."""

from .coherent import coherent_overlap, coherent_state, overlap_table, vacuum, vacuum_overlap
from .continuum import ScalingFrame, convergence_sweep, gaussian_overlap_error
from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    DphaseError,
    PrecisionError,
    ValidationError,
)
from .kernel import (
    PhaseGrid,
    antismooth,
    husimi,
    kernel_family,
    map_operator,
    mapping_kernel,
    pfunction,
    reconstruct,
    smooth,
    trace_pair,
    trace_product,
    wigner,
)
from .schwinger import SpaceContext, make_space, schwinger_element
from .theta import theta2, theta3, theta4

__version__ = "0.1.0"
