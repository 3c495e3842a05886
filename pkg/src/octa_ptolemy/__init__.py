"""Octahedral developing of knot complements: gluing equations in segment and
region variables, Ptolemy data, and holonomy invariants."""

from .diagram import CrossingFrame, Diagram, DiagramError, local_frames, parse_pd, under_pass_order
from .gluing import (
    Assignment,
    GluingSystem,
    NondegeneracyError,
    T4DegenerateError,
    build_system,
    build_t4_system,
    build_t5_system,
    check_nondegenerate,
    log_derivatives,
    residuals,
)
from .invariants import (
    complex_volume,
    cusp_shape,
    invariant_report,
    obstruction_class,
    peripheral_holonomy,
    tetra_shapes,
    tetra_volume_oracle,
    verify_wirtinger,
    wirtinger_matrices,
)
from .projmat import ProjMat2
from .ptolemy import (
    graph_parameters,
    ptolemy_consistency_check,
    scaling_parameters,
    short_edge_table,
    sigma_at_crossing,
)
from .solver import SolverConfig, newton_solve, search_solutions
from .specfun import bloch_wigner, dilog, principal_sqrt

__version__ = "0.1.0"
