"""Exact Cech cohomology of locally free sheaves on split projective superspaces."""

from .cech import (
    AUTO,
    CechComplex,
    CohomologyTable,
    auto_window,
    build_split_complex,
    cohomology,
    window_stability_check,
)
from .classify import (
    Connection,
    ObstructionLadder,
    SplittingCertificate,
    Theorem7Report,
    atiyah_obstruction,
    construct_connection,
    curvature,
    ladder,
    reduce_cocycle,
    theorem7_check,
    wedge_connection,
)
from .coeffs import EVEN, ODD, GradedCoefficient
from .geometry import ChartModel, SuperSpace, TwistList, bott_dim, structure_sheaf_component
from .gluing import (
    SPLIT_REPRESENTATIVE,
    EndomorphismCochain,
    GluingCocycle,
    GradedMatrix,
    exp,
    identity_cocycle,
    lambda_p,
    log,
    mu_k,
    order,
    twisted_complex,
)
from .sheaves import (
    SheafDescriptor,
    descriptor,
    end_block,
    extend_descriptor,
    obstruction_dims,
    retract_decomposition,
    tangent_terms,
)
from .spectral import (
    ConvergenceReport,
    FilteredComplex,
    SpectralPage,
    Theorem8Report,
    converge,
    differential,
    page,
    theorem8_check,
)

__version__ = "0.1.0"
