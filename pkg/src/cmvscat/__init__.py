"""Scattering transforms for banded unitary (CMV) operators.

Inverse scattering takes a contractive boundary function to its
Verblunsky coefficients through defect-vector computations in a
weighted two-component space; direct scattering reconstructs the
boundary function from the banded operator through a resolvent bilinear
form. A dense-quadrature oracle and an invariant harness certify both
directions.
"""

from .circle import (
    CircleGrid,
    LaurentSeries,
    OuterFunction,
    ScatteringFunction,
    SzegoReport,
    analyze,
    harmonic_extension,
    outer_factor,
    synthesize,
    szego_check,
)
from .cmv import CmvMatrix, apply, apply_adjoint, build_cmv, resolvent_solve, unitarity_defect
from .config import RunConfig
from .lrspace import (
    DefectPair,
    GeneratorFrame,
    GramBlocks,
    LrElement,
    converged_defect_pair,
    defect_pair,
    evaluate,
    generator,
    gram_matrix,
    inner_product,
    shift,
)
from .oracle import QuadratureSpace, oracle_inner, oracle_verblunsky, quadrature_space
from .scattering import (
    WanderingApprox,
    asymptotics_check,
    boundary_reconstruction,
    direct_scattering,
    roundtrip,
    wandering_vectors,
)
from .spectral import (
    SigmaBlocks,
    SpectralDensity,
    change_basis_density,
    moment_check,
    sigma_blocks,
    sigma_recursion_check,
    spectral_density,
)
from .verblunsky import (
    SchurFunction,
    VerblunskySequence,
    alpha_from_defects,
    convergence_report,
    inverse_scattering,
    recover_omega,
    schur_step,
)

__version__ = "0.1.0"
