"""quadwalks: exact asymptotics of orbit-summable orthant lattice walks.

Given a weighted step set whose group is finite and whose alternating
orbit sum certifies against brute-force counting, the engine computes the
full asymptotic expansion

    q(A, B; n) = gamma^n / n^c [ sum_p v_p(A, B) T(n) / n^p + O(n^-m) ]

to arbitrary order with exact (rational / radical, pi-scaled)
coefficients, proves each v_p discrete polyharmonic, and decomposes the
bivariate coefficients over ladder bases of polyharmonic functions.
"""

from .errors import (
    DecompositionInfeasible,
    DegenerateModel,
    DegreeBoundViolated,
    EngineInconsistency,
    GroupInfinite,
    NonUnitConstantTerm,
    NonzeroDrift,
    NoSolutionWithinDegreeBound,
    NotOrbitSummable,
    NotPositiveDefinite,
    NotSmallSteps,
    NumeratorSingularAtSaddle,
    ParseError,
    PoleAtPoint,
    PrecisionInsufficient,
    QuadwalksError,
)
from .field import Ball, ComplexExact, Rad, RootOfUnity, ScaledCoefficient
from .laurent import LaurentPoly, RatFunc
from .series import GradedSeries
from .model import (
    Model,
    Step,
    check_nondegenerate,
    correlation_coefficient,
    cramer_transform,
    diagnose,
    drift,
    load_model,
    parse_model,
    periodicity,
    reverse,
    serialize_model,
    step_polynomial,
)
from .group import (
    GroupElement,
    OrbitSum,
    certify_orbit_summable,
    generators,
    group_closure,
    kernel,
    orbit_sum,
)
from .saddle import (
    QForm,
    SaddleSystem,
    Twist,
    associated_saddles,
    find_dominant,
    local_qform,
    numerator_regular_at,
    saddle_system,
)
from .expansion import (
    AsymptoticExpansion,
    MultivariateExpansion,
    assemble_expansion,
    expand_from_start,
    gaussian_moment,
    interpolate_vp,
    parse_expansion,
)
from .polyharmonic import (
    Decomposition,
    PolyBasis,
    PolyharmonicFn,
    apply_adjoint_laplacian,
    apply_laplacian,
    build_basis,
    conjugate_by_cramer,
    decompose,
    leading_homogeneous,
    verify_multivariate_polyharmonic,
    verify_polyharmonic,
)
from .oracle import ConvergenceReport, CountTable, convergence_diagnostics, count_paths
from . import corpus, reference_data

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
