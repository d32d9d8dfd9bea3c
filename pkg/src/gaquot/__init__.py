"""Exact polynomial algebra for additive-group quotients of affine space.

Layered API: sparse rational polynomials (poly), a Groebner engine
(groebner), locally nilpotent derivations and their kernels
(derivations), the family constructions with their verification battery
(families), and a batch CLI (cli).
"""

from .derivations import (
    Derivation,
    SliceData,
    exp_action,
    fixed_point_ideal,
    is_invariant,
    is_locally_nilpotent,
    kernel_linear,
    kernel_saturation,
    load_derivation_file,
    lower_triangular_derivation,
    make_slice,
)
from .errors import (
    GaquotError,
    IterationCapError,
    MissingAssignmentError,
    NonzeroConstantError,
    NotHypersurfaceError,
    NotLocallyNilpotentError,
    NotUnivariateError,
    ParseError,
    RepeatedRootsError,
    ResourceCapError,
    RingMismatchError,
    RoundCapError,
    UnitIdealError,
    UnknownVariableError,
    ZeroPolynomialError,
)
from .families import (
    ConstructionArtifacts,
    Dims,
    FamilySpec,
    KTheoryRanks,
    VerificationReport,
    boundary_analysis,
    build_family,
    check_affine_space,
    check_freeness,
    check_invariance,
    check_smooth,
    check_stability,
    invariant_presentation,
    k_theory_ranks,
    run_battery,
    validate_family_spec,
    w_restriction,
)
from .groebner import (
    DEFAULT_CAPS,
    GroebnerBasis,
    Ideal,
    ResourceCaps,
    TermOrder,
    buchberger,
    divide_exact,
    eliminate,
    ideal_membership,
    is_unit_ideal,
    krull_dimension,
    load_ideal_file,
    normal_form,
    saturate,
    subalgebra_membership,
)
from .poly import (
    Polynomial,
    VarSet,
    gcd_univariate,
    is_squarefree,
    jacobian,
    monic,
    parse,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
