"""Strictly traceless (s-form) geometry, the s-plectic group Ap(n), and the
D=2 isotropic oscillator under Euclidean, hyperbolic and s-form metrics."""

from .ap_group import (
    GroupElement,
    ap1_generator_A,
    ap1_generator_B,
    antidiag_family,
    check_block_conditions,
    diag_family,
    exp_into_group,
    is_algebra_element,
    is_ap_member,
)
from .exceptions import (
    DegenerateFormError,
    DimensionError,
    NoRationalNullVectorError,
    NotAnSSpaceError,
    NotClosedError,
    SplecticError,
)
from .mechanics import Metric, OscillatorParams, PhasePoint, Trajectory, simulate
from .observables import (
    AlgebraType,
    QuadraticObservable,
    check_identity,
    classify_algebra,
    conserved_under,
    jhf_components,
    poisson_bracket,
    structure_constants,
)
from .sform import (
    BilinearForm,
    SSpace,
    Subspace,
    SubspaceType,
    classify_subspace,
    evaluate,
    orthogonal_complement,
    signature,
    standard_sform,
    standardize,
)

__version__ = "0.1.0"
