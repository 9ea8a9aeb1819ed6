"""Symbolic and numeric verification of twisted Jacobi, twisted contact and
homogeneous twisted Poisson structures on coordinate charts, with groupoid
multiplicativity checks and A-path cocycle integration."""

from .expr import (
    Chart,
    EvalError,
    Expr,
    ExprError,
    ParseError,
    Verdict,
    is_zero,
    parse,
    sample_points,
)
from .report import CheckItem, CheckReport, scalar_zero_verdict, tensor_zero_verdict
from .tensor import (
    Form,
    MultiVec,
    PairForm,
    PairVec,
    ProjectabilityFailure,
    SmoothMap,
    differential,
    ext_d,
    interior,
    lie,
    pair_sharp,
    pullback,
    pushforward_diffeo,
    pushforward_projection,
    schouten,
    sharp,
    sharp1,
    sharp_tensor,
    wedge,
)
from .jacobi import (
    CotangentModel,
    HomTwistedPoisson,
    ProjectionAlongE,
    TwistedJacobi,
    TwistedPoisson,
    algebroid_anchor,
    algebroid_bracket,
    bracket,
    check_algebroid,
    check_homogeneous,
    check_twisted_jacobi,
    conformal,
    cotangent_twisted_symplectic,
    hamiltonian,
    jacobi_anomaly,
    poissonize,
    project_along_E,
    project_homogeneous,
)
from .contact import (
    TwistedContact,
    check_contact,
    contact_bivector,
    contact_poissonization_check,
    jacobi_from_contact,
    reeb,
    splitting_rank_check,
)
from .groupoid import (
    GroupoidModel,
    SuspendedModel,
    base_coincidence_check,
    build_pair_groupoid,
    check_algebroid_morphism,
    check_axioms,
    check_multiplicativity,
    check_properties,
    induced_base_structure,
    strip_suspension,
    suspend,
)
from .apath import (
    APath,
    anchor_residual,
    cocycle_integral,
    concatenate,
    path_from_exprs,
    reparameterize,
)
from .scenario import Scenario, ScenarioError, derive, load, loads, run

__version__ = "1.0.0"
