"""Computable layer of complexity-one torus actions on symplectic linear
models: exact lattice and cone criteria for quadratic moment maps,
monomial characters of complexity-one subgroups, exceptional-orbit
classification, trivialization checks, pushforward density estimation,
and root-system ball-packing certificates for coadjoint orbits.
"""

from .coadjoint import (
    BallCertificate,
    PackingReport,
    RootSystem,
    RootSystemOrbit,
    WeylElement,
    ball_certificate,
    build_root_system,
    full_packing_report,
    isotropy_weights_at,
    moment_polytope,
    weyl_orbit,
)
from .dh import DHEstimate, dh_estimate
from .errors import (
    ComplexityNotOne,
    DegenerateGrid,
    DimensionMismatch,
    DomainError,
    ExactnessFailure,
    ExceptionalPoint,
    IneffectiveRepresentation,
    InputError,
    InvalidRank,
    NotComplexityOne,
    NotNonProper,
    PointNotFixed,
    PointNotInOrbit,
)
from .lattice import (
    ConeFeasibility,
    ConeMembership,
    IntMatrix,
    cone_member,
    exists_sign_relation,
    invariant_factors,
    lattice_kernel,
    ratvec,
    smith_normal_form,
    solve_integer,
)
from .local_model import (
    FiberKind,
    LocalModel,
    MomentImage,
    QuotientPoint,
    SheetMembership,
    classify_fiber,
    exceptional_sheet_member,
    fiber_orbit_check,
    moment_image,
    submersion_check,
    submersion_scan,
    surjectivity_check,
    trivializing_map,
)
from .rep import (
    DefiningPolynomial,
    Splitting,
    StabilizerInfo,
    SubtorusRep,
    defining_polynomial,
    is_exceptional_orbit,
    is_onto,
    is_proper,
    moment_eval,
    split,
    stabilizer,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
