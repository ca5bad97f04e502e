"""Forward and half-inverse spectral problems for Sturm-Liouville
operators in quasi-derivative form with distributional potentials."""

from . import basis, forward, glm, oracle, transform
from ._backend import BACKEND
from .basis import (
    MembershipReport,
    expand,
    gram_matrix,
    local_existence_check,
    membership_check,
    psi_lambda,
    regularity_diagnostic,
)
from .core import (
    CoefficientSequence,
    GridSpec,
    Primitive,
    SampledFunction,
    SpectralSequence,
    integrate,
    l2_norm,
)
from .forward import (
    BoundaryParam,
    Eigensystem,
    Trajectory,
    characteristic,
    eigenvalues,
    norming_constants,
    shoot,
)
from .glm import (
    PhiExtension,
    ReconstructionResult,
    extend_phi,
    f_phi,
    factorization_defect,
    glm_solve,
    positivity_check,
    reconstruct,
    recover_h,
    sigma_from_kernel,
)
from .transform import (
    KernelTriangle,
    collocation_kernel,
    goursat_kernel,
    phi0,
)
from .errors import (
    BoundaryDegenerate,
    BracketFailure,
    ConfigError,
    HalfInvError,
    IllConditioned,
    NoConvergence,
    NotAnEigenvalue,
    NumericalError,
    PoleReached,
    SingularSystem,
    Unsolvable,
)

__version__ = "0.1.0"
