"""Higher-order nonclassicality witnesses for cat states and the
Gaussian-weighted continuous superposition of coherent states."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AnnihilatedStateError,
    ConsistencyError,
    DomainError,
    TruncationError,
    TruncationWarning,
)
from .fock import FockVector  # noqa: E402
from .moments import (  # noqa: E402
    CatMoments,
    FockMoments,
    MomentProvider,
    SqueezedMoments,
    cat_moment,
    provider_for,
    rotate,
    squeezed_moment,
)
from .states import (  # noqa: E402
    CatParams,
    NonGaussianOp,
    SqueezedParams,
    apply_non_gaussian,
    cat_fock,
    squeezed_vacuum_fock,
)
from .witnesses import (  # noqa: E402
    WitnessResult,
    hillery2,
    hillery_general,
    hoa,
    hong_mandel,
    hosps,
)

__all__ = [
    "AnnihilatedStateError", "ConsistencyError", "DomainError", "TruncationError",
    "TruncationWarning", "FockVector", "CatMoments", "FockMoments", "MomentProvider",
    "SqueezedMoments", "cat_moment", "provider_for", "rotate", "squeezed_moment",
    "CatParams", "NonGaussianOp", "SqueezedParams", "apply_non_gaussian", "cat_fock",
    "squeezed_vacuum_fock", "WitnessResult", "hillery2", "hillery_general", "hoa",
    "hong_mandel", "hosps",
]
