"""Betti curves and integral Betti signatures of symmetric matrices."""

__version__ = "0.1.0"

from .errors import (
    BettisigError,
    BudgetExceededError,
    ConstantSeriesError,
    DimOutOfRangeError,
    InvalidModuleCountError,
    LengthExceedsDataError,
    LengthMismatchError,
    NonFiniteEntryError,
    NonPositivePriceError,
    NumericalDomainError,
    ParseError,
    PreprocessingError,
    TooLargeError,
)
from .filtration import EdgeSet, OrderComplex, build_order_complex, graph_at_density
from .homology import (
    BettiCurve,
    FlagFiltration,
    betti_brute_force,
    betti_curves,
    connected_components_curve,
    default_grid,
    enumerate_cliques,
)
from .matrices import (
    SymmetricMatrix,
    TimeSeriesSet,
    ValidationReport,
    distance_matrix_from_series,
    log_returns,
    normalize_series,
    pearson_correlation,
    validate,
)
from .modularity import ModularConfig, generate_modular_series, modularity_sweep
from .rng import make_rng
from .samplers import (
    HyperbolicParams,
    PointCloud,
    distance_matrix,
    random_correlation,
    random_symmetric,
    sample_cube,
    sample_hyperbolic,
    sample_sphere,
)
from .signature import (
    IntegralBettiSignature,
    SignatureConfig,
    auc,
    curve_of_matrix,
    signature_of_curve,
    signature_of_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
