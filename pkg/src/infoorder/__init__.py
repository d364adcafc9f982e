"""Information orders on probability distributions and density matrices."""

from .classical import (
    ORDER_TOL,
    ComparisonResult,
    OrderKind,
    OrderSpec,
    RioParams,
    compare,
    leq_bayesian,
    leq_lowner_minus_simplex,
    leq_lowner_plus_simplex,
    leq_majorization,
    leq_max_restricted,
    leq_min_restricted,
    leq_rio,
    order_property_suite,
    preset_rio,
    random_rio_params,
)
from .density import (
    DensityOperator,
    PositiveOperator,
    bottom_density,
    embed_diagonal,
    make_density,
    make_positive,
    pure_state,
    tensor,
)
from .density_orders import (
    DensityOrderKind,
    ExtensionKind,
    composition_suite,
    density_compare,
    density_leq,
    leq_extension,
    leq_loewner,
    leq_minus_density,
    leq_plus_density,
    unitary_invariance_suite,
)
from .domain import (
    Counterexample,
    NoCounterexample,
    NoJoinEvidence,
    chain_join,
    dcpo_max_counterexample,
    way_below_probe,
)
from .entailment import (
    SimWeights,
    WordVectorStore,
    cosine_similarity,
    graded_leq_classical,
    graded_loewner,
    kl_and_representativeness,
    load_vectors,
    max_grade,
    sim_classical,
    sim_density,
    smooth_leq,
    to_density,
    to_distribution,
)
from .errors import InfoOrderError
from .measurements import MeasurementKind, monotonicity_report, mu_minus, mu_plus, shannon_entropy
from .reports import PropertyReport
from .simplex import (
    Distribution,
    MonotoneDistribution,
    Permutation,
    bottom,
    make_distribution,
    mix,
    monotone_retraction,
    top,
)

__version__ = "0.1.0"
