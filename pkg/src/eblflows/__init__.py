"""Two-country OLG asset pricing with experience-based learning.

Closed-form linear-equilibrium prices, cohort and aggregate portfolio
holdings, shock experiments and Monte Carlo simulation, plus the panel
econometrics used to take the model's capital-flow predictions to data.
"""

from .beliefs import (
    PosteriorBelief,
    WeightProfile,
    belief_weights,
    posterior_gaussian,
    posterior_general,
)
from .demands import (
    AggregateHoldings,
    CohortHoldings,
    CohortId,
    aggregate_demand,
    cohort_demand,
    cohort_holdings_closed_form,
    riskfree_demand,
)
from .equilibrium import (
    AssetLoadings,
    ExcessPayoff,
    PriceLoadings,
    full_info_price,
    market_clearing_residual,
    muc_residuals,
    price,
    solve_price_loadings,
)
from .params import (
    ConfigError,
    DataError,
    Demographics,
    EblflowsError,
    EquilibriumError,
    ModelParams,
    ParameterError,
    PriorSpec,
)
from .simulation import (
    ComparativeStatics,
    EconomyPath,
    MonteCarloResult,
    ShockFlows,
    ShockScenario,
    Thresholds,
    apply_shock,
    demographic_derivatives,
    find_thresholds,
    flow_sensitivity,
    flow_sensitivity_kernel,
    monte_carlo_home_bias,
    simulate_path,
)

__version__ = "0.1.0"
