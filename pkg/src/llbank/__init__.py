"""Bank portfolio choice with and without limited liability.

Vasicek short rate, a risky zero-coupon bond, an expected-loss cap on the
bond weight, a power-utility approximation of the limited-liability payoff,
HJB verification of the closed-form policy, KMV distance to default and a
seeded Monte Carlo engine.
"""
from .credit_metrics import DDQuery, DDSeries, dd_series, dd_sigma_sensitivity, distance_to_default
from .hjb_verification import (
    HamiltonianSlice,
    ValueFunctionProbe,
    VerificationError,
    VerificationReport,
    grid_argmax,
    hamiltonian_slice,
    verify_policy,
)
from .market_model import (
    MarketParams,
    VasicekParams,
    bond_drift,
    bond_volatility,
    rate_mean,
    rate_variance,
    wealth_drift_diffusion,
)
from .optimal_policy import (
    CreditParams,
    PolicyPath,
    UtilitySpec,
    beta,
    capital_path,
    el_cap_delta,
    optimal_weight,
    policy_path,
    unconstrained_weight,
)
from .simulation import (
    LimitedLiabilityPayoff,
    SimConfig,
    SimResult,
    compare_policies,
    simulate_rate_path,
    simulate_terminal_rates,
    simulate_wealth,
)
from .utility_approx import (
    GammaResult,
    GammaSearchError,
    LiabilityBounds,
    best_gamma,
    l2_error,
    l2_error_dgamma,
    lemma_g,
)

__version__ = "0.1.0"
