"""
Monte Carlo comparison of policies
==================================

The closed-form policy maximises expected ``X(T)**gamma``, so with common
random numbers it should beat constant weights on that criterion. The raw
payoff ``max(F, X(T))`` is convex and unbounded above, so on that scale
extra risk always looks attractive; the power proxy is what tempers it.
"""
from dataclasses import replace

from llbank import LimitedLiabilityPayoff, PolicyPath, UtilitySpec, compare_policies, policy_path
from llbank.config import load_config
from llbank.utility_approx import best_gamma

cfg = load_config()
v, m, c = cfg.vasicek, cfg.market, cfg.credit
sim = replace(cfg.sim, n_paths=40_000, antithetic=True)
F = cfg.liability.F

u = UtilitySpec.power(best_gamma(cfg.liability).gamma_star)
policies = {"LL": policy_path(u, v, m, c, sim.n_steps + 1)}
for w in (0.3, 0.5, 0.7):
    policies[f"const {w}"] = PolicyPath.constant(w, m.T)

print(f"ranked by E[X_T^{u.gamma:.4f}]")
for label, res in compare_policies(v, m, policies, u, sim, F=F, n_workers=4):
    print(f"  {label:10s} {res.mean_utility:.5f} +- {res.std_error:.1e}  P(X_T < F) = {res.fraction_below_F:.3f}")

print("ranked by E[max(F, X_T)]")
for label, res in compare_policies(v, m, policies, LimitedLiabilityPayoff(F), sim, n_workers=4):
    print(f"  {label:10s} {res.mean_utility:.5f} +- {res.std_error:.1e}")
