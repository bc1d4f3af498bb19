"""
Distance to default along the two policies
==========================================

Portfolio volatility is the bond weight times the bond volatility. Higher
volatility lowers the distance to default, so the more cautious
limited-liability policy is safer until it reaches the cap.
"""
import numpy as np

from llbank import DDQuery, UtilitySpec, dd_series, dd_sigma_sensitivity, distance_to_default, policy_path
from llbank.config import load_config
from llbank.utility_approx import best_gamma

cfg = load_config()
v, m, c = cfg.vasicek, cfg.market, cfg.credit
d = cfg.require_debt_face()

q = DDQuery(v_a=1.0, d=d, mu=0.28, sigma=0.75, t=1.0)
print(f"single query DD = {distance_to_default(q):.6f}")
print(f"dDD/dsigma = {dd_sigma_sensitivity(q, v.long_run_mean):.4f}")

gamma = best_gamma(cfg.liability).gamma_star
ll = dd_series(policy_path(UtilitySpec.power(gamma), v, m, c, 201), v, m, d)
noll = dd_series(policy_path(UtilitySpec.linear(), v, m, c, 201), v, m, d)

gap = ll.dd_values - noll.dd_values
print(f"DD gap LL - noLL: max {gap.max():.4f}, min {gap.min():.2e}")
print("LL never below noLL:", bool(np.all(gap >= -1e-12)))
