"""
Optimal bond weight with and without limited liability
======================================================

Without limited liability the bank is risk neutral and sits on the weight
cap implied by the expected-loss budget. With it, the power-utility proxy
gives an interior weight that grows toward maturity and hits the cap.
"""
from llbank import UtilitySpec, capital_path, el_cap_delta, policy_path
from llbank.config import load_config
from llbank.utility_approx import best_gamma

cfg = load_config()
v, m, c = cfg.vasicek, cfg.market, cfg.credit

delta = el_cap_delta(c)
print(f"weight cap delta = {delta:.6f}")

gamma = best_gamma(cfg.liability).gamma_star
ll = policy_path(UtilitySpec.power(gamma), v, m, c, n_steps=11)
noll = policy_path(UtilitySpec.linear(), v, m, c, n_steps=11)

print(" t     pi_LL    pi_noLL  capital_LL")
for t, a, b, k in zip(ll.times, ll.weights, noll.weights, capital_path(ll, c)):
    print(f"{t:.1f}  {a:8.5f}  {b:8.5f}  {k:8.5f}")

fine = policy_path(UtilitySpec.power(gamma), v, m, c, n_steps=1001)
print(f"cap binds from t = {fine.plateau_time():.3f}")
