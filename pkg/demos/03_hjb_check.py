"""
Checking the closed-form weight against the Hamiltonian
=======================================================

Plugging the value-function ansatz into the generator leaves a parabola in
the weight. A brute-force grid maximiser should land within one grid step
of the clamped closed form at every date.
"""
from llbank import UtilitySpec, el_cap_delta, verify_policy
from llbank.config import load_config
from llbank.utility_approx import best_gamma

cfg = load_config()
v, m = cfg.vasicek, cfg.market
delta = el_cap_delta(cfg.credit)
u = UtilitySpec.power(best_gamma(cfg.liability).gamma_star)

for step in (1e-2, 1e-3, 5e-4):
    rep = verify_policy(u, v, m, delta, n_times=101, grid_step=step)
    print(f"grid step {step:g}: max deviation {rep.max_deviation:.2e} at t={rep.worst_time:.2f}")

# long-only admissible set gives the same answer here since pi > 0
rep = verify_policy(u, v, m, delta, grid_step=5e-4, long_only=True)
print("long-only check passed:", rep.passed)
