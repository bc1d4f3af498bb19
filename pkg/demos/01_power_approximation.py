"""
Approximating the limited-liability payoff by a power function
==============================================================

A bank that walks away below wealth ``F`` receives ``max(F, x)``. We look
for the exponent ``gamma`` that makes ``x**gamma`` closest to that payoff
in L2 on ``[0, B]``.
"""
import numpy as np

from llbank import LiabilityBounds, best_gamma, l2_error, l2_error_dgamma
from llbank.config import load_config

cfg = load_config()
lb = cfg.liability
print(f"F = {lb.F}, B = {lb.B}")

# the error curve is smooth and has a single interior minimum
gammas = np.linspace(0.02, 1.0, 50)
errs = l2_error(lb, gammas)
print("coarse minimum near gamma =", gammas[np.argmin(errs)])

res = best_gamma(lb)
print(f"gamma* = {res.gamma_star:.6f}, squared error {res.err_at_min:.6g}")

# slope is negative on the left of gamma* and positive on the right
for g in (0.05, res.gamma_star, 0.9):
    print(f"  dErr/dgamma at {g:.4f}: {l2_error_dgamma(lb, g):+.3e}")

# a wider net-worth cap pushes gamma* toward linear utility
for B in (1.2, 2.0, 3.0):
    print(f"B = {B}: gamma* = {best_gamma(LiabilityBounds(lb.F, B)).gamma_star:.4f}")
