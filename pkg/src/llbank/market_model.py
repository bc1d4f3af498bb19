"""Vasicek short rate, risky zero-coupon bond, and wealth SDE coefficients.

The short rate follows ``dr = (theta_v - alpha r) dt + b dW`` and the risky
bond maturing at ``T1`` has drift ``r + zeta sigma(t)`` and volatility

    sigma(t) = (b / alpha) (1 - exp(-alpha (T1 - t))).

Everything here is a pure function of its arguments. Time arguments accept
scalars or numpy arrays.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

import numpy as np


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class VasicekParams:
    """Short-rate dynamics ``dr = (theta_v - alpha r) dt + b dW``."""

    alpha: float
    theta_v: float
    b: float

    def __post_init__(self) -> None:
        for name in ("alpha", "theta_v", "b"):
            _finite(name, getattr(self, name))
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.theta_v < 0:
            raise ValueError(f"theta_v must be >= 0, got {self.theta_v}")
        if self.b < 0:
            raise ValueError(f"b must be >= 0, got {self.b}")

    @property
    def long_run_mean(self) -> float:
        return self.theta_v / self.alpha


@dataclass(frozen=True)
class MarketParams:
    """Risk premium, bond maturity, decision horizon and initial short rate.

    ``r0=None`` resolves to the stationary mean of the rate model via
    :meth:`initial_rate`.
    """

    zeta: float
    T1: float
    T: float
    r0: float | None = field(default=None)

    def __post_init__(self) -> None:
        for name in ("zeta", "T1", "T"):
            _finite(name, getattr(self, name))
        if self.r0 is not None:
            _finite("r0", self.r0)
        if not self.T > 0:
            raise ValueError(f"T must be > 0, got {self.T}")
        if not self.T1 > self.T:
            raise ValueError(f"T1 must exceed T (T1 > T > 0), got T1={self.T1}, T={self.T}")

    def initial_rate(self, v: VasicekParams) -> float:
        return v.long_run_mean if self.r0 is None else self.r0


def _check_time(t, upper: float, name: str = "t"):
    if isinstance(t, numbers.Real):
        tf = float(t)
        if not 0 <= tf <= upper:  # also rejects nan
            raise ValueError(f"{name} must lie in [0, {upper}], got {t!r}")
        return tf
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(t_arr < 0) or np.any(t_arr > upper):
        raise ValueError(f"{name} must lie in [0, {upper}], got {t!r}")
    return t_arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def bond_volatility(p: VasicekParams, m: MarketParams, t):
    """Volatility of the risky bond at time ``t``, zero at maturity ``T1``."""
    t = _check_time(t, m.T1)
    if isinstance(t, float):
        return p.b / p.alpha * -math.expm1(-p.alpha * (m.T1 - t))
    return _out(p.b / p.alpha * -np.expm1(-p.alpha * (m.T1 - t)))


def bond_drift(p: VasicekParams, m: MarketParams, r, t):
    """Bond drift ``r + zeta * sigma(t)``."""
    r_arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r_arr)):
        raise ValueError("r must be finite")
    return _out(r_arr + m.zeta * np.asarray(bond_volatility(p, m, t)))


def wealth_drift_diffusion(
    p: VasicekParams, m: MarketParams, x, r, pi, t
) -> tuple:
    """Drift and diffusion coefficients of ``dX``.

    Returns
    -------
    drift, diffusion
        ``x (pi zeta sigma(t) + r)`` and ``x pi sigma(t)``.
    """
    x_arr, r_arr, pi_arr = (np.asarray(a, dtype=float) for a in (x, r, pi))
    for name, a in (("x", x_arr), ("r", r_arr), ("pi", pi_arr)):
        if not np.all(np.isfinite(a)):
            raise ValueError(f"{name} must be finite")
    if np.any(x_arr < 0):
        raise ValueError("wealth x must be >= 0")
    sig = np.asarray(bond_volatility(p, m, _check_time(t, m.T)))
    drift = x_arr * (pi_arr * m.zeta * sig + r_arr)
    diffusion = x_arr * pi_arr * sig
    return _out(drift), _out(diffusion)


def rate_mean(p: VasicekParams, r0: float, t):
    """Exact ``E[r(t)]`` given ``r(0) = r0``."""
    decay = np.exp(-p.alpha * np.asarray(t, dtype=float))
    return _out(r0 * decay + p.long_run_mean * (1 - decay))


def rate_variance(p: VasicekParams, t):
    """Exact ``Var[r(t)] = b^2 (1 - e^{-2 alpha t}) / (2 alpha)``."""
    t_arr = np.asarray(t, dtype=float)
    return _out(p.b**2 * -np.expm1(-2 * p.alpha * t_arr) / (2 * p.alpha))
