"""KMV distance to default for the bank's portfolio."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .market_model import MarketParams, VasicekParams, bond_volatility
from .optimal_policy import PolicyPath


@dataclass(frozen=True)
class DDQuery:
    v_a: float
    d: float
    mu: float
    sigma: float
    t: float

    def __post_init__(self) -> None:
        for name in ("v_a", "d", "mu", "sigma", "t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.v_a <= 0:
            raise ValueError(f"asset value v_a must be > 0, got {self.v_a}")
        if self.d <= 0:
            raise ValueError(f"debt face value d must be > 0, got {self.d}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.t <= 0:
            raise ValueError(f"horizon t must be > 0, got {self.t}")


@dataclass(frozen=True)
class DDSeries:
    times: np.ndarray
    dd_values: np.ndarray
    sigma_p: np.ndarray
    mu_p: np.ndarray


def _dd(v_a, d, mu, sigma, t):
    return (np.log(v_a / d) + (mu - 0.5 * sigma**2) * t) / (sigma * np.sqrt(t))


def distance_to_default(q: DDQuery) -> float:
    """``[ln(V_A/D) + (mu - sigma^2/2) t] / (sigma sqrt(t))``."""
    return float(_dd(q.v_a, q.d, q.mu, q.sigma, q.t))


def dd_sigma_sensitivity(q: DDQuery, short_rate_view: float) -> float:
    """Total derivative of DD in ``sigma`` when the drift is ``r + sigma*zeta``.

    The premium ``zeta`` drops out, leaving

        dDD/dsigma = -[ln(V_A/D) + r t + sigma^2 t / 2] / (sigma^2 sqrt(t)),

    which is negative whenever the bracket is positive (e.g. ``V_A >= D``
    and ``r >= 0``).
    """
    r = float(short_rate_view)
    if not math.isfinite(r):
        raise ValueError("short_rate_view must be finite")
    num = math.log(q.v_a / q.d) + r * q.t + 0.5 * q.sigma**2 * q.t
    return -num / (q.sigma**2 * math.sqrt(q.t))


def dd_series(
    path: PolicyPath,
    v: VasicekParams,
    m: MarketParams,
    d: float,
    horizon_mode: Literal["fixed", "remaining"] = "fixed",
    fixed_horizon: float = 1.0,
    v_a: float = 1.0,
) -> DDSeries:
    """Distance to default along a policy path.

    At each time the portfolio volatility is ``pi(t) sigma(t)`` and the drift
    is ``r_bar + pi(t) sigma(t) zeta`` with ``r_bar = theta_v / alpha``. The
    DD horizon is ``fixed_horizon`` or the time remaining to ``T``. Points
    with zero portfolio volatility, and the terminal point in ``remaining``
    mode, are dropped.
    """
    if not (math.isfinite(d) and d > 0):
        raise ValueError(f"debt face value d must be > 0, got {d}")
    if horizon_mode not in ("fixed", "remaining"):
        raise ValueError(f"unknown horizon_mode {horizon_mode!r}")
    if horizon_mode == "fixed" and not fixed_horizon > 0:
        raise ValueError("fixed_horizon must be > 0")
    times = path.times
    sigma_p = np.abs(path.weights) * np.asarray(bond_volatility(v, m, times))
    mu_p = v.long_run_mean + path.weights * np.asarray(bond_volatility(v, m, times)) * m.zeta
    h = np.full_like(times, fixed_horizon) if horizon_mode == "fixed" else m.T - times
    keep = (sigma_p > 0) & (h > 0)
    if not keep.any():
        raise ValueError("no grid point has positive portfolio volatility and horizon")
    dd = _dd(v_a, d, mu_p[keep], sigma_p[keep], h[keep])
    return DDSeries(times[keep], dd, sigma_p[keep], mu_p[keep])
