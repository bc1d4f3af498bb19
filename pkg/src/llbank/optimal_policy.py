"""Closed-form optimal risky-bond weight under an expected-loss cap.

For power utility ``U(x) = x**gamma`` with ``0 < gamma < 1`` the
unconstrained optimal weight is

    pi_unc(t) = (zeta + b beta(t)) / ((1 - gamma) sigma(t)),
    beta(t)   = (gamma / alpha) (1 - exp(alpha (t - T))),

and the admissible weight is ``pi_unc`` clamped to ``[-delta, delta]``
(``[0, delta]`` with ``long_only``). The linear payoff ``U(x) = x`` has no
interior optimum; its policy sits on the cap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .market_model import MarketParams, VasicekParams, _check_time, bond_volatility


@dataclass(frozen=True)
class UtilitySpec:
    kind: Literal["linear", "power"]
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "power":
            if self.gamma is None or not math.isfinite(self.gamma):
                raise ValueError("power utility needs a finite gamma")
            if not 0 < self.gamma < 1:
                raise ValueError(f"power utility needs 0 < gamma < 1, got {self.gamma}")
        elif self.kind == "linear":
            if self.gamma not in (None, 1, 1.0):
                raise ValueError("linear utility is the gamma=1 payoff; omit gamma")
        else:
            raise ValueError(f"unknown utility kind {self.kind!r}")

    @classmethod
    def linear(cls) -> "UtilitySpec":
        return cls("linear")

    @classmethod
    def power(cls, gamma: float) -> "UtilitySpec":
        return cls("power", float(gamma))

    @property
    def exponent(self) -> float:
        return 1.0 if self.kind == "linear" else float(self.gamma)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x if self.kind == "linear" else x**self.gamma


@dataclass(frozen=True)
class CreditParams:
    """Default probability, loss given default, EL cap and capital rule.

    ``lam`` is the loss given default (``lambda`` in config files).
    """

    p: float
    lam: float
    el_bound: float
    k: float = 0.0
    cap_floor: float = 0.0

    def __post_init__(self) -> None:
        for name in ("p", "lam", "el_bound", "k", "cap_floor"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.lam <= 1:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.el_bound < 0:
            raise ValueError(f"el_bound must be >= 0, got {self.el_bound}")
        if self.k < 0 or self.cap_floor < 0:
            raise ValueError("k and cap_floor must be >= 0")


@dataclass(frozen=True)
class PolicyPath:
    times: np.ndarray
    weights: np.ndarray
    clipped: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        c = np.asarray(self.clipped, dtype=bool)
        if not (t.ndim == w.ndim == c.ndim == 1 and len(t) == len(w) == len(c)):
            raise ValueError("times, weights and clipped must be 1-d of equal length")
        if len(t) < 1 or np.any(np.diff(t) <= 0):
            raise ValueError("times must be non-empty and strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "clipped", c)

    @classmethod
    def constant(cls, weight: float, T: float, n: int = 2) -> "PolicyPath":
        return cls(np.linspace(0.0, T, n), np.full(n, float(weight)), np.zeros(n, bool))

    def plateau_time(self) -> float | None:
        """First time from which every later point is clipped, if any."""
        if not self.clipped[-1]:
            return None
        unclipped = np.flatnonzero(~self.clipped)
        start = 0 if len(unclipped) == 0 else unclipped[-1] + 1
        return float(self.times[start])


def el_cap_delta(c: CreditParams) -> float:
    """Weight cap ``delta = el_bound / (p * lambda)`` implied by the EL budget."""
    loss = c.p * c.lam
    if loss <= 0:
        raise ValueError("p * lambda must be > 0 to turn an EL cap into a weight cap")
    return c.el_bound / loss


def beta(u: UtilitySpec, v: VasicekParams, m: MarketParams, t):
    """Rate loading of the log value function, ``(gamma/alpha)(1 - e^{alpha(t-T)})``."""
    if u.kind != "power":
        raise ValueError("beta is defined for power utility only")
    t = _check_time(t, m.T)
    if isinstance(t, float):
        return u.gamma / v.alpha * -math.expm1(v.alpha * (t - m.T))
    out = u.gamma / v.alpha * -np.expm1(v.alpha * (t - m.T))
    return float(out) if out.ndim == 0 else out


def unconstrained_weight(u: UtilitySpec, v: VasicekParams, m: MarketParams, t):
    """Interior optimum ``(zeta + b beta(t)) / ((1 - gamma) sigma(t))``."""
    t = _check_time(t, m.T)
    sig = bond_volatility(v, m, t)
    if (sig <= 0) if isinstance(sig, float) else np.any(sig <= 0):
        raise ValueError("bond volatility is zero; the optimal weight is undefined")
    return (m.zeta + v.b * beta(u, v, m, t)) / ((1 - u.gamma) * sig)


def optimal_weight(
    u: UtilitySpec,
    v: VasicekParams,
    m: MarketParams,
    delta: float,
    t,
    long_only: bool = False,
):
    """Optimal admissible weight and whether the cap binds.

    Parameters
    ----------
    delta : float
        Weight cap, see :func:`el_cap_delta`.
    t : float or array_like
        Time(s) in ``[0, T]``.
    long_only : bool
        Clamp to ``[0, delta]`` instead of ``[-delta, delta]``.

    Returns
    -------
    pi, clipped
        Scalars for scalar ``t``, arrays otherwise.
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    t = _check_time(t, m.T)
    scalar = isinstance(t, float)
    if u.kind == "linear":
        if scalar:
            return float(delta), True
        return np.full(t.shape, float(delta)), np.ones(t.shape, dtype=bool)
    pi_unc = unconstrained_weight(u, v, m, t)
    lo = 0.0 if long_only else -delta
    if scalar:
        return min(max(pi_unc, lo), delta), bool(pi_unc > delta or pi_unc < lo)
    return np.clip(pi_unc, lo, delta), (pi_unc > delta) | (pi_unc < lo)


def policy_path(
    u: UtilitySpec,
    v: VasicekParams,
    m: MarketParams,
    c: CreditParams,
    n_steps: int,
    long_only: bool = False,
) -> PolicyPath:
    """Optimal weights on a uniform grid of ``n_steps`` points over ``[0, T]``."""
    if int(n_steps) != n_steps or n_steps < 2:
        raise ValueError(f"n_steps must be an integer >= 2, got {n_steps}")
    times = np.linspace(0.0, m.T, int(n_steps))
    pi, clipped = optimal_weight(u, v, m, el_cap_delta(c), times, long_only=long_only)
    return PolicyPath(times, pi, clipped)


def capital_path(path: PolicyPath, c: CreditParams) -> np.ndarray:
    """Capital requirement ``max(cap_floor, k * pi(t))`` along a policy."""
    return np.maximum(c.cap_floor, c.k * path.weights)
