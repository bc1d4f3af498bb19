"""Brute-force check of the control-optimality condition of the HJB equation.

For the state ``(X, r)`` the generator applied to ``G(t, x, r)`` is

    A^pi G = G_t + 0.5 (x^2 pi^2 sigma^2 G_xx + 2 x pi b sigma G_xr + b^2 G_rr)
             + x (pi zeta sigma + r) G_x + a G_r.

With the ansatz ``G = x**gamma * exp(a(t) + beta(t) r)`` every term is a
positive multiple of ``G``, so the pi-dependent part reduces to a parabola
``c2 pi^2 + c1 pi``. Maximising that parabola on a grid over the admissible
set, and comparing with the closed-form weight, checks the policy without
ever solving for ``a(t)``.

``beta(t)`` is rebuilt here from the ansatz ODE ``beta' = alpha beta - gamma``,
``beta(T) = 0`` rather than imported, so a fault in the policy module cannot
hide itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .market_model import MarketParams, VasicekParams, bond_volatility
from .optimal_policy import UtilitySpec, optimal_weight


class VerificationError(RuntimeError):
    def __init__(self, report: "VerificationReport"):
        self.report = report
        super().__init__(
            f"closed-form policy deviates from the Hamiltonian argmax by "
            f"{report.max_deviation:.3g} at t={report.worst_time:.6g} "
            f"(allowed {report.grid_step:.3g})"
        )


@dataclass(frozen=True)
class ValueFunctionProbe:
    """Wealth derivatives of ``G`` at one state, each divided by ``G``."""

    gamma: float
    beta_t: float
    x: float
    r: float
    t: float
    gx: float
    gxx: float
    gxr: float

    def __post_init__(self) -> None:
        if not 0 < self.gamma < 1:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.x > 0:
            raise ValueError(f"wealth x must be > 0, got {self.x}")

    @classmethod
    def from_ansatz(
        cls, gamma: float, beta_t: float, x: float = 1.0, r: float = 0.0, t: float = 0.0
    ) -> "ValueFunctionProbe":
        if not x > 0:
            raise ValueError(f"wealth x must be > 0, got {x}")
        return cls(
            gamma=gamma,
            beta_t=beta_t,
            x=x,
            r=r,
            t=t,
            gx=gamma / x,
            gxx=gamma * (gamma - 1) / x**2,
            gxr=gamma * beta_t / x,
        )


@dataclass(frozen=True)
class HamiltonianSlice:
    c2: float
    c1: float
    c0: float = 0.0

    @property
    def vertex(self) -> float:
        return -self.c1 / (2 * self.c2)

    def __call__(self, pi):
        pi = np.asarray(pi, dtype=float)
        return self.c2 * pi**2 + self.c1 * pi + self.c0


@dataclass
class VerificationReport:
    times: np.ndarray
    closed_form: np.ndarray
    grid_max: np.ndarray
    grid_step: float
    deviations: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.deviations = np.abs(self.grid_max - self.closed_form)

    @property
    def max_deviation(self) -> float:
        return float(self.deviations.max())

    @property
    def worst_time(self) -> float:
        return float(self.times[int(np.argmax(self.deviations))])

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.grid_step


def ansatz_beta(gamma: float, alpha: float, T: float, t):
    """Solve ``beta' = alpha beta - gamma`` backward from ``beta(T) = 0``."""
    return gamma / alpha * (1.0 - np.exp(alpha * (np.asarray(t, dtype=float) - T)))


def apply_generator(
    v: VasicekParams,
    m: MarketParams,
    t: float,
    x: float,
    r: float,
    pi: float,
    derivs: dict[str, float],
) -> float:
    """Value of ``A^pi G`` given the partial derivatives of ``G``.

    ``derivs`` holds ``t, x, r, xx, xr, rr`` entries; missing ones are zero.
    """
    d = {k: 0.0 for k in ("t", "x", "r", "xx", "xr", "rr")}
    d.update(derivs)
    sig = bond_volatility(v, m, t)
    a = v.theta_v - v.alpha * r
    return (
        d["t"]
        + 0.5 * (x**2 * pi**2 * sig**2 * d["xx"] + 2 * x * pi * v.b * sig * d["xr"] + v.b**2 * d["rr"])
        + x * (pi * m.zeta * sig + r) * d["x"]
        + a * d["r"]
    )


def hamiltonian_slice(
    probe: ValueFunctionProbe, v: VasicekParams, m: MarketParams
) -> HamiltonianSlice:
    """Quadratic and linear pi-coefficients of ``A^pi G / G`` at the probe state."""
    sig = bond_volatility(v, m, probe.t)
    if sig <= 0:
        raise ValueError("bond volatility is zero at the probe time")
    x = probe.x
    c2 = 0.5 * x**2 * sig**2 * probe.gxx
    c1 = x * v.b * sig * probe.gxr + x * m.zeta * sig * probe.gx
    return HamiltonianSlice(c2=c2, c1=c1)


def _symmetric_grid(delta: float, step: float, long_only: bool) -> np.ndarray:
    # ordered by |pi| so np.argmax resolves ties toward the smaller magnitude
    n = int(math.floor(delta / step + 1e-9))
    mags = np.arange(1, n + 1) * step
    mags = mags[mags < delta]
    if long_only:
        return np.concatenate(([0.0], mags, [delta]))
    pairs = np.column_stack((mags, -mags)).ravel()
    return np.concatenate(([0.0], pairs, [delta, -delta]))


def grid_argmax(
    slc: HamiltonianSlice, delta: float, grid_step: float, long_only: bool = False
) -> float:
    """Grid maximiser of ``c2 pi^2 + c1 pi`` over ``|pi| <= delta``.

    The grid is ``0, +-step, +-2 step, ...`` plus the endpoints ``+-delta``.
    """
    if not grid_step > 0:
        raise ValueError(f"grid_step must be > 0, got {grid_step}")
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    grid = _symmetric_grid(delta, grid_step, long_only)
    vals = slc.c2 * grid**2 + slc.c1 * grid
    # ties within rounding of the parabola's scale go to the smaller |pi|
    tol = 1e-12 * (abs(slc.c2) * delta**2 + abs(slc.c1) * delta)
    return float(grid[int(np.argmax(vals >= vals.max() - tol))])


def verify_policy(
    u: UtilitySpec,
    v: VasicekParams,
    m: MarketParams,
    delta: float,
    n_times: int = 51,
    grid_step: float = 5e-4,
    long_only: bool = False,
    strict: bool = True,
) -> VerificationReport:
    """Compare the closed-form weight with the grid argmax on ``n_times`` dates.

    Raises :class:`VerificationError` when a deviation exceeds ``grid_step``
    unless ``strict`` is False.
    """
    if u.kind != "power":
        raise ValueError("verification needs a power utility")
    if not grid_step > 0:
        raise ValueError(f"grid_step must be > 0, got {grid_step}")
    if n_times < 2:
        raise ValueError("n_times must be >= 2")
    times = np.linspace(0.0, m.T, int(n_times))
    closed = np.empty_like(times)
    brute = np.empty_like(times)
    for i, t in enumerate(times):
        closed[i], _ = optimal_weight(u, v, m, delta, float(t), long_only=long_only)
        bt = float(ansatz_beta(u.gamma, v.alpha, m.T, t))
        probe = ValueFunctionProbe.from_ansatz(u.gamma, bt, x=1.0, r=m.initial_rate(v), t=float(t))
        brute[i] = grid_argmax(hamiltonian_slice(probe, v, m), delta, grid_step, long_only)
    report = VerificationReport(times, closed, brute, grid_step)
    if strict and not report.passed:
        raise VerificationError(report)
    return report
