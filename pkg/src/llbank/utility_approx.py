"""Power-utility approximation of the limited-liability payoff.

The payoff ``max(F, x)`` on ``[0, B]`` is approximated in L2 by ``x**gamma``.
The squared error has a closed form in ``gamma``; its derivative involves
``x**gamma * log(x)`` and is integrated numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

GRID_LO = 0.005
GRID_HI = 0.995
GRID_STEP = 0.01
EDGE_EPS = 1e-6


class GammaSearchError(RuntimeError):
    """The L2 error minimum could not be placed inside (0, 1)."""


@dataclass(frozen=True)
class LiabilityBounds:
    """Bankruptcy level ``F`` and wealth cap ``B`` with ``0 < F < 1 < B``."""

    F: float
    B: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.F) and math.isfinite(self.B)):
            raise ValueError("F and B must be finite")
        if not 0 < self.F < 1 < self.B:
            raise ValueError(
                f"liability bounds require 0 < F < 1 < B, got F={self.F}, B={self.B}"
            )


@dataclass(frozen=True)
class GammaResult:
    gamma_star: float
    err_at_min: float
    iterations: int
    bracket: tuple[float, float]


def _check_gamma(gamma) -> np.ndarray:
    g = np.asarray(gamma, dtype=float)
    if not np.all(np.isfinite(g)) or np.any(g <= 0):
        raise ValueError(f"gamma must be finite and > 0, got {gamma!r}")
    return g


def l2_error(lb: LiabilityBounds, gamma):
    """Squared L2 distance between ``max(F, x)`` and ``x**gamma`` on ``[0, B]``.

    Vectorised over ``gamma``.
    """
    g = _check_gamma(gamma)
    F, B = lb.F, lb.B
    below = F**3 - 2 * F ** (g + 2) / (g + 1) + F ** (2 * g + 1) / (2 * g + 1)
    above = (
        (B**3 - F**3) / 3
        - 2 * (B ** (g + 2) - F ** (g + 2)) / (g + 2)
        + (B ** (2 * g + 1) - F ** (2 * g + 1)) / (2 * g + 1)
    )
    err = below + above
    return float(err) if err.ndim == 0 else err


def l2_error_dgamma(lb: LiabilityBounds, gamma: float, tol: float = 1e-10) -> float:
    """Derivative of :func:`l2_error` with respect to ``gamma``.

    Both pieces are integrated with adaptive quadrature. The integrand on
    ``[0, F]`` has an integrable ``log`` singularity at 0, which QUADPACK's
    extrapolating rule handles without evaluating the endpoint.
    """
    g = float(_check_gamma(gamma))
    F, B = lb.F, lb.B

    def below(x):
        xg = x**g
        return (F - xg) * xg * math.log(x)

    def above(x):
        xg = x**g
        return (x - xg) * xg * math.log(x)

    i1, _ = integrate.quad(below, 0.0, F, epsabs=tol, epsrel=tol, limit=200)
    i2, _ = integrate.quad(above, F, B, epsabs=tol, epsrel=tol, limit=200)
    return -2.0 * (i1 + i2)


def lemma_g(x):
    """``(x**2/2 - x) log x - (x**2 - 4x)/4``; non-decreasing on ``x > 0``.

    Its derivative is ``(x - 1) log x``.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa <= 0):
        raise ValueError(f"x must be finite and > 0, got {x!r}")
    out = (xa**2 / 2 - xa) * np.log(xa) - (xa**2 - 4 * xa) / 4
    return float(out) if out.ndim == 0 else out


def _golden_section(f, lo: float, hi: float, tol: float, max_iter: int = 500):
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    it = 0
    while hi - lo > tol and it < max_iter:
        it += 1
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    x = x1 if f1 <= f2 else x2
    return x, it, (lo, hi)


def best_gamma(lb: LiabilityBounds, tol: float = 1e-8) -> GammaResult:
    """Exponent ``gamma*`` in (0, 1) minimising :func:`l2_error`.

    A coarse scan over ``[0.005, 0.995]`` with step 0.01 locates the basin,
    then golden-section search refines on the two neighbouring cells. For
    wide caps ``gamma*`` can sit beyond the last scan point (e.g. about
    0.9948 for ``F=0.5, B=3``); an edge minimum then extends the bracket to
    the open end of (0, 1), provided the error slope there points inward.

    Raises
    ------
    GammaSearchError
        If the scan minimum sits on an edge and the error slope at that end
        of (0, 1) does not point back into the interval.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    grid = np.round(np.arange(GRID_LO, GRID_HI + GRID_STEP / 2, GRID_STEP), 10)
    errs = l2_error(lb, grid)
    i = int(np.argmin(errs))
    if i == 0:
        if not l2_error_dgamma(lb, EDGE_EPS) < 0:
            raise GammaSearchError(f"L2 error does not decrease away from gamma=0 for {lb}")
        lo, hi = EDGE_EPS, float(grid[1])
    elif i == len(grid) - 1:
        if not l2_error_dgamma(lb, 1.0) > 0:
            raise GammaSearchError(f"L2 error does not increase at gamma=1 for {lb}")
        lo, hi = float(grid[-2]), 1.0
    else:
        lo, hi = float(grid[i - 1]), float(grid[i + 1])
    x, it, bracket = _golden_section(lambda g: float(l2_error(lb, g)), lo, hi, tol)
    return GammaResult(
        gamma_star=x, err_at_min=float(l2_error(lb, x)), iterations=it, bracket=bracket
    )
