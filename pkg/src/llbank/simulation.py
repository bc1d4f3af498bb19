"""Seeded Euler-Maruyama Monte Carlo of the joint (r, X) dynamics.

One Brownian motion drives both the short rate and the wealth process.
Paths are grouped in fixed-size blocks; block ``k`` draws its normals from
``SeedSequence(seed, spawn_key=(k,))``, so the random numbers of path ``i``
depend only on ``(seed, i)`` and never on how many workers run the blocks.
"""
from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .market_model import MarketParams, VasicekParams, bond_volatility
from .optimal_policy import PolicyPath, UtilitySpec

BLOCK_SIZE = 4096


@dataclass(frozen=True)
class SimConfig:
    n_paths: int
    n_steps: int = 252
    seed: int = 0
    antithetic: bool = False

    def __post_init__(self) -> None:
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ValueError(f"n_paths must be an integer >= 1, got {self.n_paths}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError(f"n_steps must be an integer >= 1, got {self.n_steps}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.antithetic and self.n_paths % 2:
            raise ValueError("antithetic sampling needs an even n_paths")

    @property
    def n_blocks(self) -> int:
        return -(-self.n_paths // BLOCK_SIZE)


@dataclass(frozen=True)
class LimitedLiabilityPayoff:
    """Raw terminal payoff ``max(F, X(T))``."""

    F: float

    def __call__(self, x):
        return np.maximum(self.F, np.asarray(x, dtype=float))


@dataclass(frozen=True)
class SimResult:
    mean_utility: float
    std_error: float
    mean_terminal_wealth: float
    fraction_below_F: float
    terminal_wealth: np.ndarray | None = field(default=None, repr=False, compare=False)


def _block_normals(cfg: SimConfig, block: int) -> np.ndarray:
    ss = np.random.SeedSequence(int(cfg.seed), spawn_key=(block,))
    gen = np.random.Generator(np.random.PCG64(ss))
    if cfg.antithetic:
        z = gen.standard_normal((BLOCK_SIZE // 2, cfg.n_steps))
        # rows 2k and 2k+1 are an antithetic pair
        return np.stack((z, -z), axis=1).reshape(BLOCK_SIZE, cfg.n_steps)
    return gen.standard_normal((BLOCK_SIZE, cfg.n_steps))


def _block_rows(cfg: SimConfig, block: int) -> int:
    return min(BLOCK_SIZE, cfg.n_paths - block * BLOCK_SIZE)


def _step_times(m: MarketParams, cfg: SimConfig) -> np.ndarray:
    return np.arange(cfg.n_steps) * (m.T / cfg.n_steps)


def _weights_on_grid(policy: PolicyPath, m: MarketParams, cfg: SimConfig) -> np.ndarray:
    t = policy.times
    if abs(t[0]) > 1e-12 or abs(t[-1] - m.T) > 1e-9 * max(1.0, m.T):
        raise ValueError(
            f"policy grid must span [0, T={m.T}], got [{t[0]}, {t[-1]}]"
        )
    idx = np.searchsorted(t, _step_times(m, cfg), side="right") - 1
    return policy.weights[idx]


def _euler_rates(v: VasicekParams, r0: float, dt: float, z: np.ndarray) -> np.ndarray:
    r = np.empty((z.shape[0], z.shape[1] + 1))
    r[:, 0] = r0
    shock = v.b * math.sqrt(dt) * z
    for j in range(z.shape[1]):
        r[:, j + 1] = r[:, j] + (v.theta_v - v.alpha * r[:, j]) * dt + shock[:, j]
    return r


def _run_block(v, m, cfg, loads, block):
    """Terminal wealth for each policy load ``pi_j * sigma(t_j)`` on one block."""
    dt = m.T / cfg.n_steps
    sq = math.sqrt(dt)
    rows = _block_rows(cfg, block)
    z = _block_normals(cfg, block)[:rows]
    r = _euler_rates(v, m.initial_rate(v), dt, z)
    out = []
    for load in loads:
        x = np.ones(rows)
        for j in range(cfg.n_steps):
            x *= 1.0 + (load[j] * m.zeta + r[:, j]) * dt + load[j] * sq * z[:, j]
            np.maximum(x, 0.0, out=x)
        out.append(x)
    return out, r[:, -1]


def _simulate(v, m, policies, cfg, n_workers):
    sig = np.asarray(bond_volatility(v, m, _step_times(m, cfg)))
    loads = [_weights_on_grid(p, m, cfg) * sig for p in policies]
    blocks = range(cfg.n_blocks)
    if n_workers and n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            parts = list(ex.map(lambda b: _run_block(v, m, cfg, loads, b), blocks))
    else:
        parts = [_run_block(v, m, cfg, loads, b) for b in blocks]
    wealth = [np.concatenate([p[0][i] for p in parts]) for i in range(len(policies))]
    rates = np.concatenate([p[1] for p in parts])
    return wealth, rates


def _summarise(x_T, payoff, cfg, F) -> SimResult:
    u = payoff(x_T)
    samples = 0.5 * (u[0::2] + u[1::2]) if cfg.antithetic else u
    if len(samples) > 1:
        se = float(np.std(samples, ddof=1) / math.sqrt(len(samples)))
    else:
        se = 0.0
    below = float(np.mean(x_T < F)) if F is not None else math.nan
    return SimResult(
        mean_utility=float(np.mean(u)),
        std_error=se,
        mean_terminal_wealth=float(np.mean(x_T)),
        fraction_below_F=below,
        terminal_wealth=x_T,
    )


def _bankruptcy_level(payoff, F):
    if F is None and isinstance(payoff, LimitedLiabilityPayoff):
        return payoff.F
    return F


def simulate_rate_path(
    v: VasicekParams, m: MarketParams, cfg: SimConfig, path_index: int
) -> np.ndarray:
    """Euler short-rate path of length ``n_steps + 1`` for one path index."""
    if not 0 <= path_index < cfg.n_paths:
        raise ValueError(f"path_index must lie in [0, {cfg.n_paths})")
    block, row = divmod(int(path_index), BLOCK_SIZE)
    z = _block_normals(cfg, block)[row : row + 1]
    return _euler_rates(v, m.initial_rate(v), m.T / cfg.n_steps, z)[0]


def simulate_wealth(
    v: VasicekParams,
    m: MarketParams,
    policy: PolicyPath,
    payoff: UtilitySpec | LimitedLiabilityPayoff,
    cfg: SimConfig,
    F: float | None = None,
    n_workers: int = 1,
) -> SimResult:
    """Monte Carlo estimate of ``E[payoff(X(T))]`` under ``policy``.

    The policy is read piecewise-constant from the left on the simulation
    grid. Wealth starts at 1 and is absorbed at 0. ``fraction_below_F`` is
    ``nan`` unless a bankruptcy level is given directly or through a
    :class:`LimitedLiabilityPayoff`.
    """
    wealth, _ = _simulate(v, m, [policy], cfg, n_workers)
    return _summarise(wealth[0], payoff, cfg, _bankruptcy_level(payoff, F))


def simulate_terminal_rates(
    v: VasicekParams, m: MarketParams, cfg: SimConfig, n_workers: int = 1
) -> np.ndarray:
    """Euler samples of ``r(T)``, one per path."""
    _, rates = _simulate(v, m, [], cfg, n_workers)
    return rates


def compare_policies(
    v: VasicekParams,
    m: MarketParams,
    policies: Sequence[PolicyPath] | Mapping[str, PolicyPath],
    payoff: UtilitySpec | LimitedLiabilityPayoff,
    cfg: SimConfig,
    F: float | None = None,
    n_workers: int = 1,
) -> list[tuple[str, SimResult]]:
    """Rank policies by mean payoff using common random numbers.

    Returns ``(label, result)`` pairs sorted best first; ties keep input
    order. Sequence inputs are labelled by position.
    """
    if isinstance(policies, Mapping):
        labels, paths = list(policies.keys()), list(policies.values())
    else:
        paths = list(policies)
        labels = [str(i) for i in range(len(paths))]
    if len(paths) < 2:
        raise ValueError("compare_policies needs at least two policies")
    wealth, _ = _simulate(v, m, paths, cfg, n_workers)
    level = _bankruptcy_level(payoff, F)
    results = [(lab, _summarise(w, payoff, cfg, level)) for lab, w in zip(labels, wealth)]
    return sorted(results, key=lambda lr: -lr[1].mean_utility)
