import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llbank import (
    CreditParams,
    MarketParams,
    PolicyPath,
    UtilitySpec,
    VasicekParams,
    beta,
    bond_volatility,
    capital_path,
    el_cap_delta,
    optimal_weight,
    policy_path,
    unconstrained_weight,
)

DELTA = 0.05 / (0.1 * 0.6)


def test_el_cap_reproduces_example(credit):
    assert el_cap_delta(credit) == pytest.approx(0.8333333333333334, rel=1e-15)
    assert f"{el_cap_delta(credit):.2f}" == "0.83"


def test_el_cap_edge_cases():
    assert el_cap_delta(CreditParams(p=0.1, lam=0.6, el_bound=0.0)) == 0.0
    assert el_cap_delta(CreditParams(p=0.1, lam=0.6, el_bound=0.06)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        el_cap_delta(CreditParams(p=0.0, lam=0.6, el_bound=0.05))


@given(
    theta=st.floats(0.001, 1), p=st.floats(0.01, 1), lam=st.floats(0.01, 1), c=st.floats(0.1, 10)
)
def test_el_cap_scaling(theta, p, lam, c):
    base = el_cap_delta(CreditParams(p=p, lam=lam, el_bound=theta))
    assert el_cap_delta(CreditParams(p=p, lam=lam, el_bound=theta * min(c, 1 / theta))) == pytest.approx(
        base * min(c, 1 / theta)
    )
    assert el_cap_delta(CreditParams(p=p / 2, lam=lam, el_bound=theta)) == pytest.approx(2 * base)
    assert el_cap_delta(CreditParams(p=p, lam=lam / 2, el_bound=theta)) == pytest.approx(2 * base)


def test_beta_values(vasicek, market):
    u = UtilitySpec.power(0.1821)
    assert beta(u, vasicek, market, market.T) == 0.0
    # (0.1821 / 0.15) (1 - e^{-0.15})
    assert beta(u, vasicek, market, 0.0) == pytest.approx(0.169100, abs=1e-6)
    tiny = UtilitySpec.power(1e-12)
    assert np.all(np.abs(beta(tiny, vasicek, market, np.linspace(0, 1, 5))) < 1e-11)
    assert np.all(beta(u, vasicek, market, np.linspace(0, 1, 11)) >= 0)


def test_beta_rejects_linear_and_bad_time(vasicek, market):
    with pytest.raises(ValueError):
        beta(UtilitySpec.linear(), vasicek, market, 0.0)
    with pytest.raises(ValueError):
        beta(UtilitySpec.power(0.5), vasicek, market, 1.2)


def test_optimal_weight_examples(vasicek, market):
    u = UtilitySpec.power(0.1821)
    # (0.3 + 0.67 * 0.169100) / (0.8179 * 0.899961)
    pi0, clipped0 = optimal_weight(u, vasicek, market, DELTA, 0.0)
    assert pi0 == pytest.approx(0.561486, abs=1e-6)
    assert not clipped0
    pi1, clipped1 = optimal_weight(u, vasicek, market, DELTA, 1.0)
    assert unconstrained_weight(u, vasicek, market, 1.0) == pytest.approx(1.136477, abs=1e-6)
    assert pi1 == DELTA and clipped1


@pytest.mark.parametrize("t", [0.0, 0.4, 1.0])
def test_linear_utility_bang_bang(vasicek, market, t):
    assert optimal_weight(UtilitySpec.linear(), vasicek, market, DELTA, t) == (DELTA, True)


def test_long_only_switch(vasicek):
    m = MarketParams(zeta=-0.5, T1=1.5, T=1.0)
    u = UtilitySpec.power(0.3)
    sym, c_sym = optimal_weight(u, vasicek, m, DELTA, 0.0)
    lo, c_lo = optimal_weight(u, vasicek, m, DELTA, 0.0, long_only=True)
    assert sym < 0 and lo == 0.0 and c_lo
    assert sym == pytest.approx(max(-DELTA, unconstrained_weight(u, vasicek, m, 0.0)))


def test_utility_spec_validation():
    for g in (0.0, 1.0, 1.5, math.nan):
        with pytest.raises(ValueError):
            UtilitySpec.power(g)
    with pytest.raises(ValueError):
        UtilitySpec("exp", 0.5)
    with pytest.raises(ValueError):
        optimal_weight(UtilitySpec.power(0.5), VasicekParams(0.15, 0.0075, 0.67), MarketParams(0.3, 1.5, 1.0), 0.0, 0.0)


def test_policy_path_example(vasicek, market, credit, ll_utility):
    path = policy_path(ll_utility, vasicek, market, credit, 101)
    assert path.weights[0] == pytest.approx(0.5619, abs=1e-3)
    assert path.weights[-1] == pytest.approx(DELTA)
    assert np.all(np.diff(path.weights) >= 0)
    plateau = path.plateau_time()
    assert plateau is not None and 0 < plateau < market.T
    assert np.all(np.abs(path.weights) <= DELTA + 1e-15)


def test_policy_path_linear(vasicek, market, credit):
    path = policy_path(UtilitySpec.linear(), vasicek, market, credit, 11)
    np.testing.assert_allclose(path.weights, DELTA)
    assert path.plateau_time() == 0.0


def test_policy_path_unbinding_cap(vasicek, market):
    wide = CreditParams(p=0.1, lam=0.6, el_bound=0.6)  # delta = 10
    path = policy_path(UtilitySpec.power(0.1821), vasicek, market, wide, 51)
    assert not path.clipped.any()
    assert path.plateau_time() is None


def test_policy_path_needs_two_points(vasicek, market, credit, ll_utility):
    with pytest.raises(ValueError):
        policy_path(ll_utility, vasicek, market, credit, 1)


def test_capital_path(credit):
    path = PolicyPath(np.array([0.0, 0.5, 1.0]), np.array([DELTA, 0.1, 0.2]), np.zeros(3, bool))
    cap = capital_path(path, credit)
    assert cap[0] == pytest.approx(0.166667, abs=1e-6)
    assert cap[1] == pytest.approx(0.04)
    assert cap[2] == pytest.approx(0.04)


def test_policy_path_validation():
    with pytest.raises(ValueError):
        PolicyPath(np.array([0.0, 0.0]), np.zeros(2), np.zeros(2, bool))
    with pytest.raises(ValueError):
        PolicyPath(np.array([0.0, 1.0]), np.zeros(3), np.zeros(2, bool))


market_st = st.builds(
    lambda a, b, zeta, T, gap: (VasicekParams(a, 0.0075, b), MarketParams(zeta, T + gap, T)),
    st.floats(0.01, 2.0),
    st.floats(0.01, 2.0),
    st.floats(0.0, 2.0),
    st.floats(0.1, 5.0),
    st.floats(0.05, 5.0),
)


@settings(max_examples=300)
@given(vm=market_st, g1=st.floats(0.01, 0.98), dg=st.floats(1e-3, 0.5), frac=st.floats(0, 1))
def test_unconstrained_weight_increasing_in_gamma(vm, g1, dg, frac):
    v, m = vm
    g2 = min(g1 + dg, 0.99)
    t = frac * m.T
    w1 = unconstrained_weight(UtilitySpec.power(g1), v, m, t)
    w2 = unconstrained_weight(UtilitySpec.power(g2), v, m, t)
    if m.zeta > 0 or t < m.T:
        assert w2 > w1
    else:
        assert w2 >= w1


@settings(max_examples=200)
@given(vm=market_st, g=st.floats(0.01, 0.98), frac=st.floats(0, 1))
def test_gamma_derivative_matches_analytic(vm, g, frac):
    v, m = vm
    t = frac * m.T
    sig = bond_volatility(v, m, t)
    k = v.b / v.alpha * (1 - math.exp(v.alpha * (t - m.T)))
    analytic = (sig * k + sig * m.zeta) / ((1 - g) ** 2 * sig**2)
    h = 1e-6
    fd = (
        unconstrained_weight(UtilitySpec.power(g + h), v, m, t)
        - unconstrained_weight(UtilitySpec.power(g - h), v, m, t)
    ) / (2 * h)
    assert fd == pytest.approx(analytic, rel=1e-5, abs=1e-8)
    assert analytic >= 0


@given(vm=market_st, g=st.floats(0.01, 0.98), frac=st.floats(0, 1), delta=st.floats(0.01, 5))
def test_clamp_correctness(vm, g, frac, delta):
    v, m = vm
    u = UtilitySpec.power(g)
    t = frac * m.T
    pi, clipped = optimal_weight(u, v, m, delta, t)
    unc = unconstrained_weight(u, v, m, t)
    assert abs(pi) <= delta
    assert clipped == (abs(unc) > delta)
    if not clipped:
        assert pi == unc
