import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import llbank.optimal_policy as op
from llbank import (
    HamiltonianSlice,
    MarketParams,
    UtilitySpec,
    ValueFunctionProbe,
    VasicekParams,
    VerificationError,
    bond_volatility,
    grid_argmax,
    hamiltonian_slice,
    optimal_weight,
    verify_policy,
)
from llbank.hjb_verification import ansatz_beta, apply_generator

DELTA = 0.05 / 0.06


def probe_at(gamma, v, m, t, x=1.0, r=0.05):
    return ValueFunctionProbe.from_ansatz(gamma, float(ansatz_beta(gamma, v.alpha, m.T, t)), x=x, r=r, t=t)


def test_slice_concave(vasicek, market):
    slc = hamiltonian_slice(probe_at(0.5, vasicek, market, 0.3), vasicek, market)
    assert slc.c2 < 0


def test_no_premium_no_hedge_gives_zero(vasicek):
    m = MarketParams(zeta=0.0, T1=1.5, T=1.0)
    probe = ValueFunctionProbe.from_ansatz(0.4, 0.0, x=2.0, t=1.0)
    slc = hamiltonian_slice(probe, vasicek, m)
    assert slc.c1 == 0.0
    assert grid_argmax(slc, 1.0, 0.001) == 0.0


def test_example_vertex(vasicek, market):
    probe = probe_at(0.1821, vasicek, market, 0.0)
    assert probe.beta_t == pytest.approx(0.169100, abs=1e-6)
    slc = hamiltonian_slice(probe, vasicek, market)
    assert slc.vertex == pytest.approx(0.561486, abs=1e-6)


def test_ansatz_beta_solves_its_ode():
    g, a, T = 0.3, 0.15, 1.0
    t = np.linspace(0, T, 11)
    h = 1e-6
    d = (ansatz_beta(g, a, T, t + h) - ansatz_beta(g, a, T, t - h)) / (2 * h)
    np.testing.assert_allclose(d, a * ansatz_beta(g, a, T, t) - g, atol=1e-8)
    assert ansatz_beta(g, a, T, T) == 0.0


def test_slice_matches_generator(vasicek, market):
    # the generator's pi-dependence on the ansatz, divided by G, is the slice parabola
    g, t, x, r = 0.35, 0.4, 1.7, 0.03
    bt = float(ansatz_beta(g, vasicek.alpha, market.T, t))
    G = x**g * math.exp(bt * r)
    derivs = {"x": g / x * G, "xx": g * (g - 1) / x**2 * G, "xr": g * bt / x * G}
    slc = hamiltonian_slice(ValueFunctionProbe.from_ansatz(g, bt, x=x, r=r, t=t), vasicek, market)
    base = apply_generator(vasicek, market, t, x, r, 0.0, derivs)
    for pi in (-0.7, 0.2, 0.9):
        val = apply_generator(vasicek, market, t, x, r, pi, derivs)
        assert (val - base) / G == pytest.approx(slc(pi), rel=1e-12)


def test_grid_argmax_examples(vasicek, market):
    assert grid_argmax(HamiltonianSlice(-1.0, 0.0), 1.0, 0.001) == 0.0
    slc0 = hamiltonian_slice(probe_at(0.1821, vasicek, market, 0.0), vasicek, market)
    assert grid_argmax(slc0, 0.8333, 0.0005) == pytest.approx(0.5619, abs=5e-4)
    slc1 = hamiltonian_slice(probe_at(0.1821, vasicek, market, 1.0), vasicek, market)
    assert slc1.vertex == pytest.approx(1.136477, abs=1e-6)
    assert grid_argmax(slc1, 0.8333, 0.0005) == 0.8333


def test_grid_argmax_ties_prefer_small_magnitude():
    # c2 = 0, c1 = 0: every grid point ties
    assert grid_argmax(HamiltonianSlice(0.0, 0.0), 1.0, 0.1) == 0.0


def test_grid_argmax_long_only_and_validation():
    assert grid_argmax(HamiltonianSlice(-1.0, -1.0), 1.0, 0.01, long_only=True) == 0.0
    assert grid_argmax(HamiltonianSlice(-1.0, -1.0), 1.0, 0.01) == pytest.approx(-0.5)
    with pytest.raises(ValueError):
        grid_argmax(HamiltonianSlice(-1.0, 0.0), 1.0, 0.0)
    with pytest.raises(ValueError):
        grid_argmax(HamiltonianSlice(-1.0, 0.0), 0.0, 0.1)


def test_probe_validation():
    with pytest.raises(ValueError):
        ValueFunctionProbe.from_ansatz(1.0, 0.0)
    with pytest.raises(ValueError):
        ValueFunctionProbe.from_ansatz(0.5, 0.0, x=0.0)


def test_slice_rejects_zero_vol(vasicek, market):
    with pytest.raises(ValueError):
        # t beyond T1 is impossible, so force sigma = 0 through b = 0
        v = VasicekParams(0.15, 0.0075, 0.0)
        hamiltonian_slice(probe_at(0.5, v, market, 0.0), v, market)


@pytest.mark.parametrize("gamma, delta", [(0.1821, DELTA), (0.9, DELTA), (0.1821, 10.0)])
def test_verify_policy_passes(vasicek, market, gamma, delta):
    rep = verify_policy(UtilitySpec.power(gamma), vasicek, market, delta, n_times=51, grid_step=5e-4)
    assert rep.passed
    assert rep.max_deviation <= 5e-4
    if delta == 10.0:
        assert np.all(np.abs(rep.grid_max) < delta)


def test_verify_policy_long_only(vasicek, market):
    assert verify_policy(UtilitySpec.power(0.3), vasicek, market, DELTA, long_only=True).passed


def test_verify_policy_detects_mutation(monkeypatch, vasicek, market):
    real = op.beta
    monkeypatch.setattr(op, "beta", lambda *a, **k: -np.asarray(real(*a, **k)))
    with pytest.raises(VerificationError) as exc:
        verify_policy(UtilitySpec.power(0.1821), vasicek, market, DELTA)
    assert exc.value.report.worst_time < market.T
    rep = verify_policy(UtilitySpec.power(0.1821), vasicek, market, DELTA, strict=False)
    assert not rep.passed


def test_verify_policy_input_checks(vasicek, market):
    with pytest.raises(ValueError):
        verify_policy(UtilitySpec.linear(), vasicek, market, DELTA)
    with pytest.raises(ValueError):
        verify_policy(UtilitySpec.power(0.5), vasicek, market, DELTA, grid_step=0.0)


slice_inputs = st.tuples(
    st.floats(0.01, 0.99),  # gamma
    st.floats(0.01, 2.0),  # alpha
    st.floats(0.01, 2.0),  # b
    st.floats(-1.0, 1.0),  # zeta
    st.floats(0.1, 3.0),  # T
    st.floats(0.05, 3.0),  # T1 - T
    st.floats(0.0, 1.0),  # t / T
    st.floats(0.1, 10.0),  # x
)


@settings(max_examples=300)
@given(slice_inputs)
def test_vertex_identity(args):
    g, a, b, zeta, T, gap, frac, x = args
    v, m = VasicekParams(a, 0.0, b), MarketParams(zeta, T + gap, T)
    t = frac * T
    slc = hamiltonian_slice(probe_at(g, v, m, t, x=x), v, m)
    assert slc.c2 < 0
    u = UtilitySpec.power(g)
    assert slc.vertex == pytest.approx(op.unconstrained_weight(u, v, m, t), rel=1e-12, abs=1e-14)


@given(c2=st.floats(-10, -1e-3), c1=st.floats(-10, 10), scale=st.floats(1e-3, 1e3))
def test_argmax_scale_invariant(c2, c1, scale):
    a = grid_argmax(HamiltonianSlice(c2, c1), 1.0, 0.01)
    b = grid_argmax(HamiltonianSlice(scale * c2, scale * c1), 1.0, 0.01)
    assert a == b


def test_policy_path_consistent_with_argmax(vasicek, market, credit, ll_utility):
    from llbank import policy_path

    path = policy_path(ll_utility, vasicek, market, credit, 41)
    for t, w in zip(path.times, path.weights):
        slc = hamiltonian_slice(probe_at(ll_utility.gamma, vasicek, market, t), vasicek, market)
        assert abs(grid_argmax(slc, DELTA, 1e-3) - w) <= 1e-3
