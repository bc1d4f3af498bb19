import pytest

from llbank import CreditParams, LiabilityBounds, MarketParams, UtilitySpec, VasicekParams, best_gamma

# Bank example: alpha, theta, b, zeta, T1, T, p, lambda, EL cap, k, floor, F, B.
# r0 = 0.05 is this package's convention (the stationary mean).


@pytest.fixture(scope="session")
def vasicek():
    return VasicekParams(alpha=0.15, theta_v=0.0075, b=0.67)


@pytest.fixture(scope="session")
def market():
    return MarketParams(zeta=0.3, T1=1.5, T=1.0, r0=0.05)


@pytest.fixture(scope="session")
def credit():
    return CreditParams(p=0.1, lam=0.6, el_bound=0.05, k=0.2, cap_floor=0.04)


@pytest.fixture(scope="session")
def bounds():
    return LiabilityBounds(F=0.75, B=1.2)


@pytest.fixture(scope="session")
def gamma_star(bounds):
    return best_gamma(bounds).gamma_star


@pytest.fixture(scope="session")
def ll_utility(gamma_star):
    return UtilitySpec.power(gamma_star)


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
