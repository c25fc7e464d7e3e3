import pytest

from spinlangevin import BathSpec, SpinSystem, ThermalEnv, equilibrium_mz

# (T, H0, gamma) for the four regimes used throughout: high/low temperature,
# weak/strong damping. S = 1/2, g = 1, Omega = 1e6.
REGIMES = {
    "hot_weak": (10.0, 8.0, 5.0),
    "hot_strong": (10.0, 8.0, 20.0),
    "cold_weak": (0.01, 0.1, 0.05),
    "cold_strong": (0.01, 0.1, 5.0),
}
OMEGA = 1e6


def regime(name, bath="ohmic", tau=1.0):
    T, H0, gamma = REGIMES[name]
    sys = SpinSystem(0.5, 1.0, H0)
    env = ThermalEnv(T)
    b = BathSpec.ohmic(gamma, OMEGA) if bath == "ohmic" else BathSpec.drude(gamma, tau)
    return sys, b, env, equilibrium_mz(sys, env).mz


@pytest.fixture(params=sorted(REGIMES))
def regime_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
