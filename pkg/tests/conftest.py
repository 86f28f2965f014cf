import math

import pytest

from fctdrem import ParameterProfile, Segment


def step_ramp_profile() -> ParameterProfile:
    """Bundled-study parameter trajectory: 10, jump to 15 at t=10, ramp back
    to 10 over [20, 30], then hold."""
    return ParameterProfile.scalar(
        (
            Segment(0.0, 10.0, 10.0),
            Segment(10.0, 20.0, 15.0),
            Segment(20.0, 30.0, 15.0, -0.5),
            Segment(30.0, math.inf, 10.0),
        )
    )


@pytest.fixture
def theta_profile():
    return step_ramp_profile()


@pytest.fixture(scope="session")
def bundled_runs(tmp_path_factory):
    """Memoized bundled-scenario runs shared across test modules."""
    from fctdrem.cli import bundled_path
    from fctdrem.scenario import parse_scenario, run_scenario

    cache = {}

    def get(name):
        if name not in cache:
            out = tmp_path_factory.mktemp(f"run_{name}")
            scn = parse_scenario(bundled_path(name))
            table, reports = run_scenario(scn, out)
            cache[name] = (scn, table, reports, out)
        return cache[name]

    return get


def bisect_root(f, lo: float, hi: float, iters: int = 200) -> float:
    """Plain bisection; used as an independent oracle for crossing times."""
    flo = f(lo)
    assert flo * f(hi) < 0, "root not bracketed"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)
