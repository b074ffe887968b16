import random
from dataclasses import dataclass

import pytest
from hypothesis import HealthCheck, settings

from tropquartic.lattice import (NonRegularTriangulation, enumerate_unimodular_triangulations,
                                 regular_heights, s3_orbits)
from tropquartic.metricgraph import classify_type
from tropquartic.tropcurve import dual_curve, skeleton

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@dataclass
class CensusCurve:
    orbit: int
    triangulation: object
    heights: dict
    curve: object
    skeleton: object
    kind: str


@pytest.fixture(scope="session")
def quartic_triangulations():
    return enumerate_unimodular_triangulations(4)


@pytest.fixture(scope="session")
def quartic_orbits(quartic_triangulations):
    return s3_orbits(quartic_triangulations)


@pytest.fixture(scope="session")
def orbit_curves(quartic_orbits):
    """One curve per regular orbit, canonical heights."""
    out = []
    for k, o in enumerate(quartic_orbits):
        t = o.representative
        try:
            h = regular_heights(t)
        except NonRegularTriangulation:
            continue
        c = dual_curve(t, h)
        sk = skeleton(c)
        out.append(CensusCurve(k, t, h, c, sk, classify_type(sk.graph).value))
    return out


@pytest.fixture(scope="session")
def curves_by_type(orbit_curves):
    out: dict = {}
    for cc in orbit_curves:
        out.setdefault(cc.kind, []).append(cc)
    return out


@pytest.fixture(scope="session")
def sample_curves(curves_by_type):
    """A few curves of every type, fixed by seed."""
    rng = random.Random(7)
    out = []
    for kind in sorted(curves_by_type):
        pool = curves_by_type[kind]
        out += rng.sample(pool, min(3, len(pool)))
    return out



_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """``record(n, ok, detail)``: verdicts echoed after the run, one line per criterion."""
    store = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(n: int, ok: bool, detail: str) -> None:
        store[n] = (ok, detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(_ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(store):
        ok, detail = store[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
