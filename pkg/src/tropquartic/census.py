"""Census pipeline over unimodular triangulations of the degree-d triangle.

Each work unit is one triangulation (an S3-orbit representative by default).
Records are independent, so they are computed in a process pool and written
back in canonical order; the output does not depend on ``jobs``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .bitangent import TheoremViolation, bitangent_classes
from .divisor import random_divisor, riemann_roch_residual
from .hyperelliptic import NotApplicable, cut_length_witness, hyperelliptic_verdict
from .lattice import (NonRegularTriangulation, Triangulation, enumerate_unimodular_triangulations,
                      generic_heights, parse_triangulation, regular_heights, s3_orbits)
from .metricgraph import CombinatorialType, ModelMap, classify_type
from .theta import ThetaContractError, all_theta_characteristics, category_counts
from .tropcurve import check_balancing, dual_curve, is_smooth, skeleton

# reference degree-4 counts the census is compared against
REFERENCE_COUNTS = {
    "triangulations": 7422,
    "orbits": 1277,
    "types": {"Honeycomb": 573, "MickeyMouse": 450, "OneBridge": 225, "TwoBridge": 30},
}

# (Rigid, Flexible, Tandem) per type for length-generic curves
EXPECTED_CATEGORIES = {
    "Honeycomb": (7, 0, 0),
    "MickeyMouse": (6, 0, 1),
    "OneBridge": (4, 3, 0),
    "TwoBridge": (3, 3, 1),
}

SCHEMA_RECORD = "tropquartic.census-record/1"
SCHEMA_SUMMARY = "tropquartic.census-summary/1"


@dataclass(frozen=True)
class RunConfig:
    degree: int = 4
    heights: str = "canonical"   # canonical | generic
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    checks: str = "all"          # all | fast
    scope: str = "orbits"        # orbits | all
    limit: int | None = None     # first N work units, for smoke runs
    rr_samples: int = 2          # random divisors per curve checked against Riemann-Roch

    def __post_init__(self):
        if self.heights not in ("canonical", "generic"):
            raise ValueError(f"unknown height policy {self.heights!r}")
        if self.checks not in ("all", "fast"):
            raise ValueError(f"unknown check level {self.checks!r}")
        if self.scope not in ("orbits", "all"):
            raise ValueError(f"unknown scope {self.scope!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    @property
    def families(self) -> bool:
        return self.checks == "all"

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class CensusRecord:
    triangulation_id: int
    orbit_id: int
    orbit_size: int
    triangulation: list                  # sorted triangles as coordinate lists
    regular: bool
    heights: dict | None = None          # "x,y" -> integer height
    combinatorial_type: str | None = None
    structure_ok: bool | None = None
    edge_lengths: list | None = None     # minimal-model edges: [edge, u, v, length]
    theta_categories: list | None = None
    theta_counts: list | None = None     # [Rigid, Flexible, Tandem]
    theta_chip_on_vertex: bool | None = None
    category_deviation: str | None = None
    bitangent_classes: int | None = None
    bitangent_profiles: list | None = None
    bitangent_methods: list | None = None
    infinite_families: int | None = None
    hyperelliptic: bool | None = None
    hyperelliptic_reason: str | None = None
    cut_witness: dict | None = None
    rr_residuals: list | None = None
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"schema": SCHEMA_RECORD}
        out.update(asdict(self))
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class WorkUnit:
    triangulation_id: int
    orbit_id: int
    orbit_size: int
    text: str


def work_units(config: RunConfig) -> list[WorkUnit]:
    ts = enumerate_unimodular_triangulations(config.degree)
    ids = {t.key(): i for i, t in enumerate(ts)}
    orbits = s3_orbits(ts)
    units = []
    for k, o in enumerate(orbits):
        members = [o.representative] if config.scope == "orbits" else sorted(o.members, key=Triangulation.key)
        for t in members:
            units.append(WorkUnit(ids[t.key()], k, o.size, t.serialize()))
    units.sort(key=lambda u: u.triangulation_id)
    if config.limit is not None:
        units = units[:config.limit]
    return units


def _deviation(kind: str, counts: tuple, on_vertex: bool) -> str | None:
    if EXPECTED_CATEGORIES.get(kind) == counts:
        return None
    return "vertex-chip" if on_vertex else "length-regime"


def analyze_unit(unit: WorkUnit, config: RunConfig) -> CensusRecord:
    t = parse_triangulation(unit.text)
    rec = CensusRecord(unit.triangulation_id, unit.orbit_id, unit.orbit_size,
                       [[list(p) for p in tri] for tri in t.triangles], regular=False)
    try:
        h = regular_heights(t) if config.heights == "canonical" else generic_heights(t, config.seed)
    except NonRegularTriangulation:
        return rec
    rec.regular = True
    rec.heights = {f"{p[0]},{p[1]}": int(v) for p, v in sorted(h.items())}
    c = dual_curve(t, h)
    sk = skeleton(c)
    g = sk.graph
    kind = classify_type(g).value
    rec.combinatorial_type = kind
    rec.structure_ok = (check_balancing(c) and is_smooth(c) and g.genus() == 3
                        and len(c.vertices) == t.degree ** 2
                        and kind not in (CombinatorialType.LOLLIPOP.value, CombinatorialType.OTHER.value))
    if not rec.structure_ok:
        rec.violations.append("structure")
    m = ModelMap(g).minimal
    rec.edge_lengths = [[e, u, v, str(L)] for e, (u, v, L) in sorted(m.edges.items())]

    try:
        thetas = all_theta_characteristics(g)
    except ThetaContractError as exc:
        rec.violations.append(f"theta: {exc}")
        return rec
    counts = category_counts(thetas)
    rec.theta_categories = [th.category.value for th in thetas]
    rec.theta_counts = list(counts)
    rec.theta_chip_on_vertex = any(th.on_vertex for th in thetas)
    rec.category_deviation = _deviation(kind, counts, rec.theta_chip_on_vertex)

    try:
        classes = bitangent_classes(c, thetas, families=config.families)
        rec.bitangent_classes = len(classes)
        rec.bitangent_profiles = [list(b.representative.profile) for b in classes]
        rec.bitangent_methods = [b.representative.method for b in classes]
        rec.infinite_families = sum(b.is_family for b in classes)
    except TheoremViolation as exc:
        rec.violations.append(f"bitangent: {exc}")

    v = hyperelliptic_verdict(g)
    rec.hyperelliptic = v.hyperelliptic
    rec.hyperelliptic_reason = v.reason
    if v.hyperelliptic:
        rec.violations.append("hyperelliptic")
    try:
        w = cut_length_witness(c)
        rec.cut_witness = w.to_json()
        if not w.e2_length > w.e1_length:
            rec.violations.append("cut-length")
    except NotApplicable:
        pass

    if config.checks == "all" and config.rr_samples:
        rng = random.Random(f"{config.seed}:{unit.triangulation_id}")
        res = [riemann_roch_residual(random_divisor(g, rng.randint(-2, 6), rng))
               for _ in range(config.rr_samples)]
        rec.rr_residuals = res
        if any(res):
            rec.violations.append("riemann-roch")
    return rec


def _run_one(args) -> CensusRecord:
    return analyze_unit(*args)


def run_census(config: RunConfig, units: list[WorkUnit] | None = None):
    """Yield records in triangulation-id order."""
    units = work_units(config) if units is None else units
    args = [(u, config) for u in units]
    if config.jobs == 1:
        yield from map(_run_one, args)
        return
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        yield from pool.map(_run_one, args, chunksize=4)


@dataclass
class CensusSummary:
    config: dict
    units: int = 0
    regular: int = 0
    non_regular_ids: list = field(default_factory=list)
    orbits: int = 0
    regular_orbits: int = 0
    types: dict = field(default_factory=dict)
    seven_bitangent_classes: int = 0
    profiles: dict = field(default_factory=dict)
    infinite_families: int = 0
    curves_with_family: int = 0
    hyperelliptic: int = 0
    cut_witness_strict: int = 0
    category_counts: dict = field(default_factory=dict)
    category_deviations: dict = field(default_factory=dict)
    rr_checked: int = 0
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"schema": SCHEMA_SUMMARY}
        out.update(asdict(self))
        out["reference"] = REFERENCE_COUNTS
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def summarize(records, config: RunConfig) -> CensusSummary:
    s = CensusSummary(config.to_json())
    types, profiles, cats, devs = Counter(), Counter(), Counter(), Counter()
    orbits, regular_orbits = set(), set()
    for r in records:
        s.units += 1
        orbits.add(r.orbit_id)
        if not r.regular:
            s.non_regular_ids.append(r.triangulation_id)
            continue
        s.regular += 1
        regular_orbits.add(r.orbit_id)
        types[r.combinatorial_type] += 1
        if r.bitangent_classes == 7:
            s.seven_bitangent_classes += 1
        for p in r.bitangent_profiles or ():
            profiles["(" + ",".join(map(str, p)) + ")"] += 1
        if r.infinite_families:
            s.infinite_families += r.infinite_families
            s.curves_with_family += 1
        s.hyperelliptic += bool(r.hyperelliptic)
        if r.cut_witness is not None and "cut-length" not in r.violations:
            s.cut_witness_strict += 1
        if r.theta_counts is not None:
            cats[f"{r.combinatorial_type} {'/'.join(map(str, r.theta_counts))}"] += 1
        if r.category_deviation:
            devs[f"{r.combinatorial_type} {r.category_deviation}"] += 1
        s.rr_checked += len(r.rr_residuals or ())
        for v in r.violations:
            s.violations.append({"triangulation_id": r.triangulation_id, "violation": v})
    s.orbits, s.regular_orbits = len(orbits), len(regular_orbits)
    s.types = dict(sorted(types.items()))
    s.profiles = dict(sorted(profiles.items()))
    s.category_counts = dict(sorted(cats.items()))
    s.category_deviations = dict(sorted(devs.items()))
    return s


def summary_table(s: CensusSummary) -> str:
    rows = [("work units", s.units), ("regular", s.regular),
            ("non-regular ids", " ".join(map(str, s.non_regular_ids)) or "-"),
            ("orbits (regular)", f"{s.orbits} ({s.regular_orbits})")]
    rows += [(f"type {k}", v) for k, v in s.types.items()]
    rows += [("7 bitangent classes", f"{s.seven_bitangent_classes}/{s.regular}"),
             ("curves with infinite family", s.curves_with_family),
             ("hyperelliptic", s.hyperelliptic),
             ("strict cut witnesses", s.cut_witness_strict)]
    rows += [(f"profile {k}", v) for k, v in s.profiles.items()]
    rows += [(f"R/F/T {k}", v) for k, v in s.category_counts.items()]
    rows += [(f"deviation {k}", v) for k, v in s.category_deviations.items()]
    rows += [("Riemann-Roch samples", s.rr_checked), ("violations", len(s.violations))]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"
