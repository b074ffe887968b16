import json
import xml.etree.ElementTree as ET
from pathlib import Path

from tropquartic.render import SKELETON_COLOR, render_svg

DATA = Path(__file__).parent / "data"
NS = "{http://www.w3.org/2000/svg}"


def _report():
    return json.loads((DATA / "orbit0.report.json").read_text())


def _by_class(root, cls):
    return [e for e in root.iter() if e.get("class") == cls]


def test_golden_snapshot():
    assert render_svg(_report()) == (DATA / "orbit0.svg").read_text()


def test_deterministic():
    r = _report()
    assert render_svg(r) == render_svg(r)


def test_layers():
    report = _report()
    root = ET.fromstring(render_svg(report))
    assert root.tag == NS + "svg"
    edges = {e.get("data-edge") for e in _by_class(root, "edge")}
    skel = _by_class(root, "skeleton-edge")
    assert skel and {e.get("data-edge") for e in skel} <= edges
    assert all(e.get("stroke") == SKELETON_COLOR for e in skel)
    assert len(_by_class(root, "bitangent")) == 3 * 7
    bands = {e.get("data-theta") for e in _by_class(root, "family-band")}
    assert bands == {str(b["theta"]) for b in report["bitangents"]["classes"] if b["infinite"]}
    chips = _by_class(root, "theta-chip")
    assert len(chips) == sum(len(t["chips_plane"]) for t in report["theta"]["characteristics"])


def test_exact_coordinates_survive():
    report = _report()
    root = ET.fromstring(render_svg(report))
    verts = {f"{v['point'][0]},{v['point'][1]}" for v in report["curve"]["vertices"]}
    for e in _by_class(root, "edge"):
        assert e.get("data-from") in verts and e.get("data-to") in verts


def test_without_triangulation_panel():
    root = ET.fromstring(render_svg(_report(), triangulation=False))
    assert root.get("width") == "400"
    assert not _by_class(root, "triangulation")
