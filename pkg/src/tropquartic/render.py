"""Deterministic SVG pictures of a curve report.

Geometry is kept exact up to the final formatting step; every drawn element
carries its exact coordinates in ``data-*`` attributes.
"""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import quoteattr

SKELETON_COLOR = "#d62728"
PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
LINE_RAYS = ((-1, 0), (0, -1), (1, 1))
PANEL = 400
GAP = 40


def _q(s) -> Fraction:
    return Fraction(s)


def _pt(xy) -> tuple:
    return (_q(xy[0]), _q(xy[1]))


def _num(x: Fraction) -> str:
    return f"{float(x):.4f}".rstrip("0").rstrip(".")


class _Frame:
    """Affine map from an exact box onto a square panel, y pointing up."""

    def __init__(self, lo, hi, x0: int):
        span = max(hi[0] - lo[0], hi[1] - lo[1], Fraction(1))
        self.lo, self.span, self.x0 = lo, span, x0
        self.scale = Fraction(PANEL, 1) / span

    def __call__(self, p) -> tuple:
        x = self.x0 + (p[0] - self.lo[0]) * self.scale
        y = PANEL - (p[1] - self.lo[1]) * self.scale
        return x, y


def _box(points, pad_ratio=Fraction(1, 4)) -> tuple:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    pad = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1)) * pad_ratio
    return (min(xs) - pad, min(ys) - pad), (max(xs) + pad, max(ys) + pad)


def _ray_end(p, u, lo, hi) -> tuple:
    """Point where the ray from ``p`` along ``u`` leaves the box."""
    ts = []
    for k in (0, 1):
        if u[k] > 0:
            ts.append((hi[k] - p[k]) / u[k])
        elif u[k] < 0:
            ts.append((lo[k] - p[k]) / u[k])
    t = max(min(ts), Fraction(0))
    return (p[0] + t * u[0], p[1] + t * u[1])


def _exact(p) -> str:
    return f"{p[0]},{p[1]}"


def _line(a, b, frame, attrs: str) -> str:
    (x1, y1), (x2, y2) = frame(a), frame(b)
    return (f'<line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
            f'data-from={quoteattr(_exact(a))} data-to={quoteattr(_exact(b))} {attrs}/>')


def _polygon(pts, frame, attrs: str) -> str:
    coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in map(frame, pts))
    return f'<polygon points="{coords}" {attrs}/>'


def _triangulation_panel(report: dict) -> list:
    d = report["degree"]
    frame = _Frame((Fraction(-1, 2), Fraction(-1, 2)), (Fraction(d) + Fraction(1, 2),) * 2, 0)
    out = ['<g class="triangulation">']
    for tri in report["triangulation"]:
        pts = [(Fraction(x), Fraction(y)) for x, y in tri]
        out.append(_polygon(pts, frame, 'fill="none" stroke="#444" stroke-width="1.5"'))
    for i in range(d + 1):
        for j in range(d + 1 - i):
            x, y = frame((Fraction(i), Fraction(j)))
            out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="3" fill="#000"/>')
    out.append("</g>")
    return out


def render_svg(report: dict, triangulation: bool = True) -> str:
    """SVG of the report's curve with skeleton, theta chips and bitangent lines."""
    curve = report["curve"]
    verts = [_pt(v["point"]) for v in curve["vertices"]]
    lines = [c for c in report.get("bitangents", {}).get("classes", [])]
    anchors = verts + [_pt(b["vertex"]) for b in lines]
    lo, hi = _box(anchors)
    x0 = PANEL + GAP if triangulation else 0
    frame = _Frame(lo, hi, x0)
    # a square viewport in plane units
    hi = (lo[0] + frame.span, lo[1] + frame.span)
    width = x0 + PANEL

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" '
           f'viewBox="0 0 {width} {PANEL}">']
    if triangulation:
        out += _triangulation_panel(report)

    out.append('<g class="families">')
    for b in lines:
        fam = b.get("family")
        if fam is None:
            continue
        color = PALETTE[b["theta"] % len(PALETTE)]
        s, u = _pt(fam["start"]), fam["direction"]
        if fam["length"] is None:
            e = _ray_end(s, u, lo, hi)
        else:
            L = _q(fam["length"])
            e = (s[0] + L * u[0], s[1] + L * u[1])
        for r in LINE_RAYS:
            quad = [s, e, _ray_end(e, r, lo, hi), _ray_end(s, r, lo, hi)]
            out.append(_polygon(quad, frame, f'class="family-band" data-theta="{b["theta"]}" '
                                             f'fill="{color}" fill-opacity="0.15" stroke="none"'))
    out.append("</g>")

    out.append('<g class="curve">')
    for e in curve["edges"]:
        a, b = verts[e["tail"]], verts[e["head"]]
        out.append(_line(a, b, frame, f'class="edge" data-edge="{e["id"]}" stroke="#000" stroke-width="1.5"'))
    for r in curve["rays"]:
        a = verts[r["tail"]]
        out.append(_line(a, _ray_end(a, r["direction"], lo, hi), frame,
                         f'class="ray" data-edge="{r["id"]}" stroke="#777" stroke-width="1"'))
    out.append("</g>")

    skel = set(report["skeleton"]["edges"])
    out.append('<g class="skeleton">')
    for e in curve["edges"]:
        if e["id"] in skel:
            a, b = verts[e["tail"]], verts[e["head"]]
            out.append(_line(a, b, frame, f'class="skeleton-edge" data-edge="{e["id"]}" '
                                          f'stroke="{SKELETON_COLOR}" stroke-width="3"'))
    out.append("</g>")

    out.append('<g class="bitangents">')
    for b in lines:
        color = PALETTE[b["theta"] % len(PALETTE)]
        v = _pt(b["vertex"])
        for r in LINE_RAYS:
            out.append(_line(v, _ray_end(v, r, lo, hi), frame,
                             f'class="bitangent" data-theta="{b["theta"]}" stroke="{color}" '
                             f'stroke-width="1" stroke-dasharray="4 2"'))
    out.append("</g>")

    out.append('<g class="theta-chips">')
    for th in report.get("theta", {}).get("characteristics", []):
        color = PALETTE[th["index"] % len(PALETTE)]
        for chip in th.get("chips_plane", []):
            p = _pt(chip["point"])
            x, y = frame(p)
            out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{3 + 2 * chip["multiplicity"]}" '
                       f'class="theta-chip" data-theta="{th["index"]}" data-point={quoteattr(_exact(p))} '
                       f'fill="{color}" fill-opacity="0.8"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
