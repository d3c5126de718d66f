"""Deterministic SVG drawings of circled planar trees.

The layout is a tidy layered drawing: the root edge enters from below, every
vertex sits one layer above its parent, leaf tips and childless vertices get
consecutive horizontal slots, and an inner vertex is centred over its
children.  Each circle is drawn as the convex hull of its region (the
positions of the vertices it encloses plus the curves of the circles directly
inside it) offset outwards by a fixed margin, so nested circles are nested
curves by construction.  White circles are dashed and labelled, black circles
are solid.

Aesthetics are secondary to determinism: the same term and options always
produce byte-identical SVG.  ``clearance_violations`` checks the drawing
geometrically, curve against curve and curve against edge, against the
combinatorial nesting structure of the term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circled import Black, Circ, White
from .trees import Leaf, Node


@dataclass(frozen=True)
class LayoutOptions:
    """Geometry knobs; defaults keep curves clear of neighbouring branches.

    Deeply nested circles grow by one margin per level, so very deep nestings
    may need a larger slot_width or layer_height to stay clear.
    """

    slot_width: float = 100.0
    layer_height: float = 80.0
    crossing_stretch: float = 0.5
    margin: float = 14.0
    corner_samples: int = 16
    pad: float = 30.0
    stroke_width: float = 1.5
    vertex_radius: float = 3.0
    font_size: float = 12.0


@dataclass(frozen=True)
class LayoutNode:
    """A drawn point of the tree: the root tip, a vertex, or a leaf tip."""

    x: float
    y: float
    kind: str


@dataclass(frozen=True)
class LayoutEdge:
    """An edge between two node ids, with the circles crossing it in order."""

    src: int
    dst: int
    crossings: tuple


@dataclass(frozen=True)
class CircleCurve:
    """A closed convex curve for one circle of the term."""

    kind: White | Black
    points: tuple
    parent: int | None


@dataclass(frozen=True)
class Layout:
    nodes: tuple
    edges: tuple
    curves: tuple
    regions: tuple
    options: LayoutOptions


class _Edge:
    __slots__ = ("src", "dst", "crossings")

    def __init__(self, src: int):
        self.src = src
        self.dst = None
        self.crossings = []


def layout_config(c, options: LayoutOptions | None = None) -> Layout:
    """Lay out a circled tree; node 0 is the root tip below the root edge."""
    opt = options or LayoutOptions()
    kinds = ["root"]
    ys = [0.0]
    children: dict[int, list[int]] = {0: []}
    edges: list[_Edge] = []
    circles: list[dict] = []

    def new_node(kind: str, edge: _Edge) -> int:
        # An edge is stretched by its crossing load, so stacked circles on
        # one edge always have room for their growing curve radii.
        nid = len(kinds)
        kinds.append(kind)
        ys.append(
            ys[edge.src]
            + opt.layer_height * (1 + opt.crossing_stretch * len(edge.crossings))
        )
        children[nid] = []
        children[edge.src].append(nid)
        edge.dst = nid
        return nid

    def walk(term, edge: _Edge, stack):
        if isinstance(term, Leaf):
            if stack:
                cid, grafts = stack[-1]
                edge.crossings.append(cid)
                walk(next(grafts), edge, stack[:-1])
            else:
                new_node("leaf", edge)
        elif isinstance(term, Node):
            nid = new_node("vertex", edge)
            for cid, _ in stack:
                circles[cid]["vertices"].add(nid)
            for child in term.children:
                e = _Edge(nid)
                edges.append(e)
                walk(child, e, stack)
        else:
            cid = len(circles)
            circles.append({
                "kind": term.kind,
                "parent": stack[-1][0] if stack else None,
                "vertices": set(),
            })
            edge.crossings.append(cid)
            walk(term.content, edge, stack + ((cid, iter(term.grafts)),))

    root_edge = _Edge(0)
    edges.append(root_edge)
    walk(c, root_edge, ())

    # Tidy x positions: DFS slots for childless nodes, means above them.
    xs = [0.0] * len(kinds)
    slot = [0]

    def place(nid: int):
        if not children[nid]:
            xs[nid] = slot[0] * opt.slot_width
            slot[0] += 1
        else:
            for child in children[nid]:
                place(child)
            xs[nid] = sum(xs[ch] for ch in children[nid]) / len(children[nid])

    place(root_edge.dst)
    xs[0] = xs[root_edge.dst]

    nodes = tuple(
        LayoutNode(xs[n], ys[n], kinds[n]) for n in range(len(kinds))
    )

    curve_points: dict[int, tuple] = {}
    circ_children: dict[int, list[int]] = {cid: [] for cid in range(len(circles))}
    for cid, info in enumerate(circles):
        if info["parent"] is not None:
            circ_children[info["parent"]].append(cid)

    def anchor(cid: int):
        # A circle around a bare edge segment: centre it between its two
        # crossing marks on that edge.
        for e in edges:
            if e.crossings.count(cid) == 2:
                total = len(e.crossings) + 1
                lo = (e.crossings.index(cid) + 1) / total
                hi = (len(e.crossings) - list(reversed(e.crossings)).index(cid)) / total
                t = (lo + hi) / 2
                a, b = nodes[e.src], nodes[e.dst]
                return (a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        raise ValueError(f"circle {cid} has no region to anchor a curve on")

    def build_curve(cid: int):
        for child in circ_children[cid]:
            build_curve(child)
        pts = [(nodes[v].x, nodes[v].y) for v in sorted(circles[cid]["vertices"])]
        for child in circ_children[cid]:
            pts.extend(curve_points[child])
        if not pts:
            pts = [anchor(cid)]
        # Half-step offset keeps hull corners off the vertical edge lines,
        # so curve/edge crossings stay transversal.
        step = 2 * math.pi / opt.corner_samples
        angles = [(i + 0.5) * step for i in range(opt.corner_samples)]
        aug = [
            (x + opt.margin * math.cos(a), y + opt.margin * math.sin(a))
            for x, y in pts
            for a in angles
        ]
        curve_points[cid] = convex_hull(aug)

    for cid, info in enumerate(circles):
        if info["parent"] is None:
            build_curve(cid)

    curves = tuple(
        CircleCurve(info["kind"], curve_points[cid], info["parent"])
        for cid, info in enumerate(circles)
    )
    regions = tuple(frozenset(info["vertices"]) for info in circles)
    layout_edges = tuple(
        LayoutEdge(e.src, e.dst, tuple(e.crossings)) for e in edges
    )
    return Layout(nodes, layout_edges, curves, regions, opt)


# --- plane geometry ----------------------------------------------------------------

def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


_EPS = 1e-7
_HULL_EPS = 1e-6


def convex_hull(points) -> tuple:
    """Counterclockwise hull without the repeated endpoint (monotone chain).

    Near-collinear corners are dropped so the result has no micro-edges.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= _HULL_EPS:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= _HULL_EPS:
            upper.pop()
        upper.append(p)
    return tuple(lower[:-1] + upper[:-1])


def point_in_convex(p, poly) -> bool:
    """Strict interior test for a counterclockwise convex polygon."""
    if len(poly) < 3:
        return False
    for i in range(len(poly)):
        v, w = poly[i], poly[(i + 1) % len(poly)]
        length = math.hypot(w[0] - v[0], w[1] - v[1])
        if _cross(v, w, p) <= _EPS * max(length, 1.0):
            return False
    return True


def _segments_cross(p, q, r, s) -> bool:
    # Proper crossing only: each segment separates the other's endpoints.
    d1 = _cross(p, q, r)
    d2 = _cross(p, q, s)
    d3 = _cross(r, s, p)
    d4 = _cross(r, s, q)
    return (
        (d1 > _EPS) != (d2 > _EPS)
        and (d1 < -_EPS) != (d2 < -_EPS)
        and (d3 > _EPS) != (d4 > _EPS)
        and (d3 < -_EPS) != (d4 < -_EPS)
    )


def segment_polygon_crossings(a, b, poly) -> int:
    """Transversal crossings of segment ab with a convex polygon boundary.

    Clips the segment against the polygon's half-planes; the crossing count
    is how many ends of the clipped parameter interval are interior to the
    segment.  Vertex grazings do not count as crossings.
    """
    t0, t1 = 0.0, 1.0
    for i in range(len(poly)):
        v, w = poly[i], poly[(i + 1) % len(poly)]
        f0 = _cross(v, w, a)
        f1 = _cross(v, w, b)
        if f0 < 0 and f1 < 0:
            return 0
        if f0 < 0:
            t0 = max(t0, f0 / (f0 - f1))
        elif f1 < 0:
            t1 = min(t1, f0 / (f0 - f1))
    if t0 >= t1 - 1e-9:
        return 0
    return (t0 > 1e-9) + (t1 < 1 - 1e-9)


def polygon_relation(p, q) -> str:
    """'crossing', 'nested_pq' (p inside q), 'nested_qp', or 'disjoint'."""
    for i in range(len(p)):
        for j in range(len(q)):
            if _segments_cross(
                p[i], p[(i + 1) % len(p)], q[j], q[(j + 1) % len(q)]
            ):
                return "crossing"
    if all(point_in_convex(v, q) for v in p):
        return "nested_pq"
    if all(point_in_convex(v, p) for v in q):
        return "nested_qp"
    if any(point_in_convex(v, q) for v in p) or any(
        point_in_convex(v, p) for v in q
    ):
        return "crossing"
    return "disjoint"


def _ancestors(curves, cid: int) -> set:
    out = set()
    parent = curves[cid].parent
    while parent is not None:
        out.add(parent)
        parent = curves[parent].parent
    return out


def clearance_violations(layout: Layout) -> tuple:
    """Geometric defects of a drawing, as human-readable strings.

    Checks that every pair of curves is nested or disjoint exactly as the
    term nests the circles, and that every edge meets every curve in exactly
    the crossings recorded during layout, with its endpoints on the correct
    sides.  An empty result certifies an intersection-free drawing.
    """
    out = []
    curves = layout.curves
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            rel = polygon_relation(curves[i].points, curves[j].points)
            if i in _ancestors(curves, j):
                want = "nested_qp"
            elif j in _ancestors(curves, i):
                want = "nested_pq"
            else:
                want = "disjoint"
            if rel != want:
                out.append(f"curves {i} and {j}: expected {want}, got {rel}")
    for e in layout.edges:
        a = (layout.nodes[e.src].x, layout.nodes[e.src].y)
        b = (layout.nodes[e.dst].x, layout.nodes[e.dst].y)
        for cid, curve in enumerate(curves):
            for nid, p in ((e.src, a), (e.dst, b)):
                want_in = nid in layout.regions[cid]
                if point_in_convex(p, curve.points) != want_in:
                    side = "inside" if want_in else "outside"
                    out.append(
                        f"node {nid} should be {side} curve {cid}"
                    )
            want = e.crossings.count(cid)
            got = segment_polygon_crossings(a, b, curve.points)
            if got != want:
                out.append(
                    f"edge {e.src}->{e.dst} crosses curve {cid}"
                    f" {got} times, expected {want}"
                )
    return tuple(out)


# --- SVG ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(c, options: LayoutOptions | None = None) -> str:
    """Render a circled tree to a standalone SVG document."""
    layout = layout_config(c, options)
    return render_layout(layout)


def render_layout(layout: Layout) -> str:
    opt = layout.options
    pts = [(n.x, n.y) for n in layout.nodes]
    for curve in layout.curves:
        pts.extend(curve.points)
    min_x = min(x for x, _ in pts)
    max_x = max(x for x, _ in pts)
    min_y = min(y for _, y in pts)
    max_y = max(y for _, y in pts)
    width = (max_x - min_x) + 2 * opt.pad
    height = (max_y - min_y) + 2 * opt.pad

    def at(p):
        # Flip: layout y grows upward, SVG y grows downward.
        return (p[0] - min_x + opt.pad, (max_y - p[1]) + opt.pad)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}"'
        f' height="{_fmt(height)}"'
        f' viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<g stroke="black" stroke-width="{_fmt(opt.stroke_width)}" fill="none">',
    ]
    for e in layout.edges:
        (x1, y1) = at((layout.nodes[e.src].x, layout.nodes[e.src].y))
        (x2, y2) = at((layout.nodes[e.dst].x, layout.nodes[e.dst].y))
        lines.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}"'
            f' x2="{_fmt(x2)}" y2="{_fmt(y2)}"/>'
        )
    for n in layout.nodes:
        if n.kind == "vertex":
            (cx, cy) = at((n.x, n.y))
            lines.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}"'
                f' r="{_fmt(opt.vertex_radius)}" fill="black"/>'
            )
    for curve in layout.curves:
        path = " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in map(at, curve.points))
        dash = ' stroke-dasharray="6 4"' if isinstance(curve.kind, White) else ""
        lines.append(f'<path d="M {path} Z"{dash}/>')
        if isinstance(curve.kind, White):
            top = max(curve.points, key=lambda p: (p[1], -p[0]))
            (tx, ty) = at(top)
            lines.append(
                f'<text x="{_fmt(tx)}" y="{_fmt(ty - 6)}" fill="black"'
                f' stroke="none" font-family="monospace"'
                f' font-size="{_fmt(opt.font_size)}"'
                f' text-anchor="middle">{curve.kind.label}</text>'
            )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
