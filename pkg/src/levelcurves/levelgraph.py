"""Planar-graph structure of a traced level-curve component.

A component with vertices becomes an embedded multigraph: vertices are the
captured critical points, edges the traced arcs, and the rotation system at
each vertex comes from the outgoing tangent angles of the incident arc ends.
Faces are the orbits of the next-dart walk; the unbounded face is the one
whose boundary walk is oriented against all the others.

A component without vertices is kept as a single closed edge with V == 0 and
two faces, so the face-count formula reads literally with an empty vertex sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .config import DEFAULT_TOLS, Tolerances
from .errors import TopologyError
from .funcspace import RationalFn
from .tracer import LevelCurveComponent


@dataclass
class Face:
    id: int
    bounded: bool
    edge_cycle: list[tuple[int, int]]  # (edge id, +1 forward / -1 reverse)
    polygon: np.ndarray  # closed boundary walk
    rep_point: complex
    area: float


@dataclass
class LevelGraph:
    """Embedded planar graph of one level-curve component."""

    level: float
    vertices: list[tuple[complex, int]]  # (position, mult)
    edges: list  # TracedArc refs
    faces: list[Face]
    component: LevelCurveComponent
    dart_face: dict = field(default_factory=dict)  # (edge id, dir) -> face id

    @property
    def unbounded_face(self) -> Face:
        return next(f for f in self.faces if not f.bounded)

    @property
    def bounded_faces(self) -> list[Face]:
        return [f for f in self.faces if f.bounded]

    def degree(self, v_idx: int) -> int:
        deg = 0
        for e in self.edges:
            if e.start_vertex == v_idx:
                deg += 1
            if e.end_vertex == v_idx:
                deg += 1
        return deg

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "vertices": [
                {"id": i, "re": c.real, "im": c.imag, "mult": m}
                for i, (c, m) in enumerate(self.vertices)
            ],
            "edges": [
                {
                    "id": i,
                    "v_from": e.start_vertex,
                    "v_to": e.end_vertex,
                    "closed": e.closed,
                    "polyline_id": i,
                }
                for i, e in enumerate(self.edges)
            ],
            "faces": [
                {
                    "id": f.id,
                    "bounded": f.bounded,
                    "edge_cycle": [[eid, d] for eid, d in f.edge_cycle],
                    "rep_re": f.rep_point.real,
                    "rep_im": f.rep_point.imag,
                }
                for f in self.faces
            ],
        }


# ---------------------------------------------------------------------------


def build_graph(comp: LevelCurveComponent, tols: Tolerances = DEFAULT_TOLS) -> LevelGraph:
    """Embed a traced component and enumerate its faces.

    All structural laws are asserted here: vertex degree 2*(mult+1), every
    edge adjacent to two distinct faces, the face-count formula, and Euler's
    relation.  A violation raises :class:`TopologyError`.
    """
    if not comp.vertices:
        return _closed_curve_graph(comp)

    n_v = len(comp.vertices)
    edges = list(comp.arcs)

    # stubs[(v)] = sorted list of (angle, edge id, end flag 0=start 1=end)
    stubs: list[list[tuple[float, int, int]]] = [[] for _ in range(n_v)]
    for ei, e in enumerate(edges):
        if e.closed or e.start_vertex is None or e.end_vertex is None:
            raise TopologyError("component mixes closed arcs with vertices")
        p = e.points
        va = comp.vertices[e.start_vertex][0]
        vb = comp.vertices[e.end_vertex][0]
        ang_a = math.atan2((p[1] - va).imag, (p[1] - va).real)
        ang_b = math.atan2((p[-2] - vb).imag, (p[-2] - vb).real)
        stubs[e.start_vertex].append((ang_a, ei, 0))
        stubs[e.end_vertex].append((ang_b, ei, 1))

    for vi, (c, m) in enumerate(comp.vertices):
        want = 2 * (m + 1)
        if len(stubs[vi]) != want:
            raise TopologyError(
                f"vertex {c} has degree {len(stubs[vi])}, expected 2*(mult+1) = {want}"
            )
        stubs[vi].sort()
        angles = [s[0] for s in stubs[vi]]
        for k in range(len(angles)):
            gap = (angles[(k + 1) % len(angles)] - angles[k]) % (2.0 * math.pi)
            if gap < tols.angle_tol:
                raise TopologyError(
                    f"rotation ambiguity at vertex {c}: incident arcs separated by {gap:.2e} rad"
                )

    # darts: (edge id, dir) with dir 0 = start->end, 1 = end->start.
    # stub_of_tail / stub_of_head locate the dart among the vertex rotations.
    stub_index: dict[tuple[int, int], tuple[int, int]] = {}
    for vi, lst in enumerate(stubs):
        for pos, (_, ei, flag) in enumerate(lst):
            stub_index[(ei, flag)] = (vi, pos)

    def next_dart(dart):
        ei, d = dart
        head_flag = 1 if d == 0 else 0
        vi, pos = stub_index[(ei, head_flag)]
        lst = stubs[vi]
        _, ei2, flag2 = lst[(pos + 1) % len(lst)]
        return (ei2, 0 if flag2 == 0 else 1)

    all_darts = [(ei, d) for ei in range(len(edges)) for d in (0, 1)]
    seen = set()
    walks: list[list[tuple[int, int]]] = []
    for start in all_darts:
        if start in seen:
            continue
        walk = []
        cur = start
        while True:
            walk.append(cur)
            seen.add(cur)
            cur = next_dart(cur)
            if cur == start:
                break
            if cur in seen:
                raise TopologyError("face walk re-entered a visited dart; embedding corrupt")
        walks.append(walk)

    faces = _materialize_faces(walks, edges, comp, tols)

    graph = LevelGraph(comp.level, list(comp.vertices), edges, faces, comp)
    for f in faces:
        for k, (eid, d) in enumerate(f.edge_cycle):
            graph.dart_face[(eid, 0 if d > 0 else 1)] = f.id

    _assert_laws(graph)
    return graph


def _closed_curve_graph(comp: LevelCurveComponent) -> LevelGraph:
    if len(comp.arcs) != 1 or not comp.arcs[0].closed:
        raise TopologyError("vertex-free component must be a single closed arc")
    pts = comp.arcs[0].points
    area = geometry.signed_area(pts)
    if area == 0.0:
        raise TopologyError("closed curve has zero area")
    inner = _interior_point(pts, want_winding=True)
    x0, y0, x1, y1 = geometry.bounding_box([pts])
    outer = complex(x0 - (x1 - x0) - 1.0, y0 - (y1 - y0) - 1.0)
    faces = [
        Face(0, True, [(0, 1)], np.asarray(pts), inner, abs(area)),
        Face(1, False, [(0, -1)], np.asarray(pts)[::-1], outer, -abs(area)),
    ]
    g = LevelGraph(comp.level, [], [comp.arcs[0]], faces, comp)
    g.dart_face[(0, 0)] = 0
    g.dart_face[(0, 1)] = 1
    return g


def _materialize_faces(walks, edges, comp, tols) -> list[Face]:
    polys = []
    areas = []
    cycles = []
    for walk in walks:
        pieces = []
        cycle = []
        for ei, d in walk:
            p = edges[ei].points
            pieces.append(p[:-1] if d == 0 else p[::-1][:-1])
            cycle.append((ei, 1 if d == 0 else -1))
        poly = np.concatenate(pieces + [pieces[0][:1]])
        polys.append(poly)
        areas.append(geometry.signed_area(poly))
        cycles.append(cycle)

    total = sum(areas)
    scale2 = max(abs(a) for a in areas)
    if abs(total) > 1e-6 * max(scale2, 1e-12):
        raise TopologyError(f"face areas do not cancel (sum {total:.3e}); embedding corrupt")

    neg = [i for i, a in enumerate(areas) if a < 0]
    pos = [i for i, a in enumerate(areas) if a > 0]
    if len(neg) == 1 and len(pos) >= 1:
        unbounded_idx = neg[0]
    elif len(pos) == 1 and len(neg) >= 1:
        unbounded_idx = pos[0]
    else:
        raise TopologyError(
            f"cannot identify the unbounded face from walk orientations {areas}"
        )

    faces = []
    for i, walk in enumerate(walks):
        bounded = i != unbounded_idx
        if bounded:
            rep = _interior_point(polys[i], want_winding=True)
        else:
            x0, y0, x1, y1 = geometry.bounding_box([comp.points])
            rep = complex(x0 - (x1 - x0) - 1.0, y0 - (y1 - y0) - 1.0)
        faces.append(Face(i, bounded, cycles[i], polys[i], rep, areas[i]))
    return faces


def _interior_point(poly, want_winding: bool) -> complex:
    """A point with nonzero winding of the given closed walk around it."""
    p = np.asarray(poly)
    n = p.size - 1
    h = geometry.max_segment_length(p)
    for frac in (0.25, 0.5, 0.75, 0.1, 0.9, 0.35, 0.65):
        idx = max(1, int(n * frac))
        a, b = p[idx - 1], p[idx]
        if a == b:
            continue
        tangent = (b - a) / abs(b - a)
        normal = 1j * tangent
        mid = 0.5 * (a + b)
        for delta in (2.0 * h, 0.5 * h, 0.1 * h, 5.0 * h, 20.0 * h):
            for side in (+1.0, -1.0):
                cand = mid + side * delta * normal
                if geometry.point_to_polyline_distance(cand, p) < 0.45 * delta:
                    continue
                w = geometry.winding_number(p, cand)
                if abs(w - round(w)) > 0.05:
                    continue
                if round(w) != 0:
                    return complex(cand)
    raise TopologyError("could not place an interior representative point")


def _assert_laws(graph: LevelGraph):
    V = len(graph.vertices)
    E = len(graph.edges)
    F = len(graph.faces)
    mult_sum = sum(m for _, m in graph.vertices)

    if F != E - V + 2:
        raise TopologyError(f"Euler violation: F={F}, E={E}, V={V}")
    bounded = sum(1 for f in graph.faces if f.bounded)
    if bounded != mult_sum + 1 or F != mult_sum + 2:
        raise TopologyError(
            f"face-count law violated: bounded={bounded}, total={F}, mult sum={mult_sum}"
        )
    if sum(1 for f in graph.faces if not f.bounded) != 1:
        raise TopologyError("exactly one unbounded face expected")
    for vi, (c, m) in enumerate(graph.vertices):
        if graph.degree(vi) != 2 * (m + 1):
            raise TopologyError(f"degree law violated at {c}")
    for ei in range(E):
        fa = graph.dart_face.get((ei, 0))
        fb = graph.dart_face.get((ei, 1))
        if fa is None or fb is None or fa == fb:
            raise TopologyError(f"edge {ei} not adjacent to two distinct faces")


# ---------------------------------------------------------------------------


def face_count(graph: LevelGraph) -> tuple[int, int]:
    """(bounded, total) face counts, re-checked against the vertex formula."""
    bounded = sum(1 for f in graph.faces if f.bounded)
    total = len(graph.faces)
    mult_sum = sum(m for _, m in graph.vertices)
    if bounded != mult_sum + 1 or total != mult_sum + 2:
        raise TopologyError(
            f"face enumeration ({bounded}, {total}) disagrees with formula "
            f"({mult_sum + 1}, {mult_sum + 2})"
        )
    return bounded, total


def face_of_point(graph: LevelGraph, z: complex, tols: Tolerances = DEFAULT_TOLS) -> int:
    """Face id containing z, by winding of each face's boundary walk."""
    d = graph.component.distance_to(z)
    if d <= tols.trace_tol:
        raise TopologyError(f"point {z} lies on the traced curve (distance {d:.2e})")
    hits = []
    for f in graph.faces:
        if not f.bounded:
            continue
        w = geometry.winding_number(f.polygon, z)
        k = round(w)
        if abs(w - k) > 0.25:
            raise TopologyError(f"ambiguous winding {w:.3f} of face {f.id} around {z}")
        if k != 0:
            if abs(k) != 1:
                raise TopologyError(f"face {f.id} winds {k} times around {z}")
            hits.append(f.id)
    if len(hits) > 1:
        raise TopologyError(f"point {z} claimed by faces {hits}")
    if hits:
        return hits[0]
    return graph.unbounded_face.id


def zeros_per_face(graph: LevelGraph, f: RationalFn, tols: Tolerances = DEFAULT_TOLS) -> dict:
    """Map face id -> list of (point, mult, kind) for zeros and poles inside.

    Every bounded face must receive at least one entry; an empty bounded face
    means the tracing missed structure and is a hard error.
    """
    out: dict[int, list] = {fc.id: [] for fc in graph.faces}
    for z, m in f.zeros:
        out[face_of_point(graph, z, tols)].append((z, m, "zero"))
    for p, m in f.poles:
        out[face_of_point(graph, p, tols)].append((p, m, "pole"))
    for fc in graph.faces:
        if fc.bounded and not out[fc.id]:
            raise TopologyError(
                f"bounded face {fc.id} contains no zero or pole; "
                "maximum modulus forbids this, tracing is incomplete"
            )
    return out
