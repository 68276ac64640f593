"""Predictor-corrector tracing of the level set {z : |f(z)| = eps}.

The curve is followed by stepping along the tangent direction i * conj(f'/f)
(arg f increases in the stored direction) with a Newton correction back onto
the level set after each step.  Critical points whose level matches eps are
branch points: an arc ends when it enters the capture ball of such a vertex,
and new arcs are launched along each of the 2*(mult+1) outgoing rays of the
local model f(c) + a*(z - c)^(mult+1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .config import DEFAULT_TOLS, Tolerances
from .errors import TraceError
from .funcspace import DomainKind, DomainSpec, RationalFn, is_inf

TWO_PI = 2.0 * math.pi

# relative strength of the local perturbation |a| r^(m+1) / eps at capture range
_CAPTURE_LEVEL = 1e-6
# per-arc hard point budget; hit only by runaway (unbounded) arcs
MAX_ARC_POINTS = 200_000


@dataclass
class TracedArc:
    """One traced polyline of a level-curve component.

    ``points`` are ordered so that arg f increases along the arc.  Vertex ids
    index into the owning component's vertex list; a closed arc has neither.
    ``start_angle``/``end_angle`` are the outgoing ray directions at the
    snapped endpoints, used by the rotation system.
    """

    points: np.ndarray
    level: float
    start_vertex: int | None = None
    end_vertex: int | None = None
    closed: bool = False
    start_angle: float | None = None
    end_angle: float | None = None

    def length(self) -> float:
        return geometry.polyline_length(self.points)


@dataclass
class LevelCurveComponent:
    """A connected component of E_{f, eps} as polylines plus branch points."""

    arcs: list[TracedArc]
    vertices: list[tuple[complex, int]]
    level: float

    @property
    def points(self) -> np.ndarray:
        return np.concatenate([a.points for a in self.arcs])

    def bounding_box(self, margin: float = 0.0):
        return geometry.bounding_box([a.points for a in self.arcs], margin)

    def total_length(self) -> float:
        return sum(a.length() for a in self.arcs)

    def max_segment(self) -> float:
        return max(geometry.max_segment_length(a.points) for a in self.arcs)

    def distance_to(self, z: complex) -> float:
        return min(geometry.point_to_polyline_distance(z, a.points) for a in self.arcs)


@dataclass
class _Vertex:
    position: complex
    mult: int
    rays: list[float]
    r_cap: float
    used: list[bool] = field(default_factory=list)

    def __post_init__(self):
        if not self.used:
            self.used = [False] * len(self.rays)

    def nearest_ray(self, angle: float) -> int:
        diffs = [abs(_wrap_angle(angle - r)) for r in self.rays]
        return int(np.argmin(diffs))


def _wrap_angle(a: float) -> float:
    return (a + math.pi) % TWO_PI - math.pi


def _local_coefficient(f: RationalFn, c: complex, m: int, scale: float) -> complex:
    """Leading Taylor coefficient a of f - f(c) = a (z-c)^(m+1) + ...

    Computed by discrete Cauchy integration on a small circle; exact
    derivatives of a rational function are avoided on purpose.
    """
    others = [p for p in f.distinguished_points() if abs(p - c) > 1e-12]
    rho = 1e-2 * max(1.0, abs(c))
    if others:
        rho = min(rho, 0.2 * min(abs(p - c) for p in others))
    rho = max(rho, 1e-8 * scale)
    k = 64
    w = np.exp(2j * np.pi * np.arange(k) / k)
    ring = c + rho * w
    fc = f.eval(c)
    vals = f.eval_grid(ring) - fc
    a = np.sum(vals * w ** (-(m + 1))) / (k * rho ** (m + 1))
    if a == 0 or is_inf(a):
        raise TraceError(f"degenerate local model at critical point {c}")
    return complex(a)


def _vertex_rays(f: RationalFn, c: complex, m: int, eps: float, scale: float) -> tuple[list[float], float]:
    """Outgoing ray angles of the level curve at a vertex, plus capture radius."""
    a = _local_coefficient(f, c, m, scale)
    fc = f.eval(c)
    n = m + 1
    base = (math.pi / 2.0 - math.atan2(a.imag, a.real) + math.atan2(fc.imag, fc.real)) / n
    rays = sorted(_wrap_angle(base + k * math.pi / n) for k in range(2 * n))
    r_cap = (_CAPTURE_LEVEL * eps / ((n) * abs(a))) ** (1.0 / n)
    r_cap = min(max(r_cap, 1e-6 * scale), 5e-2 * scale)
    return rays, r_cap


class _LevelTracer:
    """Shared state for tracing one level of one function."""

    def __init__(self, f: RationalFn, eps: float, tols: Tolerances, scale: float):
        if not (eps > 0.0 and math.isfinite(eps)):
            raise TraceError(f"level eps must be in (0, inf), got {eps}")
        self.f = f
        self.eps = eps
        self.tols = tols
        self.scale = scale
        self.log_eps = math.log(eps)
        self.tau = 0.25 * tols.trace_tol / max(1.0, eps)
        self.h_max = tols.max_step_rel * scale
        self.h_min = tols.min_step_rel * scale
        self.vertices: list[_Vertex] = []
        for c, m in f.critical_points:
            av = f.abs_eval(c)
            if math.isfinite(av) and av > 0.0 and abs(av - eps) <= tols.vertex_tol:
                rays, r_cap = _vertex_rays(f, c, m, eps, scale)
                self.vertices.append(_Vertex(c, m, rays, r_cap))
        self._offlevel = [
            (c, m)
            for c, m in f.critical_points
            if all(abs(c - v.position) > 1e-14 for v in self.vertices)
        ]
        self._offlevel_radius: dict[complex, float] = {}

    # -- Newton correction onto the level set

    def correct(self, z: complex, max_iter: int = 30):
        for it in range(max_iter):
            av = self.f.abs_eval(z)
            if av == 0.0 or is_inf(complex(av, 0)):
                return None, it
            g = math.log(av) - self.log_eps
            if abs(g) <= self.tau:
                return z, it
            ld = self.f.log_derivative(z)
            if is_inf(ld) or ld == 0:
                return None, it
            z = z - g * ld.conjugate() / (abs(ld) ** 2)
        return None, max_iter

    def tangent(self, z: complex, direction: float) -> complex:
        ld = self.f.log_derivative(z)
        if ld == 0 or is_inf(ld):
            raise TraceError(f"vanishing level-set gradient at {z}")
        t = 1j * ld.conjugate()
        return direction * t / abs(t)

    # -- single march from a point to closure or a vertex

    def march(self, z0: complex, direction: float, origin_vertex: int | None = None):
        """Follow the curve; returns (points, end_vertex_idx or None).

        ``None`` end means the arc closed back onto its start.  Only
        vertex-free launches (origin_vertex is None, direction +1) may close.
        """
        pts = [z0]
        h = min(1e-3 * self.scale, self.h_max)
        arc_len = 0.0
        prev_t = None
        start = z0
        origin_guard = (
            4.0 * self.vertices[origin_vertex].r_cap if origin_vertex is not None else 0.0
        )

        while len(pts) < MAX_ARC_POINTS:
            z = pts[-1]
            t = self.tangent(z, direction)
            if prev_t is not None and (t.real * prev_t.real + t.imag * prev_t.imag) < 0.0:
                # tangent flipped: corrector jumped branches
                raise TraceError(f"tangent reversal near {z}; curvature too stiff")

            # keep steps below the approach distance of every on-level vertex
            # so a march can never jump across a capture ball
            h_eff = h
            for idx, v in enumerate(self.vertices):
                if idx == origin_vertex and arc_len < origin_guard:
                    continue
                d = abs(z - v.position)
                h_eff = min(h_eff, max(0.4 * d, 0.5 * v.r_cap))
            h_eff = max(h_eff, self.h_min)

            # predictor-corrector with step halving
            accepted = None
            while True:
                z_pred = z + h_eff * t
                z_new, iters = self._correct_short(z_pred)
                if z_new is not None and abs(z_new - z_pred) <= 0.6 * h_eff:
                    t_new = self.tangent(z_new, direction)
                    turn = abs(
                        math.atan2(
                            t.real * t_new.imag - t.imag * t_new.real,
                            t.real * t_new.real + t.imag * t_new.imag,
                        )
                    )
                    if turn <= 0.5:
                        accepted = (z_new, iters, turn)
                        break
                h_eff *= 0.5
                if h_eff < self.h_min:
                    raise TraceError(
                        f"step size underflow near {z} at level {self.eps}: "
                        "curvature too stiff for the configured step bounds"
                    )

            z_new, iters, turn = accepted
            step_len = abs(z_new - z)
            arc_len += step_len
            pts.append(z_new)
            prev_t = t

            # adapt the persistent step
            if iters <= 1 and turn < 0.12:
                h = min(h * 1.4, self.h_max)
            elif iters >= 3 or turn > 0.3:
                h = max(h * 0.6, self.h_min)

            # vertex capture: endpoint inside the ball, or segment passing through
            hit = self._capture(z, z_new, arc_len, origin_vertex, origin_guard)
            if hit is not None:
                pts.append(self.vertices[hit].position)
                return pts, hit

            # closure: segment passes the start after having left it
            if origin_vertex is None and arc_len > 6.0 * step_len and len(pts) > 8:
                d_seg = _point_segment_distance(start, z, z_new)
                if d_seg < 0.75 * step_len and abs(z_new - start) < 2.0 * step_len:
                    pts[-1] = start
                    return pts, None

        raise TraceError(
            f"arc exceeded {MAX_ARC_POINTS} points at level {self.eps}; "
            "suspected unbounded level curve"
        )

    def _correct_short(self, z: complex):
        w = z
        for it in range(3):
            av = self.f.abs_eval(w)
            if av == 0.0 or not math.isfinite(av):
                return None, it
            g = math.log(av) - self.log_eps
            if abs(g) <= self.tau:
                return w, it
            ld = self.f.log_derivative(w)
            if is_inf(ld) or ld == 0:
                return None, it
            w = w - g * ld.conjugate() / (abs(ld) ** 2)
        av = self.f.abs_eval(w)
        if av > 0.0 and math.isfinite(av) and abs(math.log(av) - self.log_eps) <= self.tau:
            return w, 3
        return None, 3

    def _capture(self, z_prev, z_new, arc_len, origin_vertex, origin_guard):
        for idx, v in enumerate(self.vertices):
            if idx == origin_vertex and arc_len < origin_guard:
                continue
            if abs(z_new - v.position) < v.r_cap:
                return idx
            if _point_segment_distance(v.position, z_prev, z_new) < 0.8 * v.r_cap:
                return idx
        return None

    def launch_from_vertex(self, v_idx: int, ray_idx: int):
        v = self.vertices[v_idx]
        theta = v.rays[ray_idx]
        z = v.position + v.r_cap * complex(math.cos(theta), math.sin(theta))
        z_corr, _ = self.correct(z)
        if z_corr is None:
            raise TraceError(
                f"could not launch from vertex {v.position} along ray {theta:.4f}"
            )
        sep = math.pi / (3.0 * (v.mult + 1))
        if abs(_wrap_angle(math.atan2((z_corr - v.position).imag, (z_corr - v.position).real) - theta)) > sep:
            raise TraceError(
                f"departure from vertex {v.position} drifted off ray {theta:.4f}"
            )
        return z_corr

    def arrival_ray(self, v_idx: int, z_outside: complex) -> int:
        v = self.vertices[v_idx]
        ang = math.atan2((z_outside - v.position).imag, (z_outside - v.position).real)
        return v.nearest_ray(ang)


def _point_segment_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    dd = d.real * d.real + d.imag * d.imag
    if dd == 0.0:
        return abs(p - a)
    t = ((p - a).real * d.real + (p - a).imag * d.imag) / dd
    t = min(max(t, 0.0), 1.0)
    return abs(p - (a + t * d))


def _domain_scale(f: RationalFn, extra_points=()) -> float:
    pts = f.distinguished_points() + [complex(p) for p in extra_points]
    if not pts:
        return 1.0
    span = max(abs(p) for p in pts)
    spread = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            spread = max(spread, abs(pts[i] - pts[j]))
    return max(1.0, span, spread)


# ---------------------------------------------------------------------------
# public operations


def trace_component(
    f: RationalFn,
    eps: float,
    seed: complex,
    tols: Tolerances = DEFAULT_TOLS,
) -> LevelCurveComponent:
    """Trace the full component of E_{f, eps} through (the correction of) seed."""
    scale = _domain_scale(f, [seed])
    tracer = _LevelTracer(f, eps, tols, scale)
    return _trace_component_with(tracer, seed)


def _trace_component_with(tracer: _LevelTracer, seed: complex) -> LevelCurveComponent:
    f, eps, tols = tracer.f, tracer.eps, tracer.tols
    z0, _ = tracer.correct(seed, max_iter=60)
    if z0 is None:
        raise TraceError(f"seed {seed} did not converge onto level {eps}")

    # a seed inside a capture ball is re-launched from that vertex instead
    start_vertex = None
    for idx, v in enumerate(tracer.vertices):
        if abs(z0 - v.position) < 2.0 * v.r_cap:
            start_vertex = idx
            break

    arcs_raw: list[tuple[list[complex], int | None, int | None]] = []
    used_vertices: list[int] = []

    def note_vertex(idx):
        if idx not in used_vertices:
            used_vertices.append(idx)

    if start_vertex is None:
        fwd_pts, fwd_end = tracer.march(z0, +1.0)
        if fwd_end is None:
            arcs_raw.append((fwd_pts, None, None))
        else:
            bwd_pts, bwd_end = tracer.march(z0, -1.0)
            if bwd_end is None:
                raise TraceError("inconsistent component: one march closed, the other hit a vertex")
            pts = list(reversed(bwd_pts)) + fwd_pts[1:]
            arcs_raw.append((pts, bwd_end, fwd_end))
            note_vertex(bwd_end)
            note_vertex(fwd_end)
            tracer.vertices[fwd_end].used[tracer.arrival_ray(fwd_end, fwd_pts[-2])] = True
            tracer.vertices[bwd_end].used[tracer.arrival_ray(bwd_end, bwd_pts[-2])] = True
    else:
        note_vertex(start_vertex)

    # breadth-first sweep over the outgoing vertex rays; each traced arc
    # fills its arrival slot, and every vertex has m+1 of each kind
    queue = list(used_vertices)
    qi = 0
    while qi < len(queue):
        v_idx = queue[qi]
        qi += 1
        v = tracer.vertices[v_idx]
        for ray_idx in range(len(v.rays)):
            if v.used[ray_idx]:
                continue
            z_start = tracer.launch_from_vertex(v_idx, ray_idx)
            t = tracer.tangent(z_start, +1.0)
            radial = complex(math.cos(v.rays[ray_idx]), math.sin(v.rays[ray_idx]))
            dot = t.real * radial.real + t.imag * radial.imag
            if abs(dot) < 0.5:
                raise TraceError(
                    f"ambiguous march direction on ray {ray_idx} at vertex {v.position}"
                )
            if dot < 0:
                continue  # arg f increases into the vertex: this is an arrival slot
            v.used[ray_idx] = True
            pts, end = tracer.march(z_start, +1.0, origin_vertex=v_idx)
            if end is None:
                raise TraceError("arc from a vertex closed without reaching a vertex")
            arr_ray = tracer.arrival_ray(end, pts[-2])
            if tracer.vertices[end].used[arr_ray] and not (end == v_idx and arr_ray == ray_idx):
                raise TraceError(
                    f"arrival ray {arr_ray} at vertex {tracer.vertices[end].position} already used"
                )
            tracer.vertices[end].used[arr_ray] = True
            # orientation: stored points run along increasing arg f, and a
            # launched march already does; prepend the vertex itself
            arcs_raw.append(([v.position] + pts, v_idx, end))
            if end not in used_vertices:
                note_vertex(end)
                queue.append(end)

    for v_idx in used_vertices:
        v = tracer.vertices[v_idx]
        if not all(v.used):
            raise TraceError(
                f"vertex {v.position} has unmatched rays after the sweep; "
                "an incident arc was not traced"
            )

    # renumber component vertices deterministically
    used_sorted = sorted(
        used_vertices,
        key=lambda i: (
            round(tracer.vertices[i].position.real, 12),
            round(tracer.vertices[i].position.imag, 12),
        ),
    )
    remap = {old: new for new, old in enumerate(used_sorted)}
    vertices = [
        (tracer.vertices[i].position, tracer.vertices[i].mult) for i in used_sorted
    ]

    arcs: list[TracedArc] = []
    for pts, a, b in arcs_raw:
        arr = np.array(pts, dtype=complex)
        if a is None and b is None:
            arcs.append(TracedArc(arr, eps, closed=True))
            continue
        va, vb = tracer.vertices[a], tracer.vertices[b]
        start_ang = math.atan2((pts[1] - va.position).imag, (pts[1] - va.position).real)
        end_ang = math.atan2((pts[-2] - vb.position).imag, (pts[-2] - vb.position).real)
        arcs.append(
            TracedArc(
                arr,
                eps,
                start_vertex=remap[a],
                end_vertex=remap[b],
                start_angle=start_ang,
                end_angle=end_ang,
            )
        )
    arcs.sort(key=lambda arc: (arc.start_vertex if arc.start_vertex is not None else -1,
                               arc.start_angle if arc.start_angle is not None else 0.0))

    comp = LevelCurveComponent(arcs, vertices, eps)
    _warn_near_critical(tracer, comp)
    return comp


def _warn_near_critical(tracer: _LevelTracer, comp: LevelCurveComponent):
    for c, m in tracer._offlevel:
        d = comp.distance_to(c)
        # the capture radius this point would have were its level on eps
        if c not in tracer._offlevel_radius:
            try:
                _, r_cap = _vertex_rays(tracer.f, c, m, tracer.eps, tracer.scale)
            except TraceError:
                r_cap = 1e-6 * tracer.scale
            tracer._offlevel_radius[c] = r_cap
        if d < 10.0 * tracer._offlevel_radius[c]:
            warnings.warn(
                f"arc passes within {d:.2e} of off-level critical point {c}; "
                "the regular/critical classification may be unreliable",
                stacklevel=3,
            )


def find_seeds(
    f: RationalFn,
    eps: float,
    domain: DomainSpec | None = None,
    tols: Tolerances = DEFAULT_TOLS,
    grid_n: int = 48,
) -> list[complex]:
    """Seed points with at least one on every component of E_{f, eps}.

    Every bounded face of a component holds a zero or a pole, so rays cast
    from each zero/pole cross every component; a coarse sign-change sweep on
    a grid provides redundancy.  Duplicates are fine; tracing deduplicates.
    """
    domain = domain or f.domain
    if eps <= 0 or not math.isfinite(eps):
        raise TraceError(f"eps must be in (0, inf), got {eps}")
    if domain.kind is DomainKind.UNIT_DISK and abs(eps - 1.0) < 1e-6:
        raise TraceError("eps coincides with |f| on the unit circle")

    scale = _domain_scale(f)
    tracer = _LevelTracer(f, eps, tols, scale)
    box = _seed_box(f, eps, domain, scale)
    x0, y0, x1, y1 = box
    reach = max(x1 - x0, y1 - y0)

    anchors = [z for z, _ in f.zeros] + [z for z, _ in f.poles]
    seeds: list[complex] = []
    failed: list[complex] = []
    for p in anchors:
        got = False
        for k in range(8):
            theta = TWO_PI * (k + 0.21) / 8
            for crossing in _ray_crossings(f, eps, p, theta, reach, domain):
                z, _ = tracer.correct(crossing, max_iter=60)
                if z is not None and domain.contains(z):
                    seeds.append(z)
                    got = True
        if not got:
            failed.append(p)

    for cell in _grid_crossings(f, eps, box, grid_n, domain):
        z, _ = tracer.correct(cell, max_iter=40)
        if z is not None and domain.contains(z):
            seeds.append(z)

    if not seeds:
        raise TraceError(
            f"no seeds found on level {eps}; ray correction failed from {failed or anchors}"
        )
    return seeds


def _seed_box(f: RationalFn, eps: float, domain: DomainSpec, scale: float):
    if domain.kind is DomainKind.UNIT_DISK:
        return (-1.0, -1.0, 1.0, 1.0)
    if domain.kind is DomainKind.RECTANGLE:
        return domain.bounds
    # whole plane: grow a box until the level set cannot cross its boundary.
    # With every zero and pole inside the ring, the modulus principles pin
    # the outside behavior: values uniformly above eps certify containment
    # unless f vanishes at infinity, uniformly below unless it blows up there.
    deg_gap = f.numerator.degree - f.denominator.degree
    pts = f.distinguished_points() or [0j]
    cx = sum(p.real for p in pts) / len(pts)
    cy = sum(p.imag for p in pts) / len(pts)
    r = max(1.0, 1.5 * max(abs(p - complex(cx, cy)) for p in pts) if pts else 1.0)
    for _ in range(60):
        theta = np.linspace(0, TWO_PI, 181)[:-1]
        ring = complex(cx, cy) + r * np.exp(1j * theta)
        vals = f.abs_grid(ring)
        if deg_gap >= 0 and np.all(vals > eps * 1.5):
            return (cx - r, cy - r, cx + r, cy + r)
        if deg_gap <= 0 and np.all(vals < eps / 1.5):
            return (cx - r, cy - r, cx + r, cy + r)
        r *= 1.3
    raise TraceError(
        f"level {eps} appears unbounded: no enclosing circle found up to radius {r:.3g}"
    )


def _ray_crossings(f, eps, p, theta, reach, domain, samples=400, max_hits=6):
    direction = complex(math.cos(theta), math.sin(theta))
    ts = np.geomspace(1e-6 * reach, 1.6 * reach, samples)
    zs = p + ts * direction
    vals = f.abs_grid(zs)
    with np.errstate(divide="ignore"):
        sgn = np.sign(np.log(np.where(vals > 0, vals, 1e-300)) - math.log(eps))
    hits = []
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        lo, hi = ts[i], ts[i + 1]
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            v = f.abs_eval(p + mid * direction)
            if (v - eps) * (vals[i] - eps) > 0:
                lo = mid
            else:
                hi = mid
        z = p + 0.5 * (lo + hi) * direction
        if domain.contains(z):
            hits.append(z)
        if len(hits) >= max_hits:
            break
    return hits


def _grid_crossings(f, eps, box, n, domain):
    x0, y0, x1, y1 = box
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(xs, ys)
    Z = X + 1j * Y
    V = f.abs_grid(Z)
    S = np.where(V > eps, 1, -1)
    flip = (S[:, :-1] != S[:, 1:])[:-1, :] | (S[:-1, :] != S[1:, :])[:, :-1]
    cells = []
    ii, jj = np.nonzero(flip)
    for i, j in zip(ii, jj):
        z = complex(0.5 * (xs[j] + xs[j + 1]), 0.5 * (ys[i] + ys[i + 1]))
        if domain.contains(z):
            cells.append(z)
    # cap for speed; rays already guarantee completeness
    return cells[:400]


def trace_level_set(
    f: RationalFn,
    eps: float,
    domain: DomainSpec | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> list[LevelCurveComponent]:
    """All components of E_{f, eps} in the domain, pairwise disjoint."""
    domain = domain or f.domain
    seeds = find_seeds(f, eps, domain, tols)
    scale = _domain_scale(f, seeds)
    tracer = _LevelTracer(f, eps, tols, scale)

    components: list[LevelCurveComponent] = []

    def already_traced(z: complex) -> bool:
        for comp in components:
            if comp.distance_to(z) < 0.5 * max(comp.max_segment(), 1e-12):
                return True
        return False

    for seed in seeds:
        z, _ = tracer.correct(seed, max_iter=60)
        if z is None or already_traced(z):
            continue
        components.append(_trace_component_with(tracer, z))

    # critical points on this level must appear even if no seed reached them
    for idx, v in enumerate(tracer.vertices):
        if any(abs(v.position - c) < 1e-12 for comp in components for c, _ in comp.vertices):
            continue
        if not domain.contains(v.position) or all(v.used):
            continue
        launch = tracer.launch_from_vertex(idx, v.used.index(False))
        if already_traced(launch):
            continue
        components.append(_trace_component_with(tracer, launch))

    if domain.kind is not DomainKind.WHOLE_PLANE:
        for comp in components:
            outside = [p for p in comp.points[:: max(1, len(comp.points) // 64)] if not domain.contains(complex(p))]
            if outside:
                raise TraceError(
                    f"level curve at {eps} crosses the domain boundary near {outside[0]}; "
                    "the boundary restriction fails for this window"
                )

    _check_disjoint(components, tols)
    components.sort(
        key=lambda c: (
            round(float(np.min(c.points.real)), 9),
            round(float(np.min(c.points.imag)), 9),
        )
    )
    return components


def _check_disjoint(components, tols: Tolerances):
    for i in range(len(components)):
        for j in range(i + 1, len(components)):
            a = components[i].points
            b = components[j].points
            d = geometry.min_polyline_distance(a, b)
            if d <= tols.trace_tol:
                raise TraceError(
                    f"components {i} and {j} overlap (distance {d:.3e}); "
                    "deduplication failed"
                )


# ---------------------------------------------------------------------------
# export helpers (shared with the CLI)


def components_to_csv_rows(components) -> list[tuple[int, int, float, float]]:
    rows = []
    for ci, comp in enumerate(components):
        for ai, arc in enumerate(comp.arcs):
            for p in arc.points:
                rows.append((ci, ai, float(p.real), float(p.imag)))
    return rows


def component_to_dict(comp: LevelCurveComponent) -> dict:
    return {
        "level": comp.level,
        "vertices": [
            {"re": c.real, "im": c.imag, "mult": m} for c, m in comp.vertices
        ],
        "arcs": [
            {
                "start_vertex": a.start_vertex,
                "end_vertex": a.end_vertex,
                "closed": a.closed,
                "points": [[p.real, p.imag] for p in a.points],
            }
            for a in comp.arcs
        ],
    }
