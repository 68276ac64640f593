"""The two-sided distance d-check and the level-set continuity probe.

d-check(X, Y) = max(sup_x d(x, Y), sup_y d(X, y)), with the convention that
an empty side makes the distance infinite.  Between traced curves it is
computed on the polyline point samples; the discretization error is bounded
by the largest segment length, which the report carries.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import TraceError
from .funcspace import DomainSpec, RationalFn
from .tracer import LevelCurveComponent, _LevelTracer, _domain_scale, _trace_component_with

K_SAMPLES = 8  # audit heights per side of eps in one probe trial


@dataclass
class HausdorffReport:
    d1: float
    d2: float
    d_check: float
    discretization: float = 0.0

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.d_check)


def _directed_max_min(xs: np.ndarray, ys: np.ndarray, chunk: int = 4096) -> float:
    out = 0.0
    for start in range(0, xs.size, chunk):
        block = xs[start : start + chunk]
        d = np.min(np.abs(block[:, None] - ys[None, :]), axis=1)
        out = max(out, float(np.max(d)))
    return out


def hausdorff(X, Y) -> HausdorffReport:
    """Brute-force two-sided distance between finite point sets."""
    xs = np.asarray(list(X), dtype=complex).ravel()
    ys = np.asarray(list(Y), dtype=complex).ravel()
    if xs.size == 0 or ys.size == 0:
        return HausdorffReport(math.inf, math.inf, math.inf)
    d1 = _directed_max_min(xs, ys)
    d2 = _directed_max_min(ys, xs)
    return HausdorffReport(d1, d2, max(d1, d2))


def hausdorff_accelerated(X, Y, cell_factor: float = 4.0) -> HausdorffReport:
    """Grid-bucketed variant; must agree with :func:`hausdorff` exactly.

    The bucket search enumerates rings of cells outward until the best
    distance is certified, so the arithmetic (min of |x - y|) is identical.
    """
    xs = np.asarray(list(X), dtype=complex).ravel()
    ys = np.asarray(list(Y), dtype=complex).ravel()
    if xs.size == 0 or ys.size == 0:
        return HausdorffReport(math.inf, math.inf, math.inf)

    def directed(a, b):
        span = max(np.ptp(b.real), np.ptp(b.imag))
        if b.size < 64 or span == 0.0:
            return _directed_max_min(a, b)
        cell = max(span / max(4.0, math.sqrt(b.size) * cell_factor), 1e-12)
        buckets: dict[tuple[int, int], list[int]] = {}
        for i, q in enumerate(b):
            key = (int(np.floor(q.real / cell)), int(np.floor(q.imag / cell)))
            buckets.setdefault(key, []).append(i)
        worst = 0.0
        for q in a:
            qi, qj = int(np.floor(q.real / cell)), int(np.floor(q.imag / cell))
            best = np.inf
            radius = 0
            # after scanning rings 0..r, any unscanned point sits in a cell at
            # Chebyshev distance > r, hence at least r*cell away from q
            while True:
                for i in range(qi - radius, qi + radius + 1):
                    for j in range(qj - radius, qj + radius + 1):
                        if max(abs(i - qi), abs(j - qj)) != radius:
                            continue
                        members = buckets.get((i, j))
                        if members:
                            d = float(np.min(np.abs(b[np.asarray(members)] - q)))
                            best = min(best, d)
                if best <= radius * cell:
                    break
                radius += 1
            worst = max(worst, best)
        return worst

    d1 = directed(xs, ys)
    d2 = directed(ys, xs)
    return HausdorffReport(d1, d2, max(d1, d2))


def hausdorff_between_curves(comp_a_points, comp_b_points) -> HausdorffReport:
    xs = np.asarray(comp_a_points, dtype=complex).ravel()
    ys = np.asarray(comp_b_points, dtype=complex).ravel()
    rep = hausdorff(xs, ys)
    disc = 0.0
    for pts in (xs, ys):
        if pts.size >= 2:
            disc = max(disc, float(np.max(np.abs(np.diff(pts)))))
    return HausdorffReport(rep.d1, rep.d2, rep.d_check, discretization=disc)


# ---------------------------------------------------------------------------
# continuity probe


@dataclass
class ContinuityCertificate:
    eps: float
    delta: float
    eta: float
    samples: list[tuple[float, float]] = field(default_factory=list)  # (zeta, achieved d-check)
    passed: bool = False

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "delta": self.delta,
            "eta": self.eta,
            "pass": self.passed,
            "samples": [{"zeta": z, "d_check": d} for z, d in self.samples],
        }


def _nearby_curves_union(
    f: RationalFn,
    zeta: float,
    component: LevelCurveComponent,
    delta: float,
    tols: Tolerances,
) -> np.ndarray:
    """Union of level curves at level zeta seeded near each edge midpoint."""
    scale = _domain_scale(f, [component.points[0]])
    tracer = _LevelTracer(f, zeta, tols, scale)
    comps: list[LevelCurveComponent] = []

    def claimed(z: complex) -> bool:
        return any(c.distance_to(z) < 0.5 * max(c.max_segment(), 1e-12) for c in comps)

    for arc in component.arcs:
        pts = arc.points
        mid = pts[len(pts) // 2]
        tangent = pts[min(len(pts) // 2 + 1, len(pts) - 1)] - pts[len(pts) // 2 - 1]
        if tangent == 0:
            continue
        normal = 1j * tangent / abs(tangent)
        for off in (0.0, 0.25 * delta, -0.25 * delta, 0.75 * delta, -0.75 * delta):
            z, _ = tracer.correct(mid + off * normal, max_iter=40)
            if z is None or claimed(z):
                continue
            if abs(z - mid) > 4.0 * delta + 1.0:
                continue
            with warnings.catch_warnings():
                # the probe samples deliberately near-critical levels
                warnings.simplefilter("ignore", UserWarning)
                comps.append(_trace_component_with(tracer, z))
    if not comps:
        raise TraceError(f"no level curves found near the component at level {zeta}")
    return np.concatenate([c.points for c in comps])


def continuity_probe(
    f: RationalFn,
    eps: float,
    delta: float,
    domain: DomainSpec | None = None,
    component: LevelCurveComponent | None = None,
    tols: Tolerances = DEFAULT_TOLS,
    eta_floor_rel: float = 1e-9,
    refine_rounds: int = 6,
) -> ContinuityCertificate:
    """Search for eta such that every zeta within eta of eps has level curves
    within delta of the component.

    Bisection starts at eta0 = eps/2 and halves until a trial passes, then
    refines upward.  Each trial audits K_SAMPLES heights on both sides of eps.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if component is None:
        from .tracer import trace_level_set

        comps = trace_level_set(f, eps, domain, tols)
        component = max(comps, key=lambda c: c.total_length())

    base_points = component.points

    def trial(eta: float) -> tuple[bool, list[tuple[float, float]]]:
        samples = []
        for k in range(1, K_SAMPLES + 1):
            for sign in (+1.0, -1.0):
                zeta = eps + sign * eta * k / K_SAMPLES
                if zeta <= 0:
                    return False, samples
                try:
                    union = _nearby_curves_union(f, zeta, component, delta, tols)
                except TraceError:
                    return False, samples
                d = hausdorff_between_curves(union, base_points).d_check
                samples.append((zeta, d))
                if d >= delta:
                    return False, samples
        return True, samples

    eta = eps / 2.0
    floor = eta_floor_rel * eps
    best = None
    best_samples: list[tuple[float, float]] = []
    while eta >= floor:
        ok, samples = trial(eta)
        if ok:
            best, best_samples = eta, samples
            break
        eta *= 0.5

    if best is None:
        return ContinuityCertificate(eps, delta, 0.0, best_samples, False)

    lo, hi = best, min(2.0 * best, eps / 2.0)
    for _ in range(refine_rounds):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        ok, samples = trial(mid)
        if ok:
            lo = mid
            best, best_samples = mid, samples
        else:
            hi = mid
    return ContinuityCertificate(eps, delta, best, best_samples, True)
