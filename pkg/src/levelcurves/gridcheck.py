"""Marching-squares rasterization used as an independent check on the tracer.

The raster side never consults traced data: it evaluates |f| on a grid and
marks cells whose corners straddle the level.  The two-sided proximity report
then compares crossing-cell centers with traced polyline points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .funcspace import RationalFn


def crossing_cells(f: RationalFn, eps: float, box, n: int = 600) -> tuple[np.ndarray, float]:
    """Centers of grid cells whose corner values straddle |f| = eps.

    Returns (cell centers as complex array, cell diagonal length).
    """
    x0, y0, x1, y1 = box
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    X, Y = np.meshgrid(xs, ys)
    V = f.abs_grid(X + 1j * Y)
    S = np.where(V >= eps, 1, -1)
    c00 = S[:-1, :-1]
    c01 = S[:-1, 1:]
    c10 = S[1:, :-1]
    c11 = S[1:, 1:]
    mixed = ~((c00 == c01) & (c00 == c10) & (c00 == c11))
    ii, jj = np.nonzero(mixed)
    cx = 0.5 * (xs[jj] + xs[jj + 1])
    cy = 0.5 * (ys[ii] + ys[ii + 1])
    diag = math.hypot(xs[1] - xs[0], ys[1] - ys[0])
    return cx + 1j * cy, diag


@dataclass
class ProximityReport:
    max_cell_to_trace: float
    max_trace_to_cell: float
    threshold: float
    n_cells: int
    n_trace_points: int

    @property
    def ok(self) -> bool:
        return (
            self.max_cell_to_trace <= self.threshold
            and self.max_trace_to_cell <= self.threshold
        )


def _bucket_min_distances(queries: np.ndarray, targets: np.ndarray, cell: float) -> np.ndarray:
    """min distance from each query to the target set, via a uniform hash grid."""
    if targets.size == 0:
        return np.full(queries.shape, np.inf)
    tx = np.floor(targets.real / cell).astype(np.int64)
    ty = np.floor(targets.imag / cell).astype(np.int64)
    buckets: dict[tuple[int, int], list[int]] = {}
    for idx, (a, b) in enumerate(zip(tx, ty)):
        buckets.setdefault((int(a), int(b)), []).append(idx)

    out = np.full(queries.shape, np.inf)
    qx = np.floor(queries.real / cell).astype(np.int64)
    qy = np.floor(queries.imag / cell).astype(np.int64)
    for qi, (a, b, q) in enumerate(zip(qx, qy, queries)):
        best = np.inf
        for radius in (1, 4, 16, 64):
            for i in range(int(a) - radius, int(a) + radius + 1):
                for j in range(int(b) - radius, int(b) + radius + 1):
                    members = buckets.get((i, j))
                    if members:
                        d = np.min(np.abs(targets[members] - q))
                        best = min(best, float(d))
            if best <= radius * cell * 0.9:
                break
        out[qi] = best
    return out


def two_sided_proximity(
    arcs: list[np.ndarray],
    cells: np.ndarray,
    diag: float,
    factor: float = 2.0,
) -> ProximityReport:
    """Check that crossing cells and traced polylines shadow each other.

    Cell centers are measured against the polyline segments (the curve
    itself); traced points are measured against the cell-center set.
    """
    from . import geometry

    cells = np.asarray(cells, dtype=complex).ravel()
    trace_points = np.concatenate([np.asarray(a, dtype=complex).ravel() for a in arcs])

    d_ct = np.full(cells.shape, np.inf)
    for a in arcs:
        d_ct = np.minimum(d_ct, _chunked_polyline_distance(cells, np.asarray(a, dtype=complex)))

    cell = max(diag / math.sqrt(2.0), 1e-12)
    d_tc = _bucket_min_distances(trace_points, cells, cell)
    return ProximityReport(
        max_cell_to_trace=float(np.max(d_ct)) if d_ct.size else 0.0,
        max_trace_to_cell=float(np.max(d_tc)) if d_tc.size else 0.0,
        threshold=factor * diag,
        n_cells=int(cells.size),
        n_trace_points=int(trace_points.size),
    )


def _chunked_polyline_distance(queries: np.ndarray, polyline: np.ndarray, chunk: int = 1024) -> np.ndarray:
    from . import geometry

    out = np.empty(queries.shape, dtype=float)
    for start in range(0, queries.size, chunk):
        out[start : start + chunk] = geometry.points_to_polyline_distances(
            queries[start : start + chunk], polyline
        )
    return out


def grid_oracle_report(f: RationalFn, eps: float, components, n: int = 600, margin_rel: float = 0.05) -> ProximityReport:
    """Compare traced components of E_{f, eps} against a fresh rasterization."""
    from . import geometry

    arcs = [a.points for c in components for a in c.arcs]
    x0, y0, x1, y1 = geometry.bounding_box(arcs)
    m = margin_rel * max(x1 - x0, y1 - y0, 1e-9)
    cells, diag = crossing_cells(f, eps, (x0 - m, y0 - m, x1 + m, y1 + m), n)
    return two_sided_proximity(arcs, cells, diag)
