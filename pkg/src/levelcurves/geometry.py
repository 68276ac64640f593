"""Planar geometry helpers on complex-valued polylines.

Polylines are 1-D numpy arrays of complex points.  Closed polylines repeat
the first point at the end; the helpers below state which form they expect.
"""

from __future__ import annotations

import numpy as np


def as_points(pts) -> np.ndarray:
    return np.asarray(pts, dtype=complex).ravel()


def polyline_length(pts) -> float:
    pts = as_points(pts)
    if pts.size < 2:
        return 0.0
    return float(np.sum(np.abs(np.diff(pts))))


def max_segment_length(pts) -> float:
    pts = as_points(pts)
    if pts.size < 2:
        return 0.0
    return float(np.max(np.abs(np.diff(pts))))


def signed_area(closed_pts) -> float:
    """Shoelace area of a closed polyline (first point == last point)."""
    p = as_points(closed_pts)
    if p.size < 3:
        return 0.0
    x, y = p.real, p.imag
    return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def winding_number(closed_pts, z: complex) -> float:
    """Total turn of the closed polyline around z, in units of full turns.

    Returned as a float; callers round and check the integer residue.  The
    point must not lie on the polyline.
    """
    p = as_points(closed_pts) - z
    turns = np.angle(p[1:] / p[:-1])
    return float(np.sum(turns)) / (2.0 * np.pi)


def point_to_polyline_distance(z: complex, pts) -> float:
    """Euclidean distance from z to a polyline (segments, not just samples)."""
    p = as_points(pts)
    if p.size == 0:
        return np.inf
    if p.size == 1:
        return float(abs(z - p[0]))
    a = p[:-1]
    d = p[1:] - a
    denom = (d.real**2 + d.imag**2)
    denom = np.where(denom == 0.0, 1.0, denom)
    w = z - a
    t = np.clip((w.real * d.real + w.imag * d.imag) / denom, 0.0, 1.0)
    proj = a + t * d
    return float(np.min(np.abs(z - proj)))


def points_to_polyline_distances(zs, pts) -> np.ndarray:
    """Vectorized point_to_polyline_distance for an array of query points."""
    zs = as_points(zs)
    p = as_points(pts)
    if p.size < 2:
        return np.abs(zs - (p[0] if p.size else np.inf))
    a = p[:-1][None, :]
    d = (p[1:] - p[:-1])[None, :]
    denom = d.real**2 + d.imag**2
    denom = np.where(denom == 0.0, 1.0, denom)
    w = zs[:, None] - a
    t = np.clip((w.real * d.real + w.imag * d.imag) / denom, 0.0, 1.0)
    proj = a + t * d
    return np.min(np.abs(zs[:, None] - proj), axis=1)


def min_polyline_distance(pts_a, pts_b, chunk: int = 2048) -> float:
    """Minimum distance between two polylines (points of A vs segments of B)."""
    a = as_points(pts_a)
    best = np.inf
    for start in range(0, a.size, chunk):
        d = points_to_polyline_distances(a[start : start + chunk], pts_b)
        best = min(best, float(np.min(d)))
    return best


def horizontal_crossings(pts, y: float) -> list[complex]:
    """Points where the polyline crosses the horizontal line Im(z) == y."""
    p = as_points(pts)
    if p.size < 2:
        return []
    y0 = p[:-1].imag - y
    y1 = p[1:].imag - y
    hit = (y0 == 0.0) | (y0 * y1 < 0.0)
    out = []
    for i in np.nonzero(hit)[0]:
        if y0[i] == 0.0:
            out.append(complex(p[i]))
            continue
        t = y0[i] / (y0[i] - y1[i])
        out.append(complex(p[i] + t * (p[i + 1] - p[i])))
    return out


def segment_crosses_polyline(a: complex, b: complex, pts) -> bool:
    """Exact test: does the open segment [a, b] cross any polyline segment?"""
    p = as_points(pts)
    if p.size < 2:
        return False
    d = b - a
    p0, p1 = p[:-1], p[1:]

    def orient(ox, oy, dx, dy, qx, qy):
        return dx * (qy - oy) - dy * (qx - ox)

    o1 = orient(a.real, a.imag, d.real, d.imag, p0.real, p0.imag)
    o2 = orient(a.real, a.imag, d.real, d.imag, p1.real, p1.imag)
    e = p1 - p0
    o3 = orient(p0.real, p0.imag, e.real, e.imag, np.full(p0.shape, a.real), np.full(p0.shape, a.imag))
    o4 = orient(p0.real, p0.imag, e.real, e.imag, np.full(p0.shape, b.real), np.full(p0.shape, b.imag))
    hit = (np.sign(o1) != np.sign(o2)) & (np.sign(o3) != np.sign(o4))
    return bool(np.any(hit))


def _segments_intersect(a0, a1, b0, b1) -> bool:
    def orient(p, q, r):
        v = (q - p).real * (r - p).imag - (q - p).imag * (r - p).real
        if v > 1e-14:
            return 1
        if v < -1e-14:
            return -1
        return 0

    o1 = orient(a0, a1, b0)
    o2 = orient(a0, a1, b1)
    o3 = orient(b0, b1, a0)
    o4 = orient(b0, b1, a1)
    return o1 != o2 and o3 != o4


def self_intersections(arcs, exclusion_centers=(), exclusion_radius: float = 0.0):
    """Pairs of crossing segments across a family of polylines.

    Crossings with both segments inside ``exclusion_radius`` of one of the
    ``exclusion_centers`` are ignored (vertex stars legitimately cross there),
    as are adjacent segments of the same polyline.  Segment pairs are pruned
    by a uniform grid before the exact test.
    """
    segs = []
    for arc_id, pts in enumerate(arcs):
        p = as_points(pts)
        for i in range(p.size - 1):
            segs.append((arc_id, i, p[i], p[i + 1]))
    if not segs:
        return []

    all_pts = np.array([s[2] for s in segs] + [s[3] for s in segs])
    span = max(np.ptp(all_pts.real), np.ptp(all_pts.imag), 1e-12)
    cell = max(span / 256.0, 1e-12)
    x0, y0 = float(np.min(all_pts.real)), float(np.min(all_pts.imag))

    buckets: dict[tuple[int, int], list[int]] = {}
    for idx, (_, _, p0, p1) in enumerate(segs):
        i0 = int((min(p0.real, p1.real) - x0) / cell)
        i1 = int((max(p0.real, p1.real) - x0) / cell)
        j0 = int((min(p0.imag, p1.imag) - y0) / cell)
        j1 = int((max(p0.imag, p1.imag) - y0) / cell)
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                buckets.setdefault((i, j), []).append(idx)

    def excluded(p0, p1):
        for c in exclusion_centers:
            if abs(p0 - c) < exclusion_radius and abs(p1 - c) < exclusion_radius:
                return True
        return False

    hits = set()
    for members in buckets.values():
        for ii in range(len(members)):
            for jj in range(ii + 1, len(members)):
                sa, sb = segs[members[ii]], segs[members[jj]]
                if sa[0] == sb[0] and abs(sa[1] - sb[1]) <= 1:
                    continue
                if not _segments_intersect(sa[2], sa[3], sb[2], sb[3]):
                    continue
                if excluded(sa[2], sa[3]) and excluded(sb[2], sb[3]):
                    continue
                hits.add((sa[0], sa[1], sb[0], sb[1]))
    return sorted(hits)


def bounding_box(pts_list, margin: float = 0.0):
    """(x0, y0, x1, y1) box around a list of polylines."""
    xs, ys = [], []
    for pts in pts_list:
        p = as_points(pts)
        if p.size:
            xs.extend((float(np.min(p.real)), float(np.max(p.real))))
            ys.extend((float(np.min(p.imag)), float(np.max(p.imag))))
    if not xs:
        raise ValueError("no points")
    return (min(xs) - margin, min(ys) - margin, max(xs) + margin, max(ys) + margin)
