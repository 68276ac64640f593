import numpy as np
import pytest

from levelcurves import (
    DEFAULT_TOLS,
    TraceError,
    find_seeds,
    parse_function_spec,
    trace_component,
    trace_level_set,
)
from levelcurves import geometry
from levelcurves.gridcheck import grid_oracle_report


def on_level_residual(f, comp):
    return max(float(np.max(np.abs(f.abs_grid(a.points) - comp.level))) for a in comp.arcs)


def test_find_seeds_circle():
    f = parse_function_spec("poly:1,0,0")
    seeds = find_seeds(f, 4.0)
    assert seeds
    assert any(abs(abs(s) - 2.0) < 1e-9 for s in seeds)


def test_find_seeds_z5m1_subcritical():
    f = parse_function_spec("poly:1,0,0,0,0,-1")
    seeds = find_seeds(f, 0.5)
    assert len(seeds) >= 5
    roots = [z for z, _ in f.zeros]
    # at least one seed close to each root's oval
    for r in roots:
        assert min(abs(s - r) for s in seeds) < 0.4


def test_trace_circle_radial_deviation():
    f = parse_function_spec("poly:1,0,0")
    comp = trace_component(f, 4.0, 2.0 + 0j)
    assert len(comp.arcs) == 1 and comp.arcs[0].closed and not comp.vertices
    assert float(np.max(np.abs(np.abs(comp.arcs[0].points) - 2.0))) < 1e-6


def test_trace_z5m1_critical_structure():
    f = parse_function_spec("poly:1,0,0,0,0,-1")
    comp = trace_component(f, 1.0, 2.0 ** 0.2 + 0j)
    assert len(comp.vertices) == 1
    v, m = comp.vertices[0]
    assert abs(v) < 1e-9 and m == 4
    assert len(comp.arcs) == 5
    assert all(a.start_vertex == 0 and a.end_vertex == 0 for a in comp.arcs)


def test_trace_lemniscate_structure():
    f = parse_function_spec("poly:1,0,-1")
    comps = trace_level_set(f, 1.0)
    assert len(comps) == 1
    comp = comps[0]
    # Euler bookkeeping: edges = sum(mult) + V = 1 + 1 = 2
    assert len(comp.vertices) == 1 and comp.vertices[0][1] == 1
    assert len(comp.arcs) == 2


def test_level_set_counts():
    f = parse_function_spec("poly:1,0,0,0,0,-1")
    assert len(trace_level_set(f, 0.5)) == 5
    assert len(trace_level_set(f, 1.5)) == 1
    f2 = parse_function_spec("poly:1,0,0")
    assert len(trace_level_set(f2, 0.7)) == 1


def test_on_level_invariant():
    for spec, eps in (("poly:1,0,0", 4.0), ("poly:1,0,-1", 1.0), ("poly:1,0,0,0,0,-1", 1.0)):
        f = parse_function_spec(spec)
        for comp in trace_level_set(f, eps):
            assert on_level_residual(f, comp) <= DEFAULT_TOLS.trace_tol


def test_closed_arc_endpoints_coincide():
    f = parse_function_spec("poly:1,0,0")
    comp = trace_component(f, 1.0, 1.0 + 0j)
    pts = comp.arcs[0].points
    assert abs(pts[0] - pts[-1]) <= DEFAULT_TOLS.trace_tol


def test_max_step_bound():
    f = parse_function_spec("poly:1,0,-1")
    comps = trace_level_set(f, 1.0)
    scale_cap = DEFAULT_TOLS.max_step_rel * 4.0  # generous domain-scale bound
    for comp in comps:
        assert comp.max_segment() <= scale_cap


def test_components_disjoint():
    f = parse_function_spec("poly:1,0,0,0,0,-1")
    comps = trace_level_set(f, 0.5)
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            d = geometry.min_polyline_distance(comps[i].points, comps[j].points)
            assert d > 1e-3


def test_branch_completeness():
    # arc-endpoints snapped to a vertex == 2 * (mult + 1)
    f = parse_function_spec("poly:1,0,0,0,0,-1")
    comp = trace_level_set(f, 1.0)[0]
    ends = sum((a.start_vertex == 0) + (a.end_vertex == 0) for a in comp.arcs)
    assert ends == 2 * (4 + 1)


def test_orientation_increasing_arg():
    f = parse_function_spec("poly:1,0,0")
    comp = trace_component(f, 1.0, 1.0 + 0j)
    vals = f.eval_grid(comp.arcs[0].points)
    inc = np.angle(vals[1:] / vals[:-1])
    assert np.all(inc > 0)


def test_simplicity_away_from_vertices():
    f = parse_function_spec("poly:1,0,0,0,0,-1")
    comp = trace_level_set(f, 1.0)[0]
    arcs = [a.points for a in comp.arcs]
    hits = geometry.self_intersections(
        arcs, exclusion_centers=[v for v, _ in comp.vertices], exclusion_radius=0.05
    )
    assert hits == []


def test_grid_oracle_lemniscate():
    f = parse_function_spec("poly:1,0,-1")
    comps = trace_level_set(f, 1.0)
    rep = grid_oracle_report(f, 1.0, comps)
    assert rep.ok, (rep.max_cell_to_trace, rep.max_trace_to_cell, rep.threshold)


def test_bad_eps_rejected():
    f = parse_function_spec("poly:1,0")
    with pytest.raises(TraceError):
        find_seeds(f, -1.0)
    with pytest.raises(TraceError):
        find_seeds(f, 0.0)


def test_disk_eps_one_rejected():
    f = parse_function_spec("blaschke:0.3,-0.4i/0.5")
    with pytest.raises(TraceError):
        find_seeds(f, 1.0)


def test_blaschke_trace_stays_in_disk():
    f = parse_function_spec("blaschke:0.36,-0.34+0.03i/0.05+0.02i")
    comps = trace_level_set(f, 0.5)
    for comp in comps:
        assert np.max(np.abs(comp.points)) < 1.0


def test_rectangle_window_boundary_contract():
    from levelcurves import DomainSpec

    f = parse_function_spec("poly:1,0")
    comps = trace_level_set(f, 1.0, DomainSpec.rect(-2, -2, 2, 2))
    assert len(comps) == 1
    # a window cutting the curve violates the boundary restriction
    with pytest.raises(TraceError, match="crosses the domain boundary"):
        trace_level_set(f, 1.0, DomainSpec.rect(-0.5, -2, 2, 2))


def test_near_critical_warning():
    f = parse_function_spec("poly:1,0,-1")
    # a level just off the critical value passes close to the saddle
    with pytest.warns(UserWarning, match="off-level critical point"):
        trace_level_set(f, 1.0 + 5e-6)
