import pytest

from levelcurves import (
    TopologyError,
    critical_level_curves,
    maximal_component,
    parse_function_spec,
    precedes,
    separating_curve,
    trace_level_set,
    two_curve_critical_witness,
)
from levelcurves.order_topology import CurveKind, CurveRef, hasse_diagram, maximal_in_face


def ref_of(comp, level, label=""):
    return CurveRef(CurveKind.LEVEL_CURVE, level, component=comp, label=label)


@pytest.fixture(scope="module")
def z5(z5m1):
    return z5m1


@pytest.fixture(scope="module")
def z5_ovals(z5):
    return [ref_of(c, 0.5, f"oval{i}") for i, c in enumerate(trace_level_set(z5, 0.5))]


@pytest.fixture(scope="module")
def z5_big(z5):
    return ref_of(trace_level_set(z5, 1.5)[0], 1.5, "big")


@pytest.fixture(scope="module")
def z5_C(z5):
    return critical_level_curves(z5)


def test_precedes_nesting(z5_ovals, z5_big):
    assert precedes(z5_ovals[0], z5_big)
    assert not precedes(z5_big, z5_ovals[0])


def test_precedes_mutually_exterior(z5_ovals):
    assert not precedes(z5_ovals[0], z5_ovals[1])
    assert not precedes(z5_ovals[1], z5_ovals[0])


def test_precedes_same_curve_rejected(z5_ovals):
    with pytest.raises(TopologyError):
        precedes(z5_ovals[0], z5_ovals[0])


def test_strict_partial_order(z5, z5_ovals, z5_big, z5_C):
    family = z5_ovals + [z5_big] + z5_C.curves()
    n = len(family)
    rel = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                rel[i][j] = precedes(family[i], family[j])
    for i in range(n):
        for j in range(n):
            if rel[i][j]:
                assert not rel[j][i]  # asymmetry
            for k in range(n):
                if rel[i][j] and rel[j][k]:
                    assert rel[i][k]  # transitivity


def test_critical_set_z5m1(z5_C):
    curves = z5_C.curves()
    assert len(curves) == 1
    assert abs(curves[0].level - 1.0) < 1e-9
    points = [r for r in z5_C.components if r.kind is CurveKind.POINT]
    assert len(points) == 5 and all(r.level == 0.0 for r in points)


def test_critical_set_pure_power():
    f = parse_function_spec("poly:1,0,0,0")
    C = critical_level_curves(f)
    # the only critical point is the zero itself, so no critical curves
    assert C.curves() == []
    assert len(C.components) == 1
    assert C.components[0].kind is CurveKind.POINT


def test_critical_set_blaschke(blaschke_21):
    C = critical_level_curves(blaschke_21)
    assert len(C.curves()) == 2
    kinds = sorted(r.label.split("@")[0] for r in C.components)
    assert kinds.count("zero") == 2 and kinds.count("pole") == 1


def test_separating_curve_around_zero(z5, z5_C):
    crit = z5_C.curves()[0]
    sep, placement = separating_curve(z5, crit, [1 + 0j])
    assert not sep.component.vertices
    assert 0 < sep.level < 1
    assert placement == "bounded"
    # certified: separator lies between, so the zero is inside it
    assert precedes(CurveRef(CurveKind.POINT, 0.0, point=1 + 0j), sep)


def test_separating_curve_concentric():
    f = parse_function_spec("poly:1,0,0")
    circle = ref_of(trace_level_set(f, 4.0)[0], 4.0)
    sep, placement = separating_curve(f, circle, [0j])
    assert 0 < sep.level < 4.0
    assert placement == "bounded"


def test_separating_curve_exterior_K(z5, z5_ovals):
    # K = the other four roots, in the unbounded face of the oval around 1
    oval1 = next(r for r in z5_ovals if min(abs(p - 1) for p in r.component.points) < 0.3)
    K = [z for z, _ in z5.zeros if abs(z - 1) > 0.1]
    sep, placement = separating_curve(z5, oval1, K)
    # fourth-bullet rule: K was in the unbounded face of bounded L, so it
    # stays in the unbounded face of the separator
    assert placement == "unbounded"


def test_separating_curve_is_noncritical(z5, z5_C):
    crit = z5_C.curves()[0]
    sep, _ = separating_curve(z5, crit, [1 + 0j])
    d = min(sep.component.distance_to(c) for c, _ in z5.critical_points)
    assert d > 1e-4


def test_two_curve_witness_z5(z5, z5_ovals, z5_C):
    w, f1, f2 = two_curve_critical_witness(z5, z5_ovals[0], z5_ovals[1], z5_C)
    assert abs(w.level - 1.0) < 1e-9
    assert f1 != f2


def test_two_curve_witness_lemniscate(lemniscate_fn):
    ovals = trace_level_set(lemniscate_fn, 0.5)
    assert len(ovals) == 2
    r1, r2 = (ref_of(c, 0.5) for c in ovals)
    w, f1, f2 = two_curve_critical_witness(lemniscate_fn, r1, r2)
    assert abs(w.level - 1.0) < 1e-9
    assert f1 != f2


def test_two_curve_witness_nested_rejected(z5, z5_ovals, z5_big):
    with pytest.raises(TopologyError, match="nested"):
        two_curve_critical_witness(z5, z5_ovals[0], z5_big)


def test_maximal_z5(z5, z5_C):
    m = maximal_component(z5, C=z5_C)
    assert m.kind is CurveKind.LEVEL_CURVE and abs(m.level - 1.0) < 1e-9


def test_maximal_lemniscate(lemniscate_fn):
    m = maximal_component(lemniscate_fn)
    assert m.kind is CurveKind.LEVEL_CURVE
    assert abs(m.level - 1.0) < 1e-9


def test_maximal_blaschke_nested(blaschke_21):
    C = critical_level_curves(blaschke_21)
    m = maximal_component(blaschke_21, C=C)
    assert m.kind is CurveKind.LEVEL_CURVE
    # the outer critical curve separates the pole from the zeros
    inner = [c for c in C.curves() if c is not m][0]
    assert precedes(inner, m)


def test_maximal_per_face(z5, z5_C):
    crit = z5_C.curves()[0]
    g = crit.graph()
    for face in g.bounded_faces:
        m = maximal_in_face(z5_C, crit, face.id)
        assert m.kind is CurveKind.POINT  # one zero per petal


def test_hasse_diagram_z5(z5_C):
    edges = hasse_diagram(z5_C)
    curve_idx = next(
        i for i, r in enumerate(z5_C.components) if r.kind is CurveKind.LEVEL_CURVE
    )
    assert sorted(edges) == sorted(
        (i, curve_idx) for i in range(len(z5_C.components)) if i != curve_idx
    )
