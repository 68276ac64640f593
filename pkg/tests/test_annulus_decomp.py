import math

import numpy as np
import pytest

from levelcurves import (
    build_phi,
    decompose,
    parse_function_spec,
    verify_phi,
    winding_N,
)
from levelcurves.order_topology import CurveKind


def certify_all(f, regions):
    out = []
    for r in regions:
        build_phi(f, r)
        out.append(verify_phi(f, r))
    return out


@pytest.fixture(scope="module")
def z5_regions(z5m1):
    return decompose(z5m1)


@pytest.fixture(scope="module")
def z3_region():
    f = parse_function_spec("poly:1,0,0,0")
    (r,) = decompose(f)
    build_phi(f, r)
    return f, r


@pytest.fixture(scope="module")
def blaschke_regions(blaschke_21):
    return decompose(blaschke_21)


def test_square_single_region():
    f = parse_function_spec("poly:1,0,0")
    regions = decompose(f)
    assert len(regions) == 1
    r = regions[0]
    assert r.inner_boundary.kind is CurveKind.POINT
    assert r.eps1 == 0.0
    assert r.N == 2 and r.M == 2


def test_square_phi_is_identity_up_to_branch():
    f = parse_function_spec("poly:1,0,0")
    (r,) = decompose(f)
    grid = build_phi(f, r)
    # phi^2 == z^2 exactly; the basepoint fixes one square-root branch, so
    # phi == omega * z for a single second root of unity omega
    omega = grid.phi[grid.basepoint_index] / grid.points[grid.basepoint_index]
    assert abs(omega**2 - 1.0) < 1e-10
    assert float(np.max(np.abs(grid.phi - omega * grid.points))) < 1e-10
    assert float(np.max(np.abs(grid.phi**2 - grid.f_vals))) < 1e-10


def test_cube_winding_three(z3_region):
    f, r = z3_region
    assert r.N == 3 and r.M == 3
    cert = verify_phi(f, r)
    assert cert.max_power_residual <= cert.power_gate


def test_z5m1_all_regions(z5m1, z5_regions):
    regions = z5_regions
    assert len(regions) == 6
    petals = [r for r in regions if r.eps1 == 0.0]
    outer = [r for r in regions if r.eps1 != 0.0]
    assert len(petals) == 5 and len(outer) == 1
    assert all(r.N == 1 and r.M == 1 for r in petals)
    assert outer[0].N == 5 and outer[0].M == 5

    for cert in certify_all(z5m1, regions):
        assert cert.max_power_residual <= cert.power_gate
        assert cert.tree_discrepancy <= 1e-6
        assert cert.cycle_discrepancy <= 1e-6
        assert cert.radii_ok and cert.injectivity_ok


def test_petal_phi_equals_f_when_N_is_one(z5m1, z5_regions):
    petal = next(r for r in z5_regions if r.eps1 == 0.0)
    grid = build_phi(z5m1, petal)
    assert float(np.max(np.abs(grid.phi - grid.f_vals))) < 1e-12


def test_pole_region_sign():
    f = parse_function_spec("rat:1/1,0")  # 1/z
    (r,) = decompose(f)
    assert math.isinf(r.eps1)
    assert r.N == 1 and r.M == -1
    grid = build_phi(f, r)
    cert = verify_phi(f, r)
    assert cert.max_power_residual <= cert.power_gate
    # the branch of f^(1/M) = f^(-1) is the identity here
    assert float(np.max(np.abs(grid.phi - grid.points))) < 1e-10
    lo, hi = cert.radii
    assert lo == 0.0 and hi == pytest.approx(r.eps2 ** (1.0 / r.M))


def test_blaschke_region_inventory(blaschke_21, blaschke_regions):
    regions = blaschke_regions
    assert len(regions) == 5
    by_kind = {}
    for r in regions:
        key = (r.inner_boundary.kind, math.isinf(r.eps1))
        by_kind.setdefault(key, []).append(r)
    zero_petals = by_kind[(CurveKind.POINT, False)]
    pole_petals = by_kind[(CurveKind.POINT, True)]
    assert len(zero_petals) == 2 and len(pole_petals) == 1
    assert all(r.M == 1 for r in zero_petals)
    assert pole_petals[0].M == -1
    # the region between the two critical curves encloses both zeros
    mid = [
        r
        for r in regions
        if r.inner_boundary.kind is CurveKind.LEVEL_CURVE
        and r.outer_boundary.kind is CurveKind.LEVEL_CURVE
    ]
    assert len(mid) == 1 and mid[0].N == 2 and mid[0].M == 2
    # outer annulus to the unit circle: 2 zeros - 1 pole
    rim = [r for r in regions if r.outer_boundary.kind is CurveKind.BOUNDARY]
    assert len(rim) == 1 and rim[0].N == 1 and rim[0].M == 1 and rim[0].eps2 == 1.0


def test_blaschke_certificates(blaschke_21, blaschke_regions):
    regions = blaschke_regions
    for r, cert in zip(regions, certify_all(blaschke_21, regions)):
        max_f = float(np.max(np.abs(r.phi_grid.f_vals)))
        assert cert.max_power_residual <= 1e-8 * (1.0 + max_f)
        assert cert.tree_discrepancy <= 1e-6 and cert.cycle_discrepancy <= 1e-6
        lo, hi = cert.radii
        mods = np.abs(r.phi_grid.phi)
        assert np.all(mods > lo) and np.all(mods < hi)


def test_winding_consistent_across_levels(z5m1, z5_regions):
    outer = next(r for r in z5_regions if r.eps1 != 0.0)
    # winding_N itself checks three levels agree; run it fresh
    n, m = winding_N(z5m1, outer, return_sign=True)
    assert (n, m) == (5, 5)


def test_image_coverage_z3(z3_region):
    f, r = z3_region
    grid = r.phi_grid
    lo, hi = r.image_radii()
    mods = np.sort(np.abs(grid.phi))
    # |phi| sweeps the annulus: interior gaps at the mesh scale, and the
    # unreachable sliver at the punctured end stays within the 15%-width
    # exclusion rule plus one spacing
    gaps = np.diff(np.concatenate([mods, [hi]]))
    assert float(np.max(gaps)) / (hi - lo) < 0.05
    assert mods[0] / (hi - lo) < 0.2


def test_level_curve_images_share_modulus(z5m1, z5_regions):
    outer = next(r for r in z5_regions if r.eps1 != 0.0)
    grid = build_phi(z5m1, outer)
    cert = verify_phi(z5m1, outer)
    assert cert.level_image_spread <= 1e-9
