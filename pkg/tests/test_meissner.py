import math

import numpy as np
import pytest
from scipy.special import jn_zeros

from nesslab import meissner as ms

J01 = float(jn_zeros(0, 1)[0])


def free_disk_error(intervals, R_max=2.0):
    geo = ms.CylinderGeometry.disk(R_max, intervals)
    E0, phi = ms.radial_ground_state(np.zeros(geo.n_total + 1), geo)
    return E0 - 0.5 * (J01 / R_max) ** 2, phi, geo


def landau_error(intervals, B=40.0, R_max=2.0):
    geo = ms.CylinderGeometry.disk(R_max, intervals)
    E0, _ = ms.radial_ground_state(B * geo.grid / 2, geo)
    return E0 - B / 2


def test_free_disk_benchmark_and_normalisation():
    err, phi, geo = free_disk_error(512)
    assert abs(err) < 1e-5
    assert phi.min() >= 0 and phi[-1] == 0
    rho = geo.grid
    norm = 2 * math.pi * np.trapezoid(phi**2 * rho, rho)
    assert norm == pytest.approx(1.0, rel=1e-4)


@pytest.mark.parametrize("bench", [lambda n: free_disk_error(n)[0], landau_error])
def test_second_order_convergence(bench):
    e1, e2 = bench(256), bench(512)
    assert 3.5 < e1 / e2 < 4.5


def test_gauge_translation_in_z_and_height():
    geo = ms.CylinderGeometry(1.0, 2.0, 128, height=1.0)
    tall = ms.CylinderGeometry(1.0, 2.0, 128, height=3.0)
    alpha = 3.0 * geo.grid / 2
    E1, phi1 = ms.radial_ground_state(alpha, geo)
    E2, phi2 = ms.radial_ground_state(alpha, tall)
    assert E1 == E2
    assert np.allclose(phi1, phi2 * math.sqrt(3.0))


def test_variational_bound():
    geo = ms.CylinderGeometry(1.0, 2.0, 256)
    alpha = 4.0 * geo.grid / 2
    E0, phi = ms.radial_ground_state(alpha, geo)
    h = geo.h
    d, e, vol = ms._fv_operator(geo.n_total, h, alpha[:-1] ** 2, origin=True)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    rng = np.random.default_rng(0)
    for _ in range(5):
        trial = np.sqrt(vol) * (phi[:-1] + 0.1 * rng.normal(size=geo.n_total))
        assert trial @ T @ trial / (trial @ trial) / 2 >= E0 - 1e-12


def test_effective_alpha_examples():
    geo = ms.CylinderGeometry(1.0, 2.0, 16)
    uni = ms.uniform_profile(0.6, geo)
    assert np.allclose(ms.effective_alpha(uni), 0.3 * geo.grid)
    si = ms.PhysicalUnits.si()
    assert np.allclose(ms.effective_alpha(uni, si), si.e * 0.3 * geo.grid / si.hbar)
    assert np.all(ms.effective_alpha(ms.uniform_profile(0.0, geo)) == 0)


def test_units():
    si = ms.PhysicalUnits.from_mode("SI")
    assert si.e == pytest.approx(2 * 1.602176634e-19)
    with pytest.raises(ValueError):
        ms.PhysicalUnits(e=0.0)
    with pytest.raises(ValueError):
        ms.PhysicalUnits.from_mode("cgs")


def test_geometry_invariants():
    with pytest.raises(ValueError):
        ms.CylinderGeometry(1.0, 1.5, 16)
    with pytest.raises(ValueError):
        ms.CylinderGeometry(1.0, 2.05, 16)
    geo = ms.CylinderGeometry(1.0, 3.0, 16)
    assert geo.grid[geo.R_index] == pytest.approx(1.0)
    assert np.all(np.diff(geo.grid) > 0)


def test_maxwell_vacuum_and_linearity():
    geo = ms.CylinderGeometry(1.0, 2.0, 256)
    vac = ms.maxwell_update(np.zeros(257), 0.7, geo)
    assert np.allclose(vac.a, 0.7 * geo.grid / 2, atol=1e-12)
    assert np.allclose(vac.B_z, 0.7, atol=1e-12)
    n = np.linspace(0, 50, 257)
    one = ms.maxwell_update(n, 1.0, geo)
    three = ms.maxwell_update(n, 3.0, geo)
    assert np.allclose(three.a, 3 * one.a, rtol=1e-13, atol=0)
    tiny = ms.maxwell_update(n, 1.0, geo, ms.PhysicalUnits(e=1e-9))
    assert np.allclose(tiny.B_z, 1.0, atol=1e-12)


def test_maxwell_rejects_bad_density():
    geo = ms.CylinderGeometry(1.0, 2.0, 16)
    with pytest.raises(ValueError):
        ms.maxwell_update(-np.ones(17), 1.0, geo)
    with pytest.raises(ValueError):
        ms.maxwell_update(np.ones(5), 1.0, geo)


def test_london_profile_and_flux_continuity():
    geo = ms.CylinderGeometry(1.0, 2.0, 1024)
    lam = 0.1
    prof = ms.maxwell_update(np.full(1025, 1 / lam**2), 2.0, geo)
    exact = ms.london_profile(prof.rho[:1025], 1.0, lam, 2.0)
    assert np.max(np.abs(prof.B_z[:1025] - exact)) / 2.0 < 2e-6
    assert prof.B_z[geo.R_index] == prof.B_z[geo.R_index + 1] == 2.0
    # B_z from the discrete curl just inside R is within O(h^2) of B_ext
    i = geo.R_index - 1
    assert abs(prof.B_z[i] - exact[i]) < 1e-4
    assert prof.a[0] == 0.0


def test_london_convergence_second_order():
    errs = []
    for nodes in (256, 512):
        geo = ms.CylinderGeometry(1.0, 2.0, nodes)
        prof = ms.maxwell_update(np.full(nodes + 1, 100.0), 1.0, geo)
        exact = ms.london_profile(prof.rho[: nodes + 1], 1.0, 0.1, 1.0)
        errs.append(np.max(np.abs(prof.B_z[: nodes + 1] - exact)))
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_penetration_fit_london_and_uniform():
    geo = ms.CylinderGeometry(1.0, 2.0, 2048)
    rho = geo.grid
    B = np.where(rho <= 1.0, ms.london_profile(np.minimum(rho, 1.0), 1.0, 0.1, 1.0), 1.0)
    prof = ms.FieldProfile(rho=rho, a=np.zeros_like(rho), B_z=B, B_ext=1.0, R_index=geo.R_index)
    fit = ms.penetration_depth(prof)
    assert fit.decays and fit.lam == pytest.approx(0.1, rel=0.02) and fit.quality > 0.999
    planar = ms.penetration_depth(prof, correction="planar")
    assert planar.lam > fit.lam
    flat = ms.penetration_depth(ms.uniform_profile(1.0, geo))
    assert math.isinf(flat.lam) and not flat.decays
    with pytest.raises(ValueError):
        ms.penetration_depth(prof, fit_region=(0.5, 0.5001))
    with pytest.raises(ValueError):
        ms.penetration_depth(prof, correction="spherical")


def test_penetration_fit_excludes_nonpositive():
    geo = ms.CylinderGeometry(1.0, 2.0, 256)
    rho = geo.grid
    B = np.exp((rho - 1) / 0.1)
    B[140] = -1.0
    prof = ms.FieldProfile(rho=rho, a=np.zeros_like(rho), B_z=B, B_ext=1.0, R_index=geo.R_index)
    with pytest.warns(RuntimeWarning):
        fit = ms.penetration_depth(prof, correction="planar")
    assert fit.excluded == 1 and fit.lam == pytest.approx(0.1, rel=1e-9)


def test_scf_frozen_constant_density_one_iteration():
    geo = ms.CylinderGeometry(1.0, 2.0, 256)
    n = np.full(257, 100.0)
    start = ms.maxwell_update(n, 1.0, geo)
    state, prof = ms.scf_solve(1.0, geo, frozen_density=n, initial=start)
    assert state.iteration == 1 and state.converged


def test_scf_weak_coupling_and_resubstitution():
    geo = ms.CylinderGeometry(1.0, 2.0, 512)
    state, prof = ms.scf_solve(1e-4, geo, n_particles=5.0)
    assert state.converged and state.residual < 1e-10 and state.iteration < 200
    again, _ = ms.scf_solve(1e-4, geo, n_particles=5.0, initial=prof, config=ms.ScfConfig(max_iter=1))
    assert again.residual < 1e-10


def test_scf_linear_response():
    geo = ms.CylinderGeometry(1.0, 2.0, 256)
    _, p1 = ms.scf_solve(1e-8, geo, n_particles=50.0)
    _, p2 = ms.scf_solve(2e-8, geo, n_particles=50.0)
    assert np.max(np.abs(p2.B_z - 2 * p1.B_z) / np.abs(2 * p1.B_z)) < 1e-6


def test_scf_nonconvergence_reports_history():
    geo = ms.CylinderGeometry(1.0, 2.0, 128)
    with pytest.raises(ms.ScfNotConverged) as err:
        ms.scf_solve(1.0, geo, n_particles=50.0, config=ms.ScfConfig(max_iter=2, tol=1e-14))
    assert len(err.value.history) == 2
    with pytest.raises(ValueError):
        ms.scf_solve(0.0, geo)
    with pytest.raises(ValueError):
        ms.ScfConfig(mix=0.0)


def test_k0_sector_lowest_at_small_field():
    geo = ms.CylinderGeometry(1.0, 2.0, 256)
    alpha = 0.01 * geo.grid / 2
    e0 = ms.sector_ground_energy(alpha, geo, 0)
    assert e0 < ms.sector_ground_energy(alpha, geo, 1)
    assert e0 < ms.sector_ground_energy(alpha, geo, -1)


def test_weak_coupling_matches_frozen_density_profile():
    geo = ms.CylinderGeometry(1.0, 2.0, 512)
    B = 1e-4
    state, prof = ms.scf_solve(B, geo, n_particles=5.0)
    _, phi = ms.radial_ground_state(ms.effective_alpha(ms.uniform_profile(B, geo)), geo)
    frozen = ms.maxwell_update(5.0 * phi**2, B, geo)
    inner = prof.interior()
    assert np.max(np.abs(frozen.B_z[inner] - prof.B_z[inner])) < 1e-10
    assert np.max(np.abs(frozen.a[inner] - prof.a[inner])) < 1e-10
