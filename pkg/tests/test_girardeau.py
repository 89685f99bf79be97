import math

import pytest
from hypothesis import given, settings, strategies as st

from nesslab import girardeau as gd
from nesslab.enumeration import bruteforce_min, global_window
from nesslab.kinematics import girardeau_geometry


def test_ground_sea():
    geo = girardeau_geometry(5, 2 * math.pi)
    cfg = gd.ground_config(geo)
    assert cfg.occupied == (-2, -1, 0, 1, 2)
    assert cfg.energy_units == gd.ground_energy_units(geo) == 10
    assert gd.momentum(cfg) == 0
    assert gd.fermi_momentum(geo) == pytest.approx(2.0)


def test_config_validation():
    geo = girardeau_geometry(3, 3.0)
    with pytest.raises(ValueError):
        gd.FermiConfig((0, 0, 1), geo)
    with pytest.raises(ValueError):
        gd.FermiConfig((0, 1), geo)


def test_boosted_point_exact_units():
    geo = girardeau_geometry(3, 2 * math.pi)
    p = gd.boosted_point(gd.FermiConfig((-1, 0, 2), geo), 1.0)
    # dE = 4 - 1 = 3, P = 1, v * P = 1
    assert p.lam_units == 4
    assert p.lam == pytest.approx(4.0)
    half = gd.boosted_point(gd.FermiConfig((-1, 0, 2), geo), 1.0, "m-one")
    assert half.lam_units == pytest.approx(2.5)


def test_umklapp_moves_shift_sea():
    geo = girardeau_geometry(5, 2 * math.pi)
    lad = gd.umklapp_ladder(2, 4.0, geo)
    assert lad.moves == ((2, -3), (1, -4))
    assert lad.config.occupied == (-4, -3, -2, -1, 0)
    # N (r**2 - nv r) = 5 (4 - 8)
    assert lad.e_units == -20
    assert lad.momentum_change == pytest.approx(-10.0)


def test_umklapp_mirror_for_negative_v():
    geo = girardeau_geometry(5, 2 * math.pi)
    plus = gd.umklapp_ladder(2, 4.0, geo)
    minus = gd.umklapp_ladder(2, -4.0, geo)
    assert minus.config.occupied == tuple(sorted(-n for n in plus.config.occupied))
    assert minus.e_total == plus.e_total


def test_umklapp_bounds():
    geo = girardeau_geometry(3, 2 * math.pi)
    with pytest.raises(ValueError):
        gd.umklapp_ladder(4, 1.0, geo)
    with pytest.raises(ValueError):
        gd.umklapp_ladder(-1, 1.0, geo)


def test_umklapp_counts():
    geo = girardeau_geometry(7, 2 * math.pi)
    assert gd.umklapp_counts(4.0, geo) == (4, 2)
    assert gd.umklapp_counts(-3.0, geo) == (3, 1)


def test_ness_limit_points():
    pts = gd.ness_limit_points(1.0, 1.0, 3)
    assert pts.values == pytest.approx((-2 * math.pi, -4 * math.pi, -6 * math.pi))
    assert pts.in_window
    assert not gd.ness_limit_points(1.0, 7.0, 1).in_window


def test_ladder_sequence_closed_form():
    # e_total = lambda_j + (2 pi / L)**2 N j**2 for the rigid shift
    for M, L, N, e in gd.ladder_sequence(1.0, 1.0, 2, [4, 8, 16]):
        assert e == pytest.approx(-2 * math.pi * N / L * 2 + (2 * math.pi / L) ** 2 * N * 4, rel=1e-12)


def test_ladder_sequence_rejects_off_lattice_v():
    with pytest.raises(ValueError):
        gd.ladder_sequence(1.0, 0.3, 1, [4])


@pytest.mark.parametrize("N", [1, 3, 5, 7, 9])
@pytest.mark.parametrize("M", [1, 2])
@pytest.mark.parametrize("nv_half", [-4, -1, 0, 2, 4])
def test_oracle_equivalence_ladder_never_below(N, M, nv_half):
    L = 2 * math.pi * M
    geo = girardeau_geometry(N, L)
    v = nv_half / M
    if abs(v) > 4:
        pytest.skip("outside the tested velocity range")
    oracle = bruteforce_min(geo, v, global_window(geo, v))
    ladders = [gd.umklapp_ladder(r, v, geo).e_total for r in range(0, N + 1)]
    assert min(ladders) >= oracle - 1e-12
    # the rigid shift by nv/2 realises the floor exactly when nv/2 is an integer
    nv = round(v * M)
    if nv % 2 == 0 and abs(nv) // 2 <= N:
        assert gd.umklapp_ladder(abs(nv) // 2, v, geo).e_total == pytest.approx(oracle, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, 3, 5, 7]), st.integers(1, 3), st.integers(-8, 8))
def test_parity_of_boosted_spectrum(N, M, nv):
    geo = girardeau_geometry(N, 2 * math.pi * M)
    v = nv / M
    configs = [gd.ground_config(geo), gd.umklapp_ladder(1, 1.0, geo).config, gd.FermiConfig(tuple(range(N)), geo)]
    for cfg in configs:
        mirrored = gd.FermiConfig(tuple(-n for n in cfg.occupied), geo)
        assert gd.boosted_point(cfg, -v).lam == pytest.approx(gd.boosted_point(mirrored, v).lam, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7, 9, 11]), st.integers(1, 4), st.integers(1, 6))
def test_floor_exact_when_half_velocity_on_lattice(N, M, half):
    L = 2 * math.pi * M
    geo = girardeau_geometry(N, L)
    v = 2 * half / M
    if half > N:
        return
    lad = gd.umklapp_ladder(half, v, geo)
    assert lad.e_total == pytest.approx(-N * v * v / 4, rel=1e-12)
