import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nesslab.kinematics import (
    MomentumLattice,
    SystemGeometry,
    boost_energy_shift,
    boosted_floor,
    girardeau_geometry,
    prescription,
    prescription_vector,
    thermodynamic_geometry,
)


def test_lattice_points_and_index():
    lat = MomentumLattice(2 * math.pi)
    assert lat.spacing == pytest.approx(1.0)
    assert np.allclose(lat.points(2), [-2, -1, 0, 1, 2])
    assert lat.index_of(3.0) == 3
    assert not lat.contains(0.5)
    with pytest.raises(ValueError):
        lat.index_of(0.5)


def test_prescription_examples():
    lat = MomentumLattice(2 * math.pi)
    assert prescription(0.9, lat).v_lattice == 0.0
    assert prescription(2.0, lat).v_lattice == 2.0
    assert prescription(-1.7, lat).v_lattice == -1.0
    assert prescription(0.9, lat).moved


@given(st.floats(-50, 50, allow_nan=False), st.floats(0.5, 40))
def test_prescription_properties(v, L):
    lat = MomentumLattice(L)
    spec = prescription(v, lat)
    assert abs(spec.v_lattice) <= abs(v) + 1e-12 * max(1, abs(v))
    assert abs(v - spec.v_lattice) < lat.spacing * (1 + 1e-9)
    assert lat.contains(spec.v_lattice)
    assert spec.v_lattice * v >= 0


def test_prescription_vector_componentwise():
    lat = MomentumLattice(2 * math.pi)
    assert np.allclose(prescription_vector([0.9, -2.5, 3.0], lat), [0.0, -2.0, 3.0])


def test_geometry_validation():
    with pytest.raises(ValueError):
        SystemGeometry(L=0.0, N=3)
    with pytest.raises(ValueError):
        girardeau_geometry(4, 4.0)
    g = girardeau_geometry(5, 5.0)
    assert g.rho == 1.0 and g.mass == 0.5


def test_thermodynamic_geometry_nearest_odd():
    assert thermodynamic_geometry(1.0, 2 * math.pi * 4).N == 25
    assert thermodynamic_geometry(1.0, 4.0).N == 3  # tie between 3 and 5
    assert thermodynamic_geometry(1.0, 0.3).N == 1


def test_boost_shift_and_floor():
    assert boost_energy_shift(3, 2.0, m=0.5) == pytest.approx(3.0)
    assert boosted_floor(3, 2.0, m=0.5) == pytest.approx(-3.0)
    with pytest.raises(ValueError):
        boost_energy_shift(0, 1.0)
