import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsplit.errors import AngleOutOfRange, DimMismatch, DuplicateState, NotNormalized
from qsplit.numerics import gram
from qsplit.states import (
    BlochAngles,
    StateFamily,
    blank_ancilla,
    bloch_angles_of,
    fidelity_up_to_phase,
    ket_input,
    ket_sigma,
    ket_theta,
    normalize_angles,
    tensor,
)

PI = math.pi
R2 = 1 / math.sqrt(2)

thetas = st.floats(0.0, PI)
phis = st.floats(0.0, 2 * PI, exclude_max=True)


@pytest.mark.parametrize(
    "theta, phi, expected",
    [(0, 0, [1, 0]), (PI / 2, 0, [R2, R2]), (PI / 2, PI / 2, [R2, 1j * R2])],
)
def test_ket_input_examples(theta, phi, expected):
    assert np.allclose(ket_input(BlochAngles(theta, phi)), expected, atol=1e-15)


def test_ket_theta_and_sigma_examples():
    assert np.allclose(ket_theta(0), [1, 0])
    assert np.allclose(ket_theta(PI), [0, 1], atol=1e-16)
    assert np.allclose(ket_theta(PI / 2), [R2, R2])
    assert np.allclose(ket_sigma(0), [R2, R2])
    assert np.allclose(ket_sigma(PI), [R2, -R2], atol=1e-16)
    assert np.allclose(ket_sigma(PI / 2), [R2, 1j * R2], atol=1e-16)
    assert ket_sigma(1.234)[0] == R2


@pytest.mark.parametrize("theta, phi", [(-0.1, 0), (PI + 1e-9, 0), (1, -1e-9), (1, 2 * PI)])
def test_out_of_range_angles_are_rejected(theta, phi):
    with pytest.raises(AngleOutOfRange):
        BlochAngles(theta, phi)


def test_constructors_reject_bad_angles():
    with pytest.raises(AngleOutOfRange):
        ket_theta(4.0)
    with pytest.raises(AngleOutOfRange):
        ket_sigma(7.0)


def test_blank_ancilla():
    assert np.array_equal(blank_ancilla(), [1, 0])
    assert np.linalg.norm(blank_ancilla()) == 1
    assert np.array_equal(gram([blank_ancilla()]), [[1]])


def test_tensor_examples(rng):
    assert np.array_equal(tensor([1, 0], [1, 0]), [1, 0, 0, 0])
    assert np.array_equal(tensor([1, 0], [0, 1]), [0, 1, 0, 0])
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    b = rng.normal(size=4) + 1j * rng.normal(size=4)
    ab = tensor(a, b)
    assert ab.shape == (12,)
    assert ab[1 * 4 + 2] == a[1] * b[2]
    assert np.linalg.norm(ab) == pytest.approx(np.linalg.norm(a) * np.linalg.norm(b))


def test_fidelity_examples():
    a = ket_input(BlochAngles(1.0, 2.0))
    assert fidelity_up_to_phase(a, a) == pytest.approx(1.0)
    assert fidelity_up_to_phase([1, 0], [0, 1]) == 0.0
    assert fidelity_up_to_phase([1, 0], [cmath.exp(1j * PI / 7), 0]) == pytest.approx(1.0)
    with pytest.raises(DimMismatch):
        fidelity_up_to_phase([1, 0], [1, 0, 0])
    with pytest.raises(NotNormalized):
        fidelity_up_to_phase([1, 1], [1, 0])


@given(thetas, phis, thetas, phis)
def test_closed_form_overlaps(t1, p1, t2, p2):
    a, b = BlochAngles(t1, p1), BlochAngles(t2, p2)
    expected = math.cos(t1 / 2) * math.cos(t2 / 2) + math.sin(t1 / 2) * math.sin(t2 / 2) * cmath.exp(1j * (p2 - p1))
    assert abs(np.vdot(ket_input(a), ket_input(b)) - expected) <= 1e-12
    assert abs(np.vdot(ket_theta(t1), ket_theta(t2)) - math.cos((t1 - t2) / 2)) <= 1e-12
    assert abs(np.vdot(ket_sigma(p1), ket_sigma(p2)) - 0.5 * (1 + cmath.exp(1j * (p2 - p1)))) <= 1e-12


@given(thetas, phis)
def test_constructors_are_unit_vectors(t, p):
    for v in (ket_input(BlochAngles(t, p)), ket_theta(t), ket_sigma(p)):
        assert abs(np.linalg.norm(v) - 1) <= 1e-12


@given(thetas, phis)
def test_bloch_angle_recovery_round_trips_the_ray(t, p):
    psi = cmath.exp(0.37j) * ket_input(BlochAngles(t, p))
    back = bloch_angles_of(psi)
    assert fidelity_up_to_phase(ket_input(back), ket_input(BlochAngles(t, p))) == pytest.approx(1.0, abs=1e-12)


def test_bloch_angles_at_poles_use_zero_phi():
    assert bloch_angles_of([0, 1j]) == BlochAngles(PI, 0.0)
    assert bloch_angles_of([1j, 0]) == BlochAngles(0.0, 0.0)


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_normalize_angles_keeps_the_state(theta, phi):
    a = normalize_angles(theta, phi)
    raw = np.array([math.cos(theta / 2), math.sin(theta / 2) * cmath.exp(1j * phi)])
    assert fidelity_up_to_phase(ket_input(a), raw) == pytest.approx(1.0, abs=1e-9)


def test_family_validation():
    f = StateFamily([(0, 0), (PI, 1.0)])
    assert f.n == 2 and len(f) == 2
    assert f[1] == BlochAngles(PI, 1.0)
    with pytest.raises(DuplicateState):
        StateFamily([(0.5, 1.0), (0.5, 1.0 + 1e-13)])
    with pytest.raises(ValueError):
        StateFamily([])
