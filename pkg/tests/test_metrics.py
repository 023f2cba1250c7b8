import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from urlab import (
    BoundarySingularity,
    DensityMatrix,
    DimensionMismatch,
    ProbabilityCurve,
    ProjectiveMeasurement,
    ValidationError,
    born_probs,
    classical_fisher,
    measurement_curve,
    measurement_fisher,
    qfi,
    sld,
    sld_measurement,
    variance,
)
from urlab.operators import pauli

from randomstates import random_density, random_hermitian, random_pure, random_unitary

SX, SY, SZ = (pauli(a).matrix for a in "xyz")


def qubit_rotation_curve():
    rho0 = DensityMatrix.pure([1, 0])
    return measurement_curve(rho0, SY / 2, ProjectiveMeasurement.from_basis(np.eye(2)))


def test_rotation_curve_probabilities():
    p = qubit_rotation_curve()(math.pi / 3)
    np.testing.assert_allclose(p, [0.75, 0.25], atol=1e-15)


def test_rotation_curve_fisher_is_one():
    curve = qubit_rotation_curve()
    for theta in (0.3, 1.0, 2.5):
        assert classical_fisher(curve, theta) == pytest.approx(1.0, abs=1e-8)


def test_curve_validation():
    curve = ProbabilityCurve(lambda t: np.array([t, 1 - t]), domain=(0.0, 1.0))
    with pytest.raises(ValidationError):
        curve(1.5)
    bad = ProbabilityCurve(lambda t: np.array([0.5, 0.6]))
    with pytest.raises(ValidationError):
        bad(0.0)


def test_boundary_singularity_detected():
    curve = ProbabilityCurve(lambda t: np.array([max(t, 0.0), 1 - max(t, 0.0)]), domain=(-0.5, 0.5))
    with pytest.raises(BoundarySingularity):
        classical_fisher(curve, 0.0)


def test_vanishing_outcome_with_flat_root_is_dropped():
    curve = ProbabilityCurve(lambda t: np.array([0.0, math.cos(t) ** 2, math.sin(t) ** 2]))
    assert classical_fisher(curve, 0.4) == pytest.approx(4.0, abs=1e-8)


def test_born_probs_dimension_check():
    meas = ProjectiveMeasurement.from_basis(np.eye(3))
    with pytest.raises(DimensionMismatch):
        born_probs(np.eye(2) / 2, meas)


def test_qfi_biased_qubit():
    # q = (3/4, 1/4), |<0|sy|1>|^2 = 1: 2 * 2 * (1/2)^2 / 1 = 1
    assert qfi(np.diag([0.75, 0.25]), SY) == pytest.approx(1.0, abs=1e-15)
    assert qfi(np.diag([0.75, 0.25]), SZ) == 0.0


def test_qfi_pure_is_four_variance(rng):
    for _ in range(10):
        psi = random_pure(rng, 5)
        b = random_hermitian(rng, 5)
        rho = DensityMatrix.pure(psi)
        assert qfi(rho, b) == pytest.approx(4 * variance(rho, b), rel=1e-9)


def test_sld_defining_equation(rng):
    rho = random_density(rng, 4)
    b = random_hermitian(rng, 4)
    L = sld(rho, b).matrix
    drho = -1j * (b @ rho - rho @ b)
    np.testing.assert_allclose(0.5 * (L @ rho + rho @ L), drho, atol=1e-10)
    assert np.trace(rho @ L @ L).real == pytest.approx(qfi(rho, b), rel=1e-10)


def test_sld_pure_state_closed_form(rng):
    psi = random_pure(rng, 3)
    b = random_hermitian(rng, 3)
    rho = np.outer(psi, psi.conj())
    L = sld(rho, b).matrix
    # on the support L acts as 2 d(rho)/d(theta) = -2i[B, rho]
    expected = -2j * (b @ rho - rho @ b)
    np.testing.assert_allclose(L, expected, atol=1e-10)


def test_measurement_fisher_routes_agree(rng):
    rho = random_density(rng, 3)
    b = random_hermitian(rng, 3)
    meas = ProjectiveMeasurement.from_basis(random_unitary(rng, 3))
    exact = measurement_fisher(rho, b, meas, theta=0.2)
    approx = measurement_fisher(rho, b, meas, theta=0.2, route="finite")
    assert approx == pytest.approx(exact, rel=1e-6)
    with pytest.raises(ValueError):
        measurement_fisher(rho, b, meas, route="magic")


def test_measurement_fisher_handles_zero_probability():
    # pure |0> rotated about y, measured in z: p_1 = sin^2(theta/2) vanishes at theta = 0
    meas = ProjectiveMeasurement.from_basis(np.eye(2))
    f = measurement_fisher(np.diag([1.0, 0.0]), SY / 2, meas, theta=0.0)
    assert f == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 6))
def test_sld_measurement_reaches_qfi(seed, dim):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, dim)
    b = random_hermitian(rng, dim)
    f = qfi(rho, b)
    meas = sld_measurement(rho, b)
    assert measurement_fisher(rho, b, meas) == pytest.approx(f, rel=1e-7, abs=1e-12)
    assert f <= 4 * variance(rho, b) + 1e-10
