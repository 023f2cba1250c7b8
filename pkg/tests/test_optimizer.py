import math

import numpy as np
import pytest

from urlab import (
    ProbabilityCurve,
    TrivialGenerator,
    ValidationError,
    ansatz_basis,
    best_in_span,
    choose_nu,
    collective_spin,
    cramer_rao_check,
    dicke,
    dicke_quadratic_observable,
    fig1_sweep,
    normalized_qfi_bound,
    optimal_observable,
    parallel_outcomes,
    qfi_bound,
    spin_squeezed,
    variance,
)
from urlab.optimizer import jy_variance_after_rotation, span_ratio

from randomstates import random_density, random_hermitian


def test_optimal_observable_saturates(rng):
    rho = random_density(rng, 5, rank=3)
    b = random_hermitian(rng, 5)
    a = optimal_observable(rho, b)
    rep = qfi_bound(rho, a, b)
    assert abs(rep.gap) <= 1e-8 * rep.lhs


def test_optimal_observable_trivial_generator():
    with pytest.raises(TrivialGenerator):
        optimal_observable(np.diag([0.6, 0.4]), np.diag([1.0, -1.0]))


def test_parallel_outcomes_make_equality():
    def probs(t):
        p1, p2 = 0.2 + 0.1 * math.sin(t), 0.5 - 0.2 * math.cos(t)
        return np.array([p1, p2, 1 - p1 - p2])

    curve = ProbabilityCurve(probs)
    a = parallel_outcomes(curve, 0.4, scale=2.0, offset=-1.0)
    rep = cramer_rao_check(curve, a, 0.4)
    assert abs(rep.gap) <= 1e-8 * max(1.0, rep.lhs)


def test_span_order_one_coherent_state():
    # mu = 0 is the x-polarized coherent state; A = J_z gives <J_x>^2 / Var(J_z) = n
    n = 16
    opt = best_in_span(spin_squeezed(n, 0.0), ansatz_basis(n, 1))
    assert opt.value == pytest.approx(n, rel=1e-12)
    assert opt.coefficients[0] == pytest.approx(0.0, abs=1e-10)


def test_span_certificate(rng):
    n = 30
    sym = spin_squeezed(n, 0.2, choose_nu(n, 0.2))
    basis = ansatz_basis(n, 3)
    opt = best_in_span(sym, basis)
    assert span_ratio(sym, basis, opt.coefficients) == pytest.approx(opt.value, rel=1e-8)
    assert normalized_qfi_bound(sym, opt.operator) * n == pytest.approx(opt.value, rel=1e-8)
    for _ in range(20):
        c = rng.normal(size=len(basis))
        assert span_ratio(sym, basis, c) <= opt.value * (1 + 1e-10)


def test_span_value_below_qfi():
    n = 40
    jy = collective_spin(n, "y")
    for mu in (0.01, 0.1, 0.5):
        sym = spin_squeezed(n, mu, choose_nu(n, mu))
        four_var = 4 * variance(sym.density(), jy)
        for order in (1, 2, 3):
            assert best_in_span(sym, ansatz_basis(n, order)).value <= four_var * (1 + 1e-9)


def test_span_nested_orders():
    n = 50
    bases = [ansatz_basis(n, k) for k in (1, 2, 3, 4)]
    for mu in np.logspace(-4, 0, 9):
        sym = spin_squeezed(n, mu, choose_nu(n, mu))
        values = [best_in_span(sym, b).value for b in bases]
        assert all(b >= a - 1e-10 for a, b in zip(values, values[1:])), values


def test_span_basis_mismatch():
    with pytest.raises(ValidationError):
        best_in_span(spin_squeezed(4, 0.1), ansatz_basis(5, 1))


def test_span_on_fully_polarized_state():
    # |n,0> is a coherent state along z, so the linear span already saturates
    opt = best_in_span(dicke(6, 0), ansatz_basis(6, 1))
    assert opt.value == pytest.approx(4 * variance(dicke(6, 0).density(), collective_spin(6, "y")))


def test_rotation_variance_matches_direct_states():
    n, mu = 24, 0.15
    nus = np.linspace(0, math.pi, 7)
    jy = collective_spin(n, "y")
    direct = [variance(spin_squeezed(n, mu, nu).density(), jy) for nu in nus]
    np.testing.assert_allclose(jy_variance_after_rotation(n, mu, nus), direct, rtol=1e-10)


def test_choose_nu_is_global_maximum():
    n, mu = 60, 0.05
    nu = choose_nu(n, mu)
    assert 0 <= nu < math.pi
    grid = np.linspace(0, math.pi, 4001)
    best = jy_variance_after_rotation(n, mu, grid).max()
    assert jy_variance_after_rotation(n, mu, nu) >= best - 1e-9


def test_choose_nu_without_twist_is_zero():
    assert choose_nu(10, 0.0) == 0.0


def test_fig1_sweep_is_deterministic_across_workers():
    grid = np.logspace(-3, 0, 6)
    serial = fig1_sweep(20, [1, 2], grid, workers=1)
    threaded = fig1_sweep(20, [1, 2], grid, workers=4)
    assert serial == threaded
    assert [r.order for r in serial[:4]] == [1, 2, 1, 2]


@pytest.mark.parametrize("n,m", [(4, 0), (6, 1), (10, -2), (12, 3)])
def test_dicke_quadratic_observable_saturates(n, m):
    sym = dicke(n, int(n // 2 - m))
    a = dicke_quadratic_observable(n, m)
    target = 4 * variance(sym.density(), collective_spin(n, "y")) / n
    assert normalized_qfi_bound(sym, a) == pytest.approx(target, rel=1e-9)


def test_jz_tail_operator_only_optimal_without_polarization():
    n = 8
    jy = collective_spin(n, "y")
    for m, optimal in ((0, True), (1, False), (2, False)):
        sym = dicke(n, n // 2 - m)
        target = 4 * variance(sym.density(), jy) / n
        value = normalized_qfi_bound(sym, dicke_quadratic_observable(n, m, jz_tail=True))
        assert (abs(value - target) < 1e-9 * target) is optimal
