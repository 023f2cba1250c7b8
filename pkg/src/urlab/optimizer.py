"""Observables that saturate, or best exploit, the QFI-tightened bound."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import TrivialGenerator, ValidationError
from .metrics import DEFAULT_STEP, PROB_FLOOR, ProbabilityCurve, qfi, sld
from .opcore import HermitianObservable, anticommutator
from .operators import AnsatzBasis, _spin_matrices, ansatz_basis, collective_spin
from .states import SymmetricState, spin_squeezed


def optimal_observable(rho, B) -> HermitianObservable:
    """Observable saturating ``Var(A) F_Q(B) >= <i[A,B]>^2``: the SLD itself.

    Measuring in the SLD eigenbasis attains the QFI, and using its eigenvalues
    as outcomes aligns the two Cauchy-Schwarz vectors.
    """
    f = qfi(rho, B)
    if f < 1e-12:
        raise TrivialGenerator("generator acts trivially on state support")
    return sld(rho, B)


def parallel_outcomes(curve: ProbabilityCurve, theta: float, scale: float = 1.0, offset: float = 0.0,
                      step: float = DEFAULT_STEP) -> np.ndarray:
    """Outcomes ``a_i = scale * p_i' / p_i + offset`` that make the classical bound an equality."""
    p = curve(theta)
    dp = curve.derivative(lambda q: q, theta, step)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(p >= PROB_FLOOR, dp / p, 0.0)
    return scale * ratio + offset


@dataclass(frozen=True, eq=False)
class SpanOptimum:
    coefficients: np.ndarray
    value: float
    operator: HermitianObservable


def _span_moments(psi: np.ndarray, n: int, basis: AnsatzBasis):
    jy_psi = _spin_matrices(n)["y"] @ psi
    w = np.array([el.matrix @ psi for el in basis.elements])
    means = (w @ psi.conj()).real
    cov = (w.conj() @ w.T).real - np.outer(means, means)
    v = -2.0 * (w.conj() @ jy_psi).imag
    return v, 0.5 * (cov + cov.T)


def _realify(z):
    return np.concatenate([z.real, z.imag])


def best_in_span(sym: SymmetricState, basis: AnsatzBasis, rcond: float = 1e-10) -> SpanOptimum:
    """Maximize ``<i[A, J_y]>^2 / Var(A)`` over ``A = sum_a c_a G_a``.

    This is a generalized Rayleigh quotient ``(c.v)^2 / (c.C c)`` with maximum
    ``v.C^+ v`` at ``c = C^+ v``.  For a pure state ``C = W^T W`` and
    ``v = W^T u``, where the columns of ``W`` are the centred vectors
    ``(G_a - <G_a>) psi`` and ``u = 2i (J_y - <J_y>) psi`` (both as real
    vectors), so the maximum is the squared length of ``u`` projected onto the
    column space of ``W``.  The projection is built by ordered Gram-Schmidt:
    a column whose residual is below ``rcond`` times its own norm counts as
    dependent.  Working on ``W`` rather than ``C`` squares away the
    conditioning, and nested bases give nondecreasing values exactly.
    """
    if basis.n != sym.n:
        raise ValidationError(f"basis built for n = {basis.n}, state has n = {sym.n}")
    psi = sym.amplitudes
    jy = _spin_matrices(sym.n)["y"] @ psi
    target = _realify(2j * (jy - np.vdot(psi, jy).real * psi))
    cols, ortho, kept = [], [], []
    for i, el in enumerate(basis.elements):
        w = el.matrix @ psi
        w = _realify(w - np.vdot(psi, w).real * psi)
        norm = np.linalg.norm(w)
        if norm == 0:
            continue
        r = w.copy()
        for _ in range(2):  # re-orthogonalize once for stability
            for q in ortho:
                r -= (q @ r) * q
        rn = np.linalg.norm(r)
        if rn > rcond * norm:
            ortho.append(r / rn)
            cols.append(w)
            kept.append(i)
    coeffs = np.zeros(len(basis))
    if not ortho:
        return SpanOptimum(coeffs, 0.0, basis.assemble(coeffs))
    value = float(sum((q @ target) ** 2 for q in ortho))
    if value < 1e-28 * max(1.0, target @ target):
        return SpanOptimum(coeffs, 0.0, basis.assemble(coeffs))
    sol, *_ = np.linalg.lstsq(np.array(cols).T, target, rcond=None)
    coeffs[kept] = sol
    return SpanOptimum(coeffs, value, basis.assemble(coeffs))


def span_ratio(sym: SymmetricState, basis: AnsatzBasis, coefficients) -> float:
    """``<i[A, J_y]>^2 / Var(A)`` for the span element with the given coefficients."""
    v, cov = _span_moments(sym.amplitudes, sym.n, basis)
    c = np.asarray(coefficients, dtype=float)
    return float((c @ v) ** 2 / (c @ cov @ c))


def _jy_rotation_moments(amplitudes, n):
    js = _spin_matrices(n)
    y, z = js["y"] @ amplitudes, js["z"] @ amplitudes
    my, mz = np.vdot(amplitudes, y).real, np.vdot(amplitudes, z).real
    vyy = np.vdot(y, y).real - my * my
    vzz = np.vdot(z, z).real - mz * mz
    cyz = np.vdot(y, z).real - my * mz
    return vyy, vzz, cyz


def jy_variance_after_rotation(n: int, mu: float, nu) -> np.ndarray:
    """``Var(J_y)`` of ``spin_squeezed(n, mu, nu)`` for an array of ``nu``.

    Conjugating by ``exp(-i nu J_x)`` turns ``J_y`` into ``J_y cos(nu) - J_z sin(nu)``,
    so one set of second moments at ``nu = 0`` covers every rotation.
    """
    vyy, vzz, cyz = _jy_rotation_moments(spin_squeezed(n, mu).amplitudes, n)
    c, s = np.cos(nu), np.sin(nu)
    return c * c * vyy + s * s * vzz - 2 * s * c * cyz


def choose_nu(n: int, mu: float, tol: float = 1e-10, grid: int = 256) -> float:
    """Rotation angle in ``[0, pi)`` maximizing ``Var(J_y)`` of the twisted state."""
    if n < 1:
        raise ValidationError("need at least one qubit")
    vyy, vzz, cyz = _jy_rotation_moments(spin_squeezed(n, mu).amplitudes, n)
    modulation = math.hypot(0.5 * (vyy - vzz), cyz)
    if modulation <= 1e-12 * max(1.0, vyy + vzz):
        return 0.0

    def neg_var(nu):
        c, s = math.cos(nu), math.sin(nu)
        return -(c * c * vyy + s * s * vzz - 2 * s * c * cyz)

    h = math.pi / grid
    nus = np.arange(grid) * h
    i = int(np.argmin([neg_var(x) for x in nus]))
    res = minimize_scalar(neg_var, bracket=(nus[i] - h, nus[i], nus[i] + h), method="golden",
                          options={"xtol": tol})
    nu = float(res.x) % math.pi
    if math.pi - nu < tol:
        nu = 0.0
    return nu


class Fig1Row(NamedTuple):
    mu: float
    nu: float
    qfi_over_n: float
    order: int
    bound_over_n: float


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("UR_LAB_THREADS")
    return max(1, int(env)) if env else 1


def fig1_sweep(n: int, orders: Sequence[int], mu_grid: Sequence[float], workers: int | None = None) -> list[Fig1Row]:
    """QFI of the optimally rotated twisted state versus best span bounds, per ``mu`` and order.

    Rows come back ordered by ``mu`` and then by ``orders`` regardless of how
    many worker threads ran (``UR_LAB_THREADS`` caps the default).
    """
    if n < 2:
        raise ValidationError("the sweep needs n >= 2")
    bases = {k: ansatz_basis(n, k) for k in orders}

    def point(mu):
        nu = choose_nu(n, mu)
        sym = spin_squeezed(n, mu, nu)
        jy = _spin_matrices(n)["y"] @ sym.amplitudes
        m = np.vdot(sym.amplitudes, jy).real
        q_over_n = 4.0 * (np.vdot(jy, jy).real - m * m) / n
        return [Fig1Row(float(mu), nu, q_over_n, k, best_in_span(sym, bases[k]).value / n) for k in orders]

    count = _worker_count(workers)
    if count == 1:
        chunks = [point(mu) for mu in mu_grid]
    else:
        with ThreadPoolExecutor(max_workers=count) as pool:
            chunks = list(pool.map(point, mu_grid))
    return [row for chunk in chunks for row in chunk]


def dicke_quadratic_observable(n: int, m: float, jz_tail: bool = False) -> HermitianObservable:
    """Quadratic observable saturating the bound for the Dicke state with ``J_z = m``.

    With ``c = 1/(1 + 2|m|)`` the optimum is ``-sgn(m) c {J_x, J_z} + (1 - c) J_x``.
    ``jz_tail=True`` returns ``c {J_x, J_z} + (1 - c) J_z`` instead; its ``J_z``
    part acts as a constant on a ``J_z`` eigenstate, so it is only optimal at
    ``m = 0``.
    """
    c = 1.0 / (1.0 + 2.0 * abs(m))
    jx, jz = collective_spin(n, "x"), collective_spin(n, "z")
    quad = anticommutator(jx, jz).matrix
    if jz_tail:
        return HermitianObservable.from_product(c * quad + (1 - c) * jz.matrix)
    sign = -1.0 if m > 0 else 1.0
    return HermitianObservable.from_product(sign * c * quad + (1 - c) * jx.matrix)
