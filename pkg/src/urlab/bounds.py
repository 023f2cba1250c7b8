"""Evaluators for the uncertainty relations, each returning a :class:`URReport`."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import NoOrthogonalization, UndefinedBound, ValidationError
from .metrics import DEFAULT_STEP, ProbabilityCurve, classical_fisher, measurement_fisher, qfi
from .opcore import (
    UR_TOL,
    DensityMatrix,
    URReport,
    as_density,
    as_matrix,
    commutator_mean,
    symmetrized_covariance,
    variance,
)
from .operators import collective_spin

HBAR = 1.0


def cramer_rao_check(curve: ProbabilityCurve, outcomes, theta: float, step: float = DEFAULT_STEP,
                     tol: float = 1e-8) -> URReport:
    """``Var(A) F(theta) >= (d<A>/dtheta)^2`` for outcomes ``a_i`` on a classical curve."""
    a = np.asarray(outcomes, dtype=float)
    p = curve(theta)
    if a.size != p.size:
        raise ValidationError(f"{a.size} outcomes for {p.size} events")
    mean = a @ p
    var = float(((a - mean) ** 2) @ p)
    fisher = classical_fisher(curve, theta, step)
    slope = float(curve.derivative(lambda q: a @ q, theta, step))
    return URReport(var * fisher, slope**2, tol, {"variance": var, "fisher": fisher, "slope": slope})


def robertson(rho, A, B, tol: float = UR_TOL) -> URReport:
    """Heisenberg-Robertson: ``Var(A) Var(B) >= <i[A,B]>^2 / 4``."""
    va, vb = variance(rho, A), variance(rho, B)
    c = commutator_mean(rho, A, B)
    return URReport(va * vb, 0.25 * c * c, tol, {"var_a": va, "var_b": vb, "commutator": c})


def schroedinger(rho, A, B, tol: float = UR_TOL) -> URReport:
    """Robertson plus the squared symmetrized covariance on the right."""
    va, vb = variance(rho, A), variance(rho, B)
    c = commutator_mean(rho, A, B)
    cov = symmetrized_covariance(rho, A, B)
    return URReport(va * vb, 0.25 * c * c + cov * cov, tol,
                    {"var_a": va, "var_b": vb, "commutator": c, "covariance": cov})


def qfi_bound(rho, A, B, tol: float = UR_TOL) -> URReport:
    """``Var(A) F_Q(rho, B) >= <i[A,B]>^2``.

    ``extras["robertson_lhs"]`` holds ``Var(A) Var(B)``; four times it always
    dominates ``lhs`` because ``F_Q <= 4 Var(B)``.
    """
    va = variance(rho, A)
    f = qfi(rho, B)
    c = commutator_mean(rho, A, B)
    return URReport(va * f, c * c, tol,
                    {"var_a": va, "qfi": f, "commutator": c, "robertson_lhs": va * variance(rho, B)})


class FisherChain(NamedTuple):
    fisher: float
    qfi: float
    four_var: float

    def violations(self) -> tuple[float, float]:
        """Amounts by which ``F <= F_Q`` and ``F_Q <= 4 Var`` fail (positive = violated)."""
        return self.fisher - self.qfi, self.qfi - self.four_var

    def ordered(self, tol: float = 1e-8) -> bool:
        return all(v <= tol for v in self.violations())


def fisher_chain(rho, B, meas, theta: float = 0.0) -> FisherChain:
    """Measured Fisher information, QFI and ``4 Var(B)`` for one setting."""
    return FisherChain(measurement_fisher(rho, B, meas, theta), qfi(rho, B), 4.0 * variance(rho, B))


def incompatibility_margin(rho, A, B) -> float:
    """``(lhs - rhs)`` of the QFI bound minus four times ``(lhs - rhs)`` of Schroedinger's.

    Both signs occur, so neither relation implies the other.
    """
    q = qfi_bound(rho, A, B)
    s = schroedinger(rho, A, B)
    return q.gap - 4.0 * s.gap


def mandelstam_tamm(psi, H, t_max: float | None = None, overlap_tol: float = 1e-10) -> URReport:
    """Time-energy relation ``Delta H * t_perp >= pi/2`` (``hbar = 1``).

    ``t_perp`` is the first time at which the survival probability
    ``|<psi(0)|psi(t)>|^2`` drops below ``overlap_tol``.  It is found as a
    root of the survival probability's derivative, bracketed by a scan.
    ``psi`` may be a pure density matrix or a state vector.
    """
    if not isinstance(psi, DensityMatrix) and np.ndim(psi) == 1:
        rho = DensityMatrix.pure(psi)
    else:
        rho = as_density(psi)
    if not rho.is_pure():
        raise ValidationError("the time-energy bound is evaluated on pure states")
    vec = rho.eigenvectors[:, 0]
    e, v = np.linalg.eigh(as_matrix(H))
    weights = np.abs(v.conj().T @ vec) ** 2
    span = e[-1] - e[0]
    if span <= 0:
        raise NoOrthogonalization("no orthogonalization: H is proportional to the identity")
    if t_max is None:
        t_max = 10 * 2 * math.pi / span
    e = e - e[0]

    def amp(t):
        return np.sum(weights * np.exp(-1j * e * t))

    def survival(t):
        return abs(amp(t)) ** 2

    def dsurvival(t):
        a = amp(t)
        da = np.sum(-1j * e * weights * np.exp(-1j * e * t))
        return 2.0 * (np.conj(a) * da).real

    grid = np.linspace(0.0, t_max, int(4000 * t_max * span / (2 * math.pi)) + 2)
    phases = np.exp(-1j * np.outer(grid, e))
    a_grid = phases @ weights
    da_grid = phases @ (-1j * e * weights)
    ds = 2.0 * (np.conj(a_grid) * da_grid).real
    t_perp = None
    for i in range(1, grid.size - 1):
        if ds[i] < 0 <= ds[i + 1]:
            t0 = brentq(dsurvival, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
            if survival(t0) < overlap_tol:
                t_perp = t0
                break
    if t_perp is None:
        raise NoOrthogonalization(f"no orthogonalization within t_max = {t_max:.6g}")
    dh = math.sqrt(max(float(weights @ e**2 - (weights @ e) ** 2), 0.0))
    return URReport(dh * t_perp, math.pi * HBAR / 2, UR_TOL,
                    {"delta_h": dh, "t_perp": t_perp, "survival": survival(t_perp)})


def normalized_qfi_bound(sym, A) -> float:
    """``<i[A, J_y]>^2 / (n Var(A))``, the lower bound on ``F_Q(J_y)/n`` for a symmetric state."""
    rho = sym.density()
    jy = collective_spin(sym.n, "y")
    va = variance(rho, A)
    if va < 1e-14:
        raise UndefinedBound("Var(A) vanishes, the bound is undefined")
    c = commutator_mean(rho, A, jy)
    return c * c / (sym.n * va)
