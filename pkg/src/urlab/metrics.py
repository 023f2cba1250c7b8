"""Information quantities: outcome distributions, Fisher information, QFI and the SLD."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BoundarySingularity, DimensionMismatch, ValidationError
from .opcore import (
    DensityMatrix,
    HermitianObservable,
    ProjectiveMeasurement,
    as_density,
    as_matrix,
    hermitize,
    unitary_evolve,
)

PROB_FLOOR = 1e-12
SUPPORT_TOL = 1e-12
DEFAULT_STEP = 1e-5


@dataclass(frozen=True)
class ProbabilityCurve:
    """A differentiable path ``theta -> p(theta)`` through the probability simplex."""

    evaluator: Callable[[float], np.ndarray]
    domain: tuple = (-np.inf, np.inf)

    def __call__(self, theta: float) -> np.ndarray:
        lo, hi = self.domain
        if not lo < theta < hi:
            raise ValidationError(f"theta = {theta} outside the open interval {self.domain}")
        p = np.asarray(self.evaluator(theta), dtype=float)
        if abs(p.sum() - 1.0) > 1e-10 or p.min() < -PROB_FLOOR:
            raise ValidationError("curve produced an invalid probability vector")
        return np.clip(p, 0.0, None)

    def derivative(self, fn, theta: float, step: float = DEFAULT_STEP) -> np.ndarray:
        """Richardson-refined central difference of ``fn(p(theta))``."""

        def central(h):
            return (fn(self(theta + h)) - fn(self(theta - h))) / (2 * h)

        return (4 * central(step / 2) - central(step)) / 3


def born_probs(rho, meas: ProjectiveMeasurement) -> np.ndarray:
    """``p_i = Tr(rho Pi_i)``, clamped at zero and renormalized against rounding drift."""
    r = as_matrix(rho)
    if r.shape[0] != meas.dim:
        raise DimensionMismatch("state and measurement dimensions differ")
    p = np.array([np.sum(r * pi.T).real for pi in meas.projectors])
    p = np.clip(p, 0.0, None)
    s = p.sum()
    if abs(s - 1.0) < 1e-10:
        p = p / s
    return p


def classical_fisher(curve: ProbabilityCurve, theta: float, step: float = DEFAULT_STEP) -> float:
    """``F = 4 sum_i (d sqrt(p_i) / d theta)^2`` by finite differences.

    Outcomes with vanishing probability and vanishing ``d sqrt(p)`` are
    dropped.  A vanishing probability whose square root still moves is a
    boundary singularity and raises.
    """
    p = curve(theta)
    ds = curve.derivative(np.sqrt, theta, step)
    dead = p < PROB_FLOOR
    if np.any(dead & (np.abs(ds) > 1e-6)):
        raise BoundarySingularity(f"probability vanishes at theta = {theta} while sqrt(p) moves")
    return float(4.0 * np.sum(np.where(dead, 0.0, ds**2)))


def measurement_curve(rho0, B, meas: ProjectiveMeasurement) -> ProbabilityCurve:
    """Outcome distribution of ``meas`` on ``exp(-iB theta) rho0 exp(iB theta)``."""
    r0, b = as_matrix(rho0), as_matrix(B)
    if r0.shape != b.shape or r0.shape[0] != meas.dim:
        raise DimensionMismatch("state, generator and measurement dimensions differ")
    w, v = np.linalg.eigh(hermitize(b))
    r0_eig = v.conj().T @ r0 @ v
    projs_eig = [v.conj().T @ p @ v for p in meas.projectors]

    def probs(theta):
        phase = np.exp(-1j * theta * w)
        r = r0_eig * np.outer(phase, phase.conj())
        return np.array([np.sum(r * p.T).real for p in projs_eig])

    return ProbabilityCurve(probs)


def _analytic_fisher(rho0, B, meas, theta):
    r = unitary_evolve(rho0, B, theta)
    b = as_matrix(B)
    dr = -1j * (b @ r - r @ b)
    ddr = -1j * (b @ dr - dr @ b)
    total = 0.0
    for pi in meas.projectors:
        p = np.sum(r * pi.T).real
        dp = np.sum(dr * pi.T).real
        if p >= PROB_FLOOR:
            total += dp * dp / p
        elif abs(dp) > 1e-6:
            raise BoundarySingularity("vanishing probability with nonzero rate")
        else:
            # p ~ p''/2 t^2 near a zero, so dp^2/p -> 2 p''
            total += max(0.0, 2.0 * np.sum(ddr * pi.T).real)
    return total


def measurement_fisher(rho0, B, meas: ProjectiveMeasurement, theta: float = 0.0, route: str = "analytic",
                       step: float = DEFAULT_STEP) -> float:
    """Fisher information of ``meas`` along the unitary orbit generated by ``B``.

    ``route="analytic"`` uses ``dp_i/dtheta = Tr(-i[B, rho(theta)] Pi_i)`` and
    is authoritative; ``route="finite"`` differentiates the curve numerically.
    """
    if route == "analytic":
        r0, b = as_matrix(rho0), as_matrix(B)
        if r0.shape != b.shape or r0.shape[0] != meas.dim:
            raise DimensionMismatch("state, generator and measurement dimensions differ")
        return float(_analytic_fisher(r0, b, meas, theta))
    if route == "finite":
        return classical_fisher(measurement_curve(rho0, B, meas), theta, step)
    raise ValueError(f"unknown route {route!r}")


def _eigen_frame(rho, B):
    d = as_density(rho)
    b = as_matrix(B)
    if b.shape != d.matrix.shape:
        raise DimensionMismatch("state and generator dimensions differ")
    v = d.eigenvectors
    return d.eigenvalues, v, v.conj().T @ b @ v


def qfi(rho, B) -> float:
    r"""Quantum Fisher information of ``rho`` for the generator ``B``.

    .. math::
        \mathcal{F} = 2 \sum_{i,j} \frac{(q_i - q_j)^2}{q_i + q_j} |\langle\psi_i|B|\psi_j\rangle|^2

    Pairs with ``q_i + q_j`` below ``SUPPORT_TOL`` contribute nothing.
    """
    q, _, bt = _eigen_frame(rho, B)
    qs = q[:, None] + q[None, :]
    qd = q[:, None] - q[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(qs >= SUPPORT_TOL, qd**2 / qs, 0.0)
    return float(2.0 * np.sum(w * np.abs(bt) ** 2))


def sld(rho, B) -> HermitianObservable:
    """Symmetric logarithmic derivative ``L`` with ``-i[B, rho] = (L rho + rho L) / 2``.

    In the eigenbasis of ``rho``: ``L_ij = 2i (q_i - q_j) / (q_i + q_j) B_ij``.
    """
    q, v, bt = _eigen_frame(rho, B)
    qs = q[:, None] + q[None, :]
    qd = q[:, None] - q[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(qs >= SUPPORT_TOL, 2.0 * qd / qs, 0.0)
    lt = 1j * w * bt
    return HermitianObservable.from_product(v @ lt @ v.conj().T)


def sld_measurement(rho, B) -> ProjectiveMeasurement:
    """Rank-one measurement in the SLD eigenbasis, outcomes equal to the SLD eigenvalues."""
    vals, vecs = np.linalg.eigh(sld(rho, B).matrix)
    return ProjectiveMeasurement.from_basis(vecs, vals)
