"""Closed-form checks for the saturating examples, grouped for the ``verify`` command."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .bounds import qfi_bound
from .metrics import qfi, sld
from .opcore import TOLERANCES, commutator_mean, expectation, variance
from .operators import collective_spin_full, ladder_pair, quadrature
from .states import GaussianSpec, dephased_coherent, gaussian, gibbs, qubit_thermal_jz, rank_two_gibbs, thermal_jz

GROUPS = ("rank-two", "dephased", "thermal-jz", "gaussian")


@dataclass
class Check:
    group: str
    name: str
    lhs: float
    rhs: float
    tolerance: float
    relative: bool = True

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        scale = max(1.0, abs(self.rhs)) if self.relative else 1.0
        return abs(self.gap) <= self.tolerance * scale

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(gap=self.gap, passed=self.passed)
        return d


def _saturation(group, name, rho, a, b, tol):
    """Relative gap of the QFI bound, reported as a check against zero."""
    rep = qfi_bound(rho, a, b)
    return Check(group, name, rep.lhs, rep.rhs, tol)


def rank_two_checks():
    out = []
    for g in (0.6, 0.75, 0.9):
        sys, beta = rank_two_gibbs(g)
        rho = gibbs(sys, beta)
        a, b = ladder_pair(sys)
        tag = f"g={g}"
        out.append(Check("rank-two", f"var(A) {tag}", variance(rho, a), 1.0, 1e-12))
        out.append(Check("rank-two", f"qfi(B) {tag}", qfi(rho, b), 4 * (2 * g - 1) ** 2, 1e-12))
        out.append(Check("rank-two", f"sld second moment {tag}", expectation(rho, sld(rho, b).matrix @ sld(rho, b).matrix),
                         4 * (2 * g - 1) ** 2, 1e-12))
        out.append(Check("rank-two", f"|<i[A,B]>| {tag}", abs(commutator_mean(rho, a, b)), 2 * abs(2 * g - 1), 1e-12))
        out.append(_saturation("rank-two", f"qfi bound {tag}", rho, a, b, 1e-9))
    return out


def dephased_checks():
    out = []
    for n, g in itertools.product((4, 6), (0.6, 0.75, 0.9)):
        rho = dephased_coherent(n, g)
        jy, jz = collective_spin_full(n, "y"), collective_spin_full(n, "z")
        tag = f"n={n} g={g}"
        out.append(Check("dephased", f"qfi(Jz) {tag}", qfi(rho, jz), (2 * g - 1) ** 2 * n, 1e-9))
        out.append(_saturation("dephased", f"qfi bound {tag}", rho, jy, jz, 1e-9))
    return out


def thermal_jz_checks(n: int = 10, full_qfi_max: int = 6):
    out = []
    for beta in (0.5, 1.0, 2.0):
        t = math.tanh(beta / 2)
        rho = thermal_jz(n, beta)
        jx, jy = collective_spin_full(n, "x"), collective_spin_full(n, "y")
        tag = f"n={n} beta={beta}"
        out.append(Check("thermal-jz", f"var(Jx) {tag}", variance(rho, jx), n / 4, 1e-9))
        out.append(Check("thermal-jz", f"<i[Jx,Jy]> {tag}", commutator_mean(rho, jx, jy), n * t / 2, 1e-9))
        single = qfi(qubit_thermal_jz(beta), collective_spin_full(1, "y"))
        q_n = n * single
        out.append(Check("thermal-jz", f"qfi(Jy) additive {tag}", q_n, n * t * t, 1e-9))
        lhs = variance(rho, jx) * q_n
        rhs = commutator_mean(rho, jx, jy) ** 2
        out.append(Check("thermal-jz", f"qfi bound {tag}", lhs, rhs, 1e-9))
        m = min(n, full_qfi_max)
        small = thermal_jz(m, beta)
        out.append(Check("thermal-jz", f"qfi(Jy) full n={m} beta={beta}",
                         qfi(small, collective_spin_full(m, "y")), m * t * t, 1e-9))
    return out


def gaussian_checks():
    out = []
    grid = itertools.product((0.5, 1.0, 3.0), (0.0, 0.25, 0.5), (0.0, math.pi / 3), (0.0, 1 + 0.5j))
    for beta, r, theta, alpha in grid:
        rho = gaussian(GaussianSpec(beta, r, theta, alpha))
        a = quadrature(rho.dim, theta / 2)
        b = quadrature(rho.dim, theta / 2 + math.pi / 2)
        tag = f"beta={beta} r={r} theta={theta:.4f} alpha={alpha}"
        va, f = variance(rho, a), qfi(rho, b)
        out.append(Check("gaussian", f"var*qfi {tag}", va * f, 1.0, 1e-7))
        out.append(Check("gaussian", f"<i[A,B]> {tag}", commutator_mean(rho, a, b), -1.0, 1e-7))
        if alpha == 0:
            out.append(Check("gaussian", f"var(A) {tag}", va, 0.5 * math.exp(-2 * r) / math.tanh(beta / 2), 1e-7))
            out.append(Check("gaussian", f"qfi(B) {tag}", f, 2 * math.exp(2 * r) * math.tanh(beta / 2), 1e-7))
    return out


_RUNNERS = {
    "rank-two": rank_two_checks,
    "dephased": dephased_checks,
    "thermal-jz": thermal_jz_checks,
    "gaussian": gaussian_checks,
}


def verify_examples(only=None, tol: float | None = None) -> dict:
    """Run the selected groups; ``tol`` overrides every per-check tolerance."""
    groups = list(only) if only else list(GROUPS)
    unknown = set(groups) - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown check groups: {sorted(unknown)}")
    checks = [c for g in groups for c in _RUNNERS[g]()]
    if tol is not None:
        for c in checks:
            c.tolerance = tol
    return {
        "version": __version__,
        "conventions": {"hbar": 1.0},
        "tolerances": dict(TOLERANCES),
        "groups": groups,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
