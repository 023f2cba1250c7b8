"""State factories: Gibbs states of ladder systems, Gaussian states, symmetric qubit states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import TruncationError, ValidationError
from .opcore import DensityMatrix, as_density, hermitize, kron_all
from .operators import _spin_matrices, annihilation


@dataclass(frozen=True)
class LadderSystem:
    """Evenly gapped spectrum ``H = sum_m m |m,a><m,a|`` with real ladder coefficients.

    ``coeffs[m][a]`` is ``c+_{m,a}``, the amplitude of ``L+ |m,a> = c |m+1,a>``.
    Level ``m`` needs one coefficient per label shared with level ``m+1``,
    i.e. ``min(deg[m], deg[m+1])`` of them; labels present on only one side
    are annihilated.  ``c-_{m+1,a} = c+_{m,a}`` follows from ``L- = L+^dagger``.
    """

    degeneracies: tuple
    coeffs: tuple

    def __post_init__(self):
        deg = tuple(int(d) for d in self.degeneracies)
        if any(d < 1 for d in deg):
            raise ValidationError("degeneracies must be positive")
        if sum(deg) < 2:
            raise ValidationError("a ladder system needs at least two states")
        coeffs = tuple(tuple(float(c) for c in row) for row in self.coeffs)
        if len(coeffs) != len(deg) - 1:
            raise ValidationError(f"need {len(deg) - 1} coefficient rows, got {len(coeffs)}")
        for m, row in enumerate(coeffs):
            if len(row) != min(deg[m], deg[m + 1]):
                raise ValidationError(f"level {m} needs {min(deg[m], deg[m + 1])} coefficients")
        object.__setattr__(self, "degeneracies", deg)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def M(self) -> int:
        return len(self.degeneracies) - 1

    @property
    def dim(self) -> int:
        return sum(self.degeneracies)

    @property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.degeneracies)[:-1]]).astype(int)

    @property
    def levels(self) -> np.ndarray:
        """Energy ``m`` of every basis state, in basis order."""
        return np.repeat(np.arange(self.M + 1), self.degeneracies)

    @property
    def C_plus(self) -> np.ndarray:
        """``C+_m = sum_a (c+_{m,a})^2``, with ``C+_M = 0``."""
        return np.array([sum(c * c for c in row) for row in self.coeffs] + [0.0])

    def hamiltonian(self) -> np.ndarray:
        return np.diag(self.levels.astype(float)).astype(complex)

    def raising(self) -> np.ndarray:
        lp = np.zeros((self.dim, self.dim), dtype=complex)
        off = self.offsets
        for m, row in enumerate(self.coeffs):
            for a, c in enumerate(row):
                lp[off[m + 1] + a, off[m] + a] = c
        return lp

    @classmethod
    def uniform(cls, M: int, c: float = 1.0, degeneracy: int = 1) -> "LadderSystem":
        return cls((degeneracy,) * (M + 1), ((c,) * degeneracy,) * M)

    @classmethod
    def harmonic(cls, M: int) -> "LadderSystem":
        """Truncated oscillator: ``c+_m = sqrt(m + 1)``."""
        return cls((1,) * (M + 1), tuple((math.sqrt(m + 1),) for m in range(M)))

    @classmethod
    def random(cls, rng, max_level: int = 6, max_degeneracy: int = 3, coeff_range=(0.1, 2.0)) -> "LadderSystem":
        M = int(rng.integers(1, max_level + 1))
        deg = tuple(int(d) for d in rng.integers(1, max_degeneracy + 1, size=M + 1))
        rows = tuple(tuple(rng.uniform(*coeff_range, size=min(deg[m], deg[m + 1]))) for m in range(M))
        return cls(deg, rows)


def gibbs(sys: LadderSystem, beta: float) -> DensityMatrix:
    """``exp(-beta H) / Z`` in the ``|m, a>`` basis.  Negative ``beta`` is allowed."""
    if not np.isfinite(beta):
        raise ValidationError("beta must be finite")
    logw = -beta * sys.levels.astype(float)
    w = np.exp(logw - logw.max())
    w /= w.sum()
    return DensityMatrix(np.diag(w).astype(complex))


def rank_two_gibbs(g: float) -> tuple[LadderSystem, float]:
    """Two-level system and inverse temperature giving ``diag(1-g, g)``.

    Basis order is ``(|psi_1>, |psi_0>)`` with ``H = |psi_0><psi_0|``, so the
    state is ``g |psi_0><psi_0| + (1-g) |psi_1><psi_1|`` and ``g > 1/2``
    requires ``beta < 0``.
    """
    if not 0.0 < g < 1.0:
        raise ValidationError("g must lie strictly between 0 and 1")
    return LadderSystem((1, 1), ((1.0,),)), math.log((1.0 - g) / g)


@dataclass(frozen=True)
class GaussianSpec:
    beta: float
    r: float = 0.0
    theta: float = 0.0
    alpha: complex = 0.0
    cutoff: int | None = None

    def __post_init__(self):
        if not self.beta > 0:
            raise ValidationError("a normalizable thermal seed needs beta > 0")
        if self.r < 0:
            raise ValidationError("squeezing magnitude must be non-negative")
        object.__setattr__(self, "theta", float(self.theta) % (2 * math.pi))
        object.__setattr__(self, "alpha", complex(self.alpha))

    @property
    def xi(self) -> complex:
        return self.r * np.exp(1j * self.theta)


TAIL_TOL = 1e-10


def default_cutoff(spec: GaussianSpec) -> int:
    """Smallest power of two above ``16 e^{2r} (1 + 2 nbar) + 8 |alpha|^2``."""
    nbar = 1.0 / math.expm1(spec.beta) if spec.beta < 700 else 0.0
    need = 16.0 * math.exp(2 * spec.r) * (1.0 + 2.0 * nbar) + 8.0 * abs(spec.alpha) ** 2
    return 1 << max(1, math.ceil(math.log2(need)))


def thermal_weights(beta: float, dim: int) -> np.ndarray:
    """Photon-number distribution ``(1 - e^{-beta}) e^{-beta k}``, truncated to ``dim`` levels."""
    k = np.arange(dim)
    return -math.expm1(-beta) * np.exp(-beta * k)


def gaussian(spec: GaussianSpec) -> DensityMatrix:
    """Displaced squeezed thermal state ``D(alpha) S(xi) rho_th S^dagger D^dagger``.

    Uses ``S(xi) = exp[(xi* a^2 - xi a^dagger^2)/2]`` and
    ``D(alpha) = exp(alpha a^dagger - alpha* a)``.  The unitaries act in a
    working space twice the cutoff so that truncation of the generators does
    not reach the retained block; the retained block's missing trace is
    checked against ``TAIL_TOL`` and the state renormalized.
    """
    cutoff = spec.cutoff or default_cutoff(spec)
    work = 2 * cutoff
    a = annihilation(work)
    ad = a.conj().T
    xi = spec.xi
    rho = np.diag(thermal_weights(spec.beta, work)).astype(complex)
    if spec.r > 0:
        s = expm(0.5 * (np.conj(xi) * (a @ a) - xi * (ad @ ad)))
        rho = s @ rho @ s.conj().T
    if spec.alpha != 0:
        d = expm(spec.alpha * ad - np.conj(spec.alpha) * a)
        rho = d @ rho @ d.conj().T
    rho = hermitize(rho)
    pops = np.clip(np.diag(rho).real, 0.0, None)
    deficit = 1.0 - pops[:cutoff].sum()
    if deficit > TAIL_TOL:
        tail = 1.0 - np.cumsum(pops)
        enough = np.nonzero(tail < TAIL_TOL)[0]
        estimate = 1 << math.ceil(math.log2(enough[0] + 1)) if enough.size else 2 * work
        estimate = max(estimate, default_cutoff(spec))
        raise TruncationError(
            f"cutoff {cutoff} leaves trace deficit {deficit:.2e} > {TAIL_TOL:g}; "
            f"use cutoff >= {estimate}",
            suggested_cutoff=estimate,
        )
    block = rho[:cutoff, :cutoff]
    block = block / np.trace(block).real
    return DensityMatrix(block, meta={"tail_deficit": float(max(deficit, 0.0)), "cutoff": cutoff})


@dataclass(frozen=True, eq=False)
class SymmetricState:
    """Permutation-symmetric pure state of ``n`` qubits, ``sum_k c_k |n,k>``."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        c = np.array(self.amplitudes, dtype=complex).ravel()
        if self.n < 1 or c.size != self.n + 1:
            raise ValidationError(f"need n + 1 = {self.n + 1} Dicke amplitudes, got {c.size}")
        if abs(np.vdot(c, c).real - 1.0) > 1e-12:
            raise ValidationError("amplitudes are not normalized")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def m_values(self) -> np.ndarray:
        """``J_z`` eigenvalue ``n/2 - k`` of each Dicke basis vector."""
        return self.n / 2.0 - np.arange(self.n + 1)

    def density(self) -> DensityMatrix:
        return DensityMatrix.pure(self.amplitudes)

    def full_vector(self) -> np.ndarray:
        """Embed into the ``2^n`` computational basis (small ``n`` cross-checks only)."""
        if self.n > 14:
            raise ValidationError("full-space embedding limited to n <= 14")
        idx = np.arange(2**self.n)
        weight = np.array([bin(i).count("1") for i in idx])
        k = np.arange(self.n + 1)
        norms = np.exp(-0.5 * log_binom(self.n, k))
        return self.amplitudes[weight] * norms[weight]


def log_binom(n, k):
    """``log C(n, k)`` elementwise; ``-inf`` outside ``0 <= k <= n``."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    valid = (k >= 0) & (k <= n)
    with np.errstate(invalid="ignore"):
        out = gammaln(n + 1) - gammaln(np.where(valid, k, 0) + 1) - gammaln(np.where(valid, n - k, 0) + 1)
    return np.where(valid, out, -np.inf)


@lru_cache(maxsize=16)
def _jx_eigh(n: int):
    return np.linalg.eigh(_spin_matrices(n)["x"])


def rotate_x(amplitudes, n: int, nu: float) -> np.ndarray:
    """Apply ``exp(-i nu J_x)`` to Dicke-basis amplitudes."""
    if nu == 0:
        return np.asarray(amplitudes, dtype=complex)
    w, v = _jx_eigh(n)
    return v @ (np.exp(-1j * nu * w) * (v.conj().T @ amplitudes))


def spin_squeezed(n: int, mu: float, nu: float = 0.0) -> SymmetricState:
    """One-axis twisted state ``exp(-i nu J_x) exp(-i mu J_z^2 / 2) |+>^n``."""
    if n < 1:
        raise ValidationError("need at least one qubit")
    k = np.arange(n + 1)
    mag = np.exp(0.5 * log_binom(n, k) - 0.5 * n * math.log(2.0))
    c = mag * np.exp(-0.5j * mu * (k - n / 2.0) ** 2)
    c = rotate_x(c, n, nu)
    return SymmetricState(n, c / np.linalg.norm(c))


def dicke(n: int, k: int) -> SymmetricState:
    """Dicke state ``|n, k>`` with ``k`` excitations (``J_z`` eigenvalue ``n/2 - k``)."""
    if not 0 <= k <= n:
        raise ValidationError(f"k = {k} outside 0..{n}")
    c = np.zeros(n + 1, dtype=complex)
    c[k] = 1.0
    return SymmetricState(n, c)


MAX_QUBIT_BUDGET = 14


def product_power(rho, copies: int) -> DensityMatrix:
    """``rho^{(x) copies}`` by repeated Kronecker products."""
    r = as_density(rho)
    if copies < 1:
        raise ValidationError("copies must be >= 1")
    if copies * math.log2(r.dim) > MAX_QUBIT_BUDGET + 1e-12:
        raise ValidationError(
            f"{copies} copies of a {r.dim}-dim state exceed the {2**MAX_QUBIT_BUDGET}-dim budget"
        )
    if copies == 1:
        return r
    return DensityMatrix(hermitize(kron_all([r.matrix] * copies)))


def qubit_thermal_jz(beta: float) -> DensityMatrix:
    """Single-qubit ``exp(-beta sigma_z / 2) / Z``."""
    w = np.array([math.exp(-beta / 2), math.exp(beta / 2)])
    return DensityMatrix.diagonal(w / w.sum())


def thermal_jz(n: int, beta: float) -> DensityMatrix:
    """``exp(-beta J_z) / Z`` on the full ``2^n`` space (a product of qubit thermal states)."""
    return product_power(qubit_thermal_jz(beta), n)


def dephased_coherent(n: int, g: float) -> DensityMatrix:
    """``(g |+><+| + (1-g) |-><-|)^{(x) n}`` on the full ``2^n`` space."""
    plus_minus = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    return product_power(DensityMatrix.diagonal([g, 1 - g], plus_minus), n)
