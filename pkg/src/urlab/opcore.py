"""Dense operator foundation: observables, density matrices and their moments.

Every routine here works on plain dense complex matrices.  Functions accept
either the wrapper types below or raw ``numpy`` arrays, so quick experiments
do not need to wrap everything first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatch, ValidationError

HERM_TOL = 1e-12
EIG_TOL = 1e-10
UR_TOL = 1e-9

TOLERANCES = {"HERM_TOL": HERM_TOL, "EIG_TOL": EIG_TOL, "UR_TOL": UR_TOL}


def hermitize(matrix):
    """Return ``(X + X^dagger) / 2`` as a complex array."""
    m = np.asarray(matrix, dtype=complex)
    return 0.5 * (m + m.conj().T)


def _square(matrix, name="matrix"):
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    return m


def _herm_defect(m):
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True, eq=False)
class HermitianObservable:
    """A self-adjoint operator on ``C^dim``.

    The Hermiticity check is relative to the largest entry, so high-degree
    polynomials in collective spins (entries of order ``n^4``) are accepted.
    """

    matrix: np.ndarray
    tol: float = HERM_TOL

    def __post_init__(self):
        m = _square(self.matrix, "observable")
        scale = max(1.0, float(np.max(np.abs(m))))
        if _herm_defect(m) > self.tol * scale:
            raise ValidationError("observable is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_product(cls, matrix) -> "HermitianObservable":
        """Wrap a matrix after symmetrizing away floating-point asymmetry."""
        return cls(hermitize(matrix))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __add__(self, other):
        return HermitianObservable.from_product(self.matrix + as_matrix(other))

    __radd__ = __add__

    def __sub__(self, other):
        return HermitianObservable.from_product(self.matrix - as_matrix(other))

    def __neg__(self):
        return HermitianObservable(-self.matrix)

    def __mul__(self, scalar):
        if np.iscomplexobj(scalar) and np.imag(scalar) != 0:
            raise ValidationError("only real multiples of an observable are Hermitian")
        return HermitianObservable.from_product(float(np.real(scalar)) * self.matrix)

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianObservable(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace positive operator with a cached spectral decomposition.

    Eigenvalues in ``[-EIG_TOL, 0)`` are treated as numerical drift and
    clamped to zero; anything more negative is rejected.  ``meta`` carries
    construction diagnostics (for example the truncation deficit of a
    Gaussian state) and does not take part in any computation.
    """

    matrix: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        m = _square(self.matrix, "density matrix")
        if _herm_defect(m) > HERM_TOL:
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > HERM_TOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        # validates positivity as a side effect
        self.eigenvalues

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValidationError("zero vector is not a state")
        v = v / norm
        return cls(hermitize(np.outer(v, v.conj())))

    @classmethod
    def diagonal(cls, weights, basis=None) -> "DensityMatrix":
        """``sum_i w_i |b_i><b_i|`` with ``b_i`` the columns of ``basis`` (default: computational)."""
        w = np.asarray(weights, dtype=float)
        if basis is None:
            return cls(np.diag(w).astype(complex))
        u = np.asarray(basis, dtype=complex)
        return cls(hermitize((u * w) @ u.conj().T))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _eigh(self):
        q, v = np.linalg.eigh(self.matrix)
        if q[0] < -EIG_TOL:
            raise ValidationError(f"density matrix has negative eigenvalue {q[0]:.3e}")
        q = np.where(q < 0, 0.0, q)
        order = np.argsort(q, kind="stable")[::-1]
        q, v = q[order], v[:, order]
        q.setflags(write=False)
        v.setflags(write=False)
        return q, v

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return self._eigh[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        """Orthonormal eigenvectors as columns, matching :attr:`eigenvalues`."""
        return self._eigh[1]

    @property
    def purity(self) -> float:
        return float(np.sum(self.eigenvalues**2))

    def is_pure(self, tol: float = EIG_TOL) -> bool:
        return abs(self.purity - 1.0) < tol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete set of orthogonal projectors with a real outcome attached to each."""

    projectors: tuple
    outcomes: np.ndarray

    def __post_init__(self):
        projs = tuple(_square(p, "projector") for p in self.projectors)
        out = np.asarray(self.outcomes, dtype=float).ravel()
        if len(projs) == 0 or len(projs) != out.size:
            raise ValidationError("need one real outcome per projector")
        dim = projs[0].shape[0]
        if any(p.shape != (dim, dim) for p in projs):
            raise DimensionMismatch("projectors act on different spaces")
        for i, p in enumerate(projs):
            if _herm_defect(p) > EIG_TOL:
                raise ValidationError(f"projector {i} is not Hermitian")
            for j in range(i, len(projs)):
                target = p if i == j else 0.0
                if np.max(np.abs(p @ projs[j] - target)) > EIG_TOL:
                    raise ValidationError(f"projectors {i}, {j} are not orthogonal idempotents")
        if np.max(np.abs(sum(projs) - np.eye(dim))) > EIG_TOL:
            raise ValidationError("projectors do not resolve the identity")
        for p in projs:
            p.setflags(write=False)
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "outcomes", out)

    @classmethod
    def from_basis(cls, basis, outcomes=None) -> "ProjectiveMeasurement":
        """Rank-one projectors onto the columns of a unitary matrix."""
        u = np.asarray(basis, dtype=complex)
        projs = [np.outer(u[:, i], u[:, i].conj()) for i in range(u.shape[1])]
        if outcomes is None:
            outcomes = np.arange(len(projs), dtype=float)
        return cls(tuple(projs), outcomes)

    @classmethod
    def from_observable(cls, obs, tol: float = 1e-9) -> "ProjectiveMeasurement":
        """Spectral measurement of ``obs``: degenerate eigenvalues share a projector."""
        vals, vecs = np.linalg.eigh(as_matrix(obs))
        groups = [[0]]
        for i in range(1, vals.size):
            if vals[i] - vals[groups[-1][0]] > tol:
                groups.append([i])
            else:
                groups[-1].append(i)
        projs, outs = [], []
        for g in groups:
            v = vecs[:, g]
            projs.append(v @ v.conj().T)
            outs.append(float(np.mean(vals[g])))
        return cls(tuple(projs), np.array(outs))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self):
        return len(self.projectors)

    def observable(self) -> HermitianObservable:
        """``A = sum_i a_i Pi_i``."""
        return HermitianObservable.from_product(sum(a * p for a, p in zip(self.outcomes, self.projectors)))


@dataclass(frozen=True)
class URReport:
    """Evaluated sides of an inequality ``lhs >= rhs``.

    ``tight`` compares the raw gap to ``tol * max(1, lhs)``; callers wanting a
    different threshold can re-test ``gap`` themselves.
    """

    lhs: float
    rhs: float
    tol: float = UR_TOL
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    @property
    def relative_gap(self) -> float:
        return self.gap / max(1.0, abs(self.lhs))

    @property
    def tight(self) -> bool:
        return self.gap <= self.tol * max(1.0, self.lhs)

    def to_dict(self) -> dict:
        d = {"lhs": self.lhs, "rhs": self.rhs, "gap": self.gap, "tight": self.tight, "tol": self.tol}
        d.update(self.extras)
        return d


Operator = Union[HermitianObservable, np.ndarray]
State = Union[DensityMatrix, np.ndarray]


def as_matrix(x) -> np.ndarray:
    if isinstance(x, (HermitianObservable, DensityMatrix)):
        return x.matrix
    return np.asarray(x, dtype=complex)


def as_observable(x) -> HermitianObservable:
    return x if isinstance(x, HermitianObservable) else HermitianObservable(x)


def as_density(x) -> DensityMatrix:
    return x if isinstance(x, DensityMatrix) else DensityMatrix(x)


def _check_dims(*mats):
    shapes = {m.shape for m in mats}
    if len(shapes) != 1:
        raise DimensionMismatch(f"operator shapes differ: {sorted(shapes)}")


def _tr_prod(x, y):
    """``Tr(x @ y)`` without forming the product."""
    return np.sum(x * y.T)


def expectation(rho: State, A: Operator) -> float:
    """``Tr(rho A)``."""
    r, a = as_matrix(rho), as_matrix(A)
    _check_dims(r, a)
    return float(_tr_prod(r, a).real)


def _pair_moment(r, a, b):
    """``Tr(rho A B)``; complex in general."""
    return _tr_prod(r @ a, b)


def variance(rho: State, A: Operator) -> float:
    r, a = as_matrix(rho), as_matrix(A)
    _check_dims(r, a)
    centred = a - _tr_prod(r, a).real * np.eye(a.shape[0])
    v = float(_pair_moment(r, centred, centred).real)
    return max(v, 0.0)


def commutator_mean(rho: State, A: Operator, B: Operator) -> float:
    """``<i[A, B]>_rho``, which equals ``-2 Im Tr(rho A B)``."""
    r, a, b = as_matrix(rho), as_matrix(A), as_matrix(B)
    _check_dims(r, a, b)
    return float(-2.0 * _pair_moment(r, a, b).imag)


def symmetrized_covariance(rho: State, A: Operator, B: Operator) -> float:
    """``1/2 <{A - <A>, B - <B>}>_rho``."""
    r, a, b = as_matrix(rho), as_matrix(A), as_matrix(B)
    _check_dims(r, a, b)
    return float(_pair_moment(r, a, b).real - _tr_prod(r, a).real * _tr_prod(r, b).real)


def commutator(A: Operator, B: Operator) -> HermitianObservable:
    """The Hermitian operator ``i[A, B]``."""
    a, b = as_matrix(A), as_matrix(B)
    _check_dims(a, b)
    return HermitianObservable.from_product(1j * (a @ b - b @ a))


def anticommutator(A: Operator, B: Operator) -> HermitianObservable:
    a, b = as_matrix(A), as_matrix(B)
    _check_dims(a, b)
    return HermitianObservable.from_product(a @ b + b @ a)


def spectral(rho: State) -> list:
    """Spectral decomposition as ``[(q_i, psi_i), ...]`` with ``q_i`` descending."""
    d = as_density(rho)
    return [(float(q), d.eigenvectors[:, i]) for i, q in enumerate(d.eigenvalues)]


def kron_all(mats: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def unitary_evolve(rho: State, generator: Operator, theta: float) -> np.ndarray:
    """``exp(-i G theta) rho exp(i G theta)`` as a raw matrix."""
    r, g = as_matrix(rho), as_matrix(generator)
    _check_dims(r, g)
    w, v = np.linalg.eigh(hermitize(g))
    u = (v * np.exp(-1j * theta * w)) @ v.conj().T
    return hermitize(u @ r @ u.conj().T)
