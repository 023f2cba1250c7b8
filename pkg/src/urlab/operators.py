"""Observable factories: ladder pairs, collective spins, quadratures, polynomial ansatz."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .opcore import HermitianObservable, as_matrix, hermitize, kron_all

AXES = ("x", "y", "z")

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(axis: str) -> HermitianObservable:
    return HermitianObservable(_PAULI[axis])


def annihilation(dim: int) -> np.ndarray:
    """Truncated bosonic lowering operator on ``span{|0>, ..., |dim-1>}``."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def ladder_pair(sys) -> tuple[HermitianObservable, HermitianObservable]:
    """``A = L+ + L-`` and ``B = i(L+ - L-)`` for a :class:`~urlab.states.LadderSystem`."""
    lp = sys.raising()
    lm = lp.conj().T
    return HermitianObservable.from_product(lp + lm), HermitianObservable.from_product(1j * (lp - lm))


@lru_cache(maxsize=64)
def _spin_matrices(n: int):
    j = n / 2.0
    m = j - np.arange(n + 1)
    # J+ maps |n,k> to |n,k-1>, i.e. raises m = n/2 - k
    plus = np.zeros((n + 1, n + 1))
    k = np.arange(1, n + 1)
    plus[k - 1, k] = np.sqrt((j - m[k]) * (j + m[k] + 1))
    jx = 0.5 * (plus + plus.T)
    jy = (plus - plus.T) / 2j
    out = {"x": jx.astype(complex), "y": jy.astype(complex), "z": np.diag(m).astype(complex)}
    for v in out.values():
        v.setflags(write=False)
    return out


def collective_spin(n: int, axis: str) -> HermitianObservable:
    """``J_axis`` on the ``(n+1)``-dimensional Dicke space, index ``k`` = excitations."""
    if n < 1:
        raise ValidationError("need at least one qubit")
    if axis not in AXES:
        raise ValidationError(f"axis must be one of {AXES}")
    return HermitianObservable(_spin_matrices(n)[axis])


def local_sum(op, copies: int) -> HermitianObservable:
    """``sum_i id x ... x op^(i) x ... x id`` over ``copies`` sites."""
    a = as_matrix(op)
    eye = np.eye(a.shape[0], dtype=complex)
    total = sum(kron_all([a if i == j else eye for j in range(copies)]) for i in range(copies))
    return HermitianObservable.from_product(total)


def collective_spin_full(n: int, axis: str) -> HermitianObservable:
    """``J_axis = 1/2 sum_i sigma_axis^(i)`` on the full ``2^n`` space."""
    if n > 12:
        raise ValidationError("full tensor-space operators are limited to n <= 12")
    return local_sum(_PAULI[axis] / 2, n)


def quadrature(cutoff: int, phase: float) -> HermitianObservable:
    """``X_phi = (e^{-i phi} a + e^{i phi} a^dagger) / sqrt(2)``; ``phi = 0`` is x, ``pi/2`` is p."""
    if cutoff < 2:
        raise ValidationError("cutoff must be at least 2")
    a = annihilation(cutoff)
    return HermitianObservable.from_product((np.exp(-1j * phase) * a + np.exp(1j * phase) * a.conj().T) / np.sqrt(2))


@dataclass(frozen=True, eq=False)
class AnsatzBasis:
    """Linearly independent Hermitian polynomials in ``J_x, J_y, J_z`` up to a given degree.

    ``labels[i]`` is ``(word, part)`` where ``word`` is the sorted letter
    multiset of the monomial and ``part`` is ``"re"`` for ``(W + W^dagger)/2``
    or ``"im"`` for ``i(W - W^dagger)/2``.  Elements are traceless and scaled
    to unit Hilbert-Schmidt norm.
    """

    n: int
    order: int
    elements: tuple
    labels: tuple

    def __len__(self):
        return len(self.elements)

    def assemble(self, coefficients) -> HermitianObservable:
        c = np.asarray(coefficients, dtype=float)
        if c.size != len(self.elements):
            raise ValidationError("one coefficient per basis element required")
        total = np.zeros((self.n + 1, self.n + 1), dtype=complex)
        for ci, el in zip(c, self.elements):
            total += ci * el.matrix
        return HermitianObservable.from_product(total)

    def gram(self) -> np.ndarray:
        """Real Hilbert-Schmidt Gram matrix ``Tr(G_a G_b)``."""
        flat = np.array([el.matrix.ravel() for el in self.elements])
        return (flat.conj() @ flat.T).real


def ansatz_basis(n: int, order: int, prune_tol: float = 1e-10) -> AnsatzBasis:
    """Polynomials of degree ``1..order`` in the collective spins.

    Words are canonicalized to sorted multisets: a reordered product differs
    from the sorted one by commutators of lower degree, which are already in
    the span because every degree below ``order`` is included.
    """
    if order < 1:
        raise ValidationError("order must be >= 1")
    if n < 1:
        raise ValidationError("need at least one qubit")
    dim = n + 1
    js = _spin_matrices(n)
    eye = np.eye(dim)
    candidates = []
    for degree in range(1, order + 1):
        for word in itertools.combinations_with_replacement(AXES, degree):
            w = np.eye(dim, dtype=complex)
            for letter in word:
                w = w @ js[letter]
            for part, g in (("re", 0.5 * (w + w.conj().T)), ("im", 0.5j * (w - w.conj().T))):
                g = g - (np.trace(g).real / dim) * eye
                norm = np.linalg.norm(g)
                if norm > 0:
                    candidates.append(("".join(word), part, g / norm))

    # greedy Gram-Schmidt pruning on unit-norm candidates
    kept, labels, ortho = [], [], []
    for word, part, g in candidates:
        v = g.ravel()
        r = v.copy()
        for _ in range(2):  # second sweep restores orthogonality lost to rounding
            for q in ortho:
                r -= np.vdot(q, r) * q
        rn = np.linalg.norm(r)
        if rn**2 > prune_tol:
            ortho.append(r / rn)
            kept.append(HermitianObservable.from_product(g))
            labels.append((word, part))
    return AnsatzBasis(n=n, order=order, elements=tuple(kept), labels=tuple(labels))
