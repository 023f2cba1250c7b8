"""Reduced states of permutation-symmetric qubit states and two-qubit negativity.

Reduced states live in the ``(s+1)``-dimensional Dicke basis of the retained
qubits; only the two-qubit negativity embeds them into ``C^2 x C^2``.
Matrix entries follow the usual ``rho[l, l'] = <s,l| rho |s,l'>`` ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .opcore import EIG_TOL, DensityMatrix, as_matrix, hermitize
from .states import SymmetricState, log_binom

EXACT_BINOM_MAX_N = 60


def _sqrt_ratio(n, s, l, k):
    """``sqrt(C(s,l) C(n-s,k) / C(n,k+l))``, exactly for small ``n`` and in log space otherwise."""
    if n <= EXACT_BINOM_MAX_N:
        return math.sqrt(Fraction(math.comb(s, l) * math.comb(n - s, k), math.comb(n, k + l)))
    return math.exp(0.5 * (log_binom(s, l) + log_binom(n - s, k) - log_binom(n, k + l)))


def _check_split(n, s):
    if not 1 <= s <= n:
        raise ValidationError(f"subsystem size s = {s} outside 1..{n}")


def split_dicke(n: int, k: int, s: int) -> list[tuple[int, int, float]]:
    """Schmidt-like split ``|n,k> = sum_l w_l |s,l> (x) |n-s,k-l>``.

    Returns ``(l, k - l, w_l)`` for every admissible ``l``.
    """
    if not 0 <= k <= n:
        raise ValidationError(f"k = {k} outside 0..{n}")
    if not 1 <= s <= n - 1:
        raise ValidationError(f"bipartition size s = {s} outside 1..{n - 1}")
    lo, hi = max(0, k - (n - s)), min(s, k)
    return [(l, k - l, _sqrt_ratio(n, s, l, k - l)) for l in range(lo, hi + 1)]


@dataclass(frozen=True, eq=False)
class ReducedSymmetricState:
    """State of ``s`` qubits of a symmetric state, in the ``s``-qubit Dicke basis."""

    s: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.s + 1, self.s + 1):
            raise ValidationError(f"expected a {self.s + 1}x{self.s + 1} matrix, got {m.shape}")
        rho = DensityMatrix(hermitize(m))
        object.__setattr__(self, "matrix", rho.matrix)
        object.__setattr__(self, "_rho", rho)

    def density(self) -> DensityMatrix:
        return self._rho

    def coherence(self, offset: int) -> float:
        """Largest ``|rho[l, l + offset]|``."""
        return float(np.max(np.abs(np.diagonal(self.matrix, offset)))) if offset <= self.s else 0.0

    def dephased(self) -> "ReducedSymmetricState":
        return ReducedSymmetricState(self.s, np.diag(np.diag(self.matrix)))


def reduce_symmetric(sym: SymmetricState, s: int) -> ReducedSymmetricState:
    """Trace out ``n - s`` qubits of a symmetric pure state.

    ``rho[l, l'] = sum_k c_{k+l} c*_{k+l'} C(n-s, k) sqrt(C(s,l) C(s,l') / (C(n,k+l) C(n,k+l')))``,
    evaluated as ``U U^dagger`` with ``U[l, k] = c_{k+l} sqrt(C(s,l) C(n-s,k) / C(n,k+l))``.
    """
    n = sym.n
    _check_split(n, s)
    c = sym.amplitudes
    u = np.zeros((s + 1, n - s + 1), dtype=complex)
    for l in range(s + 1):
        for k in range(n - s + 1):
            u[l, k] = c[k + l] * _sqrt_ratio(n, s, l, k)
    rho = u @ u.conj().T
    return ReducedSymmetricState(s, rho / np.trace(rho).real)


def reduced_squeezed_closed_form(n: int, mu: float, s: int) -> ReducedSymmetricState:
    """Closed-form ``s``-qubit reduction of the untilted (``nu = 0``) twisted state.

    ``rho[l, l'] = 2^{-s} sqrt(C(s,l) C(s,l')) exp(i mu [l(s-l) - l'(s-l')]/2) cos^{n-s}(mu (l-l')/2)``.
    """
    _check_split(n, s)
    l = np.arange(s + 1)
    mag = np.exp(0.5 * (log_binom(s, l)[:, None] + log_binom(s, l)[None, :]) - s * math.log(2.0))
    twist = l * (s - l)
    phase = np.exp(0.5j * mu * (twist[:, None] - twist[None, :]))
    damp = np.cos(0.5 * mu * (l[:, None] - l[None, :])) ** (n - s)
    return ReducedSymmetricState(s, mag * phase * damp)


def reduced_dicke(n: int, k: int, s: int) -> ReducedSymmetricState:
    """Diagonal reduction of ``|n,k>``: hypergeometric weights ``C(s,l) C(n-s,k-l) / C(n,k)``."""
    if not 0 <= k <= n:
        raise ValidationError(f"k = {k} outside 0..{n}")
    _check_split(n, s)
    w = np.zeros(s + 1)
    for l in range(s + 1):
        if 0 <= k - l <= n - s:
            w[l] = _sqrt_ratio(n, s, l, k - l) ** 2
    return ReducedSymmetricState(s, np.diag(w / w.sum()))


_SYM_EMBED = np.array(
    [[1, 0, 0], [0, 1 / math.sqrt(2), 0], [0, 1 / math.sqrt(2), 0], [0, 0, 1]], dtype=complex
)


def embed_two_qubit(rho2) -> np.ndarray:
    """Map a 3x3 Dicke-basis state onto ``C^2 x C^2``."""
    m = as_matrix(rho2)
    if m.shape != (3, 3):
        raise ValidationError("expected a two-qubit symmetric state (3x3)")
    return _SYM_EMBED @ m @ _SYM_EMBED.conj().T


def partial_transpose(rho4) -> np.ndarray:
    """Transpose the second qubit of a two-qubit operator."""
    return np.asarray(rho4).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def negativity_two_qubit(rho) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    if isinstance(rho, ReducedSymmetricState):
        if rho.s != 2:
            raise ValidationError("negativity is implemented for two qubits only")
        full = embed_two_qubit(rho.matrix)
    else:
        m = as_matrix(rho)
        if m.shape == (3, 3):
            full = embed_two_qubit(m)
        elif m.shape == (4, 4):
            full = m
        else:
            raise ValidationError(f"not a two-qubit state: shape {m.shape}")
    ev = np.linalg.eigvalsh(hermitize(partial_transpose(full)))
    neg = ev[ev < -1e-12]
    return float(-neg.sum()) if neg.size else 0.0


def w_state_negativity(n: int) -> float:
    """Two-qubit negativity of ``|n, 1>``: ``(2 - n + sqrt(8 - 4n + n^2)) / (2n)``."""
    return (2 - n + math.sqrt(8 - 4 * n + n * n)) / (2 * n)


def half_dicke_negativity(n: int) -> float:
    """Two-qubit negativity of ``|n, n/2>``: ``1 / (2n - 2)``."""
    return 1.0 / (2 * n - 2)


def dicke_negativity_approx(n: int, k: int, flipped_sign: bool = False) -> float:
    """Large-``n`` two-qubit negativity of ``|n,k>``: ``k(n-k) / (n [n^2 + 2k(k-n)])``.

    ``flipped_sign=True`` flips the sign inside the bracket, ``n^2 - 2k(k-n)``; that
    variant is off by a factor three at ``k = n/2``.
    """
    sign = -1 if flipped_sign else 1
    return k * (n - k) / (n * (n * n + sign * 2 * k * (k - n)))


def negativity_dicke(n: int, k: int) -> float:
    return negativity_two_qubit(reduced_dicke(n, k, 2))


def negativity_squeezed(n: int, mu: float) -> float:
    return negativity_two_qubit(reduced_squeezed_closed_form(n, mu, 2))
