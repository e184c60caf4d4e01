"""Coherence and entanglement quantifiers. Entropies are in bits."""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from . import tolerances
from .errors import InvalidInputError, NumericalError
from .linalg import eigvalsh, hermitian_eig, singular_values, trace_norm
from .states import as_density, partial_trace, partial_transpose

# sigma_y (x) sigma_y is real: the anti-diagonal (-1, 1, 1, -1)
_YY = np.array(
    [[0, 0, 0, -1],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [-1, 0, 0, 0]],
    dtype=np.complex128,
)


class Measure(str, enum.Enum):
    L1_COHERENCE = "L1Coherence"
    REL_ENT_COHERENCE = "RelEntCoherence"
    VON_NEUMANN = "VonNeumann"
    NEGATIVITY = "Negativity"
    CONCURRENCE = "Concurrence"
    ENT_ENTROPY = "EntEntropy"


class MeasureValue(NamedTuple):
    name: Measure
    value: float
    dim: int = 4

    def within_bounds(self, tol: float | None = None) -> bool:
        """Check the range every measure must respect (d - 1, log2 d, or 1 for two qubits)."""
        tol = tolerances.get().state if tol is None else tol
        if self.value < -tol:
            return False
        if self.name is Measure.L1_COHERENCE:
            upper = self.dim - 1
        elif self.name in (Measure.NEGATIVITY, Measure.CONCURRENCE):
            upper = 1.0
        elif self.name is Measure.ENT_ENTROPY:
            upper = math.log2(math.isqrt(self.dim))
        else:
            upper = math.log2(self.dim)
        return self.value <= upper + tol


def l1_coherence(rho) -> float:
    """Sum of moduli of the off-diagonal entries."""
    m = as_density(rho).mat
    return float(np.sum(np.abs(m)) - np.sum(np.abs(np.diag(m))))


def _clip_spectrum(evals: np.ndarray) -> np.ndarray:
    tol = tolerances.get().eig_clip
    lo = float(evals.min())
    if lo < -tol:
        raise NumericalError(f"eigenvalue {lo:.3e} below -{tol:.0e}; not a valid state")
    return np.clip(evals, 0.0, None)


def shannon_entropy(probs) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 0.0]
    h = float(-np.sum(p * np.log2(p)))
    return h if h > 0.0 else 0.0


def von_neumann_entropy(rho) -> float:
    """-Tr(rho log2 rho) from the Jacobi spectrum, with 0 log 0 = 0."""
    evals = _clip_spectrum(eigvalsh(as_density(rho).mat))
    return shannon_entropy(evals)


def relative_entropy_coherence(rho) -> float:
    """S(diag rho) - S(rho)."""
    rho = as_density(rho)
    diag = np.clip(np.diag(rho.mat).real, 0.0, None)
    return shannon_entropy(diag) - von_neumann_entropy(rho)


def binary_entropy(x: float) -> float:
    if not (math.isfinite(x) and 0.0 <= x <= 1.0):
        raise InvalidInputError(f"binary_entropy argument must lie in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def negativity(rho) -> float:
    """||rho^{T_A}||_1 - 1, so a maximally entangled pair scores 1."""
    rho = as_density(rho)
    if rho.dim != 4:
        raise InvalidInputError("negativity is defined here for two-qubit states only")
    value = trace_norm(partial_transpose(rho, "A")) - 1.0
    # Snap round-off on PPT states to an exact zero.
    if abs(value) <= tolerances.get().negativity_floor:
        return 0.0
    return value


def concurrence(rho) -> float:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the singular values of T = W^T (Y (x) Y) W for any factor
    rho = W W^dagger, which coincide with the square roots of the spectrum of
    rho (Y (x) Y) rho* (Y (x) Y). Taking them from T directly avoids square
    roots of round-off sized eigenvalues.
    """
    rho = as_density(rho)
    if rho.dim != 4:
        raise InvalidInputError("concurrence is defined for two-qubit states only")
    spec = hermitian_eig(rho.mat)
    w = spec.eigenvectors * np.sqrt(_clip_spectrum(spec.eigenvalues))
    sv = singular_values(w.T @ _YY @ w)
    return max(0.0, float(sv[0] - sv[1] - sv[2] - sv[3]))


def entanglement_entropy(rho) -> float:
    """Von Neumann entropy of the reduced state of A; valid for pure global states only."""
    rho = as_density(rho)
    if rho.dim != 4:
        raise InvalidInputError("entanglement_entropy needs a two-qubit state")
    m = rho.mat
    impurity = float(np.max(np.abs(m @ m - m)))
    if impurity > tolerances.get().purity:
        raise InvalidInputError(
            f"entanglement entropy is only a measure for pure states (|rho^2 - rho| = {impurity:.3e})"
        )
    return von_neumann_entropy(partial_trace(rho, "A"))

