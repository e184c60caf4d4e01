"""Pure states, density matrices and the structural maps on two orbital qubits.

Each mass is a qubit with basis (L, R); the joint basis is (LL, LR, RL, RR)
with mass A as the high-order index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import tolerances
from .errors import InvalidInputError
from .linalg import as_matrix, eigvalsh, hermiticity_residual

QUBIT_BASIS = ("L", "R")
PAIR_BASIS = ("LL", "LR", "RL", "RR")


def _basis_for(dim: int) -> tuple[str, ...]:
    if dim == 2:
        return QUBIT_BASIS
    if dim == 4:
        return PAIR_BASIS
    return tuple(str(i) for i in range(dim))


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    label: tuple[str, ...] = ()

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size == 0 or not np.all(np.isfinite(amps)):
            raise InvalidInputError("amplitudes must be a non-empty finite vector")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        tol = tolerances.get().state
        if abs(norm2 - 1.0) > tol:
            raise InvalidInputError(f"state is not normalized (|psi|^2 = {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)
        if not self.label:
            object.__setattr__(self, "label", _basis_for(amps.size))
        elif len(self.label) != amps.size:
            raise InvalidInputError("label length must match the number of amplitudes")

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix.

    The eigenvalue check costs an eigendecomposition; maps that provably keep
    a valid state valid construct their results with ``check_psd=False``.
    """

    mat: np.ndarray
    check_psd: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        m = as_matrix(self.mat, name="density matrix")
        if m.shape[0] != m.shape[1]:
            raise InvalidInputError(f"density matrix must be square, got {m.shape}")
        tol = tolerances.get().state
        res = hermiticity_residual(m)
        if res > tol:
            raise InvalidInputError(f"density matrix is not Hermitian (residual {res:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > tol:
            raise InvalidInputError(f"density matrix trace is {tr.real!r}, not 1")
        if self.check_psd:
            lo = float(eigvalsh(m)[-1])
            if lo < -tol:
                raise InvalidInputError(f"density matrix has negative eigenvalue {lo:.3e}")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def as_density(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(rho)


@dataclass(frozen=True)
class ProductStateParams:
    """Weights of |L> in the initial states of masses A and B."""

    p_A: float = 0.5
    p_B: float = 0.5

    def __post_init__(self):
        for name in ("p_A", "p_B"):
            p = getattr(self, name)
            if not (isinstance(p, (int, float, np.floating)) and math.isfinite(p) and 0.0 <= p <= 1.0):
                raise InvalidInputError(f"{name} must lie in [0, 1], got {p!r}")


class AmplitudeSet(NamedTuple):
    M_LL: float
    M_LR: float
    M_RL: float
    M_RR: float


def product_amplitudes(params: ProductStateParams) -> AmplitudeSet:
    pa, pb = params.p_A, params.p_B
    return AmplitudeSet(
        math.sqrt(pa * pb),
        math.sqrt(pa * (1.0 - pb)),
        math.sqrt((1.0 - pa) * pb),
        math.sqrt((1.0 - pa) * (1.0 - pb)),
    )


def build_product_state(params: ProductStateParams) -> PureState:
    """(sqrt(p_A)|L> + sqrt(1-p_A)|R>) (x) (sqrt(p_B)|L> + sqrt(1-p_B)|R>)."""
    if not isinstance(params, ProductStateParams):
        params = ProductStateParams(*params)
    return PureState(np.array(product_amplitudes(params), dtype=np.complex128), PAIR_BASIS)


def pure_to_density(psi: PureState) -> DensityMatrix:
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    v = psi.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), check_psd=False)


def _pair_tensor(rho, what: str) -> np.ndarray:
    m = rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)
    if m.shape != (4, 4):
        raise InvalidInputError(f"{what} needs a 4x4 two-qubit matrix, got {m.shape}")
    # t[iA, iB, jA, jB] = rho[(iA, iB), (jA, jB)]
    return m.reshape(2, 2, 2, 2)


def partial_trace(rho, keep: str = "A") -> DensityMatrix:
    """Reduced state of subsystem ``keep`` ("A" or "B")."""
    t = _pair_tensor(rho, "partial_trace")
    if keep == "A":
        red = np.einsum("ikjk->ij", t)
    elif keep == "B":
        red = np.einsum("kikj->ij", t)
    else:
        raise InvalidInputError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(red, check_psd=False)


def partial_transpose(rho, on: str = "A") -> np.ndarray:
    """Transpose the indices of one subsystem. The result need not be PSD."""
    t = _pair_tensor(rho, "partial_transpose")
    if on == "A":
        out = t.transpose(2, 1, 0, 3)
    elif on == "B":
        out = t.transpose(0, 3, 2, 1)
    else:
        raise InvalidInputError(f"on must be 'A' or 'B', got {on!r}")
    return np.ascontiguousarray(out).reshape(4, 4)


def max_offdiag_modulus(m: np.ndarray) -> float:
    off = np.abs(m - np.diag(np.diag(m)))
    return float(off.max()) if off.size else 0.0


def is_incoherent_state(rho) -> bool:
    """True if ``rho`` is diagonal in the reference basis."""
    rho = as_density(rho)
    return max_offdiag_modulus(rho.mat) <= tolerances.get().state


def is_maximally_coherent(psi: PureState) -> bool:
    """True if every amplitude has modulus 1/sqrt(d)."""
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    target = 1.0 / math.sqrt(psi.dim)
    return bool(np.all(np.abs(np.abs(psi.amplitudes) - target) <= tolerances.get().state))
