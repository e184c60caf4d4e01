"""Gravitational phases of two superposed masses and the diagonal unitary they induce."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .errors import InvalidInputError
from .linalg import as_matrix, is_unitary
from .states import DensityMatrix, as_density

# CODATA 2018
G_NEWTON = 6.67430e-11  # m^3 kg^-1 s^-2
H_PLANCK = 6.62607015e-34  # J s


@dataclass(frozen=True)
class PhysicalConfig:
    """Masses (kg), centre separation ``d`` and branch offset ``delta_x`` (m), time ``tau`` (s).

    ``h`` enters the phases as written; pass the reduced constant to work in
    hbar units instead. ``tau = 0`` is accepted and gives vanishing phases.
    """

    m_A: float
    m_B: float
    d: float
    delta_x: float
    tau: float
    G: float = G_NEWTON
    h: float = H_PLANCK

    def __post_init__(self):
        for name in ("m_A", "m_B", "d", "delta_x", "tau", "G", "h"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidInputError(f"{name} must be finite, got {v!r}")
            if v < 0 or (v == 0 and name != "tau"):
                raise InvalidInputError(f"{name} must be positive, got {v!r}")
        if self.d <= self.delta_x:
            raise InvalidInputError(
                f"d must exceed delta_x (closest approach d - delta_x = {self.d - self.delta_x!r})"
            )


@dataclass(frozen=True)
class PhaseSet:
    phi: float
    phi_LR: float
    phi_RL: float
    dphi_LR: float = field(init=False)
    dphi_RL: float = field(init=False)

    @classmethod
    def from_differences(cls, dphi_LR: float, dphi_RL: float, phi: float = 0.0) -> "PhaseSet":
        if phi == 0.0:
            return cls(0.0, float(dphi_LR), float(dphi_RL))
        return cls(phi, phi + dphi_LR, phi + dphi_RL)

    def __post_init__(self):
        for name in ("phi", "phi_LR", "phi_RL"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        object.__setattr__(self, "dphi_LR", self.phi_LR - self.phi)
        object.__setattr__(self, "dphi_RL", self.phi_RL - self.phi)

    @property
    def total(self) -> float:
        """Accumulated phase dphi_LR + dphi_RL that controls entanglement."""
        return self.dphi_LR + self.dphi_RL

    def relative(self) -> "PhaseSet":
        """Same differences in the gauge phi = 0."""
        return PhaseSet(0.0, self.dphi_LR, self.dphi_RL)


def compute_phases(cfg: PhysicalConfig) -> PhaseSet:
    """phi = k/d, phi_RL = k/(d - dx), phi_LR = k/(d + dx) with k = G m_A m_B tau / h."""
    k = cfg.G * cfg.m_A * cfg.m_B * cfg.tau / cfg.h
    return PhaseSet(
        phi=k / cfg.d,
        phi_LR=k / (cfg.d + cfg.delta_x),
        phi_RL=k / (cfg.d - cfg.delta_x),
    )


@dataclass(frozen=True)
class GravUnitary:
    """U = sum_ij exp(i phi_ij) |ij><ij| stored as its four diagonal phases (LL, LR, RL, RR)."""

    diagonal_phases: tuple[float, float, float, float]

    def diagonal(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.diagonal_phases, dtype=float))

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal())


def build_unitary(phases: PhaseSet) -> GravUnitary:
    # LL and RR sit at the mean separation d and share the phase phi.
    return GravUnitary((phases.phi, phases.phi_LR, phases.phi_RL, phases.phi))


def evolve(rho0, u) -> DensityMatrix:
    """Return U rho0 U^dagger for a GravUnitary or any 4x4 unitary matrix."""
    rho0 = as_density(rho0)
    if isinstance(u, GravUnitary):
        umat = u.matrix()
    else:
        umat = as_matrix(u, name="unitary")
        if not is_unitary(umat, tolerances.get().unitary_input):
            raise InvalidInputError("evolution operator is not unitary")
    if umat.shape[1] != rho0.dim:
        raise InvalidInputError(f"unitary of shape {umat.shape} cannot act on a {rho0.dim}-dim state")
    out = umat @ rho0.mat @ umat.conj().T
    return DensityMatrix(out, check_psd=False)


def evolve_pure(amplitudes, u: GravUnitary) -> np.ndarray:
    """Apply U to a 4-component state vector."""
    v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if v.size != 4:
        raise InvalidInputError("state vector must have 4 components")
    return u.diagonal() * v


def is_incoherent_unitary(u) -> bool:
    """True if ``u`` has exactly one unit-modulus entry in every row and column.

    Such a unitary is a phase-decorated permutation of the basis labels and
    maps diagonal states to diagonal states.
    """
    if isinstance(u, GravUnitary):
        u = u.matrix()
    m = as_matrix(u, name="unitary")
    tol = tolerances.get()
    if m.shape[0] != m.shape[1] or not is_unitary(m, tol.unitary_input):
        raise InvalidInputError("is_incoherent_unitary expects a square unitary matrix")
    mod = np.abs(m)
    nonzero = mod > tol.unit_modulus
    if not (np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1)):
        return False
    return bool(np.all(np.abs(mod[nonzero] - 1.0) <= tol.unit_modulus))
