"""Dense complex matrix helpers and a cyclic Jacobi Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The helpers here
add the dimension and finiteness checks the rest of the package relies on.
Composite indices follow the convention ``i_A * dim_B + i_B``, so the two-mass
basis order is LL, LR, RL, RR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances
from .errors import InvalidInputError, NumericalError


def as_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array (a copy is not guaranteed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise InvalidInputError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, name="a")
    b = as_matrix(b, name="b")
    if a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product; the first factor carries the high-order index."""
    return np.kron(as_matrix(a, name="a"), as_matrix(b, name="b"))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def hermiticity_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def _require_hermitian(a, tol: float) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    res = hermiticity_residual(m)
    if res > tol:
        raise InvalidInputError(f"matrix is not Hermitian (residual {res:.3e} > {tol:.1e})")
    return m


@dataclass(frozen=True)
class Spectrum:
    """Eigenpairs of a Hermitian matrix, eigenvalues in descending order.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _jacobi(a: np.ndarray, offdiag_tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    # Works on Python lists of complex: for n <= 8 this beats per-rotation numpy calls.
    n = a.shape[0]
    A = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    # Symmetrize exactly so the rotations see a truly Hermitian matrix.
    for i in range(n):
        A[i][i] = complex(A[i][i].real, 0.0)
        for j in range(i + 1, n):
            z = 0.5 * (A[i][j] + A[j][i].conjugate())
            A[i][j] = z
            A[j][i] = z.conjugate()
    V = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    scale = max(1.0, math.sqrt(sum(abs(x) ** 2 for row in A for x in row)))
    threshold = offdiag_tol * scale
    skip = threshold / (4.0 * n)

    for _ in range(max_sweeps + 1):
        off = math.sqrt(2.0 * sum(z.real * z.real + z.imag * z.imag for i in range(n - 1) for z in A[i][i + 1:]))
        if off <= threshold:
            evals = np.array([A[i][i].real for i in range(n)])
            return evals, np.array(V, dtype=np.complex128)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                r = abs(apq)
                if r <= skip:
                    # far below the stopping threshold; rotating would change nothing measurable
                    continue
                ph = apq / r
                app = A[p][p].real
                aqq = A[q][q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phc = ph.conjugate()
                # W = [[c, s], [-s*conj(ph), c*conj(ph)]] acting on columns p, q
                w10 = -s * phc
                w11 = c * phc
                # A stays Hermitian, so rows p and q mirror the updated columns
                for k in range(n):
                    vkp = V[k][p]
                    vkq = V[k][q]
                    V[k][p] = vkp * c + vkq * w10
                    V[k][q] = vkp * s + vkq * w11
                    if k == p or k == q:
                        continue
                    akp = A[k][p]
                    akq = A[k][q]
                    nkp = akp * c + akq * w10
                    nkq = akp * s + akq * w11
                    A[k][p] = nkp
                    A[k][q] = nkq
                    A[p][k] = nkp.conjugate()
                    A[q][k] = nkq.conjugate()
                A[p][q] = 0j
                A[q][p] = 0j
                A[p][p] = complex(app - t * r, 0.0)
                A[q][q] = complex(aqq + t * r, 0.0)
    raise NumericalError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")


def hermitian_eig(a) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Raises InvalidInputError for non-square or non-Hermitian input and
    NumericalError if the sweep cap is reached.
    """
    tol = tolerances.get()
    m = _require_hermitian(a, tol.hermitian_input)
    evals, evecs = _jacobi(m, tol.jacobi_offdiag, tol.jacobi_max_sweeps)
    order = np.argsort(-evals, kind="stable")
    return Spectrum(evals[order], evecs[:, order])


def eigvalsh(a) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix."""
    return hermitian_eig(a).eigenvalues


def singular_values(a) -> np.ndarray:
    """Descending singular values by one-sided (Hestenes) Jacobi on the columns.

    Works on the matrix directly, so small singular values keep absolute
    accuracy near machine epsilon instead of inheriting the square root of a
    round-off eigenvalue of a^dagger a.
    """
    tol = tolerances.get()
    m = as_matrix(a)
    rows, n = m.shape
    cols = [[complex(m[i, j]) for i in range(rows)] for j in range(n)]
    # columns below eps * ||a||_F cannot move any singular value noticeably
    negligible = (tol.jacobi_offdiag * float(np.linalg.norm(m))) ** 2
    for _ in range(tol.jacobi_max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                cp, cq = cols[p], cols[q]
                alpha = sum(x.real * x.real + x.imag * x.imag for x in cp)
                beta = sum(x.real * x.real + x.imag * x.imag for x in cq)
                gamma = sum(x.conjugate() * y for x, y in zip(cp, cq))
                g = abs(gamma)
                if min(alpha, beta) <= negligible or g <= tol.jacobi_offdiag * math.sqrt(alpha) * math.sqrt(beta):
                    continue
                rotated = True
                # rephase column q so the inner product is real, then rotate
                ph = gamma.conjugate() / g
                zeta = (beta - alpha) / (2.0 * g)
                t = 1.0 / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                cq = [y * ph for y in cq]
                cols[p] = [c * x - s * y for x, y in zip(cp, cq)]
                cols[q] = [s * x + c * y for x, y in zip(cp, cq)]
        if not rotated:
            sv = [math.sqrt(sum(x.real * x.real + x.imag * x.imag for x in col)) for col in cols]
            return np.array(sorted(sv, reverse=True))
    raise NumericalError(f"one-sided Jacobi did not converge in {tol.jacobi_max_sweeps} sweeps")


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(eigvalsh(a))))


def is_unitary(u, tol: float) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol
