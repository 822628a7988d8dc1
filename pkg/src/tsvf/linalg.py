"""Dense complex linear algebra for the small operator matrices used everywhere else.

Everything in scope is a 2x2 or 4x4 complex matrix stored as a row-major
numpy array of complex128.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

ComplexMatrix = np.ndarray

# Qubit basis convention: index 0 = |e> (excited), index 1 = |g> (ground),
# so sigma_z = |e><e| - |g><g| = diag(+1, -1).
sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
sigma_z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
sigma_plus = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |e><g|
sigma_minus = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |g><e|
excited_projector = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
ground_projector = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)

# Ancilla basis for the doubled space: |0> = (1, 0)^T, |1> = (0, 1)^T.
ket0_projector = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
ket1_projector = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def identity(d: int) -> ComplexMatrix:
    return np.eye(d, dtype=complex)


def zeros(d: int) -> ComplexMatrix:
    return np.zeros((d, d), dtype=complex)


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return a.conj().T


def hermitize(a: ComplexMatrix) -> ComplexMatrix:
    """Hermitian part (a + a^dagger) / 2."""
    return 0.5 * (a + a.conj().T)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _require_same_square(a: ComplexMatrix, b: ComplexMatrix, op: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{op}: first operand is not square, shape {a.shape}")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"{op}: second operand is not square, shape {b.shape}")
    if a.shape != b.shape:
        raise ValueError(f"{op}: dimension mismatch {a.shape} vs {b.shape}")


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """a @ b - b @ a."""
    _require_same_square(a, b, "commutator")
    return a @ b - b @ a


def anticommutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """a @ b + b @ a."""
    _require_same_square(a, b, "anticommutator")
    return a @ b + b @ a


def frob_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a))


def frob_distance(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """Frobenius norm of a - b."""
    if a.shape != b.shape:
        raise ValueError(f"frob_distance: dimension mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_hermitian(a: ComplexMatrix, tol: float) -> bool:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"is_hermitian: input is not square, shape {a.shape}")
    return frob_distance(a, a.conj().T) <= tol


def is_psd(a: ComplexMatrix, tol: float) -> bool:
    """Positive semidefinite within tol: all eigenvalues of the Hermitian part >= -tol."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"is_psd: input is not square, shape {a.shape}")
    eigs = np.linalg.eigvalsh(hermitize(a))
    return bool(eigs.min() >= -tol)


def min_eigenvalue(a: ComplexMatrix) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    return float(np.linalg.eigvalsh(hermitize(a)).min())


def matrix_exponential(a: ComplexMatrix) -> ComplexMatrix:
    """exp(a) by scaling-and-squaring (Pade), accurate to ~1e-12 for the sizes in scope."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exponential: input is not square, shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix_exponential: input has non-finite entries")
    out = expm(np.asarray(a, dtype=complex))
    if not np.isfinite(out).all():
        raise ValueError("matrix_exponential: result has non-finite entries")
    return out


def decoder_m(d: int) -> ComplexMatrix:
    """Row decoder (1, 1) x I_d: sums the two block rows of a doubled-space matrix."""
    return kron(np.array([[1.0, 1.0]]), identity(d))


def decoder_n(d: int) -> ComplexMatrix:
    """Column decoder (1, 0)^T x I_d: selects the first block column."""
    return kron(np.array([[1.0], [0.0]]), identity(d))
