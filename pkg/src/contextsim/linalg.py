"""Dense complex matrix arithmetic and spectral decomposition for dimensions up to 16.

All operators in this package are plain ``numpy.ndarray`` values of dtype
complex128 in row-major order; :func:`as_matrix` is the validating
constructor. Operations are pure functions and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Absolute tolerances, shared package-wide. All comparisons are absolute.
ATOL = 1e-10          # hermiticity, unitarity, normalization, trace checks
ATOL_DICHOTOMIC = 1e-9  # O^2 = I and spectral-reconstruction checks
ATOL_STATE_PSD = 1e-9   # eigenvalue floor accepted for density matrices
PSD_CLAMP = 1e-10       # eigenvalue clamp window for matrix square roots
PRUNE_EPS = 1e-12       # zero-probability branch pruning

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
for _p in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z):
    _p.setflags(write=False)


def as_matrix(entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Validating constructor: a finite complex matrix in row-major order.

    ``entries`` may be a nested sequence, a flat sequence together with
    explicit ``rows``/``cols``, or an existing array. Non-finite entries
    (NaN/Inf) are rejected.
    """
    a = np.asarray(entries, dtype=complex)
    if rows is not None or cols is not None:
        if rows is None or cols is None:
            raise ValueError("rows and cols must be given together")
        if rows <= 0 or cols <= 0:
            raise ValueError("rows and cols must be positive")
        if a.size != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {a.size}")
        a = a.reshape(rows, cols)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if a.shape[0] == 0 or a.shape[1] == 0:
        raise ValueError("matrix must be non-empty")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return np.ascontiguousarray(a)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the left factor is the more significant one."""
    a, b = as_matrix(a), as_matrix(b)
    return np.kron(a, b)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a: np.ndarray) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got {a.shape}")
    return complex(np.trace(a))


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    return complex(c) * as_matrix(a)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} + {b.shape}")
    return a + b


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b + b @ a`` for square matrices of equal dimension."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"anticommutator requires equal square shapes, got {a.shape}, {b.shape}")
    return a @ b + b @ a


def is_hermitian(a: np.ndarray, atol: float = ATOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T)) <= atol


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds unit-norm
    column vectors in matching order, each phase-fixed so its first nonzero
    component is real positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


def _phase_fixed(v: np.ndarray) -> np.ndarray:
    for x in v:
        if abs(x) > 1e-12:
            return v * (x.conjugate() / abs(x))
    return v


def hermitian_eigen(a: np.ndarray, atol: float = ATOL) -> Spectrum:
    """Spectral decomposition of a Hermitian matrix with deterministic ordering.

    Eigenvalues ascend; ties are broken by lexicographic comparison of the
    phase-fixed eigenvector entries (real part before imaginary part).
    """
    a = as_matrix(a)
    if not is_hermitian(a, atol):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    cols = [_phase_fixed(v[:, k]) for k in range(v.shape[1])]
    keys = [
        (w[k],) + tuple(x for c in cols[k] for x in (c.real, c.imag))
        for k in range(len(cols))
    ]
    order = sorted(range(len(cols)), key=lambda k: keys[k])
    return Spectrum(
        eigenvalues=np.array([w[k] for k in order]),
        eigenvectors=np.column_stack([cols[k] for k in order]),
    )


def matrix_sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in [-PSD_CLAMP, 0) are clamped to 0."""
    spec = hermitian_eigen(a)
    w = spec.eigenvalues
    if w[0] < -PSD_CLAMP:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    s = spec.eigenvectors @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ spec.eigenvectors.conj().T
    return (s + s.conj().T) / 2
