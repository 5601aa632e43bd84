"""Dense complex linear algebra for small square matrices.

Matrices are plain ``numpy`` arrays of complex dtype.  The only nontrivial
routine is :func:`hermitian_eigenvalues`, which uses a closed form for
``d = 2`` and cyclic complex Jacobi rotations otherwise.
"""

from __future__ import annotations

import math

import numpy as np

HERMITIAN_TOL = 1e-10
MAX_DIM = 8
JACOBI_OFFDIAG_TOL = 1e-13
JACOBI_MAX_SWEEPS = 50


class ValidationError(ValueError):
    """Input violates a documented invariant."""


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite square complex array."""
    arr = m if isinstance(m, np.ndarray) and m.dtype == complex else np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionError(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValidationError("matrix has non-finite entries")
    return arr


def frozen(m) -> np.ndarray:
    """Read-only copy of ``m`` (no copy if it is already read-only)."""
    arr = as_matrix(m)
    if arr.flags.writeable:
        arr = arr.copy()
        arr.setflags(write=False)
    return arr


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m)))


def kronecker(a, b) -> np.ndarray:
    """Tensor product with the first factor's index major."""
    a, b = as_matrix(a), as_matrix(b)
    d = a.shape[0] * b.shape[0]
    if d > MAX_DIM:
        raise DimensionError(f"tensor product dimension {d} exceeds {MAX_DIM}")
    return np.kron(a, b)


def hermiticity_deviation(m) -> float:
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order.

    Raises
    ------
    ValidationError
        If ``m`` deviates from its adjoint by more than ``HERMITIAN_TOL``
        in any entry.
    """
    m = as_matrix(m)
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > HERMITIAN_TOL:
        raise ValidationError(f"matrix is not Hermitian (deviation {dev:.3g})")
    h = 0.5 * (m + m.conj().T)
    if h.shape[0] == 1:
        return np.array([h[0, 0].real])
    if h.shape[0] == 2:
        return _eig2(h)
    return _jacobi_eigenvalues(h)


def _eig2(h: np.ndarray) -> np.ndarray:
    a, d = h[0, 0].real, h[1, 1].real
    b = h[0, 1]
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(b))
    return np.array([mean - radius, mean + radius])


def _jacobi_eigenvalues(h: np.ndarray) -> np.ndarray:
    a = h.copy()
    n = a.shape[0]
    # relative to the matrix scale so large-norm inputs still terminate
    tol = JACOBI_OFFDIAG_TOL * max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(max(0.0, float(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2))))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = complex(apq.real / mag, apq.imag / mag)
                diff = a[q, q].real - a[p, p].real
                if abs(diff) > 1e150 * mag:
                    # theta^2 would overflow; tan(rotation) ~ 1/(2 theta)
                    t = mag / diff
                elif diff == 0.0:
                    t = 1.0
                else:
                    theta = diff / (2.0 * mag)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # rotation J = diag-phase * real Givens, applied as J^H a J
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * phase.conjugate() * col_q
                a[:, q] = s * col_p + c * phase.conjugate() * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * row_p + c * phase * row_q
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).real)
