"""Dense complex linear algebra used throughout the toolkit.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
Every function returns fresh arrays and never mutates its arguments.
Hermitian eigenproblems are solved with a cyclic complex Jacobi method,
which is plenty for the n <= 16 matrices that occur here.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DimMismatch, NonSquare, NotHermitian, NotPSD

PSD_TOL = 1e-9
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=complex)
    if A.ndim != 2:
        raise DimMismatch(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def as_vector(v) -> np.ndarray:
    x = np.array(v, dtype=complex)
    if x.ndim != 1:
        raise DimMismatch(f"expected a 1-d array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def _require_square(A: np.ndarray) -> None:
    if A.shape[0] != A.shape[1]:
        raise NonSquare(f"matrix is {A.shape[0]}x{A.shape[1]}")


def adjoint(M) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(M).conj().T.copy()


def hermiticity_defect(M) -> float:
    """Largest entrywise gap ``|M[i,j] - conj(M[j,i])|``; zero iff M is Hermitian."""
    A = as_matrix(M)
    _require_square(A)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(A - A.conj().T)))


def max_abs(M) -> float:
    A = np.asarray(M)
    return float(np.max(np.abs(A))) if A.size else 0.0


def _off_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _jacobi_eigh(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = A.shape[0]
    A = A.copy()
    V = np.eye(n, dtype=complex)
    if n < 2:
        return A.diagonal().real.copy(), V
    # Stop on absolute off-diagonal mass, scaled for matrices with large entries.
    stop = JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(A)))
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(A) < stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                # Phase rotation makes A[p, q] real and positive, then a real
                # Jacobi rotation annihilates it.
                phase = apq / r
                app, aqq = A[p, p].real, A[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                W = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ W
                A[idx, :] = W.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ W
    else:
        if _off_norm(A) >= stop:
            raise ConvergenceError("Jacobi sweeps did not converge")
    w = A.diagonal().real
    order = np.argsort(w, kind="stable")
    return w[order].copy(), V[:, order].copy()


def eigh_hermitian(M, tol: float = PSD_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix."""
    A = as_matrix(M)
    _require_square(A)
    defect = hermiticity_defect(A)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    # Symmetrize so that round-off asymmetry does not leak into the rotations.
    return _jacobi_eigh(0.5 * (A + A.conj().T))


def eigenvalues_hermitian(M, tol: float = PSD_TOL) -> np.ndarray:
    return eigh_hermitian(M, tol)[0]


def min_eigenvalue(M, tol: float = PSD_TOL) -> float:
    w = eigenvalues_hermitian(M, tol)
    return float(w[0]) if w.size else 0.0


def is_psd(M, tol: float = PSD_TOL) -> bool:
    A = as_matrix(M)
    _require_square(A)
    if hermiticity_defect(A) > tol:
        return False
    return min_eigenvalue(A, tol) >= -tol


def psd_sqrt_factor(M, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root ``C`` with ``C @ C^dagger == M``.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative
    raises :class:`NotPSD`.
    """
    A = as_matrix(M)
    _require_square(A)
    if not is_psd(A, tol):
        raise NotPSD("matrix is not positive semidefinite within tolerance")
    w, V = eigh_hermitian(A, tol)
    root = np.sqrt(np.clip(w, 0.0, None))
    C = (V * root) @ V.conj().T
    return 0.5 * (C + C.conj().T)


def gram(vectors: Sequence) -> np.ndarray:
    """Matrix of inner products ``<v_i|v_j>``, conjugate-linear in the first slot."""
    if len(vectors) == 0:
        raise DimMismatch("gram of an empty list")
    vs = [as_vector(v) for v in vectors]
    dims = {v.shape[0] for v in vs}
    if len(dims) != 1:
        raise DimMismatch(f"vectors have differing dimensions {sorted(dims)}")
    X = np.stack(vs)
    return X.conj() @ X.T


def orthonormal_extension(
    vectors: Sequence, tol: float = 1e-10
) -> tuple[list[np.ndarray], np.ndarray, int]:
    """Gram-Schmidt the inputs, then complete to a full orthonormal basis.

    Returns ``(basis, coeffs, rank)``. ``basis[:rank]`` spans the inputs and
    ``vectors[i] == sum_k coeffs[k, i] * basis[k]``; ``coeffs`` is upper
    triangular in the order the independent inputs were accepted. Inputs
    whose residual norm falls below ``tol`` are treated as dependent. The
    completion sweeps the computational basis in index order, so the result
    is deterministic.
    """
    vs = [as_vector(v) for v in vectors]
    if not vs:
        raise DimMismatch("orthonormal_extension needs at least one vector")
    d = vs[0].shape[0]
    if any(v.shape[0] != d for v in vs):
        raise DimMismatch("vectors have differing dimensions")
    if len(vs) > d:
        raise DimMismatch(f"{len(vs)} vectors cannot be extended inside dimension {d}")

    basis: list[np.ndarray] = []
    coeffs = np.zeros((d, len(vs)), dtype=complex)

    def project_out(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # Two passes of modified Gram-Schmidt keep orthogonality near eps.
        r = np.zeros(len(basis), dtype=complex)
        for _ in range(2):
            for k, b in enumerate(basis):
                h = np.vdot(b, x)
                r[k] += h
                x = x - h * b
        return x, r

    for i, v in enumerate(vs):
        resid, r = project_out(v.copy())
        coeffs[: len(basis), i] = r
        norm = float(np.linalg.norm(resid))
        if norm >= tol:
            coeffs[len(basis), i] = norm
            basis.append(resid / norm)
    rank = len(basis)

    for j in range(d):
        if len(basis) == d:
            break
        e = np.zeros(d, dtype=complex)
        e[j] = 1.0
        resid, _ = project_out(e)
        norm = float(np.linalg.norm(resid))
        if norm > 0.5 / np.sqrt(d):
            basis.append(resid / norm)
    return basis, coeffs, rank
