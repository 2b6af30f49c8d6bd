"""Existence and maximization of diagonal success-probability matrices.

A diagonal ``Gamma`` is admissible when the failure residual

    R = D - sqrt(Gamma) K sqrt(Gamma)

is Hermitian positive semidefinite, where the kernel ``K`` is either the
literal matrix product ``G @ H`` or the entrywise product ``G * H`` (the
Gram matrix of the tensor-product targets). The set of admissible uniform
``Gamma = g I`` is an interval containing 0, so bisection applies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch
from .gram import GramTriple
from .numerics import PSD_TOL, eigenvalues_hermitian, hermiticity_defect, is_psd, min_eigenvalue

BISECT_WIDTH = 1e-10
BISECT_MAX_ITER = 60
SWEEP_STOP = 1e-9
MAX_SWEEPS = 200


class ProductMode(str, enum.Enum):
    MATRIX = "matrix"
    TENSOR = "tensor"

    @classmethod
    def parse(cls, value) -> "ProductMode":
        if isinstance(value, cls):
            return value
        aliases = {"matrix": cls.MATRIX, "matrix-product": cls.MATRIX,
                   "tensor": cls.TENSOR, "tensor-gram": cls.TENSOR}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown product mode {value!r}") from None


def as_gammas(triple: GramTriple, gammas) -> np.ndarray:
    g = np.asarray(gammas, dtype=float).reshape(-1)
    if g.shape[0] != triple.n:
        raise LengthMismatch(f"{g.shape[0]} gammas for a family of {triple.n}")
    if np.any(g < 0.0) or np.any(g > 1.0):
        raise ValueError("gammas must lie in [0, 1]")
    return g


def kernel(triple: GramTriple, mode=ProductMode.TENSOR) -> np.ndarray:
    mode = ProductMode.parse(mode)
    if mode is ProductMode.MATRIX:
        return triple.G @ triple.H
    return triple.G * triple.H


def residual(triple: GramTriple, gammas, mode=ProductMode.TENSOR) -> np.ndarray:
    """``D[i,j] - sqrt(g_i g_j) K[i,j]``."""
    s = np.sqrt(as_gammas(triple, gammas))
    return triple.D - np.outer(s, s) * kernel(triple, mode)


def reality_defects(triple: GramTriple) -> np.ndarray:
    """``|sum_{j != i} G[i,j] Im H[j,i]|`` per i; these vanish iff diag(G @ H) is real."""
    terms = triple.G.real * triple.H.T.imag
    np.fill_diagonal(terms, 0.0)
    return np.abs(terms.sum(axis=1))


def _independent(triple: GramTriple, tol: float) -> bool:
    return min_eigenvalue(triple.D, tol) > tol


def _admissible(triple: GramTriple, gammas, mode, tol: float) -> bool:
    return is_psd(residual(triple, gammas, mode), tol)


def feasible(triple: GramTriple, gammas, mode=ProductMode.TENSOR, tol: float = PSD_TOL) -> bool:
    if not _independent(triple, tol):
        return False
    return _admissible(triple, gammas, mode, tol)


def _bisect(ok, lo: float, hi: float) -> float:
    """Largest x in [lo, hi] with ok(x), assuming ok(lo) and monotonicity."""
    if ok(hi):
        return hi
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def max_uniform_gamma(triple: GramTriple, mode=ProductMode.TENSOR, tol: float = PSD_TOL) -> float:
    """Largest g in [0, 1] with ``g I`` admissible; 0 when only g = 0 works."""
    if not _independent(triple, tol):
        return 0.0
    # A non-Hermitian kernel makes the residual non-Hermitian for every g > 0;
    # bisecting would only find the round-off slack of the Hermiticity test.
    if hermiticity_defect(kernel(triple, mode)) > tol:
        return 0.0
    n = triple.n
    return _bisect(lambda g: _admissible(triple, np.full(n, g), mode, tol), 0.0, 1.0)


def maximize_gammas(triple: GramTriple, mode=ProductMode.TENSOR, tol: float = PSD_TOL) -> np.ndarray:
    """Coordinate-wise maximum of ``sum(gammas)`` subject to admissibility.

    Starts from the best uniform point, which keeps the result invariant
    under relabelings that preserve the family's overlaps, then raises each
    coordinate in turn by bisection until a full sweep gains less than
    ``SWEEP_STOP``. The result is a local maximum, not necessarily global.
    """
    n = triple.n
    g = np.full(n, max_uniform_gamma(triple, mode, tol))
    if not np.any(g > 0.0):
        return np.zeros(n)
    for _ in range(MAX_SWEEPS):
        before = g.sum()
        for i in range(n):
            def ok(x, i=i):
                trial = g.copy()
                trial[i] = x
                return _admissible(triple, trial, mode, tol)

            g[i] = _bisect(ok, g[i], 1.0)
        if g.sum() - before < SWEEP_STOP:
            break
    return g


@dataclass
class FeasibilityReport:
    mode: ProductMode
    tol: float
    gammas: list[float]
    independent: bool
    min_eig_D: float
    kernel_hermiticity_defect: float
    residual_hermiticity_defect: float
    residual_min_eig: float
    reality_defects: list[float]
    paper_L_diagonal: list[complex]
    paper_condition_i: list[bool]
    paper_condition_ii_min_eig: float
    feasible: bool
    notes: list[str] = field(default_factory=list)


def paper_L(triple: GramTriple, gammas) -> np.ndarray:
    """``D - sqrt(Gamma) G H sqrt(Gamma)`` with the literal matrix product."""
    return residual(triple, gammas, ProductMode.MATRIX)


def paper_conditions_report(
    triple: GramTriple, gammas, mode=ProductMode.TENSOR, tol: float = PSD_TOL
) -> FeasibilityReport:
    """Evaluate the restricted-class conditions alongside the feasibility verdict.

    Condition (i) is ``L_ii > 0`` with ``L = D - sqrt(Gamma) G H sqrt(Gamma)`` taken
    literally; a diagonal entry with imaginary part above ``tol`` fails it.
    Condition (ii) is reported as the smallest eigenvalue of the Hermitian
    part ``(L + L^dagger) / 2``. ``reality_defects`` here are the imaginary
    parts of ``L_ii`` at the given gammas, i.e. ``g_i`` times the
    gamma-free defects.
    """
    mode = ProductMode.parse(mode)
    g = as_gammas(triple, gammas)
    lam_D = min_eigenvalue(triple.D, tol)
    independent = lam_D > tol

    K = kernel(triple, mode)
    R = residual(triple, g, mode)
    r_defect = hermiticity_defect(R)
    R_herm = 0.5 * (R + R.conj().T)
    r_min = float(eigenvalues_hermitian(R_herm, np.inf)[0])

    L = paper_L(triple, g)
    diag = np.diag(L)
    cond_i = [bool(abs(z.imag) <= tol and z.real > 0.0) for z in diag]
    L_herm = 0.5 * (L + L.conj().T)
    cond_ii = float(eigenvalues_hermitian(L_herm, np.inf)[0])

    ok = independent and r_defect <= tol and r_min >= -tol
    notes = []
    if not independent:
        notes.append("input states are linearly dependent")
    if r_defect > tol:
        notes.append("failure residual is not Hermitian")
    elif r_min < -tol:
        notes.append("failure residual has a negative eigenvalue")
    return FeasibilityReport(
        mode=mode,
        tol=tol,
        gammas=[float(x) for x in g],
        independent=independent,
        min_eig_D=lam_D,
        kernel_hermiticity_defect=hermiticity_defect(K),
        residual_hermiticity_defect=r_defect,
        residual_min_eig=r_min,
        reality_defects=[float(abs(z.imag)) for z in diag],
        paper_L_diagonal=[complex(z) for z in diag],
        paper_condition_i=cond_i,
        paper_condition_ii_min_eig=cond_ii,
        feasible=ok,
        notes=notes,
    )
