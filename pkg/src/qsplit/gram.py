"""The three structure matrices of a state family and the independence test.

Entries come from closed forms rather than inner products of constructed
kets; ``numerics.gram`` over the kets is kept as an independent cross-check
in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import PSD_TOL, min_eigenvalue
from .states import StateFamily


@dataclass(frozen=True)
class GramTriple:
    """Input overlaps ``D``, theta-target overlaps ``G``, ancilla-target overlaps ``H``."""

    D: np.ndarray
    G: np.ndarray
    H: np.ndarray

    @property
    def n(self) -> int:
        return self.D.shape[0]


def _phase_diff(family: StateFamily) -> np.ndarray:
    # [i, j] -> exp(i (phi_j - phi_i))
    phi = family.phis
    return np.exp(1j * (phi[None, :] - phi[:, None]))


def build_D(family: StateFamily) -> np.ndarray:
    half = family.thetas / 2
    c, s = np.cos(half), np.sin(half)
    return np.outer(c, c) + np.outer(s, s) * _phase_diff(family)


def build_G(family: StateFamily) -> np.ndarray:
    half = family.thetas / 2
    return np.cos(half[:, None] - half[None, :]).astype(complex)


def build_H(family: StateFamily) -> np.ndarray:
    return 0.5 * (1.0 + _phase_diff(family))


def build_triple(family: StateFamily) -> GramTriple:
    return GramTriple(build_D(family), build_G(family), build_H(family))


def linear_independence(family: StateFamily, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Independent iff the input overlap matrix is positive definite past ``tol``."""
    lam = min_eigenvalue(build_D(family), tol)
    return lam > tol, lam
