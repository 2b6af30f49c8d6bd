"""Explicit unitary-reduction machine for a feasible family.

Space layout is ``A (qubit) x B (qubit) x P (probe, n + 1 levels)`` with the
probe as the fastest-varying index, so a basis index is
``(2 * a + b) * (n + 1) + p``.

Each input ``X_i = psi_i x blank x P_0`` is sent to

    Y_i = sqrt(g_i) theta_i x sigma_i x P_0 + sum_j C[i, j] e_j x P_{j+1}

with the failure states ``e_j`` fixed to the first n computational basis
states of AB. Because the failure branches are orthonormal,
``<Y_i|Y_j> = sqrt(g_i g_j) <t_i|t_j> + sum_k conj(C[i, k]) C[j, k]``, so ``C``
is chosen with ``conj(C) @ C.T`` equal to the residual, i.e.
``C = conj(sqrt(R))`` and ``C @ C^dagger == R.T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GramMismatch, IndexOutOfRange, Infeasible, RankDeficient
from .feasibility import ProductMode, as_gammas, feasible, residual
from .gram import build_triple
from .numerics import PSD_TOL, gram, max_abs, min_eigenvalue, orthonormal_extension, psd_sqrt_factor
from .states import BlochAngles, StateFamily, basis_ket, blank_ancilla, ket_input, ket_sigma, ket_theta, tensor

DIM_A = 2
DIM_B = 2


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SplittingMachine:
    family: StateFamily
    gammas: np.ndarray
    mode: ProductMode
    C: np.ndarray
    U: np.ndarray

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def dim_A(self) -> int:
        return DIM_A

    @property
    def dim_B(self) -> int:
        return DIM_B

    @property
    def dim_P(self) -> int:
        return self.n + 1

    @property
    def dim(self) -> int:
        return DIM_A * DIM_B * self.dim_P

    def failure_states(self) -> list[np.ndarray]:
        return failure_states(self.n)

    def inputs(self) -> list[np.ndarray]:
        return [build_input_vector(self.n, a) for a in self.family]

    def outputs(self) -> list[np.ndarray]:
        phis = self.failure_states()
        return [build_output_vector(self.family, i, self.gammas, self.C, phis) for i in range(self.n)]


def probe_ket(n: int, k: int) -> np.ndarray:
    return basis_ket(n + 1, k)


def failure_states(n: int) -> list[np.ndarray]:
    if n > DIM_A * DIM_B:
        raise ValueError(f"only {DIM_A * DIM_B} orthonormal failure states fit in AB, need {n}")
    return [basis_ket(DIM_A * DIM_B, j) for j in range(n)]


def target_ket(a: BlochAngles) -> np.ndarray:
    return tensor(ket_theta(a.theta), ket_sigma(a.phi))


def build_input_vector(n: int, a) -> np.ndarray:
    a = a if isinstance(a, BlochAngles) else BlochAngles(*a)
    return tensor(tensor(ket_input(a), blank_ancilla()), probe_ket(n, 0))


def build_output_vector(family: StateFamily, i: int, gammas, C, phis) -> np.ndarray:
    n = family.n
    if not 0 <= i < n:
        raise IndexOutOfRange(f"state index {i} outside 0..{n - 1}")
    C = np.asarray(C, dtype=complex)
    out = np.sqrt(float(gammas[i])) * tensor(target_ket(family[i]), probe_ket(n, 0))
    for j in range(n):
        out = out + C[i, j] * tensor(phis[j], probe_ket(n, j + 1))
    return out


def failure_amplitudes(family: StateFamily, gammas, mode=ProductMode.TENSOR, tol: float = PSD_TOL) -> np.ndarray:
    """``C`` with ``conj(C) @ C.T`` equal to the failure residual."""
    R = residual(build_triple(family), gammas, mode)
    return psd_sqrt_factor(R, tol).conj()


def _assemble_unitary(X: list[np.ndarray], Y: list[np.ndarray], tol: float) -> np.ndarray:
    bx, cx, rx = orthonormal_extension(X, tol)
    by, cy, ry = orthonormal_extension(Y, tol)
    if rx != len(X) or ry != len(Y):
        raise RankDeficient(f"orthonormalization ranks {rx} and {ry} for {len(X)} states")
    Bx = np.stack(bx, axis=1)
    By = np.stack(by, axis=1)
    # Gram-Schmidt coefficients depend only on the Gram matrix; matching Grams
    # give matching coefficients, so U = By Bx^dagger sends X_i to Y_i.
    return By @ Bx.conj().T


def construct_machine(family: StateFamily, gammas, mode=ProductMode.TENSOR, tol: float = PSD_TOL) -> SplittingMachine:
    mode = ProductMode.parse(mode)
    triple = build_triple(family)
    g = as_gammas(triple, gammas)
    if min_eigenvalue(triple.D, tol) <= tol:
        raise RankDeficient("input states are linearly dependent")
    if not feasible(triple, g, mode, tol):
        raise Infeasible(f"gammas {g.tolist()} are not admissible in {mode.value} mode")

    C = failure_amplitudes(family, g, mode, tol)
    n = family.n
    phis = failure_states(n)
    X = [build_input_vector(n, a) for a in family]
    Y = [build_output_vector(family, i, g, C, phis) for i in range(n)]
    mismatch = max_abs(gram(X) - gram(Y))
    if mismatch > tol:
        raise GramMismatch(
            f"input and output Gram matrices differ by {mismatch:.3e} in {mode.value} mode"
        )
    U = _assemble_unitary(X, Y, 1e-10)
    g_frozen = g.copy()
    g_frozen.setflags(write=False)
    return SplittingMachine(family=family, gammas=g_frozen, mode=mode, C=_frozen(C), U=_frozen(U))


@dataclass(frozen=True)
class MachineCheck:
    unitarity_defect: float
    action_defects: list[float]
    gram_defect: float

    def ok(self, tol: float) -> bool:
        return (
            self.unitarity_defect <= tol
            and max(self.action_defects, default=0.0) <= tol
            and self.gram_defect <= tol
        )


def verify_machine(m: SplittingMachine) -> MachineCheck:
    """Recompute unitarity, action and Gram-match defects from scratch."""
    U = np.asarray(m.U)
    unitarity = max_abs(U.conj().T @ U - np.eye(U.shape[0]))
    X, Y = m.inputs(), m.outputs()
    actions = [float(np.linalg.norm(U @ x - y)) for x, y in zip(X, Y)]
    return MachineCheck(unitarity, actions, max_abs(gram(X) - gram(Y)))
