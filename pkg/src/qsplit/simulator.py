"""State-vector execution of a splitting machine and the linearity witness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import IndexOutOfRange, Infeasible, LengthMismatch, NotPSD, ZeroSuperposition
from .feasibility import ProductMode, as_gammas, kernel
from .gram import build_triple
from .machine import (
    DIM_A,
    DIM_B,
    SplittingMachine,
    build_input_vector,
    build_output_vector,
    failure_amplitudes,
    failure_states,
    probe_ket,
    target_ket,
)
from .numerics import PSD_TOL, gram, max_abs
from .rng import uniforms
from .states import StateFamily, bloch_angles_of, blank_ancilla, fidelity_up_to_phase, ket_input, tensor

_SUCCESS_FLOOR = 1e-12


def probe_sectors(state: np.ndarray, n: int) -> np.ndarray:
    """Reshape a full state into columns indexed by probe level: ``[ab, p]``."""
    return np.asarray(state).reshape(DIM_A * DIM_B, n + 1)


@dataclass(frozen=True)
class SplitOutcome:
    success_prob: float
    post_state: Optional[np.ndarray]
    fidelity_target: float
    branch_probs: list[float]

    @property
    def post_state_defined(self) -> bool:
        return self.post_state is not None


def run_split(m: SplittingMachine, i: int) -> SplitOutcome:
    """Apply U to the i-th input, measure the probe, post-select on P_0."""
    if not 0 <= i < m.n:
        raise IndexOutOfRange(f"state index {i} outside 0..{m.n - 1}")
    out = np.asarray(m.U) @ build_input_vector(m.n, m.family[i])
    sectors = probe_sectors(out, m.n)
    probs = [min(1.0, float(np.vdot(col, col).real)) for col in sectors.T]
    p0 = probs[0]
    if p0 <= _SUCCESS_FLOOR:
        return SplitOutcome(p0, None, 0.0, probs)
    post = sectors[:, 0] / np.linalg.norm(sectors[:, 0])
    fid = fidelity_up_to_phase(post, target_ket(m.family[i]))
    return SplitOutcome(p0, post, fid, probs)


def sample_measurement(m: SplittingMachine, i: int, shots: int, seed: int) -> float:
    """Empirical frequency of outcome P_0 over ``shots`` seeded draws."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    p = run_split(m, i).success_prob
    # Snap round-off at the ends so certain outcomes stay certain.
    if p >= 1.0 - _SUCCESS_FLOOR:
        p = 1.0
    elif p <= _SUCCESS_FLOOR:
        p = 0.0
    hits = 0
    chunk = 1 << 20
    for start in range(0, shots, chunk):
        u = uniforms(seed, min(chunk, shots - start), start)
        hits += int(np.count_nonzero(u < p))
    return hits / shots


@dataclass(frozen=True)
class OracleGrams:
    constructed: np.ndarray
    matrix_mode_prediction: np.ndarray
    tensor_mode_prediction: np.ndarray

    @property
    def matrix_mode_deviation(self) -> float:
        return max_abs(self.constructed - self.matrix_mode_prediction)

    @property
    def tensor_mode_deviation(self) -> float:
        return max_abs(self.constructed - self.tensor_mode_prediction)


def oracle_output_gram(family: StateFamily, gammas, mode=ProductMode.TENSOR, tol: float = PSD_TOL) -> OracleGrams:
    """Compare the Gram of explicitly built outputs with both kernel predictions.

    ``C`` is factored from the residual of ``mode``; both predictions reuse it
    so that only the success-branch kernel differs between them.
    """
    mode = ProductMode.parse(mode)
    triple = build_triple(family)
    g = as_gammas(triple, gammas)
    try:
        C = failure_amplitudes(family, g, mode, tol)
    except NotPSD:
        raise Infeasible(f"residual is not PSD in {mode.value} mode") from None
    phis = failure_states(family.n)
    Y = [build_output_vector(family, i, g, C, phis) for i in range(family.n)]
    s = np.sqrt(g)
    scale = np.outer(s, s)
    failure_gram = C.conj() @ C.T
    return OracleGrams(
        constructed=gram(Y),
        matrix_mode_prediction=scale * kernel(triple, ProductMode.MATRIX) + failure_gram,
        tensor_mode_prediction=scale * kernel(triple, ProductMode.TENSOR) + failure_gram,
    )


@dataclass(frozen=True)
class WitnessResult:
    coefficients: list[complex]
    superposition_angles: tuple[float, float]
    success_amplitude: float
    ideal_target: np.ndarray
    propagated: np.ndarray
    fidelity: float
    distance: float


def nogo_witness(m: SplittingMachine, d: Sequence[complex]) -> WitnessResult:
    """Run U on a superposition of family members and compare with the ideal split.

    ``propagated`` is the full output ``U (psi x blank x P_0)``. The ideal
    target is ``sqrt(p) theta(psi) x sigma(psi) x P_0`` where ``p`` is the
    success probability of the propagated state. Fidelity and the
    phase-aligned distance compare the normalized P_0 sectors.
    """
    d = np.asarray(d, dtype=complex).reshape(-1)
    if d.shape[0] != m.n:
        raise LengthMismatch(f"{d.shape[0]} coefficients for a family of {m.n}")
    psi = sum(d[i] * ket_input(a) for i, a in enumerate(m.family))
    norm = float(np.linalg.norm(psi))
    if norm <= 1e-9:
        raise ZeroSuperposition("the coefficients cancel to the zero vector")
    psi = psi / norm
    angles = bloch_angles_of(psi)

    x = tensor(tensor(psi, blank_ancilla()), probe_ket(m.n, 0))
    propagated = np.asarray(m.U) @ x
    success = probe_sectors(propagated, m.n)[:, 0]
    p = float(np.vdot(success, success).real)
    target = target_ket(angles)
    ideal = np.sqrt(p) * tensor(target, probe_ket(m.n, 0))

    if p <= _SUCCESS_FLOOR:
        fid, dist = 0.0, 1.0
    else:
        cond = success / np.sqrt(p)
        overlap = np.vdot(target, cond)
        fid = float(min(1.0, abs(overlap) ** 2))
        phase = overlap / abs(overlap) if abs(overlap) > 0.0 else 1.0
        dist = float(np.linalg.norm(cond - phase * target))
    return WitnessResult(
        coefficients=[complex(z) for z in d],
        superposition_angles=(angles.theta, angles.phi),
        success_amplitude=float(np.sqrt(p)),
        ideal_target=ideal,
        propagated=propagated,
        fidelity=fid,
        distance=dist,
    )
