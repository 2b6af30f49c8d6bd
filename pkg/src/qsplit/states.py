"""Bloch-sphere kets: inputs, theta-only targets, phi-only ancilla targets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import AngleOutOfRange, DimMismatch, DuplicateState, NotNormalized
from .numerics import as_vector

TWO_PI = 2.0 * math.pi
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not (0.0 <= theta <= math.pi):
        raise AngleOutOfRange(f"theta={theta!r} outside [0, pi]")
    return theta


def _check_phi(phi: float) -> float:
    phi = float(phi)
    if not (0.0 <= phi < TWO_PI):
        raise AngleOutOfRange(f"phi={phi!r} outside [0, 2pi)")
    return phi


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_theta(self.theta))
        object.__setattr__(self, "phi", _check_phi(self.phi))


def normalize_angles(theta: float, phi: float) -> BlochAngles:
    """Map arbitrary real angles onto the canonical chart, keeping the ray fixed.

    A polar angle past pi is reflected back with a half-turn of azimuth,
    which describes the same state up to a global phase.
    """
    theta = math.fmod(float(theta), TWO_PI)
    if theta < 0.0:
        theta += TWO_PI
    if theta > math.pi:
        theta = TWO_PI - theta
        phi = float(phi) + math.pi
    phi = math.fmod(float(phi), TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi = 0.0
    return BlochAngles(theta, phi)


class StateFamily:
    """Ordered, duplicate-free set of input states given by Bloch angles."""

    def __init__(self, members: Iterable):
        ms = []
        for m in members:
            if isinstance(m, BlochAngles):
                ms.append(m)
            else:
                theta, phi = m
                ms.append(BlochAngles(theta, phi))
        if not ms:
            raise ValueError("a state family needs at least one member")
        for i in range(len(ms)):
            for j in range(i):
                if abs(ms[i].theta - ms[j].theta) <= 1e-12 and abs(ms[i].phi - ms[j].phi) <= 1e-12:
                    raise DuplicateState(f"members {j} and {i} coincide")
        self._members = tuple(ms)

    @classmethod
    def from_angles(cls, thetas, phis) -> "StateFamily":
        thetas, phis = list(thetas), list(phis)
        if len(thetas) != len(phis):
            raise ValueError("thetas and phis differ in length")
        return cls(zip(thetas, phis))

    @property
    def members(self) -> tuple[BlochAngles, ...]:
        return self._members

    @property
    def n(self) -> int:
        return len(self._members)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([m.theta for m in self._members])

    @property
    def phis(self) -> np.ndarray:
        return np.array([m.phi for m in self._members])

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def __getitem__(self, i: int) -> BlochAngles:
        return self._members[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, StateFamily) and self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        pairs = ", ".join(f"({m.theta:.6g}, {m.phi:.6g})" for m in self._members)
        return f"StateFamily([{pairs}])"


def _angles(a) -> BlochAngles:
    return a if isinstance(a, BlochAngles) else BlochAngles(*a)


def ket_input(a) -> np.ndarray:
    """cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>."""
    a = _angles(a)
    return np.array(
        [math.cos(a.theta / 2), math.sin(a.theta / 2) * complex(math.cos(a.phi), math.sin(a.phi))],
        dtype=complex,
    )


def ket_theta(theta: float) -> np.ndarray:
    theta = _check_theta(theta)
    return np.array([math.cos(theta / 2), math.sin(theta / 2)], dtype=complex)


def ket_sigma(phi: float) -> np.ndarray:
    phi = _check_phi(phi)
    return np.array([_INV_SQRT2, _INV_SQRT2 * complex(math.cos(phi), math.sin(phi))], dtype=complex)


def blank_ancilla() -> np.ndarray:
    """The fixed blank state of the ancilla, |0>."""
    return np.array([1.0, 0.0], dtype=complex)


def basis_ket(dim: int, k: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[k] = 1.0
    return e


def tensor(a, b) -> np.ndarray:
    return np.kron(as_vector(a), as_vector(b))


def fidelity_up_to_phase(a, b, norm_tol: float = 1e-9) -> float:
    """|<a|b>|^2 for unit vectors; insensitive to global phase."""
    a, b = as_vector(a), as_vector(b)
    if a.shape != b.shape:
        raise DimMismatch(f"dimensions {a.shape[0]} and {b.shape[0]} differ")
    for name, v in (("a", a), ("b", b)):
        if abs(np.linalg.norm(v) - 1.0) > norm_tol:
            raise NotNormalized(f"{name} has norm {np.linalg.norm(v):.12g}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def bloch_angles_of(psi, pole_tol: float = 1e-12) -> BlochAngles:
    """Recover the Bloch angles of a (not necessarily normalized) qubit ket.

    The global phase is removed first; at the poles phi is set to 0.
    """
    psi = as_vector(psi)
    if psi.shape[0] != 2:
        raise DimMismatch("bloch_angles_of expects a qubit ket")
    norm = float(np.linalg.norm(psi))
    if norm == 0.0:
        raise ValueError("zero vector has no Bloch angles")
    a0, a1 = psi / norm
    theta = 2.0 * math.acos(min(1.0, abs(a0)))
    if abs(a0) <= pole_tol or abs(a1) <= pole_tol:
        phi = 0.0
    else:
        phi = math.fmod(np.angle(a1) - np.angle(a0), TWO_PI)
        if phi < 0.0:
            phi += TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
    return BlochAngles(min(theta, math.pi), phi)
