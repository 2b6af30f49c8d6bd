"""JSON documents: state families, feasibility reports, machine files.

Complex numbers are written as ``[re, im]`` pairs and matrices as row-major
arrays of rows. Floats go through ``repr`` (shortest exact round trip), so a
document read back reproduces every value bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .errors import QsplitError
from .feasibility import FeasibilityReport, ProductMode
from .machine import MachineCheck, SplittingMachine
from .states import BlochAngles, StateFamily, normalize_angles


class MalformedDocument(QsplitError):
    code = "malformed-input"


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_matrix(M) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(M)]


def decode_complex(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise MalformedDocument(f"complex number must be [re, im], got {pair!r}")
    re, im = pair
    return complex(float(re), float(im))


def decode_matrix(rows) -> np.ndarray:
    try:
        M = np.array([[decode_complex(z) for z in row] for row in rows], dtype=complex)
    except TypeError as exc:
        raise MalformedDocument(f"bad matrix: {exc}") from None
    if M.ndim != 2:
        raise MalformedDocument("matrix rows have unequal lengths")
    return M


def _plain(value):
    if isinstance(value, ProductMode):
        return value.value
    if isinstance(value, complex):
        return encode_complex(value)
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def dumps(doc) -> str:
    return json.dumps(_plain(doc), indent=2, allow_nan=False)


def load_json(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedDocument(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def family_from_doc(doc, normalize: bool = False) -> StateFamily:
    """Accept ``{"states": [{"theta": .., "phi": ..}, ...], "label": ...}``."""
    if not isinstance(doc, dict) or not isinstance(doc.get("states"), list) or not doc["states"]:
        raise MalformedDocument("family document needs a non-empty 'states' list")
    members = []
    for k, st in enumerate(doc["states"]):
        if not isinstance(st, dict) or "theta" not in st or "phi" not in st:
            raise MalformedDocument(f"state {k} needs 'theta' and 'phi'")
        try:
            theta, phi = float(st["theta"]), float(st["phi"])
        except (TypeError, ValueError):
            raise MalformedDocument(f"state {k} has non-numeric angles") from None
        members.append(normalize_angles(theta, phi) if normalize else BlochAngles(theta, phi))
    return StateFamily(members)


def family_to_doc(family: StateFamily, label: str | None = None) -> dict:
    doc = {"states": [{"theta": a.theta, "phi": a.phi} for a in family]}
    if label is not None:
        doc["label"] = label
    return doc


def report_to_doc(report: FeasibilityReport, family: StateFamily, extra: dict | None = None) -> dict:
    doc = {"tool": "qsplit", "version": __version__, "family": family_to_doc(family)["states"]}
    doc.update(asdict(report))
    if extra:
        doc.update(extra)
    return doc


def machine_to_doc(m: SplittingMachine, check: MachineCheck) -> dict:
    return {
        "tool": "qsplit",
        "version": __version__,
        "kind": "splitting-machine",
        "n": m.n,
        "dims": {"A": m.dim_A, "B": m.dim_B, "P": m.dim_P},
        "mode": m.mode.value,
        "family": family_to_doc(m.family)["states"],
        "gammas": [float(g) for g in m.gammas],
        "C": encode_matrix(m.C),
        "U": encode_matrix(m.U),
        "defects": {
            "unitarity": check.unitarity_defect,
            "action": list(check.action_defects),
            "gram": check.gram_defect,
        },
    }


def machine_from_doc(doc) -> SplittingMachine:
    if not isinstance(doc, dict) or doc.get("kind") != "splitting-machine":
        raise MalformedDocument("not a splitting-machine document")
    try:
        family = family_from_doc({"states": doc["family"]})
        gammas = np.array([float(g) for g in doc["gammas"]])
        mode = ProductMode.parse(doc["mode"])
        C = decode_matrix(doc["C"])
        U = decode_matrix(doc["U"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, QsplitError):
            raise
        raise MalformedDocument(f"bad machine document: {exc}") from None
    n = family.n
    dim = 4 * (n + 1)
    if gammas.shape != (n,) or C.shape != (n, n) or U.shape != (dim, dim):
        raise MalformedDocument("machine document has inconsistent dimensions")
    gammas.setflags(write=False)
    C.setflags(write=False)
    U.setflags(write=False)
    return SplittingMachine(family=family, gammas=gammas, mode=mode, C=C, U=U)
