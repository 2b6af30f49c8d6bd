"""Probabilistic splitting of qubit information into theta and phi parts."""

__version__ = "0.1.0"

from .errors import QsplitError
from .feasibility import (
    ProductMode,
    feasible,
    kernel,
    max_uniform_gamma,
    maximize_gammas,
    paper_conditions_report,
    reality_defects,
    residual,
)
from .gram import GramTriple, build_D, build_G, build_H, build_triple, linear_independence
from .machine import SplittingMachine, construct_machine, verify_machine
from .simulator import nogo_witness, oracle_output_gram, run_split, sample_measurement
from .states import BlochAngles, StateFamily

__all__ = [
    "BlochAngles",
    "GramTriple",
    "ProductMode",
    "QsplitError",
    "SplittingMachine",
    "StateFamily",
    "build_D",
    "build_G",
    "build_H",
    "build_triple",
    "construct_machine",
    "feasible",
    "kernel",
    "linear_independence",
    "max_uniform_gamma",
    "maximize_gammas",
    "nogo_witness",
    "oracle_output_gram",
    "paper_conditions_report",
    "reality_defects",
    "residual",
    "run_split",
    "sample_measurement",
    "verify_machine",
]
