"""Fixed-length substring matching (FPM, FFM, SFSC) as a bit-vector algorithm
and as a simulated reversible circuit."""

from .assembler import RunReport, assemble, depth_scan, run, run_batch
from .circuit import Circuit, Gate, GateKind, compute_layers, controlled_version, simulate
from .operators import BlockEncoding
from .reference import (
    InputPair,
    Problem,
    ProblemSpec,
    brute_force_oracle,
    fsm_classical,
    pad_inputs,
    power_decomposition,
)

__all__ = [
    "BlockEncoding",
    "Circuit",
    "Gate",
    "GateKind",
    "InputPair",
    "Problem",
    "ProblemSpec",
    "RunReport",
    "assemble",
    "brute_force_oracle",
    "compute_layers",
    "controlled_version",
    "depth_scan",
    "fsm_classical",
    "pad_inputs",
    "power_decomposition",
    "run",
    "run_batch",
    "simulate",
]
