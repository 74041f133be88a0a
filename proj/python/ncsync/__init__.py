"""All-to-all broadcast data synchronization with XOR network coding."""

from fractions import Fraction

from ._core import (
    CSV_HEADER,
    ContractViolation,
    GenerationError,
    SweepConfig,
    Topology,
    candidate_pool,
    classify,
    complete_graph,
    compute_gd,
    compute_sd,
    dbs,
    dbs_single,
    encode,
    generate_geometric,
    is_connected,
    ns,
    path_graph,
    run_sweep,
    simulate,
    star_graph,
    sweep_csv,
    write_sweep_csv,
)
from ._core import average_degree as _average_degree

__all__ = [
    "CSV_HEADER",
    "ContractViolation",
    "GenerationError",
    "SweepConfig",
    "Topology",
    "average_degree",
    "candidate_pool",
    "classify",
    "complete_graph",
    "compute_gd",
    "compute_sd",
    "dbs",
    "dbs_single",
    "encode",
    "generate_geometric",
    "is_connected",
    "ns",
    "path_graph",
    "run_sweep",
    "simulate",
    "star_graph",
    "sweep_csv",
    "write_sweep_csv",
]


def average_degree(topology):
    """Exact 2|E|/N."""
    num, den = _average_degree(topology)
    return Fraction(num, den)
