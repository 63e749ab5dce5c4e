"""Simulation and verification of LOCAL-family distributed models with quantum extensions."""

from .checker import Verdict, Witness, check_philocal, minimal_radius, view_classes
from .errors import CapacityError, ConsistencyError, InputError, ProtocolError, QLocalError
from .graph import LabeledGraph, ViewBall, parse_graph, view, views_equal
from .outcomes import (
    Distribution,
    Outcome,
    Problem,
    marginal,
    merge_duplicates,
    min_solution_probability,
    solution_probability,
)
from .runtime import (
    ALL_MODELS,
    LOCAL,
    LOCAL_E,
    LOCAL_Q,
    LOCAL_QE,
    LOCAL_QS,
    LOCAL_S,
    ModelConfig,
    NodeProgram,
    Protocol,
    make_entangled_helper,
    make_separable_helper,
    run_exact,
    run_once,
    sample_outcome,
)

__version__ = "0.1.0"
