"""Box-ball soliton automaton with path, forest and permutation encodings."""

__version__ = "0.1.0"

from .config import (
    BoxBallConfig,
    carrier_update,
    evolve,
    is_stable,
    parse_config,
    serialize_config,
    soliton_lengths,
    stabilize,
)
from .diagram import YoungDiagram
from .errors import (
    BoxBallError,
    BudgetExceededError,
    DomainError,
    InvariantViolation,
    ParseError,
    PreconditionError,
    RegimeError,
)
from .forests import RootedForest, contour, forest_of_path, lop, trim, young_from_forest
from .paths import (
    LatticePath,
    excursion,
    hill_flatten,
    hill_intervals,
    path_of_config,
    pivot_excursion,
    young_diagram,
)
from .permutations import Permutation, avoids, rs_shape, sigma_of_config, sigma_of_forest, sigma_of_path

__all__ = [
    "BoxBallConfig", "carrier_update", "evolve", "is_stable", "parse_config", "serialize_config",
    "soliton_lengths", "stabilize", "YoungDiagram", "BoxBallError", "BudgetExceededError",
    "DomainError", "InvariantViolation", "ParseError", "PreconditionError", "RegimeError",
    "RootedForest", "contour", "forest_of_path", "lop", "trim", "young_from_forest",
    "LatticePath", "excursion", "hill_flatten", "hill_intervals", "path_of_config",
    "pivot_excursion", "young_diagram", "Permutation", "avoids", "rs_shape",
    "sigma_of_config", "sigma_of_forest", "sigma_of_path",
]
