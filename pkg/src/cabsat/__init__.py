"""Exact solver toolkit for the cyclic antibandwidth problem.

Pipeline: graphs (instances and generators) -> bounds (search window) ->
model (per-candidate CNF over ring-window AMO encodings) -> search
(iterative or parallel certification against a SAT backend), with an
exhaustive oracle as independent ground truth and a DIMACS-emitting CLI.
"""

from .bounds import BoundRange, default_bounds
from .errors import BackendError, CabsatError, InputError, IntegrityError, ParseError
from .graphs import Graph, cab_of_labeling, cyclic_distance
from .oracle import brute_force_cab
from .search import SearchOptions, iterative_search, parallel_search, verify_result

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "BoundRange",
    "CabsatError",
    "Graph",
    "InputError",
    "IntegrityError",
    "ParseError",
    "SearchOptions",
    "brute_force_cab",
    "cab_of_labeling",
    "cyclic_distance",
    "default_bounds",
    "iterative_search",
    "parallel_search",
    "verify_result",
    "__version__",
]
