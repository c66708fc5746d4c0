from .backends import Backend, BuiltinBackend, HighsBackend, get_backend
from .bnb import solve_milp
from .model import GAP_LIMIT, INFEASIBLE, OPTIMAL, UNBOUNDED, MilpModel, MilpSolution, ModelError
from .simplex import SolverError, solve_lp

__all__ = [
    "Backend", "BuiltinBackend", "HighsBackend", "get_backend", "solve_milp", "solve_lp",
    "MilpModel", "MilpSolution", "ModelError", "SolverError",
    "OPTIMAL", "INFEASIBLE", "UNBOUNDED", "GAP_LIMIT",
]
