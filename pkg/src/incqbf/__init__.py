"""Incremental search-based QBF solving on prenex CNF.

The core object is Solver: a QCDCL engine with clause and cube learning
behind a push/pop clause stack, sound retention of learned constraints
across formula edits, and single-shot assumptions.
"""

from .formula import (EXISTS, FORALL, Block, Pcnf, Prefix, UsageError,
                      apply_assignment, compact, normalize_clause)
from .oracle import check_redundant, eval_pcnf, is_model
from .qcdcl import Stats
from .qdimacs import ParseError
from .qres import (CLAUSE, CUBE, Constraint, existential_reduce, initial_cube,
                   resolve, universal_reduce)
from .solver import SAT, UNSAT, Solver

__version__ = "0.1.0"

__all__ = [
    "EXISTS", "FORALL", "SAT", "UNSAT", "CLAUSE", "CUBE",
    "Block", "Prefix", "Pcnf", "Constraint", "Solver", "Stats",
    "UsageError", "ParseError",
    "normalize_clause", "apply_assignment", "compact",
    "universal_reduce", "existential_reduce", "resolve", "initial_cube",
    "eval_pcnf", "is_model", "check_redundant",
    "__version__",
]
