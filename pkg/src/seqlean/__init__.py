"""seqlean: a DSL-to-Lean toolchain for integer sequence programs.

Parse small loop programs, evaluate them under explicit budgets on
arbitrary-precision integers, compile them to Lean 4 definitions with
per-index theorems, and serve the whole pipeline over a concurrent
JSON socket protocol.
"""

__version__ = "0.1.0"

from .dsl import (
    Expr,
    LexError,
    ParseError,
    parse_program,
    print_program,
)
from .evaluator import (
    Budget,
    Env,
    ErrorKind,
    EvalOutcome,
    MatchReport,
    backend_name,
    check_against,
    evaluate,
    sequence_values,
)
from .optimizer import optimize
from .leangen import (
    DefinitionMeta,
    LeanSource,
    TheoremSpec,
    check_structure,
    dsl_to_lean,
    emit_attribute_header,
    emit_theorems,
)

__all__ = [
    "__version__",
    "Expr",
    "LexError",
    "ParseError",
    "parse_program",
    "print_program",
    "Budget",
    "Env",
    "ErrorKind",
    "EvalOutcome",
    "MatchReport",
    "backend_name",
    "check_against",
    "evaluate",
    "sequence_values",
    "optimize",
    "DefinitionMeta",
    "LeanSource",
    "TheoremSpec",
    "check_structure",
    "dsl_to_lean",
    "emit_attribute_header",
    "emit_theorems",
]
