"""Big-integer evaluation of DSL programs under step budgets.

The sequence convention is a(n) = evaluate(program, Env(x=n, y=0)).
Evaluation is pure and reentrant: all state lives in explicit
arguments, so concurrent use needs no locks.

Two interchangeable kernels exist: a Cython extension and a pure
Python twin.  The compiled one is used when importable, unless
``SEQLEAN_PURE_PYTHON=1`` forces the fallback.  Both produce identical
outcomes including tick counts.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field

from . import _kernel
from ._kernel import FlatProgram, flatten
from .dsl import Expr

if os.environ.get("SEQLEAN_PURE_PYTHON") == "1":
    _backend = _kernel
else:
    try:
        from . import _kernel_c as _backend  # type: ignore[no-redef]
    except ImportError:
        _backend = _kernel

# the Cython tick counter is a C long long; saturate budgets above it
_MAX_TICKS_CAP = 2**62

DEFAULT_MAX_TICKS = 10**6
DEFAULT_MAX_VALUE_BITS = 4096


def backend_name() -> str:
    """Which eval kernel is active: "cython" or "pure-python"."""
    return _backend.BACKEND_NAME


class ErrorKind(enum.Enum):
    """Evaluation failure modes; values double as wire-level reasons."""

    DIV_BY_ZERO = "div_by_zero"
    NEGATIVE_COMPR_INDEX = "negative_compr_index"
    BUDGET_EXHAUSTED = "budget_exhausted"
    OVERFLOW = "overflow"


_ERR_BY_CODE = {
    _kernel.ERR_DIV_BY_ZERO: ErrorKind.DIV_BY_ZERO,
    _kernel.ERR_NEGATIVE_COMPR_INDEX: ErrorKind.NEGATIVE_COMPR_INDEX,
    _kernel.ERR_BUDGET_EXHAUSTED: ErrorKind.BUDGET_EXHAUSTED,
    _kernel.ERR_OVERFLOW: ErrorKind.OVERFLOW,
}


@dataclass(frozen=True, slots=True)
class Env:
    x: int = 0
    y: int = 0


@dataclass(frozen=True, slots=True)
class Budget:
    """Deterministic fuel for one evaluation: ticks and value width."""

    max_ticks: int = DEFAULT_MAX_TICKS
    max_value_bits: int = DEFAULT_MAX_VALUE_BITS

    def __post_init__(self):
        if self.max_ticks <= 0:
            raise ValueError("max_ticks must be positive")
        if self.max_value_bits <= 0:
            raise ValueError("max_value_bits must be positive")


@dataclass(frozen=True, slots=True)
class EvalOutcome:
    """Value xor error, plus the ticks the evaluation consumed."""

    value: int | None
    error: ErrorKind | None
    ticks_used: int

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True, slots=True)
class MatchRecord:
    n: int
    computed: EvalOutcome
    expected: int | None
    match: bool


@dataclass(frozen=True, slots=True)
class MatchReport:
    records: tuple[MatchRecord, ...]
    all_match: bool
    first_mismatch: int | None


def _run_flat(prog: FlatProgram, x: int, y: int, budget: Budget) -> EvalOutcome:
    err, value, ticks = _backend.run(
        prog, x, y, min(budget.max_ticks, _MAX_TICKS_CAP), budget.max_value_bits
    )
    if err:
        return EvalOutcome(None, _ERR_BY_CODE[err], ticks)
    return EvalOutcome(value, None, ticks)


def evaluate(e: Expr, env: Env = Env(), budget: Budget = Budget()) -> EvalOutcome:
    """Evaluate ``e`` under ``env``; never raises on program behavior."""
    return _run_flat(flatten(e), env.x, env.y, budget)


def sequence_values(
    e: Expr, indices: list[int], budget: Budget = Budget()
) -> list[EvalOutcome]:
    """a(n) for each n in ``indices``, each with a fresh budget."""
    prog = flatten(e)
    return [_run_flat(prog, n, 0, budget) for n in indices]


def check_against(
    e: Expr,
    pairs: list[tuple[int, int | None]],
    budget: Budget = Budget(),
    stop_early: bool = True,
) -> MatchReport:
    """Verify a(n) = expected over ``pairs``, in the order given.

    A pair with expected None is computed but vacuously matching
    unless the evaluation itself errors.  With ``stop_early`` the scan
    ends at the first failing record (its record is included).
    """
    prog = flatten(e)
    records: list[MatchRecord] = []
    all_match = True
    first_mismatch: int | None = None
    for n, expected in pairs:
        computed = _run_flat(prog, n, 0, budget)
        if not computed.ok:
            match = False
        elif expected is None:
            match = True
        else:
            match = computed.value == expected
        records.append(MatchRecord(n, computed, expected, match))
        if not match and all_match:
            all_match = False
            first_mismatch = n
            if stop_early:
                break
    return MatchReport(tuple(records), all_match, first_mismatch)
