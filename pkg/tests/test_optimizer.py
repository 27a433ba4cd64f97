"""Rewrite correctness: folding, identities, and guarded unrolling."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genprog import gen_program
from seqlean.dsl import (
    Add,
    Const,
    Div,
    Loop,
    Mul,
    Sub,
    X,
    Y,
    count_nodes,
    parse_program,
)
from seqlean.evaluator import Budget, Env, ErrorKind, evaluate
from seqlean.optimizer import optimize


def opt(src):
    return optimize(parse_program(src, "extended"))


def test_constant_folding():
    assert opt("1 + 1") == Const(2)
    assert opt("2 * 2 - 1") == Const(3)
    assert opt("(0 - 2) * 2") == Const(-4)
    assert opt("7 div 2") == Const(3)
    assert opt("(0 - 7) div 2") == Const(-4)
    assert opt("7 mod 2") == Const(1)


def test_division_by_constant_zero_not_folded():
    e = opt("1 div 0")
    assert e == Div(Const(1), Const(0))
    e = opt("1 mod 0")
    assert evaluate(e, Env()).error is ErrorKind.DIV_BY_ZERO


def test_identities():
    assert opt("x + 0") == X()
    assert opt("0 + x") == X()
    assert opt("x - 0") == X()
    assert opt("x * 1") == X()
    assert opt("1 * x") == X()
    assert opt("x * 0") == Const(0)
    assert opt("0 * (x + y)") == Const(0)


def test_zero_annihilation_blocked_by_effects():
    # subterms that can error or burn ticks must not be erased
    e = opt("(x div x) * 0")
    assert e != Const(0)
    assert evaluate(e, Env(0)).error is ErrorKind.DIV_BY_ZERO
    e = opt("0 * loop(\\(x,y).x + 1, x, 0)")
    assert e != Const(0)
    e = opt("0 * compr(\\(x,y).x, 0)")
    assert e != Const(0)


def test_cond_constant_scrutinee():
    assert opt("cond(0, x, y)") == X()
    assert opt("cond(2, x, y)") == Y()
    assert opt("cond(0 - 1, x, 1 div 0)") == X()
    # non-constant scrutinee is kept
    e = opt("cond(x, 1, 2)")
    assert e == parse_program("cond(x, 1, 2)")


def test_loop_zero_count_collapses_to_init():
    assert opt("loop(\\(x,y).1 div 0, 0, x + x)") == Add(X(), X())
    # negative constant counts are left alone (only the literal zero
    # case is rewritten) but still evaluate to the initial value
    e = opt("loop(\\(x,y).x, 0 - 2, 2)")
    assert evaluate(e, Env()).value == 2


def test_loop_small_count_unrolls_straight_line_bodies():
    # body x * y with count 3, init x: x*1*2*3 folds to x * 6 shapes
    e = opt("loop(\\(x,y).x * y, 1 + 1, x)")
    for n in range(6):
        direct = evaluate(parse_program("loop(\\(x,y).x * y, 1 + 1, x)"), Env(n))
        assert evaluate(e, Env(n)).value == direct.value
    assert not any(isinstance(s, Loop) for s in _walk(e))


def test_loop_unroll_guards():
    # bodies that read the accumulator more than once would duplicate
    # work, so they stay loops
    e = opt("loop(\\(x,y).x * x, 2, 2)")
    assert any(isinstance(s, Loop) for s in _walk(e)) or e == Const(16)
    # effectful bodies stay loops
    e = opt("loop(\\(x,y).x div y, 2, x)")
    assert any(isinstance(s, Loop) for s in _walk(e))
    # counts above the unroll cutoff stay loops
    e = opt("loop(\\(x,y).x + y, 2 + 2 + 1, x)")
    assert any(isinstance(s, Loop) for s in _walk(e))
    # non-constant counts stay loops
    e = opt("loop(\\(x,y).x + y, x, 0)")
    assert any(isinstance(s, Loop) for s in _walk(e))


def test_unroll_never_grows_past_node_cap():
    wide = "loop(\\(x,y)." + " + ".join(["x"] * 1) + " + " + " + ".join(["y + 1"] * 40) + ", 2 + 2, 0)"
    e = opt(wide)
    assert count_nodes(e) <= max(count_nodes(parse_program(wide, "extended")), 256)


def test_nested_example_shrinks():
    src = "loop(\\(x,y).(((2 * loop(\\(x,y).x * y, 2 + 2, x)) - x) div y) + x, x, 1)"
    e = parse_program(src)
    o = optimize(e)
    assert count_nodes(o) < count_nodes(e)
    for n in range(6):
        a = evaluate(e, Env(n))
        b = evaluate(o, Env(n))
        assert (a.value, a.error) == (b.value, b.error)
        assert b.ticks_used <= a.ticks_used


def test_idempotent():
    for seed in range(200):
        e = gen_program(seed)
        once = optimize(e)
        assert optimize(once) == once, seed


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**9), x=st.integers(min_value=0, max_value=12))
def test_differential_semantics(seed, x):
    budget = Budget(max_ticks=100_000)
    e = gen_program(seed, max_depth=5)
    o = optimize(e)
    a = evaluate(e, Env(x), budget)
    b = evaluate(o, Env(x), budget)
    if a.ok:
        assert b.ok and b.value == a.value, (seed, x)
        assert b.ticks_used <= a.ticks_used
    elif a.error is not ErrorKind.BUDGET_EXHAUSTED:
        assert b.error is a.error, (seed, x)


def _walk(e):
    stack = [e]
    seen = []
    while stack:
        node = stack.pop()
        seen.append(node)
        for name in getattr(node, "__slots__", ()) or ():
            child = getattr(node, name)
            if hasattr(child, "__slots__") and not isinstance(child, int):
                stack.append(child)
    return seen
