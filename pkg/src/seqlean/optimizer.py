"""Semantics-preserving rewrites over Expr, applied to fixpoint.

Pass list:

  P1  constant folding of operator applications whose operands are
      Const and which cannot error (Div/Mod only for a nonzero
      constant divisor)
  P2  identities e+0, 0+e, e-0, e*1, 1*e -> e; e*0, 0*e -> 0 when e
      contains no Div/Mod/Loop/Loop2/Compr
  P3  Cond with a constant scrutinee reduced to the taken branch
  P4  Loop with constant count c, 0 <= c <= 4, unrolled

P4 as a bare rule can duplicate work (x occurring twice in the body)
or drop erroring subterms (x never evaluated), either of which breaks
the tick-non-increase and error-preservation contracts.  It therefore
only fires when c = 0 (init is the exact result) or when the body is
straight-line arithmetic with exactly one occurrence of x, and the
unrolled result stays small.  Those conditions make every node of the
rewritten tree evaluate exactly once per former iteration, so ticks
strictly decrease and error kinds survive.

Outputs may contain constants outside 0..2 (extended mode) and, via
folding of Sub, negative constants.
"""

from __future__ import annotations

from .dsl import (
    Add,
    Compr,
    Cond,
    Const,
    Div,
    Expr,
    Loop,
    Loop2,
    Mod,
    Mul,
    Sub,
    X,
    Y,
    children,
    count_nodes,
)

_UNROLL_MAX_COUNT = 4
_UNROLL_MAX_NODES = 256

_LOOPISH = (Div, Mod, Loop, Loop2, Compr)
_STRAIGHT_LINE = (Const, X, Y, Add, Sub, Mul)


def _contains(e: Expr, kinds: tuple) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, kinds):
            return True
        stack.extend(children(node))
    return False


def _is_straight_line(e: Expr) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if not isinstance(node, _STRAIGHT_LINE):
            return False
        stack.extend(children(node))
    return True


def _count_x(e: Expr) -> int:
    stack = [e]
    n = 0
    while stack:
        node = stack.pop()
        if isinstance(node, X):
            n += 1
        stack.extend(children(node))
    return n


def _subst_xy(e: Expr, x_expr: Expr, y_expr: Expr) -> Expr:
    """Replace X/Y leaves of a straight-line expression."""
    if isinstance(e, X):
        return x_expr
    if isinstance(e, Y):
        return y_expr
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return Add(_subst_xy(e.left, x_expr, y_expr), _subst_xy(e.right, x_expr, y_expr))
    if isinstance(e, Sub):
        return Sub(_subst_xy(e.left, x_expr, y_expr), _subst_xy(e.right, x_expr, y_expr))
    if isinstance(e, Mul):
        return Mul(_subst_xy(e.left, x_expr, y_expr), _subst_xy(e.right, x_expr, y_expr))
    raise TypeError(f"substitution only defined on straight-line bodies: {e!r}")


def _rewrite(e: Expr) -> Expr:
    """One bottom-up rewrite sweep."""
    if isinstance(e, Const):
        return e
    if isinstance(e, (X, Y)):
        return e
    if isinstance(e, (Add, Sub, Mul, Div, Mod)):
        left = _rewrite(e.left)
        right = _rewrite(e.right)
        # P1
        if isinstance(left, Const) and isinstance(right, Const):
            if isinstance(e, Add):
                return Const(left.value + right.value)
            if isinstance(e, Sub):
                return Const(left.value - right.value)
            if isinstance(e, Mul):
                return Const(left.value * right.value)
            if right.value != 0:
                if isinstance(e, Div):
                    return Const(left.value // right.value)
                return Const(left.value % right.value)
        # P2
        if isinstance(e, Add):
            if isinstance(right, Const) and right.value == 0:
                return left
            if isinstance(left, Const) and left.value == 0:
                return right
        elif isinstance(e, Sub):
            if isinstance(right, Const) and right.value == 0:
                return left
        elif isinstance(e, Mul):
            if isinstance(right, Const) and right.value == 1:
                return left
            if isinstance(left, Const) and left.value == 1:
                return right
            if isinstance(right, Const) and right.value == 0 and not _contains(left, _LOOPISH):
                return Const(0)
            if isinstance(left, Const) and left.value == 0 and not _contains(right, _LOOPISH):
                return Const(0)
        return type(e)(left, right)
    if isinstance(e, Cond):
        test = _rewrite(e.test)
        then = _rewrite(e.then)
        other = _rewrite(e.other)
        # P3
        if isinstance(test, Const):
            return then if test.value <= 0 else other
        return Cond(test, then, other)
    if isinstance(e, Loop):
        body = _rewrite(e.body)
        count = _rewrite(e.count)
        init = _rewrite(e.init)
        # P4
        if isinstance(count, Const) and 0 <= count.value <= _UNROLL_MAX_COUNT:
            c = count.value
            if c == 0:
                return init
            if _is_straight_line(body) and _count_x(body) == 1:
                acc: Expr = init
                for i in range(1, c + 1):
                    acc = _subst_xy(body, acc, Const(i))
                if count_nodes(acc) <= _UNROLL_MAX_NODES:
                    return acc
        return Loop(body, count, init)
    if isinstance(e, Loop2):
        return Loop2(
            _rewrite(e.f),
            _rewrite(e.g),
            _rewrite(e.count),
            _rewrite(e.init1),
            _rewrite(e.init2),
        )
    if isinstance(e, Compr):
        return Compr(_rewrite(e.body), _rewrite(e.index))
    raise TypeError(f"not an Expr: {e!r}")


def optimize(e: Expr) -> Expr:
    """Rewrite ``e`` to fixpoint under passes P1..P4.

    For any env and budget under which ``e`` yields a value, the
    result yields the same value using no more ticks; DivByZero and
    NegativeComprIndex outcomes are preserved.  Budget-exhausted
    inputs may improve to values.
    """
    while True:
        out = _rewrite(e)
        if out == e:
            return out
        e = out
