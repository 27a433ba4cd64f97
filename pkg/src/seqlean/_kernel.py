"""Flattened-program representation and the pure-Python eval kernel.

The tree interpreter is the hot path of the whole stack, so programs
are flattened into parallel arrays once and then interpreted over node
indices.  :mod:`seqlean._kernel_c` is a Cython twin of :func:`run`
with the same tick accounting to the step; the facade in
:mod:`seqlean.evaluator` picks one at import time.

Layout: node i has opcode ``ops[i]`` and up to five children at
``kids[5*i : 5*i+5]`` (-1 padding).  ``consts[i]`` holds the literal
for CONST nodes.  The root is node 0.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from .dsl import Expr, Const, children

OP_CONST = 0
OP_X = 1
OP_Y = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_MOD = 7
OP_COND = 8
OP_LOOP = 9
OP_LOOP2 = 10
OP_COMPR = 11

_OPCODE = {
    "Const": OP_CONST, "X": OP_X, "Y": OP_Y,
    "Add": OP_ADD, "Sub": OP_SUB, "Mul": OP_MUL,
    "Div": OP_DIV, "Mod": OP_MOD, "Cond": OP_COND,
    "Loop": OP_LOOP, "Loop2": OP_LOOP2, "Compr": OP_COMPR,
}

ERR_NONE = 0
ERR_DIV_BY_ZERO = 1
ERR_NEGATIVE_COMPR_INDEX = 2
ERR_BUDGET_EXHAUSTED = 3
ERR_OVERFLOW = 4

BACKEND_NAME = "pure-python"


@dataclass(frozen=True, slots=True)
class FlatProgram:
    ops: array
    kids: array
    consts: list
    node_count: int


def flatten(e: Expr) -> FlatProgram:
    """Flatten ``e`` into preorder arrays (iterative, depth-safe)."""
    ops = array("i")
    kids = array("i")
    consts: list[int] = []
    stack: list[tuple[Expr, int, int]] = [(e, -1, 0)]
    while stack:
        node, parent, slot = stack.pop()
        idx = len(ops)
        if parent >= 0:
            kids[parent * 5 + slot] = idx
        ops.append(_OPCODE[type(node).__name__])
        kids.extend((-1, -1, -1, -1, -1))
        consts.append(node.value if isinstance(node, Const) else 0)
        ch = children(node)
        for s in range(len(ch) - 1, -1, -1):
            stack.append((ch[s], idx, s))
    return FlatProgram(ops, kids, consts, len(ops))


def run(prog: FlatProgram, x: int, y: int, max_ticks: int, max_bits: int):
    """Interpret ``prog`` with env {x, y}; returns (err, value, ticks).

    One tick per node visit; ticks saturate at ``max_ticks`` when the
    budget is exhausted.  Values with |v| >= 2**max_bits error out as
    overflow at the op that produced them, constants included.
    """
    ops = prog.ops
    kids = prog.kids
    consts = prog.consts
    limit = 1 << max_bits
    err = ERR_NONE
    ticks = 0

    def ev(i: int, vx, vy):
        nonlocal err, ticks
        ticks += 1
        if ticks > max_ticks:
            ticks = max_ticks
            err = ERR_BUDGET_EXHAUSTED
            return 0
        op = ops[i]
        if op == OP_X:
            return vx
        if op == OP_Y:
            return vy
        if op == OP_CONST:
            v = consts[i]
            if v >= limit or -v >= limit:
                err = ERR_OVERFLOW
                return 0
            return v
        b = i * 5
        if op <= OP_MOD:
            a = ev(kids[b], vx, vy)
            if err:
                return 0
            c = ev(kids[b + 1], vx, vy)
            if err:
                return 0
            if op == OP_ADD:
                v = a + c
            elif op == OP_SUB:
                v = a - c
            elif op == OP_MUL:
                v = a * c
            elif op == OP_DIV:
                if c == 0:
                    err = ERR_DIV_BY_ZERO
                    return 0
                v = a // c
            else:
                if c == 0:
                    err = ERR_DIV_BY_ZERO
                    return 0
                v = a % c
            if v >= limit or -v >= limit:
                err = ERR_OVERFLOW
                return 0
            return v
        if op == OP_COND:
            t = ev(kids[b], vx, vy)
            if err:
                return 0
            if t <= 0:
                return ev(kids[b + 1], vx, vy)
            return ev(kids[b + 2], vx, vy)
        if op == OP_LOOP:
            n = ev(kids[b + 1], vx, vy)
            if err:
                return 0
            v = ev(kids[b + 2], vx, vy)
            if err:
                return 0
            body = kids[b]
            i2 = 1
            while i2 <= n:
                v = ev(body, v, i2)
                if err:
                    return 0
                i2 += 1
            return v
        if op == OP_LOOP2:
            n = ev(kids[b + 2], vx, vy)
            if err:
                return 0
            u = ev(kids[b + 3], vx, vy)
            if err:
                return 0
            v = ev(kids[b + 4], vx, vy)
            if err:
                return 0
            f = kids[b]
            g = kids[b + 1]
            i2 = 1
            while i2 <= n:
                nu = ev(f, u, v)
                if err:
                    return 0
                nv = ev(g, u, v)
                if err:
                    return 0
                u = nu
                v = nv
                i2 += 1
            return u
        # OP_COMPR: (k+1)-th m >= 0 with body(m, 0) <= 0, ascending
        k = ev(kids[b + 1], vx, vy)
        if err:
            return 0
        if k < 0:
            err = ERR_NEGATIVE_COMPR_INDEX
            return 0
        body = kids[b]
        m = 0
        seen = 0
        while True:
            t = ev(body, m, 0)
            if err:
                return 0
            if t <= 0:
                if seen == k:
                    return m
                seen += 1
            m += 1

    v = ev(0, x, y)
    if err:
        return err, None, ticks
    return ERR_NONE, v, ticks
