# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython eval kernel; a line-for-line twin of seqlean._kernel.run.

Values stay Python big ints (the domain is arbitrary precision), but
the dispatch loop, tick counter, and node indices are C-level.  Tick
accounting must match the pure kernel exactly: the equivalence suite
asserts identical (err, value, ticks) triples on random programs.
"""

from ._kernel import (
    ERR_BUDGET_EXHAUSTED,
    ERR_DIV_BY_ZERO,
    ERR_NEGATIVE_COMPR_INDEX,
    ERR_NONE,
    ERR_OVERFLOW,
)

BACKEND_NAME = "cython"

cdef int C_CONST = 0
cdef int C_X = 1
cdef int C_Y = 2
cdef int C_ADD = 3
cdef int C_SUB = 4
cdef int C_MUL = 5
cdef int C_DIV = 6
cdef int C_MOD = 7
cdef int C_COND = 8
cdef int C_LOOP = 9
cdef int C_LOOP2 = 10
cdef int C_COMPR = 11

cdef int E_NONE = 0
cdef int E_DIV = 1
cdef int E_NEG_COMPR = 2
cdef int E_BUDGET = 3
cdef int E_OVERFLOW = 4


cdef class _Runner:
    cdef int[::1] ops
    cdef int[::1] kids
    cdef list consts
    cdef object limit
    cdef long long max_ticks
    cdef long long ticks
    cdef int err

    cdef object ev(self, int i, object vx, object vy):
        cdef int op, b
        cdef long long i2
        self.ticks += 1
        if self.ticks > self.max_ticks:
            self.ticks = self.max_ticks
            self.err = E_BUDGET
            return 0
        op = self.ops[i]
        if op == C_X:
            return vx
        if op == C_Y:
            return vy
        if op == C_CONST:
            v = self.consts[i]
            if v >= self.limit or -v >= self.limit:
                self.err = E_OVERFLOW
                return 0
            return v
        b = i * 5
        if op <= C_MOD:
            a = self.ev(self.kids[b], vx, vy)
            if self.err:
                return 0
            c = self.ev(self.kids[b + 1], vx, vy)
            if self.err:
                return 0
            if op == C_ADD:
                v = a + c
            elif op == C_SUB:
                v = a - c
            elif op == C_MUL:
                v = a * c
            elif op == C_DIV:
                if c == 0:
                    self.err = E_DIV
                    return 0
                v = a // c
            else:
                if c == 0:
                    self.err = E_DIV
                    return 0
                v = a % c
            if v >= self.limit or -v >= self.limit:
                self.err = E_OVERFLOW
                return 0
            return v
        if op == C_COND:
            t = self.ev(self.kids[b], vx, vy)
            if self.err:
                return 0
            if t <= 0:
                return self.ev(self.kids[b + 1], vx, vy)
            return self.ev(self.kids[b + 2], vx, vy)
        if op == C_LOOP:
            n = self.ev(self.kids[b + 1], vx, vy)
            if self.err:
                return 0
            v = self.ev(self.kids[b + 2], vx, vy)
            if self.err:
                return 0
            i2 = 1
            while i2 <= n:
                v = self.ev(self.kids[b], v, i2)
                if self.err:
                    return 0
                i2 += 1
            return v
        if op == C_LOOP2:
            n = self.ev(self.kids[b + 2], vx, vy)
            if self.err:
                return 0
            u = self.ev(self.kids[b + 3], vx, vy)
            if self.err:
                return 0
            v = self.ev(self.kids[b + 4], vx, vy)
            if self.err:
                return 0
            i2 = 1
            while i2 <= n:
                nu = self.ev(self.kids[b], u, v)
                if self.err:
                    return 0
                nv = self.ev(self.kids[b + 1], u, v)
                if self.err:
                    return 0
                u = nu
                v = nv
                i2 += 1
            return u
        # C_COMPR
        k = self.ev(self.kids[b + 1], vx, vy)
        if self.err:
            return 0
        if k < 0:
            self.err = E_NEG_COMPR
            return 0
        cdef long long m = 0
        cdef long long seen = 0
        while True:
            t = self.ev(self.kids[b], m, 0)
            if self.err:
                return 0
            if t <= 0:
                if seen == k:
                    return m
                seen += 1
            m += 1


def run(prog, x, y, max_ticks, max_bits):
    """Interpret a FlatProgram; returns (err, value, ticks)."""
    cdef _Runner r = _Runner()
    r.ops = prog.ops
    r.kids = prog.kids
    r.consts = prog.consts
    r.limit = 1 << max_bits
    r.max_ticks = max_ticks
    r.ticks = 0
    r.err = E_NONE
    v = r.ev(0, x, y)
    if r.err:
        return r.err, None, r.ticks
    return ERR_NONE, v, r.ticks
