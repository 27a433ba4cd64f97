"""Lean 4 source generation: definitions, value theorems, headers.

Emitted definitions follow one frozen template: ``def <name> (n : ℕ) :
ℤ`` whose body is the expression over ``x := Int.ofNat n`` (top-level
``y`` is the constant 0 and is substituted away).  Loop/Loop2/Compr
become structurally recursive ``where`` helpers:

  loop_k   counts down a ℕ fuel while threading (accumulator, 1-based
           iteration counter), mirroring the evaluator's semantics;
           negative DSL counts clamp to zero iterations via Int.toNat
  loop2_k  same shape with two accumulators, returning the first
  compr_k  ascending search for the (k+1)-th candidate with body <= 0,
           bounded by an explicit fuel constant so the definition is
           total; past the fuel horizon it diverges from the DSL and
           says so in an emitted comment

"simplified" mode runs the optimizer first and let-binds repeated
loop-free subtrees of size >= 5 within each scope; "direct" mode is
purely structural.  Both are deterministic: byte-identical text for
identical inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

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
from .optimizer import optimize

COMPR_FUEL = 100000
CSE_MIN_NODES = 5

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
TAG_RE = re.compile(r"A[0-9]{6,7}\Z")


class InvalidIdentifier(Exception):
    pass


class InvalidTag(Exception):
    pass


class EmptySpecList(Exception):
    pass


class MixedFunctionNames(Exception):
    pass


@dataclass(frozen=True, slots=True)
class LeanSource:
    text: str
    kind: str  # definition | theorem_block | attribute_header | file
    name: str | None = None


@dataclass(frozen=True, slots=True)
class TheoremSpec:
    func_name: str
    index: int
    value: int
    tactic: str = "decide"


@dataclass(frozen=True, slots=True)
class DefinitionMeta:
    tag: str
    offset: int = 0
    max_index: int = 0
    derive: bool = False


def _subst_free_y(e: Expr) -> Expr:
    """Replace free Y with Const 0; binder bodies rebind y and are kept."""
    if isinstance(e, Y):
        return Const(0)
    if isinstance(e, (Const, X)):
        return e
    if isinstance(e, (Add, Sub, Mul, Div, Mod)):
        return type(e)(_subst_free_y(e.left), _subst_free_y(e.right))
    if isinstance(e, Cond):
        return Cond(_subst_free_y(e.test), _subst_free_y(e.then), _subst_free_y(e.other))
    if isinstance(e, Loop):
        return Loop(e.body, _subst_free_y(e.count), _subst_free_y(e.init))
    if isinstance(e, Loop2):
        return Loop2(e.f, e.g, _subst_free_y(e.count), _subst_free_y(e.init1), _subst_free_y(e.init2))
    if isinstance(e, Compr):
        return Compr(e.body, _subst_free_y(e.index))
    raise TypeError(f"not an Expr: {e!r}")


def _free_x_used(e: Expr) -> bool:
    if isinstance(e, X):
        return True
    if isinstance(e, (Const, Y)):
        return False
    if isinstance(e, Loop):
        return _free_x_used(e.count) or _free_x_used(e.init)
    if isinstance(e, Loop2):
        return _free_x_used(e.count) or _free_x_used(e.init1) or _free_x_used(e.init2)
    if isinstance(e, Compr):
        return _free_x_used(e.index)
    return any(_free_x_used(c) for c in children(e))


def _loop_free(e: Expr) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, (Loop, Loop2, Compr)):
            return False
        stack.extend(children(node))
    return True


def _scope_subtrees(roots: list[Expr]) -> list[Expr]:
    """All subtrees within one binder scope, with multiplicity."""
    out: list[Expr] = []
    stack = list(roots)
    while stack:
        node = stack.pop()
        out.append(node)
        if isinstance(node, Loop):
            stack.extend((node.count, node.init))
        elif isinstance(node, Loop2):
            stack.extend((node.count, node.init1, node.init2))
        elif isinstance(node, Compr):
            stack.append(node.index)
        else:
            stack.extend(children(node))
    return out


class _Emitter:
    """Stateful single pass assigning helper names in emission order."""

    def __init__(self, cse: bool):
        self.cse = cse
        self.helpers: list[str | None] = []
        self.counters = {"loop": 0, "loop2": 0, "compr": 0}

    def _cse_lets(self, roots: list[Expr], base_repl: dict) -> tuple[list[str], dict]:
        """Let-bindings for repeated loop-free subtrees within a scope."""
        if not self.cse:
            return [], dict(base_repl)
        counts: dict[Expr, int] = {}
        for sub in _scope_subtrees(roots):
            if _loop_free(sub) and count_nodes(sub) >= CSE_MIN_NODES:
                counts[sub] = counts.get(sub, 0) + 1
        cands = [s for s, c in counts.items() if c >= 2 and s not in base_repl]
        cands.sort(key=lambda s: (count_nodes(s), repr(s)))
        lets: list[str] = []
        repl = dict(base_repl)
        for i, cand in enumerate(cands, 1):
            txt = self.expr(cand, {k: v for k, v in repl.items() if k != cand})
            name = f"t{len(base_repl) + i}"
            lets.append(f"let {name} : ℤ := {txt}")
            repl[cand] = name
        return lets, repl

    def expr(self, e: Expr, repl: dict) -> str:
        name = repl.get(e)
        if name is not None:
            return name
        if isinstance(e, Const):
            return str(e.value) if e.value >= 0 else f"({e.value})"
        if isinstance(e, X):
            return "x"
        if isinstance(e, Y):
            return "y"
        if isinstance(e, Add):
            return f"({self.expr(e.left, repl)} + {self.expr(e.right, repl)})"
        if isinstance(e, Sub):
            return f"({self.expr(e.left, repl)} - {self.expr(e.right, repl)})"
        if isinstance(e, Mul):
            return f"({self.expr(e.left, repl)} * {self.expr(e.right, repl)})"
        if isinstance(e, Div):
            return f"(Int.fdiv {self.expr(e.left, repl)} {self.expr(e.right, repl)})"
        if isinstance(e, Mod):
            return f"(Int.fmod {self.expr(e.left, repl)} {self.expr(e.right, repl)})"
        if isinstance(e, Cond):
            return (
                f"(if {self.expr(e.test, repl)} ≤ 0"
                f" then {self.expr(e.then, repl)}"
                f" else {self.expr(e.other, repl)})"
            )
        if isinstance(e, Loop):
            return self._loop(e, repl)
        if isinstance(e, Loop2):
            return self._loop2(e, repl)
        if isinstance(e, Compr):
            return self._compr(e, repl)
        raise TypeError(f"not an Expr: {e!r}")

    def _reserve(self, kind: str) -> tuple[str, int]:
        self.counters[kind] += 1
        self.helpers.append(None)
        return f"{kind}_{self.counters[kind]}", len(self.helpers) - 1

    def _arm_rhs(self, lets: list[str], call: str) -> str:
        return "".join(f"{let}; " for let in lets) + call

    def _loop(self, e: Loop, repl: dict) -> str:
        hname, slot = self._reserve("loop")
        count = self.expr(e.count, repl)
        init = self.expr(e.init, repl)
        lets, brepl = self._cse_lets([e.body], {})
        body = self.expr(e.body, brepl)
        rhs = self._arm_rhs(lets, f"{hname} k {body} (y + 1)")
        self.helpers[slot] = (
            f"  {hname} : ℕ → ℤ → ℤ → ℤ\n"
            f"    | 0, x, _ => x\n"
            f"    | k + 1, x, y => {rhs}\n"
        )
        return f"({hname} (Int.toNat {count}) {init} 1)"

    def _loop2(self, e: Loop2, repl: dict) -> str:
        hname, slot = self._reserve("loop2")
        count = self.expr(e.count, repl)
        init1 = self.expr(e.init1, repl)
        init2 = self.expr(e.init2, repl)
        lets, brepl = self._cse_lets([e.f, e.g], {})
        f_txt = self.expr(e.f, brepl)
        g_txt = self.expr(e.g, brepl)
        rhs = self._arm_rhs(lets, f"{hname} k {f_txt} {g_txt}")
        self.helpers[slot] = (
            f"  {hname} : ℕ → ℤ → ℤ → ℤ\n"
            f"    | 0, x, _ => x\n"
            f"    | k + 1, x, y => {rhs}\n"
        )
        return f"({hname} (Int.toNat {count}) {init1} {init2})"

    def _compr(self, e: Compr, repl: dict) -> str:
        hname, slot = self._reserve("compr")
        index = self.expr(e.index, repl)
        body0 = _subst_free_y(e.body)  # the searched predicate sees y = 0
        lets, brepl = self._cse_lets([body0], {})
        body = self.expr(body0, brepl)
        rhs = self._arm_rhs(
            lets,
            f"if {body} ≤ 0"
            f" then (if y ≤ 0 then x else {hname} fuel (x + 1) (y - 1))"
            f" else {hname} fuel (x + 1) y",
        )
        self.helpers[slot] = (
            f"  -- ascending search, fuel {COMPR_FUEL}: returns the current\n"
            f"  -- candidate unverified if fuel runs out before the hit\n"
            f"  {hname} : ℕ → ℤ → ℤ → ℤ\n"
            f"    | 0, x, _ => x\n"
            f"    | fuel + 1, x, y => {rhs}\n"
        )
        return f"({hname} {COMPR_FUEL} 0 {index})"


def dsl_to_lean(
    e: Expr,
    name: str,
    mode: str = "simplified",
    meta: DefinitionMeta | None = None,
) -> LeanSource:
    """Emit a Lean definition for ``e``; deterministic text."""
    if not IDENT_RE.match(name):
        raise InvalidIdentifier(f"not a Lean identifier: {name!r}")
    if mode not in ("direct", "simplified"):
        raise ValueError(f"unknown mode {mode!r}")
    expr = optimize(e) if mode == "simplified" else e
    expr = _subst_free_y(expr)
    emitter = _Emitter(cse=(mode == "simplified"))
    lets, repl = emitter._cse_lets([expr], {})
    body = emitter.expr(expr, repl)
    lines = []
    if meta is not None:
        lines.append(emit_attribute_header(meta).text.rstrip("\n"))
    lines.append(f"def {name} (n : ℕ) : ℤ :=")
    if _free_x_used(expr):
        lines.append("  let x : ℤ := Int.ofNat n")
    for let in lets:
        lines.append(f"  {let}")
    lines.append(f"  {body}")
    if emitter.helpers:
        lines.append("where")
        for block in emitter.helpers:
            lines.append(block.rstrip("\n"))
    return LeanSource("\n".join(lines) + "\n", "definition", name)


def emit_theorems(specs: list[TheoremSpec]) -> LeanSource:
    """One `theorem <f>_thm_<i> : <f> <i> = <j> := by <tactic>` per spec."""
    if not specs:
        raise EmptySpecList("no theorem specs")
    names = {s.func_name for s in specs}
    if len(names) > 1:
        raise MixedFunctionNames(f"multiple function names: {sorted(names)}")
    lines = []
    for s in sorted(specs, key=lambda s: s.index):
        j = str(s.value) if s.value >= 0 else f"(-{-s.value})"
        lines.append(f"theorem {s.func_name}_thm_{s.index} : {s.func_name} {s.index} = {j} := by {s.tactic}")
    return LeanSource("\n".join(lines) + "\n", "theorem_block", specs[0].func_name)


def emit_attribute_header(meta: DefinitionMeta) -> LeanSource:
    if not TAG_RE.match(meta.tag):
        raise InvalidTag(f"not an OEIS tag: {meta.tag!r}")
    if meta.derive and meta.max_index < meta.offset:
        raise ValueError("derive requires maxIndex >= offset")
    derive = "true" if meta.derive else "false"
    text = (
        f"@[OEIS := {meta.tag}, offset := {meta.offset}, "
        f"maxIndex := {meta.max_index}, derive := {derive}]\n"
    )
    return LeanSource(text, "attribute_header")


def assemble_file(definition: LeanSource, theorems: LeanSource | None = None) -> LeanSource:
    """Full file: import, blank, definition, blank, theorem block."""
    parts = ["import Mathlib\n", "\n", definition.text]
    if theorems is not None:
        parts.extend(["\n", theorems.text])
    return LeanSource("".join(parts), "file", definition.name)


# --- structural checking -------------------------------------------------

_HEADER_RE = re.compile(
    r"@\[OEIS := A[0-9]{6,7}, offset := -?[0-9]+, "
    r"maxIndex := -?[0-9]+, derive := (?:true|false)\]\Z"
)
_DEF_RE = re.compile(r"def ([A-Za-z_][A-Za-z0-9_]*) \(n : ℕ\) : ℤ :=\Z")
_THEOREM_RE = re.compile(
    r"theorem ([A-Za-z_][A-Za-z0-9_]*)_thm_([0-9]+) : "
    r"([A-Za-z_][A-Za-z0-9_]*) ([0-9]+) = (?:-?[0-9]+|\(-[0-9]+\)) := by \S.*\Z"
)
_HELPER_SIG_RE = re.compile(r"  [A-Za-z_][A-Za-z0-9_]* : ℕ → ℤ → ℤ → ℤ\Z")
_ARM_RE = re.compile(r"    \| .+ => .+\Z")

_PAIRS = {")": "(", "]": "[", "}": "{"}


def _scan_balance(text: str, diags: list[dict]) -> None:
    stack: list[tuple[str, int]] = []
    line = 1
    for ch in text:
        if ch == "\n":
            line += 1
        elif ch in "([{":
            stack.append((ch, line))
        elif ch in ")]}":
            if not stack or stack[-1][0] != _PAIRS[ch]:
                diags.append({"line": line, "message": f"unbalanced {ch!r}"})
                return
            stack.pop()
    if stack:
        ch, line = stack[-1]
        diags.append({"line": line, "message": f"unclosed {ch!r}"})


def check_structure(text: str) -> tuple[bool, list[dict]]:
    """Check conformance to this generator's emitted-file shapes.

    This validates template structure only, not Lean semantics; a pass
    here does not imply the toolchain would accept the file.
    """
    diags: list[dict] = []
    if not text.strip():
        return False, [{"line": 1, "message": "empty source"}]
    _scan_balance(text, diags)
    seen_def = False
    for i, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            continue
        if line != line.rstrip():
            diags.append({"line": i, "message": "trailing whitespace"})
            continue
        stripped = line.strip()
        if stripped.startswith("--"):
            continue
        if line.startswith("import "):
            if not IDENT_RE.match(line[len("import "):].strip().replace(".", "")):
                diags.append({"line": i, "message": "malformed import"})
            continue
        if line.startswith("@["):
            if not _HEADER_RE.match(line):
                diags.append({"line": i, "message": "malformed attribute header"})
            continue
        if line.startswith("def "):
            if not _DEF_RE.match(line):
                diags.append({"line": i, "message": "definition does not match template"})
            seen_def = True
            continue
        if line == "where":
            if not seen_def:
                diags.append({"line": i, "message": "where before any definition"})
            continue
        if line.startswith("theorem "):
            m = _THEOREM_RE.match(line)
            if not m:
                diags.append({"line": i, "message": "theorem does not match template"})
            elif m.group(1) != m.group(3) or m.group(2) != m.group(4):
                diags.append({"line": i, "message": "theorem name does not match statement"})
            continue
        if line.startswith("    "):
            if not _ARM_RE.match(line):
                diags.append({"line": i, "message": "malformed match arm"})
            continue
        if line.startswith("  "):
            body = line[2:]
            if (
                body.startswith("let ")
                or _HELPER_SIG_RE.match(line)
                or body[0] in "(-0123456789"
                or body[0].isalpha()
            ):
                continue
            diags.append({"line": i, "message": "unrecognized indented line"})
            continue
        diags.append({"line": i, "message": f"unrecognized line: {stripped[:40]!r}"})
    return not diags, diags
