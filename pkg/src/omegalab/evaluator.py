"""Budgeted, total-semantics evaluator with a bit-tape input channel.

A program is a sequence of top-level expressions, every one but the last a
``define`` form.  Evaluation is metered: each evaluator entry for any
subexpression costs exactly one step, and exhausting the step budget is an
ordinary outcome, not an error.  All anomalies are outcome values; no
program text that parses can raise.

Total semantics, chosen for a two-valued halting census:
  * unbound atoms evaluate to themselves,
  * ``head``/``tail`` of an atom yield the atom / the empty list,
  * missing operands read as ``()``, extra operands are ignored,
  * applying a non-function value yields that value.

Form names (``define if = ' quote head car tail cdr join atom? lambda
read-bit display run-remaining``) are reserved: dispatch happens before
lookup, so bindings never shadow them.

The machine runs on an explicit work stack, so deep recursion in evaluated
programs cannot overflow the host stack; configured step caps are the only
depth limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .sexpr import (
    QUOTE_ATOM,
    SExpr,
    TEXT_CHARS,
    parse_program_cached,
)

DEFAULT_PROBE_CAP = 2**22


@dataclass(frozen=True, slots=True)
class BitTape:
    """An immutable 0/1 string plus the index of the next unread bit."""

    bits: str = ""
    cursor: int = 0

    def __post_init__(self):
        if self.bits.strip("01"):
            raise ValueError("tape bits must be a string over 0/1")
        if not 0 <= self.cursor <= len(self.bits):
            raise ValueError("tape cursor out of range")

    @property
    def remaining(self) -> int:
        return len(self.bits) - self.cursor


@dataclass(frozen=True, slots=True)
class Halted:
    value: SExpr
    bits_consumed: int
    steps: int
    emitted: tuple = ()


@dataclass(frozen=True, slots=True)
class AbortOverrun:
    """The program asked for a bit beyond the end of its tape."""

    steps: int
    emitted: tuple = ()


@dataclass(frozen=True, slots=True)
class OutOfTime:
    emitted: tuple = ()


@dataclass(frozen=True, slots=True)
class MalformedProgram:
    reason: str


Outcome = Union[Halted, AbortOverrun, OutOfTime, MalformedProgram]

# MalformedProgram reasons.
NO_SEPARATOR = "NoSeparator"
BAD_CHAR = "BadChar"
PARSE_FAIL = "ParseFail"
NON_DEFINE_FORM = "NonDefineForm"
EMPTY_PROGRAM = "EmptyProgram"


class CapExceeded(Exception):
    """step_budget_probe gave up: no halt within the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"no halt within budget cap {cap}")
        self.cap = cap


class Env:
    """Name bindings with innermost-first lookup."""

    __slots__ = ("bindings", "parent")

    def __init__(self, bindings: dict, parent: Optional["Env"]):
        self.bindings = bindings
        self.parent = parent


class Closure:
    __slots__ = ("params", "body", "env")

    def __init__(self, params: tuple, body: SExpr, env: Env):
        self.params = params
        self.body = body
        self.env = env


Value = Union[str, tuple, Closure]


def is_define_form(expr: SExpr) -> bool:
    return type(expr) is tuple and len(expr) > 0 and expr[0] == "define"


def render_value(value: Value) -> SExpr:
    """Map a runtime value to a plain expression; closures read back as
    their (lambda (params) body) source."""
    if type(value) is str:
        return value
    if type(value) is Closure:
        return ("lambda", value.params, value.body)
    if not _contains_closure(value):
        return value
    return _rebuild(value)


def _contains_closure(value: tuple) -> bool:
    stack = [value]
    while stack:
        node = stack.pop()
        if type(node) is Closure:
            return True
        if type(node) is tuple:
            stack.extend(node)
    return False


def _rebuild(root: tuple) -> tuple:
    # Bottom-up copy; memo on node identity preserves sharing so values
    # built as DAGs do not blow up into trees.
    memo: dict[int, SExpr] = {}
    stack: list[list] = [[root, 0, []]]
    result: SExpr = ()
    while stack:
        frame = stack[-1]
        node, i, acc = frame
        if i < len(node):
            frame[1] = i + 1
            child = node[i]
            if type(child) is str:
                acc.append(child)
            elif type(child) is Closure:
                acc.append(("lambda", child.params, child.body))
            else:
                hit = memo.get(id(child))
                if hit is not None:
                    acc.append(hit)
                else:
                    stack.append([child, 0, []])
        else:
            stack.pop()
            built = tuple(acc)
            memo[id(node)] = built
            if stack:
                stack[-1][2].append(built)
            else:
                result = built
    return result


# Work-stack opcodes.
_EV = 0
_DROP = 1
_BRANCH = 2
_CALL = 3
_EQ = 4
_HEAD = 5
_TAIL = 6
_JOIN = 7
_ATOMQ = 8
_DISPLAY = 9
_BIND = 10

_MISS = object()


def _arg(expr: tuple, i: int) -> SExpr:
    return expr[i] if len(expr) > i else ()


def _push_sequence(work: list, exprs: tuple, env: Env) -> None:
    work.append((_EV, exprs[-1], env))
    for i in range(len(exprs) - 2, -1, -1):
        work.append((_DROP,))
        work.append((_EV, exprs[i], env))


def _scan_embedded(bits: str, cursor: int):
    """Read 8-bit characters up to the separator byte and parse them.

    Returns (exprs, new_cursor), or None on any failure: running off the
    tape, a byte outside the text alphabet, or an unparseable/empty prefix.
    """
    n = len(bits)
    chars: list[str] = []
    while True:
        if cursor + 8 > n:
            return None
        byte = int(bits[cursor : cursor + 8], 2)
        cursor += 8
        if byte == 0:
            break
        ch = chr(byte)
        if ch not in TEXT_CHARS:
            return None
        chars.append(ch)
    exprs = parse_program_cached("".join(chars))
    if exprs is None:
        return None
    return exprs, cursor


def _global_env(env: Env) -> Env:
    while env.parent is not None:
        env = env.parent
    return env


def evaluate(program: Iterable[SExpr], tape: BitTape, budget: int) -> Outcome:
    """Run a program against a tape under a step budget.

    Deterministic in (program, tape contents, budget).  The result is one of
    the four outcome values; see the module docstring for the semantics.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    program = tuple(program)
    if not program:
        return MalformedProgram(EMPTY_PROGRAM)
    for form in program[:-1]:
        if not is_define_form(form):
            return MalformedProgram(NON_DEFINE_FORM)

    bits = tape.bits
    cursor = start = tape.cursor
    nbits = len(bits)
    steps = 0
    emitted: list = []
    made_closure = False
    genv = Env({}, None)
    vals: list = []
    work: list = []
    _push_sequence(work, program, genv)

    while work:
        task = work.pop()
        op = task[0]

        if op == _EV:
            steps += 1
            if steps > budget:
                return OutOfTime(tuple(emitted))
            expr = task[1]
            env = task[2]
            if type(expr) is str:
                e = env
                while e is not None:
                    v = e.bindings.get(expr, _MISS)
                    if v is not _MISS:
                        vals.append(v)
                        break
                    e = e.parent
                else:
                    vals.append(expr)
                continue
            if not expr:
                vals.append(())
                continue
            head = expr[0]
            if type(head) is str:
                if head == QUOTE_ATOM or head == "quote":
                    vals.append(_arg(expr, 1))
                    continue
                if head == "if":
                    work.append((_BRANCH, _arg(expr, 2), _arg(expr, 3), env))
                    work.append((_EV, _arg(expr, 1), env))
                    continue
                if head == "=":
                    work.append((_EQ,))
                    work.append((_EV, _arg(expr, 2), env))
                    work.append((_EV, _arg(expr, 1), env))
                    continue
                if head == "head" or head == "car":
                    work.append((_HEAD,))
                    work.append((_EV, _arg(expr, 1), env))
                    continue
                if head == "tail" or head == "cdr":
                    work.append((_TAIL,))
                    work.append((_EV, _arg(expr, 1), env))
                    continue
                if head == "join":
                    work.append((_JOIN,))
                    work.append((_EV, _arg(expr, 2), env))
                    work.append((_EV, _arg(expr, 1), env))
                    continue
                if head == "atom?":
                    work.append((_ATOMQ,))
                    work.append((_EV, _arg(expr, 1), env))
                    continue
                if head == "display":
                    work.append((_DISPLAY,))
                    work.append((_EV, _arg(expr, 1), env))
                    continue
                if head == "read-bit":
                    if cursor >= nbits:
                        return AbortOverrun(steps, tuple(emitted))
                    vals.append(bits[cursor])
                    cursor += 1
                    continue
                if head == "run-remaining":
                    scanned = _scan_embedded(bits, cursor)
                    if scanned is None:
                        return AbortOverrun(steps, tuple(emitted))
                    inner, cursor = scanned
                    ok = True
                    for f in inner[:-1]:
                        if not is_define_form(f):
                            ok = False
                            break
                    if not ok:
                        return AbortOverrun(steps, tuple(emitted))
                    _push_sequence(work, inner, Env({}, None))
                    continue
                if head == "lambda":
                    spec = _arg(expr, 1)
                    params = (
                        tuple(p for p in spec if type(p) is str)
                        if type(spec) is tuple
                        else ()
                    )
                    made_closure = True
                    vals.append(Closure(params, _arg(expr, 2), env))
                    continue
                if head == "define":
                    root = _global_env(env)
                    if (
                        len(expr) > 1
                        and type(expr[1]) is tuple
                        and expr[1]
                        and type(expr[1][0]) is str
                    ):
                        name = expr[1][0]
                        params = tuple(p for p in expr[1][1:] if type(p) is str)
                        made_closure = True
                        root.bindings[name] = Closure(params, _arg(expr, 2), root)
                        vals.append(name)
                    elif len(expr) > 2 and type(expr[1]) is str:
                        work.append((_BIND, expr[1], root))
                        work.append((_EV, expr[2], env))
                    elif len(expr) == 2 and type(expr[1]) is str:
                        root.bindings[expr[1]] = ()
                        vals.append(expr[1])
                    else:
                        vals.append(())
                    continue
            # Application: operator first, then operands left to right.
            argc = len(expr) - 1
            work.append((_CALL, argc))
            for i in range(argc, 0, -1):
                work.append((_EV, expr[i], env))
            work.append((_EV, head, env))
            continue

        if op == _CALL:
            argc = task[1]
            if argc:
                args = vals[-argc:]
                del vals[-argc:]
            else:
                args = []
            fn = vals.pop()
            if type(fn) is Closure:
                params = fn.params
                bindings = {}
                for i, p in enumerate(params):
                    bindings[p] = args[i] if i < len(args) else ()
                work.append((_EV, fn.body, Env(bindings, fn.env)))
            else:
                vals.append(fn)
        elif op == _BRANCH:
            cond = vals.pop()
            work.append((_EV, task[1] if cond != "false" else task[2], task[3]))
        elif op == _EQ:
            b = vals.pop()
            a = vals.pop()
            if made_closure:
                a = render_value(a)
                b = render_value(b)
            vals.append("true" if a == b else "false")
        elif op == _HEAD:
            v = vals.pop()
            if type(v) is tuple:
                vals.append(v[0] if v else ())
            else:
                vals.append(v)
        elif op == _TAIL:
            v = vals.pop()
            if type(v) is tuple:
                vals.append(v[1:] if v else ())
            else:
                vals.append(())
        elif op == _JOIN:
            y = vals.pop()
            x = vals.pop()
            vals.append((x,) + y if type(y) is tuple else (x,))
        elif op == _ATOMQ:
            v = vals.pop()
            vals.append("true" if type(v) is str else "false")
        elif op == _DISPLAY:
            v = vals[-1]
            emitted.append(render_value(v) if made_closure else v)
        elif op == _DROP:
            vals.pop()
        else:  # _BIND
            v = vals.pop()
            task[2].bindings[task[1]] = v
            vals.append(task[1])

    final = vals.pop()
    if made_closure:
        final = render_value(final)
    return Halted(final, cursor - start, steps, tuple(emitted))


def step_budget_probe(
    program: Iterable[SExpr], tape: BitTape, cap: int = DEFAULT_PROBE_CAP
) -> int:
    """Smallest power-of-two budget at which the program halts.

    Doubles from 1; the returned budget b halts while b // 2 did not (or b
    is the initial budget).  Raises CapExceeded past the cap.
    """
    program = tuple(program)
    b = 1
    while b <= cap:
        if isinstance(evaluate(program, tape, b), Halted):
            return b
        b *= 2
    raise CapExceeded(cap)
