"""Desk-scale executable versions of three classic undecidability setups.

* A diagonal over enumerated digit programs: build a digit sequence that
  provably differs from every machine-produced digit sequence on the
  diagonal.
* Theories as generator programs: an axiomatic system is modeled by the
  program that emits its statements one by one on the side channel, and
  its size in bits stands in for the information content of the axioms.
  (A system proving facts about its own unprovables is represented only by
  this reduction; there is no proof checker here.)
* A filter for emitted claims about individual bits of the halting
  probability, counted side by side against the emitting program's size.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterator

from . import sexpr
from .evaluator import AbortOverrun, Halted, MalformedProgram, OutOfTime
from .machine import (
    BinaryProgram,
    DEFAULT_CONFIG,
    MachineConfig,
    encode_program,
    run_program,
)
from .dovetail import parseable_texts_of_length
from .sexpr import QUOTE_ATOM, SExpr

DIGITS = frozenset("0123456789")


def digit_programs() -> Iterator[SExpr]:
    """Single-expression program texts in enumeration order (shortest
    first, lexicographic within a length)."""
    for chars in count(1):
        for text in parseable_texts_of_length(chars):
            exprs = sexpr.parse_program_cached(text)
            if exprs and len(exprs) == 1:
                yield exprs[0]


def _nth_digit_program(n: int) -> SExpr:
    if n < 1:
        raise ValueError("digit program indices start at 1")
    for i, expr in enumerate(digit_programs(), start=1):
        if i == n:
            return expr
    raise AssertionError("unreachable")


def unary(m: int) -> tuple:
    """m as a list of m ones."""
    return ("1",) * m


def digit_output_of(expr: SExpr, m: int, budget: int,
                    config: MachineConfig = DEFAULT_CONFIG) -> int | None:
    """Digit produced by applying one program to position m (in unary).

    The digit is the head of the halted value when that head is a single
    0-9 atom; anything else -- no halt in budget, an invalid halt, or a
    non-digit value -- is no output.
    """
    program = encode_program(((expr, (QUOTE_ATOM, unary(m))),), "", config)
    result = run_program(program, budget, config)
    if not result.valid_halt:
        return None
    assert isinstance(result.outcome, Halted)
    value = result.outcome.value
    head = value[0] if type(value) is tuple and value else value
    if type(head) is str and len(head) == 1 and head in DIGITS:
        return int(head)
    return None


def digit_program_output(n: int, m: int, budget: int,
                         config: MachineConfig = DEFAULT_CONFIG) -> int | None:
    """Digit at position m from the n-th enumerated digit program."""
    return digit_output_of(_nth_digit_program(n), m, budget, config)


@dataclass(frozen=True, slots=True)
class DiagonalRow:
    index: int
    program_text: str
    produced: int | None
    diagonal_digit: int


@dataclass(frozen=True, slots=True)
class DiagonalTable:
    budget: int
    rows: tuple[DiagonalRow, ...]

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(row.diagonal_digit for row in self.rows)


def diagonal_table(n_rows: int, budget: int,
                   config: MachineConfig = DEFAULT_CONFIG) -> DiagonalTable:
    """Diagonal digits over the first n_rows digit programs.

    Row n is 2 when program n produces digit 3 at position n, else 3 --
    including when the program produces no digit at all within the budget,
    in which case the guaranteed disagreement is vacuous at this budget.
    """
    if n_rows < 1:
        raise ValueError("need at least one row")
    rows = []
    gen = digit_programs()
    for n in range(1, n_rows + 1):
        expr = next(gen)
        produced = digit_output_of(expr, n, budget, config)
        rows.append(
            DiagonalRow(
                n,
                sexpr.print_canonical(expr),
                produced,
                2 if produced == 3 else 3,
            )
        )
    return DiagonalTable(budget, tuple(rows))


def diagonal_digits(n_rows: int, budget: int,
                    config: MachineConfig = DEFAULT_CONFIG) -> tuple[int, ...]:
    return diagonal_table(n_rows, budget, config).digits


@dataclass(frozen=True, slots=True)
class TheoryRun:
    """One budgeted run of a statement-generating program."""

    theory: BinaryProgram
    size_bits: int
    theorems: tuple[SExpr, ...]
    budget: int
    budget_consumed: int
    terminal: str  # "out-of-time" | "halted" | "halted-invalid" | "aborted" | "malformed"

    @property
    def endless(self) -> bool:
        return self.terminal == "out-of-time"


def run_theory(theory: BinaryProgram, budget: int,
               config: MachineConfig = DEFAULT_CONFIG) -> TheoryRun:
    """Collect the statements a generator program emits within a budget.

    Running out of time is the normal terminal state for a real generator;
    a theory that stops is flagged by its halting/abort terminal instead.
    Statements are de-duplicated in order of first emission.
    """
    result = run_program(theory, budget, config)
    out = result.outcome
    if isinstance(out, OutOfTime):
        emitted, consumed, terminal = out.emitted, budget, "out-of-time"
    elif isinstance(out, Halted):
        emitted, consumed = out.emitted, out.steps
        terminal = "halted" if result.valid_halt else "halted-invalid"
    elif isinstance(out, AbortOverrun):
        emitted, consumed, terminal = out.emitted, out.steps, "aborted"
    else:
        assert isinstance(out, MalformedProgram)
        emitted, consumed, terminal = (), 0, "malformed"
    seen = set()
    theorems = []
    for statement in emitted:
        if statement not in seen:
            seen.add(statement)
            theorems.append(statement)
    return TheoryRun(
        theory, len(theory.bits), tuple(theorems), budget, consumed, terminal
    )


@dataclass(frozen=True, slots=True)
class OmegaBitClaims:
    """Bit-of-omega claims harvested from a theory's statement stream."""

    claims: dict[int, int]
    inconsistent_positions: tuple[int, ...]
    claim_count: int
    theory_bits: int

    @property
    def consistent(self) -> bool:
        return not self.inconsistent_positions


def _claim_shape(statement: SExpr) -> tuple[int, int] | None:
    # (omega-bit POSITION BIT) with a unary position list and a 0/1 bit.
    if type(statement) is not tuple or len(statement) != 3:
        return None
    tag, position, bit = statement
    if tag != "omega-bit" or bit not in ("0", "1"):
        return None
    if type(position) is not tuple or any(a != "1" for a in position):
        return None
    return len(position), int(bit)


def omega_bit_claims(run: TheoryRun) -> OmegaBitClaims:
    """Filter the run's statements down to claims of the canonical shape
    (omega-bit POSITION BIT).

    Contradictory claims (both bits at one position) are reported as
    inconsistencies.  The claim count sits next to the theory's size in
    bits; the comparison is reported, never asserted, since how many bits
    a theory of a given size can settle is a property of the machine.
    """
    by_position: dict[int, set[int]] = {}
    for statement in run.theorems:
        shaped = _claim_shape(statement)
        if shaped is not None:
            position, bit = shaped
            by_position.setdefault(position, set()).add(bit)
    claims = {
        p: next(iter(bits))
        for p, bits in sorted(by_position.items())
        if len(bits) == 1
    }
    inconsistent = tuple(p for p, bits in sorted(by_position.items()) if len(bits) > 1)
    return OmegaBitClaims(claims, inconsistent, len(claims), run.size_bits)
