"""Fair enumeration and interleaved execution of every binary program.

Programs are enumerated shortest first (lexicographic within a length);
bit strings that do not decode are skipped, since they cannot halt and
contribute nothing to the halting probability.  The census records, for
every enumerated program, the latest known run status.  Statuses only ever
move from unknown to a decided state and never change afterwards, so the
census after stage t is a pure function of t no matter how the work was
scheduled.

Dovetail schedule: at stage t every program of at most ``16 + t`` bits
(capped by the census's corpus bound) gets a budget of ``2**t`` steps.
Every program therefore eventually receives an unbounded budget.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from . import sexpr
from .dyadic import DyadicRational
from .evaluator import AbortOverrun, Halted, MalformedProgram
from .machine import (
    BinaryProgram,
    DEFAULT_CONFIG,
    MachineConfig,
    bits_to_hex,
    config_hash,
    hex_to_bits,
    run_program,
)

MIN_PROGRAM_BITS = 16  # one text character plus the separator byte

STATUS_HALTED_VALID = "halted-valid"
STATUS_HALTED_INVALID = "halted-invalid"
STATUS_ABORTED = "aborted"
STATUS_UNKNOWN = "unknown"

_CENSUS_MAGIC = "omegalab census 1"


class VersionMismatch(Exception):
    """Census was produced by a machine with different semantics."""


class CorruptFile(Exception):
    """Census file failed structural validation."""


class StageCapExceeded(Exception):
    """The bound never reached the requested prefix within the stage cap."""

    def __init__(self, cap: int):
        super().__init__(f"omega bound did not reach the target by stage {cap}")
        self.cap = cap


@dataclass(slots=True)
class Record:
    """Latest known status of one enumerated program.

    steps holds the halting/abort step count for decided programs and the
    largest budget survived for unknown ones.
    """

    bits: str
    status: str = STATUS_UNKNOWN
    steps: int = 0
    value_text: str | None = None

    @property
    def decided(self) -> bool:
        return self.status != STATUS_UNKNOWN


@dataclass(slots=True)
class Census:
    """Persistent map from enumerated programs to their run records."""

    version: str
    config_digest: str
    max_bits: int
    stage: int = 0
    records: dict[str, Record] = field(default_factory=dict)

    @property
    def enrolled_bits(self) -> int:
        """Largest program size already entered into the schedule."""
        return min(MIN_PROGRAM_BITS + self.stage, self.max_bits) if self.stage else 0


def new_census(max_bits: int, config: MachineConfig = DEFAULT_CONFIG) -> Census:
    if max_bits < MIN_PROGRAM_BITS:
        raise ValueError(f"max_bits must be >= {MIN_PROGRAM_BITS}")
    return Census(config.version, config_hash(config), max_bits)


# --- enumeration ----------------------------------------------------------

_SORTED_TEXT_CHARS = tuple(sorted(sexpr.TEXT_CHARS))


@lru_cache(maxsize=None)
def parseable_texts_of_length(k: int) -> tuple[str, ...]:
    """All parseable program texts of exactly k characters, in byte order."""
    found = []
    for combo in itertools.product(_SORTED_TEXT_CHARS, repeat=k):
        text = "".join(combo)
        try:
            if sexpr.parse(text):
                found.append(text)
        except sexpr.SExprError:
            pass
    return tuple(found)


@lru_cache(maxsize=None)
def parseable_texts_upto(max_chars: int) -> tuple[str, ...]:
    """All parseable texts of 1..max_chars characters, lexicographic."""
    pool: list[str] = []
    for k in range(1, max_chars + 1):
        pool.extend(parseable_texts_of_length(k))
    return tuple(sorted(pool))


def enumerate_programs(
    max_bits: int,
    min_bits: int = MIN_PROGRAM_BITS,
    config: MachineConfig = DEFAULT_CONFIG,
) -> Iterator[BinaryProgram]:
    """Every decodable program of min_bits..max_bits bits, exactly once,
    shorter first and lexicographic within a length.

    Decodable bit strings are exactly text-bytes + separator + free data
    bits, so the stream is generated from the cached parseable-text pool
    rather than by trying every bit string.
    """
    sep = f"{config.separator_byte:08b}"
    for length in range(max(min_bits, MIN_PROGRAM_BITS), max_bits + 1):
        max_chars = (length - 8) // 8
        for text in parseable_texts_upto(max_chars):
            data_len = length - 8 * len(text) - 8
            if data_len < 0:
                continue
            head = "".join(f"{ord(c):08b}" for c in text) + sep
            if data_len == 0:
                yield BinaryProgram(head)
            else:
                for value in range(1 << data_len):
                    yield BinaryProgram(head + format(value, f"0{data_len}b"))


# --- the dovetail ---------------------------------------------------------


def _run_pending(args: tuple[str, int]) -> tuple[str, int, str | None]:
    """Worker: run one program, reduce the outcome to record fields."""
    bits, budget = args
    result = run_program(BinaryProgram(bits), budget)
    out = result.outcome
    if isinstance(out, Halted):
        status = STATUS_HALTED_VALID if result.valid_halt else STATUS_HALTED_INVALID
        return status, out.steps, sexpr.print_canonical(out.value)
    if isinstance(out, AbortOverrun):
        return STATUS_ABORTED, out.steps, None
    if isinstance(out, MalformedProgram):
        # Decodable but structurally unrunnable (non-define leading form).
        return STATUS_ABORTED, 0, None
    return STATUS_UNKNOWN, budget, None


def _check_version(census: Census, config: MachineConfig) -> None:
    if census.version != config.version or census.config_digest != config_hash(config):
        raise VersionMismatch(
            f"census built by {census.version}/{census.config_digest}, "
            f"machine is {config.version}/{config_hash(config)}"
        )


def advance(
    census: Census,
    stages: int,
    jobs: int = 1,
    config: MachineConfig = DEFAULT_CONFIG,
) -> Census:
    """Run the next ``stages`` dovetail stages, updating the census in place.

    Work within a stage may be spread over ``jobs`` processes; the result is
    byte-identical either way because records are applied in enumeration
    order and statuses, once decided, are final.
    """
    _check_version(census, config)
    for _ in range(stages):
        t = census.stage + 1
        size_cap = min(MIN_PROGRAM_BITS + t, census.max_bits)
        budget = 2**t
        prev_cap = census.enrolled_bits
        if size_cap > prev_cap:
            for program in enumerate_programs(size_cap, prev_cap + 1, config):
                census.records[program.bits] = Record(program.bits)
        pending = [r for r in census.records.values() if not r.decided]
        if pending:
            work = [(r.bits, budget) for r in pending]
            for record, (status, steps, value_text) in zip(
                pending, _map_runs(work, jobs)
            ):
                record.status = status
                record.steps = steps
                record.value_text = value_text
        census.stage = t
    return census


def _map_runs(work: list[tuple[str, int]], jobs: int):
    if jobs <= 1 or len(work) < 2:
        return [_run_pending(item) for item in work]
    chunk = max(1, len(work) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_pending, work, chunksize=chunk))


def omega_lower_bound(census: Census) -> DyadicRational:
    """Exact sum of 2**-|p| over programs known to halt validly."""
    total = Fraction(0)
    for record in census.records.values():
        if record.status == STATUS_HALTED_VALID:
            total += Fraction(1, 2 ** len(record.bits))
    return DyadicRational(total)


@dataclass(frozen=True, slots=True)
class HaltingDecision:
    """Outcome of the bound-chasing halting classifier."""

    n_bits: int
    target: DyadicRational
    stop_stage: int
    bound: DyadicRational
    halting: tuple[str, ...]
    not_halting_relative: tuple[str, ...]


def decide_halting_via_omega(
    omega_prefix: DyadicRational,
    n_bits: int,
    census: Census,
    stage_cap: int = 64,
    jobs: int = 1,
    config: MachineConfig = DEFAULT_CONFIG,
) -> HaltingDecision:
    """Dovetail until the census bound reaches omega_prefix, then classify
    every program of at most n_bits bits.

    The caller must supply a trusted truncation of a lower bound (anything
    exceeding the reachable bound raises StageCapExceeded).  Programs that
    halted validly by the stopping stage are labeled halting; the rest are
    only not-halting *relative to this prefix*: the label is sound exactly
    when the prefix matches the first n_bits of the true halting
    probability, and every program already halted is always labeled
    correctly.
    """
    _check_version(census, config)
    if n_bits > census.max_bits:
        raise ValueError("n_bits exceeds the census corpus bound")
    bound = omega_lower_bound(census)
    while bound < omega_prefix:
        if census.stage >= stage_cap:
            raise StageCapExceeded(stage_cap)
        advance(census, 1, jobs, config)
        bound = omega_lower_bound(census)
    halting = []
    rest = []
    for program in enumerate_programs(n_bits, config=config):
        record = census.records.get(program.bits)
        if record is not None and record.status == STATUS_HALTED_VALID:
            halting.append(program.bits)
        else:
            rest.append(program.bits)
    return HaltingDecision(
        n_bits, omega_prefix, census.stage, bound, tuple(halting), tuple(rest)
    )


# --- persistence ----------------------------------------------------------


def save_census(census: Census, path) -> None:
    """Write the census as a line-oriented, diffable text file."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(f"{_CENSUS_MAGIC}\n")
        fh.write(f"version {census.version}\n")
        fh.write(f"config {census.config_digest}\n")
        fh.write(f"max-bits {census.max_bits}\n")
        fh.write(f"stage {census.stage}\n")
        fh.write(f"records {len(census.records)}\n")
        for record in census.records.values():
            value = record.value_text if record.value_text is not None else "-"
            fh.write(
                f"{bits_to_hex(record.bits)} {len(record.bits)} "
                f"{record.status} {record.steps} {value}\n"
            )
    os.replace(tmp, path)


_STATUSES = {
    STATUS_HALTED_VALID,
    STATUS_HALTED_INVALID,
    STATUS_ABORTED,
    STATUS_UNKNOWN,
}


def load_census(path, config: MachineConfig = DEFAULT_CONFIG) -> Census:
    """Read a census file; rejects other machine versions and truncated or
    mangled files."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _CENSUS_MAGIC:
        raise CorruptFile(f"{path}: not a census file")
    try:
        header = dict(line.split(" ", 1) for line in lines[1:6])
        version = header["version"]
        digest = header["config"]
        max_bits = int(header["max-bits"])
        stage = int(header["stage"])
        count = int(header["records"])
    except (KeyError, ValueError, IndexError) as exc:
        raise CorruptFile(f"{path}: bad header: {exc}") from None
    if version != config.version or digest != config_hash(config):
        raise VersionMismatch(
            f"{path}: census built by {version}/{digest}, "
            f"machine is {config.version}/{config_hash(config)}"
        )
    body = lines[6:]
    if len(body) != count:
        raise CorruptFile(f"{path}: expected {count} records, found {len(body)}")
    census = Census(version, digest, max_bits, stage)
    for line in body:
        try:
            hex_text, length_text, status, steps_text, value = line.split(" ", 4)
            bits = hex_to_bits(hex_text, int(length_text))
            steps = int(steps_text)
        except ValueError as exc:
            raise CorruptFile(f"{path}: bad record {line!r}: {exc}") from None
        if status not in _STATUSES:
            raise CorruptFile(f"{path}: unknown status {status!r}")
        value_text = (
            value if status in (STATUS_HALTED_VALID, STATUS_HALTED_INVALID) else None
        )
        if bits in census.records:
            raise CorruptFile(f"{path}: duplicate record for {hex_text}/{length_text}")
        census.records[bits] = Record(bits, status, steps, value_text)
    return census
