"""The self-delimiting binary machine: program format and budgeted runs.

A binary program is the 8-bit ASCII encoding of a program text, a
separator byte 0x00, and zero or more raw data bits.  The text is run by
the evaluator and reads the data one bit at a time; there is no end-of-data
marker, so a run only counts as a valid halt when it consumed exactly the
data it was given.  Halting with bits left over is reported, but it is not
a valid halt: that rule is what makes the set of validly halting programs
prefix-free and the halting probability a probability.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from . import sexpr
from .evaluator import (
    BAD_CHAR,
    BitTape,
    Halted,
    MalformedProgram,
    NO_SEPARATOR,
    Outcome,
    PARSE_FAIL,
    evaluate,
)
from .sexpr import SExpr, TEXT_CHARS

MACHINE_VERSION = "omegalab-machine-1"


@dataclass(frozen=True, slots=True)
class MachineConfig:
    separator_byte: int = 0x00
    bits_per_char: int = 8
    default_budget: int = 4096
    version: str = MACHINE_VERSION


DEFAULT_CONFIG = MachineConfig()


def config_hash(config: MachineConfig = DEFAULT_CONFIG) -> str:
    """Short stable digest of the machine's semantic knobs."""
    text = (
        f"sep={config.separator_byte};bpc={config.bits_per_char};"
        f"version={config.version}"
    )
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def bits_to_hex(bits: str) -> str:
    """Hex of the bit string, last byte zero-padded on the right."""
    if not bits:
        return ""
    padded = bits + "0" * (-len(bits) % 8)
    return bytes(
        int(padded[i : i + 8], 2) for i in range(0, len(padded), 8)
    ).hex()


def hex_to_bits(hex_text: str, bit_length: int) -> str:
    raw = bytes.fromhex(hex_text)
    if len(raw) != (bit_length + 7) // 8:
        raise ValueError("hex length does not match declared bit length")
    bits = "".join(f"{b:08b}" for b in raw)
    if bits[bit_length:].strip("0"):
        raise ValueError("nonzero padding bits after declared length")
    return bits[:bit_length]


@dataclass(frozen=True, slots=True)
class BinaryProgram:
    """A finite bit string, stored as a 0/1 text."""

    bits: str

    def __post_init__(self):
        if self.bits.strip("01"):
            raise ValueError("program bits must be a string over 0/1")

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def hex(self) -> str:
        return bits_to_hex(self.bits)

    @classmethod
    def from_hex(cls, hex_text: str, bit_length: int) -> "BinaryProgram":
        return cls(hex_to_bits(hex_text, bit_length))


@dataclass(frozen=True, slots=True)
class DecodedProgram:
    prefix: tuple[SExpr, ...]
    data: str
    text: str


def encode_program(
    prefix: Sequence[SExpr], data: str = "", config: MachineConfig = DEFAULT_CONFIG
) -> BinaryProgram:
    """Pack a program: 8 bits per canonical-text character, separator byte,
    then the raw data bits."""
    prefix = tuple(prefix)
    if not prefix:
        raise ValueError("prefix must contain at least one expression")
    if data.strip("01"):
        raise ValueError("data must be a string over 0/1")
    text = sexpr.print_program(prefix)
    chars = "".join(f"{ord(c):08b}" for c in text)
    return BinaryProgram(chars + f"{config.separator_byte:08b}" + data)


def encode_text(
    text: str, data: str = "", config: MachineConfig = DEFAULT_CONFIG
) -> BinaryProgram:
    """Parse program text and encode it (in canonical form)."""
    return encode_program(sexpr.parse(text), data, config)


_MALFORMED_NO_SEPARATOR = MalformedProgram(NO_SEPARATOR)
_MALFORMED_BAD_CHAR = MalformedProgram(BAD_CHAR)
_MALFORMED_PARSE_FAIL = MalformedProgram(PARSE_FAIL)


def decode_program(
    program: Union[BinaryProgram, str], config: MachineConfig = DEFAULT_CONFIG
) -> Union[DecodedProgram, MalformedProgram]:
    """Split a bit string into (prefix expressions, data bits).

    Exact inverse of encode_program on its image.  Returns a
    MalformedProgram value when there is no byte-aligned separator, a byte
    outside the text alphabet, or a prefix that does not parse to at least
    one expression.
    """
    bits = program.bits if type(program) is BinaryProgram else program
    n = len(bits)
    sep = config.separator_byte
    i = 0
    prefix_bytes: list[int] = []
    while True:
        if i + 8 > n:
            return _MALFORMED_NO_SEPARATOR
        byte = int(bits[i : i + 8], 2)
        i += 8
        if byte == sep:
            break
        prefix_bytes.append(byte)
    chars: list[str] = []
    for byte in prefix_bytes:
        ch = chr(byte)
        if ch not in TEXT_CHARS:
            return _MALFORMED_BAD_CHAR
        chars.append(ch)
    text = "".join(chars)
    exprs = sexpr.parse_program_cached(text)
    if exprs is None:
        return _MALFORMED_PARSE_FAIL
    return DecodedProgram(exprs, bits[i:], text)


@dataclass(frozen=True, slots=True)
class RunResult:
    """Outcome of one budgeted run plus the context for judging validity."""

    outcome: Outcome
    data_length: int

    @property
    def halted(self) -> bool:
        return isinstance(self.outcome, Halted)

    @property
    def valid_halt(self) -> bool:
        """Halted and consumed every raw data bit."""
        return (
            isinstance(self.outcome, Halted)
            and self.outcome.bits_consumed == self.data_length
        )


def run_program(
    program: BinaryProgram,
    budget: int | None = None,
    config: MachineConfig = DEFAULT_CONFIG,
) -> RunResult:
    """Decode and run one binary program under a step budget."""
    if budget is None:
        budget = config.default_budget
    decoded = decode_program(program, config)
    if isinstance(decoded, MalformedProgram):
        return RunResult(decoded, 0)
    outcome = evaluate(decoded.prefix, BitTape(decoded.data), budget)
    return RunResult(outcome, len(decoded.data))


def save_program(path, program: BinaryProgram) -> None:
    """Write a program as a bit-length header plus hex payload."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"bits: {len(program.bits)}\n")
        if program.bits:
            fh.write(program.hex + "\n")


def load_program(path) -> BinaryProgram:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if not header.startswith("bits:"):
            raise ValueError(f"{path}: missing 'bits: N' header")
        bit_length = int(header.split(":", 1)[1])
        hex_text = fh.read().strip()
    return BinaryProgram.from_hex(hex_text, bit_length)


def prefix_free_violation(
    bit_strings: Iterable[str],
) -> tuple[str, str] | None:
    """First (prefix, extension) pair among the strings, or None.

    Sorted order puts any prefix immediately before its extensions, so an
    adjacent check is exhaustive.
    """
    ordered = sorted(bit_strings)
    for a, b in zip(ordered, ordered[1:]):
        if len(a) < len(b) and b.startswith(a):
            return (a, b)
    return None
