"""Text formats: algebra and residue files, coloring expressions, report rendering.

Algebra file::

    carrier 4
    op add 2
    0 1 2 3  1 2 3 0  2 3 0 1  3 0 1 2

Residue file::

    modulus 3
    shifts 0 -1 3
    shifts 0 3 -2

Tokens are whitespace separated and a table may span lines.  ``#`` starts a
comment that runs to the end of the line.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Union

from .algebra import FiniteAlgebra, Operation, validate_algebra
from .decide import ResidueUnarySystem
from .errors import ParseError

Spec = Union[FiniteAlgebra, ResidueUnarySystem]


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for m in re.finditer(r"\S+", line):
            yield m.group(0), lineno, m.start() + 1


def _int(tok):
    word, line, col = tok
    try:
        return int(word)
    except ValueError:
        raise ParseError(f"expected an integer, got {word!r}", line, col) from None


def parse_spec(text: str) -> Spec:
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty specification", 1, 1)
    head = toks[0][0]
    if head == "carrier":
        return _parse_algebra(toks)
    if head == "modulus":
        return _parse_residue(toks)
    raise ParseError(f"expected 'carrier' or 'modulus', got {head!r}", toks[0][1], toks[0][2])


def _parse_algebra(toks) -> FiniteAlgebra:
    if len(toks) < 2:
        raise ParseError("missing carrier size", toks[0][1], toks[0][2])
    n = _int(toks[1])
    if n < 1:
        raise ParseError(f"carrier size must be positive, got {n}", toks[1][1], toks[1][2])
    pos = 2
    ops = []
    while pos < len(toks):
        word, line, col = toks[pos]
        if word != "op":
            raise ParseError(f"expected 'op', got {word!r}", line, col)
        if pos + 2 >= len(toks):
            raise ParseError("incomplete op header", line, col)
        name = toks[pos + 1][0]
        arity = _int(toks[pos + 2])
        pos += 3
        size = n**arity if arity >= 0 else 0
        table = []
        while len(table) < size and pos < len(toks) and toks[pos][0] != "op":
            table.append(_int(toks[pos]))
            pos += 1
        if len(table) != size:
            where = toks[pos] if pos < len(toks) else toks[-1]
            raise ParseError(
                f"operation {name!r} needs {size} table entries, got {len(table)}", where[1], where[2]
            )
        ops.append(Operation(name, arity, tuple(table)))
    return validate_algebra(FiniteAlgebra(n, tuple(ops)))


def _parse_residue(toks) -> ResidueUnarySystem:
    if len(toks) < 2:
        raise ParseError("missing modulus", toks[0][1], toks[0][2])
    m = _int(toks[1])
    if m < 1:
        raise ParseError(f"modulus must be positive, got {m}", toks[1][1], toks[1][2])
    pos = 2
    ops = []
    while pos < len(toks):
        word, line, col = toks[pos]
        if word != "shifts":
            raise ParseError(f"expected 'shifts', got {word!r}", line, col)
        pos += 1
        shifts = []
        while pos < len(toks) and toks[pos][0] != "shifts":
            shifts.append(_int(toks[pos]))
            pos += 1
        if len(shifts) != m:
            raise ParseError(f"shifts line needs {m} values, got {len(shifts)}", line, col)
        ops.append(tuple(shifts))
    if not ops:
        raise ParseError("residue system needs at least one 'shifts' line", toks[-1][1], toks[-1][2])
    return ResidueUnarySystem(m, tuple(ops))


def parse_spec_file(path) -> Spec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def format_spec(spec: Spec) -> str:
    if isinstance(spec, FiniteAlgebra):
        n = spec.carrier_size
        lines = [f"carrier {n}"]
        for op in spec.ops:
            lines.append(f"op {op.name} {op.arity}")
            row = n if op.arity > 1 else len(op.table)
            for i in range(0, len(op.table), row):
                lines.append(" ".join(str(v) for v in op.table[i : i + row]))
        return "\n".join(lines) + "\n"
    lines = [f"modulus {spec.modulus}"]
    for shifts in spec.ops:
        lines.append("shifts " + " ".join(str(c) for c in shifts))
    return "\n".join(lines) + "\n"


# --- colorings ----------------------------------------------------------------

@dataclass(frozen=True)
class Coloring:
    """A finite coloring of values; predicates color members 1 and the rest 0."""

    expr: str
    fn: Callable[[object], int]
    colors: int

    def __call__(self, v) -> int:
        return self.fn(v)


def parse_coloring(expr: str) -> Coloring:
    """Accepted forms: ``even``, ``odd``, ``mod m == r``, ``mod m``, ``in a,b,c``."""
    e = " ".join(expr.split())
    if e == "even":
        return Coloring(e, lambda v: int(v % 2 == 0), 2)
    if e == "odd":
        return Coloring(e, lambda v: int(v % 2 == 1), 2)
    m = re.fullmatch(r"mod (\d+) ?== ?(-?\d+)", e)
    if m:
        mod, r = int(m.group(1)), int(m.group(2))
        if mod < 1:
            raise ParseError("modulus must be positive", 1, 5)
        return Coloring(e, lambda v: int(v % mod == r % mod), 2)
    m = re.fullmatch(r"mod (\d+)", e)
    if m:
        mod = int(m.group(1))
        if mod < 1:
            raise ParseError("modulus must be positive", 1, 5)
        return Coloring(e, lambda v: v % mod, mod)
    m = re.fullmatch(r"in (.*)", e)
    if m:
        try:
            members = frozenset(int(x) for x in re.split(r"[,\s]+", m.group(1).strip()) if x)
        except ValueError:
            raise ParseError(f"bad member list in {expr!r}", 1, 4) from None
        return Coloring(e, lambda v: int(v in members), 2)
    raise ParseError(f"unknown coloring {expr!r}", 1, 1)


# --- reports ------------------------------------------------------------------

@dataclass
class Report:
    """Key/value lines plus an optional JSON certificate block, and the exit code."""

    command: str
    fields: dict
    certificate: object = None
    exit_code: int = 0

    def render(self, fmt: str = "text") -> str:
        if fmt == "structured":
            lines = [f"command: {self.command}"]
            lines += [f"{k}: {_scalar(v)}" for k, v in self.fields.items()]
            lines.append(f"exit_code: {self.exit_code}")
            if self.certificate is not None:
                lines.append("certificate:")
                lines.append(json.dumps(self.certificate, indent=2, sort_keys=True))
            return "\n".join(lines) + "\n"
        lines = [f"== {self.command} =="]
        width = max((len(k) for k in self.fields), default=0)
        lines += [f"{k.replace('_', ' '):<{width}}  {_scalar(v)}" for k, v in self.fields.items()]
        if self.certificate is not None:
            lines.append("certificate:")
            lines.append(json.dumps(self.certificate, indent=2, sort_keys=True))
        return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "none"
    return str(v)


def parse_structured(text: str) -> tuple[dict, object]:
    """Inverse of ``Report.render('structured')`` (values stay strings)."""
    fields = {}
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if line == "certificate:":
            return fields, json.loads("\n".join(lines[i + 1 :]))
        key, _, value = line.partition(": ")
        fields[key] = value
    return fields, None
