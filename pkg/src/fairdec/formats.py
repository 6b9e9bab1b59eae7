"""Plain-text formats for instances, matrices, and lotteries.

An instance file names its objects once, then ranks them per agent::

    n 3
    objects: a b c
    agent 0: b a c
    agent 1: a c b
    agent 2: a b c

A matrix file is n lines of n rational tokens ("1/3", "0.4", "1"; decimals
parse exactly).  A lottery file holds one support entry per line, weight
first, then the object each agent receives (agent 0 first)::

    9/10 : b a c
    1/10 : b c a

Parsers point at the offending line and column; formatters and parsers
round-trip every value exactly.
"""

import re
import string
from fractions import Fraction

from .core import (
    AssignmentMatrix,
    DeterministicAssignment,
    Instance,
    Lottery,
    as_rational,
)
from .errors import ParseError

_INSTANCE_HEADER = re.compile(r"^\s*n\s+(\S+)\s*$")
_OBJECT_HEADER = re.compile(r"^\s*objects\s*:")
_AGENT_LINE = re.compile(r"^\s*agent\s+(\d+)\s*:")
_LOTTERY_LINE = re.compile(r"^\s*(\S+)\s*:")
_TOKEN = re.compile(r"\S+")


def default_names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    return tuple(f"o{i + 1}" for i in range(n))


def _numbered_lines(text: str) -> list[tuple[int, str]]:
    return [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]


def _tokens_after(line: str, start: int) -> list[tuple[str, int]]:
    """(token, 1-based column) pairs for the tail of ``line``."""
    return [
        (match.group(), match.start() + 1)
        for match in _TOKEN.finditer(line, start)
    ]


def _rational_token(token: str, line: int, column: int) -> Fraction:
    try:
        return as_rational(token)
    except ValueError as error:
        raise ParseError(str(error), line, column) from None


def parse_instance(text: str) -> tuple[Instance, tuple[str, ...]]:
    """Read an instance file; returns the instance and its object names."""
    lines = _numbered_lines(text)
    if not lines:
        raise ParseError("empty instance file", 1)
    number, line = lines[0]
    header = _INSTANCE_HEADER.match(line)
    if not header:
        raise ParseError("expected 'n <count>'", number)
    try:
        n = int(header.group(1))
    except ValueError:
        raise ParseError(
            f"agent count {header.group(1)!r} is not an integer",
            number,
            header.start(1) + 1,
        ) from None
    if n < 2:
        raise ParseError("need at least two agents", number)
    if len(lines) != 2 + n:
        raise ParseError(
            f"expected an object header and {n} agent lines",
            lines[-1][0] if len(lines) > 1 else number,
        )

    number, line = lines[1]
    header = _OBJECT_HEADER.match(line)
    if not header:
        raise ParseError("expected 'objects: <names>'", number)
    names: list[str] = []
    positions: dict[str, int] = {}
    for token, column in _tokens_after(line, header.end()):
        if token in positions:
            raise ParseError(f"object {token!r} named twice", number, column)
        positions[token] = len(names)
        names.append(token)
    if len(names) != n:
        raise ParseError(f"expected {n} object names, got {len(names)}", number)

    preferences = []
    for agent, (number, line) in enumerate(lines[2:]):
        match = _AGENT_LINE.match(line)
        if not match or int(match.group(1)) != agent:
            raise ParseError(f"expected 'agent {agent}: <names>'", number)
        ranking = []
        seen: set[str] = set()
        for token, column in _tokens_after(line, match.end()):
            if token not in positions:
                raise ParseError(f"unknown object {token!r}", number, column)
            if token in seen:
                raise ParseError(f"object {token!r} listed twice", number, column)
            seen.add(token)
            ranking.append(positions[token])
        if len(ranking) != n:
            raise ParseError(
                f"agent {agent} ranks {len(ranking)} of {n} objects", number
            )
        preferences.append(tuple(ranking))
    return Instance(preferences), tuple(names)


def format_instance(instance: Instance, names: tuple[str, ...] | None = None) -> str:
    names = names or default_names(instance.n)
    lines = [f"n {instance.n}", "objects: " + " ".join(names)]
    for agent, pref in enumerate(instance.preferences):
        ranked = " ".join(names[o] for o in pref)
        lines.append(f"agent {agent}: {ranked}")
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> AssignmentMatrix:
    """Read a matrix file: n non-blank lines of n rational tokens."""
    lines = _numbered_lines(text)
    if not lines:
        raise ParseError("empty matrix file", 1)
    n = len(lines)
    rows = []
    for number, line in lines:
        tokens = _tokens_after(line, 0)
        if len(tokens) != n:
            raise ParseError(
                f"expected {n} entries per row ({n} rows given), got {len(tokens)}",
                number,
            )
        rows.append(
            [_rational_token(token, number, column) for token, column in tokens]
        )
    return AssignmentMatrix(rows)


def format_matrix(m: AssignmentMatrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m.rows) + "\n"


def parse_lottery(text: str, names: tuple[str, ...]) -> Lottery:
    """Read a lottery file, resolving object tokens against ``names``."""
    positions = {name: o for o, name in enumerate(names)}
    lines = _numbered_lines(text)
    if not lines:
        raise ParseError("empty lottery file", 1)
    entries = []
    for number, line in lines:
        match = _LOTTERY_LINE.match(line)
        if not match:
            raise ParseError("expected '<weight> : <objects>'", number)
        weight = _rational_token(match.group(1), number, match.start(1) + 1)
        objects = []
        seen: set[str] = set()
        for token, column in _tokens_after(line, match.end()):
            if token not in positions:
                raise ParseError(f"unknown object {token!r}", number, column)
            if token in seen:
                raise ParseError(f"object {token!r} assigned twice", number, column)
            seen.add(token)
            objects.append(positions[token])
        if len(objects) != len(names):
            raise ParseError(
                f"expected {len(names)} objects, got {len(objects)}", number
            )
        entries.append((DeterministicAssignment(objects), weight))
    return Lottery(entries)


def format_lottery(lot: Lottery, names: tuple[str, ...] | None = None) -> str:
    names = names or default_names(lot.n)
    return (
        "\n".join(
            f"{weight} : " + " ".join(names[sigma[i]] for i in range(lot.n))
            for sigma, weight in lot
        )
        + "\n"
    )
