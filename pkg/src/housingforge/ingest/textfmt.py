"""Shared helpers for the line-oriented text formats (boardspec, packlib, spancal, ledger)."""

from __future__ import annotations

import math
import shlex
from typing import Iterator

from ..errors import FormatSyntaxError


class Line:
    __slots__ = ("lineno", "raw", "tokens")

    def __init__(self, lineno: int, raw: str, tokens: list[str]):
        self.lineno = lineno
        self.raw = raw
        self.tokens = tokens

    def error(self, msg: str, token_index: int | None = None) -> FormatSyntaxError:
        col = 1
        if token_index is not None and token_index < len(self.tokens):
            found = self.raw.find(self.tokens[token_index])
            col = found + 1 if found >= 0 else 1
        return FormatSyntaxError(msg, self.lineno, col)

    def number(self, i: int) -> float:
        if i >= len(self.tokens):
            raise self.error(f"expected a number in field {i + 1}")
        try:
            v = float(self.tokens[i])
        except ValueError:
            raise self.error(f"not a number: {self.tokens[i]!r}", i) from None
        if not math.isfinite(v):
            raise self.error(f"non-finite number: {self.tokens[i]!r}", i)
        return v

    def token(self, i: int) -> str:
        if i >= len(self.tokens):
            raise self.error(f"missing field {i + 1}")
        return self.tokens[i]

    def expect_len(self, *counts: int) -> None:
        if len(self.tokens) not in counts:
            raise self.error(f"{self.tokens[0]!r} takes {' or '.join(str(c - 1) for c in counts)} fields, got {len(self.tokens) - 1}")


def decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        # locate the line of the bad byte
        lineno = data[: exc.start].count(b"\n") + 1
        raise FormatSyntaxError("input is not valid UTF-8", lineno, 1) from None


def lines(text: str) -> Iterator[Line]:
    for n, raw in enumerate(text.splitlines(), start=1):
        if "\x00" in raw:
            raise FormatSyntaxError("NUL byte in text", n, raw.index("\x00") + 1)
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            tokens = shlex.split(stripped, comments=True, posix=True)
        except ValueError as exc:
            raise FormatSyntaxError(str(exc), n, 1) from None
        if tokens:
            yield Line(n, raw, tokens)


def read_header(it: Iterator[Line], magic: str, version: str = "v1") -> None:
    first = next(it, None)
    if first is None:
        raise FormatSyntaxError(f"empty input, expected '{magic} {version}' header", 1, 1)
    if first.tokens != [magic, version]:
        raise first.error(f"expected header '{magic} {version}'")


def fmt(v: float) -> str:
    """Shortest round-trip text for a float; integral values keep a trailing '.0'."""
    return repr(float(v))


def quote(s: str) -> str:
    return shlex.quote(s)
