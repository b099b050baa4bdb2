"""Minimal s-expression reader for KiCad board files."""

from __future__ import annotations

from ..errors import FormatSyntaxError


class Atom(str):
    """Bare (unquoted) token."""

    pos: tuple[int, int] = (0, 0)


class QStr(str):
    """Quoted string token."""

    pos: tuple[int, int] = (0, 0)


class Node(list):
    """A parenthesised list; ``pos`` is the (line, column) of its opening parenthesis."""

    pos: tuple[int, int] = (0, 0)


def _at(tok, pos):
    tok.pos = pos
    return tok


def error(node, msg: str) -> FormatSyntaxError:
    """Syntax error located at a parsed node or token."""
    line, col = getattr(node, "pos", (0, 0))
    return FormatSyntaxError(msg, line, col)


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"'}

# nesting limit keeps recursion-free parsing bounded on adversarial input
MAX_DEPTH = 512


def parse(text: str) -> list:
    """Parse a single top-level list. Returns nested Python lists of Atom/QStr."""
    stack: list[list] = []
    root: list | None = None
    i, n = 0, len(text)
    line, line_start = 1, 0

    def err(msg: str, at: int) -> FormatSyntaxError:
        return FormatSyntaxError(msg, line, at - line_start + 1)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            line_start = i + 1
            i += 1
        elif ch in " \t\r\f\v":
            i += 1
        elif ch == "(":
            if root is not None and not stack:
                raise err("content after the top-level expression", i)
            if len(stack) >= MAX_DEPTH:
                raise err("expression nested too deeply", i)
            new = _at(Node(), (line, i - line_start + 1))
            if stack:
                stack[-1].append(new)
            stack.append(new)
            i += 1
        elif ch == ")":
            if not stack:
                raise err("unbalanced ')'", i)
            done = stack.pop()
            if not stack:
                root = done
            i += 1
        elif ch == '"':
            if not stack:
                raise err("string outside any expression", i)
            start = i
            pos = (line, i - line_start + 1)
            i += 1
            buf = []
            while True:
                if i >= n:
                    raise err("unterminated string", start)
                c = text[i]
                if c == "\\" and i + 1 < n:
                    buf.append(_ESCAPES.get(text[i + 1], text[i + 1]))
                    i += 2
                    continue
                if c == '"':
                    i += 1
                    break
                if c == "\n":
                    line += 1
                    line_start = i + 1
                buf.append(c)
                i += 1
            stack[-1].append(_at(QStr("".join(buf)), pos))
        else:
            if not stack:
                raise err(f"unexpected {ch!r} outside any expression", i)
            start = i
            while i < n and text[i] not in ' \t\r\n\f\v()"':
                i += 1
            stack[-1].append(_at(Atom(text[start:i]), (line, start - line_start + 1)))
    if stack:
        raise err("unbalanced '(' at end of input", i)
    if root is None:
        raise FormatSyntaxError("no s-expression found", line, 1)
    return root


def head(node) -> str | None:
    if isinstance(node, list) and node and isinstance(node[0], str):
        return str(node[0])
    return None


def children(node: list, name: str) -> list[list]:
    return [c for c in node[1:] if head(c) == name]


def child(node: list, name: str) -> list | None:
    for c in node[1:]:
        if head(c) == name:
            return c
    return None
