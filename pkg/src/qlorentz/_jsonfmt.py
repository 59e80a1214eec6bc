"""Deterministic JSON emission: fixed field order, floats rendered %.17g.

The stdlib encoder renders floats with repr(); reports promise a fixed
full-precision format instead, so this tiny emitter owns the byte layout.
Dict insertion order is the field order.  %.17g round-trips every double.
"""

from __future__ import annotations

import math

__all__ = ["dumps"]


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def _emit(obj, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, str):
        parts.append(f'"{_escape(obj)}"')
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float in report: {obj}")
        parts.append("%.17g" % obj)
    elif isinstance(obj, complex):
        _emit({"re": obj.real, "im": obj.imag}, parts)
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                parts.append(",")
            parts.append(f'"{_escape(str(k))}":')
            _emit(v, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(obj):
            if i:
                parts.append(",")
            _emit(v, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: bool = False) -> str:
    parts: list[str] = []
    _emit(obj, parts)
    text = "".join(parts)
    if indent:
        return _reindent(text)
    return text


def _reindent(text: str) -> str:
    """Pretty layout with stable whitespace (no dependence on json module)."""
    out, depth, in_str, esc = [], 0, False, False
    for ch in text:
        if in_str:
            out.append(ch)
            if esc:
                esc = False
            elif ch == "\\":
                esc = True
            elif ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
            out.append(ch)
        elif ch in "{[":
            depth += 1
            out.append(ch)
            out.append("\n" + "  " * depth)
        elif ch in "}]":
            depth -= 1
            out.append("\n" + "  " * depth)
            out.append(ch)
        elif ch == ",":
            out.append(ch)
            out.append("\n" + "  " * depth)
        elif ch == ":":
            out.append(": ")
        else:
            out.append(ch)
    return "".join(out)
