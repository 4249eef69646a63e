"""Canonical byte encoding of automaton states.

States are built from a few value shapes: sink names (strings), labels
(integers), tuples and frozensets. The encoding is canonical: set members
are written in the order of their own encodings, so equal states always
encode to equal bytes. Labels use a fixed four-byte field, which makes the
encoded size of a state independent of which label values it mentions.
"""

from __future__ import annotations

import struct

__all__ = ["encode_state", "decode_state", "state_size", "state_ints"]

_STR, _INT, _TUPLE, _SET, _BOOL = 1, 2, 3, 4, 5
_I32 = struct.Struct(">i")


def _varint(n: int, out: bytearray) -> None:
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _encode(value, out: bytearray) -> None:
    if isinstance(value, bool):
        out.append(_BOOL)
        out.append(1 if value else 0)
    elif isinstance(value, int):
        out.append(_INT)
        out += _I32.pack(value)
    elif isinstance(value, str):
        raw = value.encode("utf-8")
        out.append(_STR)
        _varint(len(raw), out)
        out += raw
    elif isinstance(value, tuple):
        out.append(_TUPLE)
        _varint(len(value), out)
        for item in value:
            _encode(item, out)
    elif isinstance(value, frozenset):
        out.append(_SET)
        _varint(len(value), out)
        for item in sorted(encode_state(v) for v in value):
            out += item
    else:
        raise TypeError(f"cannot encode state component of type {type(value).__name__}")


def encode_state(value) -> bytes:
    out = bytearray()
    _encode(value, out)
    return bytes(out)


def state_size(value) -> int:
    return len(encode_state(value))


def _read_varint(data: bytes, i: int) -> tuple[int, int]:
    shift = n = 0
    while True:
        byte = data[i]
        i += 1
        n |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return n, i
        shift += 7


def _decode(data: bytes, i: int):
    tag = data[i]
    i += 1
    if tag == _BOOL:
        return data[i] == 1, i + 1
    if tag == _INT:
        return _I32.unpack_from(data, i)[0], i + 4
    if tag == _STR:
        n, i = _read_varint(data, i)
        return data[i : i + n].decode("utf-8"), i + n
    if tag in (_TUPLE, _SET):
        n, i = _read_varint(data, i)
        items = []
        for _ in range(n):
            item, i = _decode(data, i)
            items.append(item)
        return (tuple(items) if tag == _TUPLE else frozenset(items)), i
    raise ValueError(f"bad state encoding tag {tag} at offset {i - 1}")


def decode_state(data: bytes):
    value, end = _decode(data, 0)
    if end != len(data):
        raise ValueError("trailing bytes after encoded state")
    return value


def state_ints(value) -> set[int]:
    """All integers mentioned in a state, which for our automata are labels."""
    out: set[int] = set()
    stack = [value]
    while stack:
        v = stack.pop()
        if isinstance(v, bool) or isinstance(v, str):
            continue
        if isinstance(v, int):
            out.add(v)
        else:
            stack.extend(v)
    return out
