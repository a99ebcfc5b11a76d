"""Runtime values, per-tick messages, and their canonical text rendering.

Value representation:
  Bool        -> python bool
  BoundedInt  -> python int
  Enum        -> VEnum
  Variant     -> VVariant
  Record      -> VRecord

A message is either a value ("present") or ABSENT (None). Values are never
None, so the encoding is unambiguous.

Canonical rendering (shared byte-for-byte with stimulus/trace files and the
generated C harness): integers base-10 with optional leading minus, booleans
`true`/`false`, enum literals by name, variants `Ctor` or `Ctor(v1,v2)`,
records `{f1=v1,f2=v2}` in declared field order, absent messages `-`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ast import (
    BoolKind,
    BoundedIntKind,
    EnumKind,
    Model,
    RecordKind,
    TypeDef,
    VariantKind,
)

ABSENT = None


@dataclass(frozen=True)
class VEnum:
    type_name: str
    literal: str


@dataclass(frozen=True)
class VVariant:
    type_name: str
    ctor: str
    args: tuple = ()


@dataclass(frozen=True)
class VRecord:
    type_name: str
    fields: tuple[str, ...]
    values: tuple


Value = Union[bool, int, VEnum, VVariant, VRecord]
Message = Optional[Value]


def render_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, VEnum):
        return v.literal
    if isinstance(v, VVariant):
        if not v.args:
            return v.ctor
        return v.ctor + "(" + ",".join(render_value(a) for a in v.args) + ")"
    if isinstance(v, VRecord):
        inner = ",".join(f"{f}={render_value(x)}" for f, x in zip(v.fields, v.values))
        return "{" + inner + "}"
    raise TypeError(f"not a value: {v!r}")


def render_message(m: Message) -> str:
    return "-" if m is None else render_value(m)


class ValueParseError(ValueError):
    pass


def _type_table(model: Model) -> dict[str, TypeDef]:
    from .ast import BUILTINS

    table = dict(BUILTINS)
    for t in model.typedefs:
        table[t.name] = t
    return table


def parse_value(text: str, ty: TypeDef, types: dict[str, TypeDef]) -> Value:
    """Parse a canonically rendered value of the given type."""
    v, pos = _parse_value_at(text, 0, ty, types)
    if pos != len(text):
        raise ValueParseError(f"trailing input after value: {text[pos:]!r}")
    return v


def parse_message(text: str, ty: TypeDef, types: dict[str, TypeDef]) -> Message:
    if text == "-":
        return ABSENT
    return parse_value(text, ty, types)


def _parse_value_at(s: str, pos: int, ty: TypeDef, types: dict[str, TypeDef]):
    kind = ty.kind
    if isinstance(kind, BoolKind):
        if s.startswith("true", pos):
            return True, pos + 4
        if s.startswith("false", pos):
            return False, pos + 5
        raise ValueParseError(f"expected boolean at {pos} in {s!r}")
    if isinstance(kind, BoundedIntKind):
        start = pos
        if pos < len(s) and s[pos] == "-":
            pos += 1
        digits = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == digits:
            raise ValueParseError(f"expected integer at {start} in {s!r}")
        n = int(s[start:pos])
        if not (kind.lo <= n <= kind.hi):
            raise ValueParseError(f"{n} outside [{kind.lo}, {kind.hi}] for {ty.name}")
        return n, pos
    if isinstance(kind, EnumKind):
        for lit in kind.literals:
            if s.startswith(lit, pos) and not _ident_continues(s, pos + len(lit)):
                return VEnum(ty.name, lit), pos + len(lit)
        raise ValueParseError(f"expected {ty.name} literal at {pos} in {s!r}")
    if isinstance(kind, VariantKind):
        for ctor in kind.ctors:
            if not s.startswith(ctor.name, pos):
                continue
            end = pos + len(ctor.name)
            if ctor.fields:
                if end >= len(s) or s[end] != "(":
                    continue
                args = []
                end += 1
                for i, (_, ftype) in enumerate(ctor.fields):
                    if i:
                        if end >= len(s) or s[end] != ",":
                            raise ValueParseError(f"expected ',' at {end} in {s!r}")
                        end += 1
                    arg, end = _parse_value_at(s, end, types[ftype], types)
                    args.append(arg)
                if end >= len(s) or s[end] != ")":
                    raise ValueParseError(f"expected ')' at {end} in {s!r}")
                return VVariant(ty.name, ctor.name, tuple(args)), end + 1
            if _ident_continues(s, end):
                continue
            return VVariant(ty.name, ctor.name), end
        raise ValueParseError(f"expected {ty.name} constructor at {pos} in {s!r}")
    if isinstance(kind, RecordKind):
        if pos >= len(s) or s[pos] != "{":
            raise ValueParseError(f"expected '{{' at {pos} in {s!r}")
        pos += 1
        values = []
        names = []
        for i, (fname, ftype) in enumerate(kind.fields):
            if i:
                if pos >= len(s) or s[pos] != ",":
                    raise ValueParseError(f"expected ',' at {pos} in {s!r}")
                pos += 1
            if not s.startswith(fname + "=", pos):
                raise ValueParseError(f"expected field {fname}= at {pos} in {s!r}")
            pos += len(fname) + 1
            v, pos = _parse_value_at(s, pos, types[ftype], types)
            values.append(v)
            names.append(fname)
        if pos >= len(s) or s[pos] != "}":
            raise ValueParseError(f"expected '}}' at {pos} in {s!r}")
        return VRecord(ty.name, tuple(names), tuple(values)), pos + 1
    raise TypeError(f"unknown type kind {kind!r}")


def _ident_continues(s: str, pos: int) -> bool:
    return pos < len(s) and (s[pos].isalnum() or s[pos] == "_")


# ---------------------------------------------------------------------------
# Finite value universes (used by verification and random stimuli)
# ---------------------------------------------------------------------------

def type_universe(ty: TypeDef, types: dict[str, TypeDef], limit: int = 4096) -> list[Value]:
    """All values of a type, in a canonical deterministic order."""
    out = _universe(ty, types, limit)
    if len(out) > limit:
        raise ValueError(f"type {ty.name} has more than {limit} values")
    return out


def _universe(ty: TypeDef, types: dict[str, TypeDef], limit: int) -> list[Value]:
    kind = ty.kind
    if isinstance(kind, BoolKind):
        return [False, True]
    if isinstance(kind, BoundedIntKind):
        if kind.hi - kind.lo + 1 > limit:
            raise ValueError(f"integer range of {ty.name} too large to enumerate")
        return list(range(kind.lo, kind.hi + 1))
    if isinstance(kind, EnumKind):
        return [VEnum(ty.name, lit) for lit in kind.literals]
    if isinstance(kind, VariantKind):
        out: list[Value] = []
        for ctor in kind.ctors:
            if not ctor.fields:
                out.append(VVariant(ty.name, ctor.name))
                continue
            combos = [()]
            for _, ftype in ctor.fields:
                sub = _universe(types[ftype], types, limit)
                combos = [c + (v,) for c in combos for v in sub]
                if len(combos) > limit:
                    raise ValueError(f"type {ty.name} too large to enumerate")
            out.extend(VVariant(ty.name, ctor.name, c) for c in combos)
        return out
    if isinstance(kind, RecordKind):
        names = tuple(f for f, _ in kind.fields)
        combos = [()]
        for _, ftype in kind.fields:
            sub = _universe(types[ftype], types, limit)
            combos = [c + (v,) for c in combos for v in sub]
            if len(combos) > limit:
                raise ValueError(f"type {ty.name} too large to enumerate")
        return [VRecord(ty.name, names, c) for c in combos]
    raise TypeError(f"unknown type kind {kind!r}")


def default_value(ty: TypeDef, types: dict[str, TypeDef]) -> Value:
    """A canonical inhabitant, used for zero-initialization in generated code."""
    kind = ty.kind
    if isinstance(kind, BoolKind):
        return False
    if isinstance(kind, BoundedIntKind):
        return 0 if kind.lo <= 0 <= kind.hi else kind.lo
    if isinstance(kind, EnumKind):
        return VEnum(ty.name, kind.literals[0])
    if isinstance(kind, VariantKind):
        c = kind.ctors[0]
        return VVariant(ty.name, c.name, tuple(default_value(types[t], types) for _, t in c.fields))
    if isinstance(kind, RecordKind):
        return VRecord(
            ty.name,
            tuple(f for f, _ in kind.fields),
            tuple(default_value(types[t], types) for _, t in kind.fields),
        )
    raise TypeError(f"unknown type kind {kind!r}")
