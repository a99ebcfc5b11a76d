"""Expression evaluation and message pattern matching.

Arithmetic is checked, never wrapping: results outside the 32-bit default
integer range raise RangeViolation, `div`/`mod` truncate toward zero and
raise DivisionByZero on a zero divisor. Values flowing into a location with
a narrower declared range (state variable, output port, function parameter,
record field, constructor payload) are range-checked against that range.
"""

from __future__ import annotations

from typing import Optional

from .ast import (
    Binary,
    BoundedIntKind,
    Call,
    CtorApp,
    EnumKind,
    EnumLit,
    Expr,
    FieldAccess,
    FuncDef,
    IfThenElse,
    INT32_MAX,
    INT32_MIN,
    Lit,
    Match,
    PatAbsent,
    PatBind,
    PatLiteral,
    PatWildcard,
    Pattern,
    RecordKind,
    RecordLit,
    TypeDef,
    Unary,
    Var,
    VariantKind,
)
from .values import ABSENT, Message, Value, VEnum, VRecord, VVariant, render_value


class EvalError(Exception):
    """Runtime evaluation failure; `code` is one of DivisionByZero,
    RangeViolation, UnboundVariable, MatchFailure."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}{': ' + detail if detail else ''}")
        self.code = code
        self.detail = detail


class EvalContext:
    """Immutable lookup context: function and type definitions by name."""

    __slots__ = ("funcs", "types")

    def __init__(self, funcs: dict[str, FuncDef], types: dict[str, TypeDef]):
        self.funcs = funcs
        self.types = types

    @classmethod
    def for_model(cls, model) -> "EvalContext":
        from .ast import BUILTINS

        types = dict(BUILTINS)
        for t in model.typedefs:
            types[t.name] = t
        return cls({f.name: f for f in model.funcs}, types)


EMPTY_CONTEXT = EvalContext({}, {})


def _check_default_range(n: int) -> int:
    if n < INT32_MIN or n > INT32_MAX:
        raise EvalError("RangeViolation", f"{n} outside default integer range")
    return n


def coerce_to(ty: TypeDef, v: Value) -> Value:
    """Range-check a value flowing into a location of declared type `ty`."""
    kind = ty.kind
    if isinstance(kind, BoundedIntKind) and not isinstance(v, bool) and isinstance(v, int):
        if v < kind.lo or v > kind.hi:
            raise EvalError(
                "RangeViolation", f"{v} outside [{kind.lo}, {kind.hi}] for {ty.name}"
            )
    return v


def eval_expr(env: dict[str, Value], ctx: EvalContext, e: Expr) -> Value:
    """Evaluate a checked expression; pure in (env, ctx, e) and total up to
    the declared error cases."""
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvalError("UnboundVariable", e.name) from None
    if isinstance(e, Binary):
        op = e.op
        if op == "and":
            return bool(eval_expr(env, ctx, e.left)) and bool(eval_expr(env, ctx, e.right))
        if op == "or":
            return bool(eval_expr(env, ctx, e.left)) or bool(eval_expr(env, ctx, e.right))
        a = eval_expr(env, ctx, e.left)
        b = eval_expr(env, ctx, e.right)
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "+":
            return _check_default_range(a + b)
        if op == "-":
            return _check_default_range(a - b)
        if op == "*":
            return _check_default_range(a * b)
        if op == "div":
            if b == 0:
                raise EvalError("DivisionByZero")
            q = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                q = -q
            return _check_default_range(q)
        if op == "mod":
            if b == 0:
                raise EvalError("DivisionByZero")
            q = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                q = -q
            return _check_default_range(a - b * q)
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise TypeError(f"unknown operator {op}")
    if isinstance(e, Unary):
        v = eval_expr(env, ctx, e.operand)
        if e.op == "not":
            return not v
        if e.op == "neg":
            return _check_default_range(-v)
        raise TypeError(f"unknown operator {e.op}")
    if isinstance(e, IfThenElse):
        if eval_expr(env, ctx, e.cond):
            return eval_expr(env, ctx, e.then)
        return eval_expr(env, ctx, e.orelse)
    if isinstance(e, EnumLit):
        assert e.ty is not None, "enum literal not resolved by the checker"
        if isinstance(e.ty.kind, EnumKind):
            return VEnum(e.ty.name, e.name)
        return VVariant(e.ty.name, e.name)
    if isinstance(e, Call):
        fn = ctx.funcs[e.func]
        args = [eval_expr(env, ctx, a) for a in e.args]
        call_env = {}
        for (pname, ptype), v in zip(fn.params, args):
            call_env[pname] = coerce_to(ctx.types[ptype], v)
        result = eval_expr(call_env, ctx, fn.body)
        return coerce_to(ctx.types[fn.return_type], result)
    if isinstance(e, CtorApp):
        assert e.ty is not None, "constructor application not resolved by the checker"
        kind = e.ty.kind
        assert isinstance(kind, VariantKind)
        ctor = next(c for c in kind.ctors if c.name == e.ctor)
        args = tuple(
            coerce_to(ctx.types[ftype], eval_expr(env, ctx, a))
            for a, (_, ftype) in zip(e.args, ctor.fields)
        )
        return VVariant(e.ty.name, e.ctor, args)
    if isinstance(e, RecordLit):
        assert e.ty is not None, "record literal not resolved by the checker"
        kind = e.ty.kind
        assert isinstance(kind, RecordKind)
        by_name = {f: x for f, x in e.fields}
        names = tuple(f for f, _ in kind.fields)
        values = tuple(
            coerce_to(ctx.types[ftype], eval_expr(env, ctx, by_name[fname]))
            for fname, ftype in kind.fields
        )
        return VRecord(e.ty.name, names, values)
    if isinstance(e, FieldAccess):
        v = eval_expr(env, ctx, e.target)
        assert isinstance(v, VRecord)
        return v.values[v.fields.index(e.field)]
    if isinstance(e, Match):
        v = eval_expr(env, ctx, e.target)
        assert isinstance(v, VVariant)
        for arm in e.arms:
            if arm.ctor == v.ctor:
                arm_env = dict(env)
                for name, val in zip(arm.binders, v.args):
                    arm_env[name] = val
                return eval_expr(arm_env, ctx, arm.body)
        # statically prevented by the exhaustiveness check
        raise EvalError("MatchFailure", f"no arm for {render_value(v)}")
    raise TypeError(f"unknown expr node {type(e)}")


NO_MATCH = None


def match_pattern(
    p: Pattern, m: Message, ctx: EvalContext = EMPTY_CONTEXT
) -> Optional[dict[str, Value]]:
    """Match one message against one pattern.

    Returns the (possibly empty) binding, or None for no match. Wildcards
    match any present message; absence matches only an absent one; literal
    patterns match an equal present value; a variable binding matches any
    present message and binds it.
    """
    if isinstance(p, PatWildcard):
        return {} if m is not ABSENT else NO_MATCH
    if isinstance(p, PatAbsent):
        return {} if m is ABSENT else NO_MATCH
    if isinstance(p, PatLiteral):
        if m is ABSENT:
            return NO_MATCH
        want = eval_expr({}, ctx, p.value)
        return {} if _values_equal(want, m) else NO_MATCH
    if isinstance(p, PatBind):
        return {p.var: m} if m is not ABSENT else NO_MATCH
    raise TypeError(f"unknown pattern {p!r}")


def _values_equal(a: Value, b: Value) -> bool:
    # bool is an int subtype; require like kinds so 1 != true
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return a == b
