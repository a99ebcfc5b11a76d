"""Canonical pretty-printer; parse(pretty(parse(x))) == parse(x)."""

from __future__ import annotations

from .ast import (
    Automaton,
    Binary,
    BoolKind,
    BoundedIntKind,
    Call,
    ComponentSpec,
    Composite,
    CtorApp,
    EnumKind,
    EnumLit,
    Expr,
    FieldAccess,
    FunctionTable,
    IfThenElse,
    Lit,
    Match,
    Model,
    PatAbsent,
    PatBind,
    PatLiteral,
    PatWildcard,
    RecordKind,
    RecordLit,
    Unary,
    Var,
    VariantKind,
)

# precedence levels, higher binds tighter
_PREC = {
    "or": 1, "and": 2,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "div": 6, "mod": 6,
}


def pp_expr(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, Lit):
        if isinstance(e.value, bool):
            return "true" if e.value else "false"
        if e.value < 0:
            s = str(e.value)
            return f"({s})" if parent_prec >= 7 else s
        return str(e.value)
    if isinstance(e, (Var, EnumLit)):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({', '.join(pp_expr(a) for a in e.args)})"
    if isinstance(e, CtorApp):
        if not e.args:
            return e.ctor
        return f"{e.ctor}({', '.join(pp_expr(a) for a in e.args)})"
    if isinstance(e, RecordLit):
        inner = ", ".join(f"{f} = {pp_expr(x)}" for f, x in e.fields)
        return "{" + inner + "}"
    if isinstance(e, FieldAccess):
        return f"{pp_expr(e.target, 8)}.{e.field}"
    if isinstance(e, Match):
        arms = " | ".join(
            (a.ctor + (f"({', '.join(a.binders)})" if a.binders else "") + " -> " + pp_expr(a.body))
            for a in e.arms
        )
        s = f"match {pp_expr(e.target, 3)} {{ {arms} }}"
        return f"({s})" if parent_prec > 0 else s
    if isinstance(e, IfThenElse):
        s = f"if {pp_expr(e.cond)} then {pp_expr(e.then)} else {pp_expr(e.orelse)}"
        return f"({s})" if parent_prec > 0 else s
    if isinstance(e, Unary):
        if e.op == "not":
            s = f"not {pp_expr(e.operand, 3)}"
            return f"({s})" if parent_prec > 3 else s
        s = f"-{pp_expr(e.operand, 7)}"
        return f"({s})" if parent_prec >= 7 else s
    if isinstance(e, Binary):
        prec = _PREC[e.op]
        left = pp_expr(e.left, prec)
        right = pp_expr(e.right, prec + 1)  # left-associative
        s = f"{left} {e.op} {right}"
        return f"({s})" if prec < parent_prec or (prec == parent_prec == 4) else s
    raise TypeError(f"unknown expr node {type(e)}")


def _pp_pattern(port: str, pat) -> str:
    if isinstance(pat, PatWildcard):
        return f"{port}?"
    if isinstance(pat, PatBind):
        return f"{port}?{pat.var}"
    if isinstance(pat, PatAbsent):
        return f"{port} = -"
    if isinstance(pat, PatLiteral):
        return f"{port} = {pp_expr(pat.value, 4)}"
    raise TypeError(f"unknown pattern {pat!r}")


def _pp_updates(outputs, assignments) -> str:
    parts = [f"{p} = {'-' if e is None else pp_expr(e, 4)}" for p, e in outputs]
    parts += [f"{v} := {pp_expr(e, 4)}" for v, e in assignments]
    return ", ".join(parts)


def pp_model(model: Model) -> str:
    out: list[str] = [f"model {model.name} {{"]
    for td in model.typedefs:
        out.append("  " + _pp_typedef(td))
    for fn in model.funcs:
        params = ", ".join(f"{p}: {t}" for p, t in fn.params)
        out.append(f"  func {fn.name}({params}): {fn.return_type} = {pp_expr(fn.body)}")
    out.extend(_pp_component(model.root, "component", 1))
    out.append("}")
    return "\n".join(out) + "\n"


def _pp_typedef(td) -> str:
    k = td.kind
    if isinstance(k, EnumKind):
        return f"type {td.name} enum {{ {', '.join(k.literals)} }}"
    if isinstance(k, VariantKind):
        ctors = []
        for c in k.ctors:
            if c.fields:
                ctors.append(f"{c.name}({', '.join(f'{f}: {t}' for f, t in c.fields)})")
            else:
                ctors.append(c.name)
        return f"type {td.name} variant {{ {', '.join(ctors)} }}"
    if isinstance(k, RecordKind):
        return f"type {td.name} record {{ {', '.join(f'{f}: {t}' for f, t in k.fields)} }}"
    if isinstance(k, BoundedIntKind):
        return f"type {td.name} int {k.lo} .. {k.hi}"
    if isinstance(k, BoolKind):
        return f"type {td.name} enum {{ }}"  # unreachable: Bool is builtin
    raise TypeError(f"unknown type kind {k!r}")


def _pp_component(spec: ComponentSpec, kw: str, depth: int) -> list[str]:
    pad = "  " * depth
    inner = "  " * (depth + 1)
    out = [f"{pad}{kw} {spec.name} {{"]
    for p in spec.ports:
        out.append(f"{inner}{p.direction} {p.name}: {p.type_name} init {pp_expr(p.init)}")
    out.append(f"{inner}causality {spec.causality}")
    b = spec.behavior
    if isinstance(b, Automaton):
        out.append(f"{inner}automaton {{")
        states = ", ".join(s + (" init" if s == b.initial else "") for s in b.states)
        out.append(f"{inner}  states {states}")
        for v in b.vars:
            out.append(f"{inner}  var {v.name}: {v.type_name} init {pp_expr(v.init)}")
        for tr in b.transitions:
            line = f"{inner}  transition {tr.source} -> {tr.target}"
            if tr.patterns:
                line += " when " + ", ".join(_pp_pattern(p, q) for p, q in tr.patterns)
            if tr.precondition is not None:
                line += f" with {pp_expr(tr.precondition)}"
            if tr.outputs or tr.assignments:
                line += " then " + _pp_updates(tr.outputs, tr.assignments)
            out.append(line)
        out.append(f"{inner}}}")
    elif isinstance(b, FunctionTable):
        out.append(f"{inner}table {{")
        for row in b.rows:
            line = f"{inner}  when " + ", ".join(_pp_pattern(p, q) for p, q in row.patterns)
            if row.guard is not None:
                line += f" with {pp_expr(row.guard)}"
            if row.outputs:
                line += " then " + _pp_updates(row.outputs, [])
            out.append(line)
        out.append(f"{inner}}}")
    elif isinstance(b, Composite):
        for sub in b.subs:
            out.extend(_pp_component(sub, "sub", depth + 1))
        for ch in b.channels:
            out.append(f"{inner}channel {ch.src_comp}.{ch.src_port} -> {ch.dst_comp}.{ch.dst_port}")
        for d in b.delegations:
            src = f"{d.src_comp}.{d.src_port}" if d.src_comp else d.src_port
            dst = f"{d.dst_comp}.{d.dst_port}" if d.dst_comp else d.dst_port
            out.append(f"{inner}delegate {src} -> {dst}")
    else:
        raise TypeError(f"unknown behavior {type(b)}")
    out.append(f"{pad}}}")
    return out
