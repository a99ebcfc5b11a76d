"""Static analyses run before simulation, verification and code generation.

A model passes iff no Error findings. Checks are deterministic and
order-independent: permuting declarations changes finding order only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ast import (
    Automaton,
    Binary,
    BoolKind,
    BoundedIntKind,
    BUILTIN_BOOL,
    BUILTIN_INT,
    BUILTINS,
    Call,
    ComponentSpec,
    Composite,
    CtorApp,
    EnumKind,
    EnumLit,
    Expr,
    FieldAccess,
    FuncDef,
    FunctionTable,
    IfThenElse,
    Lit,
    Match,
    Model,
    PatAbsent,
    PatBind,
    PatLiteral,
    PatWildcard,
    Pos,
    RecordKind,
    RecordLit,
    TypeDef,
    Unary,
    Var,
    VariantKind,
    iter_components,
)
from .flatten import CausalityCycle, flatten, instantaneous_port_graph


@dataclass(frozen=True)
class Finding:
    severity: str  # 'error' | 'warning'
    code: str
    component_path: str
    message: str
    pos: Optional[Pos] = None

    def render(self) -> str:
        line, col = self.pos if self.pos else (0, 0)
        return f"{self.severity} {self.code} {self.component_path}:{line}:{col} {self.message}"


@dataclass
class CheckReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    def extend(self, other: "CheckReport") -> "CheckReport":
        self.findings.extend(other.findings)
        return self

    def render(self) -> str:
        return "\n".join(f.render() for f in self.findings)


# ---------------------------------------------------------------------------
# Symbol tables
# ---------------------------------------------------------------------------

class ModelTables:
    """Resolved name tables for a model; built once, shared by all checks."""

    def __init__(self, model: Model):
        self.model = model
        self.types: dict[str, TypeDef] = dict(BUILTINS)
        for t in model.typedefs:
            self.types[t.name] = t
        self.funcs: dict[str, FuncDef] = {f.name: f for f in model.funcs}
        # bare constructor / enum-literal names -> owning type
        self.ctor_owner: dict[str, TypeDef] = {}
        self.ctor_clashes: set[str] = set()
        for t in model.typedefs:
            names: list[str] = []
            if isinstance(t.kind, EnumKind):
                names = list(t.kind.literals)
            elif isinstance(t.kind, VariantKind):
                names = [c.name for c in t.kind.ctors]
            for n in names:
                if n in self.ctor_owner and self.ctor_owner[n] is not t:
                    self.ctor_clashes.add(n)
                self.ctor_owner[n] = t

    def type_of(self, name: str) -> Optional[TypeDef]:
        return self.types.get(name)


def _is_int(ty: TypeDef) -> bool:
    return isinstance(ty.kind, BoundedIntKind)


def assignable(dst: TypeDef, src: TypeDef) -> bool:
    """Flow compatibility: integers are mutually compatible (narrowing is a
    runtime range check); everything else is nominal."""
    if _is_int(dst) and _is_int(src):
        return True
    return dst.name == src.name


# ---------------------------------------------------------------------------
# Expression typing (annotates nodes, rewrites bare names and applications)
# ---------------------------------------------------------------------------

class ExprTyper:
    def __init__(self, tables: ModelTables, report: CheckReport, path: str):
        self.tables = tables
        self.report = report
        self.path = path

    def err(self, code: str, msg: str, pos: Optional[Pos]):
        self.report.findings.append(Finding("error", code, self.path, msg, pos))

    def type_expr(self, e: Expr, env: dict[str, TypeDef]) -> tuple[Expr, Optional[TypeDef]]:
        """Return the (possibly rewritten) node and its type, or None on error."""
        node, ty = self._type(e, env)
        node.ty = ty
        return node, ty

    def _type(self, e: Expr, env: dict[str, TypeDef]) -> tuple[Expr, Optional[TypeDef]]:
        t = self.tables
        if isinstance(e, Lit):
            return e, BUILTIN_BOOL if isinstance(e.value, bool) else BUILTIN_INT
        if isinstance(e, Var):
            if e.name in env:
                return e, env[e.name]
            owner = t.ctor_owner.get(e.name)
            if owner is not None:
                if e.name in t.ctor_clashes:
                    self.err("AmbiguousLiteral", f"literal {e.name} belongs to several types", e.pos)
                    return e, None
                if isinstance(owner.kind, VariantKind):
                    ctor = next(c for c in owner.kind.ctors if c.name == e.name)
                    if ctor.fields:
                        self.err("TypeError", f"constructor {e.name} needs arguments", e.pos)
                        return e, None
                lit = EnumLit(e.name, pos=e.pos)
                lit.ty = owner
                return lit, owner
            self.err("UnknownName", f"unbound name {e.name}", e.pos)
            return e, None
        if isinstance(e, Call):
            if e.func in t.funcs:
                fn = t.funcs[e.func]
                if len(e.args) != len(fn.params):
                    self.err("TypeError", f"{e.func} expects {len(fn.params)} arguments", e.pos)
                    return e, None
                ok = True
                for i, (a, (_, ptn)) in enumerate(zip(e.args, fn.params)):
                    na, aty = self.type_expr(a, env)
                    e.args[i] = na
                    pty = t.type_of(ptn)
                    if aty is not None and pty is not None and not assignable(pty, aty):
                        self.err("TypeError", f"argument {i + 1} of {e.func}: expected {ptn}, got {aty.name}", a.pos)
                        ok = False
                rty = t.type_of(fn.return_type)
                return e, rty if ok else rty
            owner = t.ctor_owner.get(e.func)
            if owner is not None and isinstance(owner.kind, VariantKind):
                if e.func in t.ctor_clashes:
                    self.err("AmbiguousLiteral", f"constructor {e.func} belongs to several types", e.pos)
                    return e, None
                ctor = next(c for c in owner.kind.ctors if c.name == e.func)
                if len(e.args) != len(ctor.fields):
                    self.err("TypeError", f"{e.func} expects {len(ctor.fields)} arguments", e.pos)
                    return e, None
                app = CtorApp(e.func, e.args, pos=e.pos)
                for i, (a, (_, ftn)) in enumerate(zip(app.args, ctor.fields)):
                    na, aty = self.type_expr(a, env)
                    app.args[i] = na
                    fty = t.type_of(ftn)
                    if aty is not None and fty is not None and not assignable(fty, aty):
                        self.err("TypeError", f"field {i + 1} of {e.func}: expected {ftn}, got {aty.name}", a.pos)
                app.ty = owner
                return app, owner
            self.err("UnknownName", f"unknown function or constructor {e.func}", e.pos)
            return e, None
        if isinstance(e, CtorApp) or isinstance(e, EnumLit):
            # already resolved by an earlier pass
            return e, e.ty
        if isinstance(e, RecordLit):
            names = tuple(f for f, _ in e.fields)
            candidates = [
                td for td in t.types.values()
                if isinstance(td.kind, RecordKind) and tuple(f for f, _ in td.kind.fields) == names
            ]
            if len(candidates) != 1:
                which = "no" if not candidates else "more than one"
                self.err("TypeError", f"{which} record type with fields {{{', '.join(names)}}}", e.pos)
                for i, (f, x) in enumerate(e.fields):
                    nx, _ = self.type_expr(x, env)
                    e.fields[i] = (f, nx)
                return e, None
            td = candidates[0]
            for i, ((fname, x), (_, ftn)) in enumerate(zip(e.fields, td.kind.fields)):
                nx, xty = self.type_expr(x, env)
                e.fields[i] = (fname, nx)
                fty = t.type_of(ftn)
                if xty is not None and fty is not None and not assignable(fty, xty):
                    self.err("TypeError", f"field {fname}: expected {ftn}, got {xty.name}", x.pos)
            return e, td
        if isinstance(e, FieldAccess):
            nt, tty = self.type_expr(e.target, env)
            e.target = nt
            if tty is None:
                return e, None
            if not isinstance(tty.kind, RecordKind):
                self.err("TypeError", f"field access on non-record {tty.name}", e.pos)
                return e, None
            for fname, ftn in tty.kind.fields:
                if fname == e.field:
                    return e, t.type_of(ftn)
            self.err("TypeError", f"{tty.name} has no field {e.field}", e.pos)
            return e, None
        if isinstance(e, Match):
            nt, tty = self.type_expr(e.target, env)
            e.target = nt
            if tty is None:
                return e, None
            if not isinstance(tty.kind, VariantKind):
                self.err("TypeError", f"match on non-variant {tty.name}", e.pos)
                return e, None
            ctors = {c.name: c for c in tty.kind.ctors}
            seen: set[str] = set()
            result_ty: Optional[TypeDef] = None
            for arm in e.arms:
                if arm.ctor not in ctors:
                    self.err("TypeError", f"{tty.name} has no constructor {arm.ctor}", e.pos)
                    continue
                if arm.ctor in seen:
                    self.err("TypeError", f"duplicate match arm {arm.ctor}", e.pos)
                    continue
                seen.add(arm.ctor)
                ctor = ctors[arm.ctor]
                if len(arm.binders) != len(ctor.fields):
                    self.err("TypeError", f"arm {arm.ctor} binds {len(arm.binders)} of {len(ctor.fields)} fields", e.pos)
                    continue
                arm_env = dict(env)
                for b, (_, ftn) in zip(arm.binders, ctor.fields):
                    fty = t.type_of(ftn)
                    if fty is not None:
                        arm_env[b] = fty
                nb, bty = self.type_expr(arm.body, arm_env)
                arm.body = nb
                if bty is not None:
                    if result_ty is None:
                        result_ty = bty
                    elif not (assignable(result_ty, bty) or assignable(bty, result_ty)):
                        self.err("TypeError", f"match arms disagree: {result_ty.name} vs {bty.name}", e.pos)
            missing = set(ctors) - seen
            if missing:
                self.err(
                    "NonExhaustiveMatch",
                    f"match on {tty.name} misses {', '.join(sorted(missing))}",
                    e.pos,
                )
            return e, result_ty
        if isinstance(e, IfThenElse):
            nc, cty = self.type_expr(e.cond, env)
            e.cond = nc
            if cty is not None and not isinstance(cty.kind, BoolKind):
                self.err("TypeError", f"condition must be Bool, got {cty.name}", e.cond.pos)
            nt_, tty = self.type_expr(e.then, env)
            e.then = nt_
            ne, ety = self.type_expr(e.orelse, env)
            e.orelse = ne
            if tty is None or ety is None:
                return e, tty or ety
            if assignable(tty, ety) or assignable(ety, tty):
                return e, BUILTIN_INT if _is_int(tty) and tty.name != ety.name else tty
            self.err("TypeError", f"branches disagree: {tty.name} vs {ety.name}", e.pos)
            return e, None
        if isinstance(e, Unary):
            no, oty = self.type_expr(e.operand, env)
            e.operand = no
            if e.op == "not":
                if oty is not None and not isinstance(oty.kind, BoolKind):
                    self.err("TypeError", f"'not' needs Bool, got {oty.name}", e.pos)
                return e, BUILTIN_BOOL
            if oty is not None and not _is_int(oty):
                self.err("TypeError", f"negation needs an integer, got {oty.name}", e.pos)
            return e, BUILTIN_INT
        if isinstance(e, Binary):
            nl, lty = self.type_expr(e.left, env)
            e.left = nl
            nr, rty = self.type_expr(e.right, env)
            e.right = nr
            op = e.op
            if op in ("and", "or"):
                for side, ty_ in (("left", lty), ("right", rty)):
                    if ty_ is not None and not isinstance(ty_.kind, BoolKind):
                        self.err("TypeError", f"'{op}' needs Bool operands, got {ty_.name}", e.pos)
                return e, BUILTIN_BOOL
            if op in ("+", "-", "*", "div", "mod"):
                for ty_ in (lty, rty):
                    if ty_ is not None and not _is_int(ty_):
                        self.err("TypeError", f"'{op}' needs integer operands, got {ty_.name}", e.pos)
                return e, BUILTIN_INT
            if op in ("<", "<=", ">", ">="):
                for ty_ in (lty, rty):
                    if ty_ is not None and not _is_int(ty_):
                        self.err("TypeError", f"'{op}' needs integer operands, got {ty_.name}", e.pos)
                return e, BUILTIN_BOOL
            if op in ("==", "!="):
                if lty is not None and rty is not None:
                    if not (assignable(lty, rty) or assignable(rty, lty)):
                        self.err("TypeError", f"cannot compare {lty.name} with {rty.name}", e.pos)
                return e, BUILTIN_BOOL
            raise TypeError(f"unknown operator {op}")
        raise TypeError(f"unknown expr node {type(e)}")


def is_constant(e: Expr) -> bool:
    """Constant expressions: literals, resolved enum literals, constructor
    and record construction over constants; no variables or function calls."""
    if isinstance(e, Lit) or isinstance(e, EnumLit):
        return True
    if isinstance(e, CtorApp):
        return all(is_constant(a) for a in e.args)
    if isinstance(e, RecordLit):
        return all(is_constant(x) for _, x in e.fields)
    if isinstance(e, Unary) and e.op == "neg":
        return is_constant(e.operand)
    return False


# ---------------------------------------------------------------------------
# check_types
# ---------------------------------------------------------------------------

def check_types(model: Model) -> CheckReport:
    """Type-check every expression, pattern, initial value and channel
    endpoint; enforce match exhaustiveness. Annotates the AST in place."""
    report = CheckReport()
    tables = ModelTables(model)

    for name in sorted(tables.ctor_clashes):
        report.findings.append(
            Finding("error", "DuplicateDefinition", model.name,
                    f"constructor or literal {name} declared by several types")
        )

    # type definitions: field type references
    for td in model.typedefs:
        refs: list[str] = []
        if isinstance(td.kind, VariantKind):
            refs = [t for c in td.kind.ctors for _, t in c.fields]
        elif isinstance(td.kind, RecordKind):
            refs = [t for _, t in td.kind.fields]
        for r in refs:
            if tables.type_of(r) is None:
                report.findings.append(
                    Finding("error", "UnknownType", model.name, f"type {td.name} references unknown type {r}", td.pos)
                )

    # functions
    for fn in model.funcs:
        typer = ExprTyper(tables, report, model.name)
        env: dict[str, TypeDef] = {}
        ok = True
        for pname, ptn in fn.params:
            pty = tables.type_of(ptn)
            if pty is None:
                report.findings.append(
                    Finding("error", "UnknownType", model.name, f"parameter {pname} of {fn.name}: unknown type {ptn}", fn.pos)
                )
                ok = False
            else:
                env[pname] = pty
        rty = tables.type_of(fn.return_type)
        if rty is None:
            report.findings.append(
                Finding("error", "UnknownType", model.name, f"return type of {fn.name}: unknown type {fn.return_type}", fn.pos)
            )
            ok = False
        if ok:
            nb, bty = typer.type_expr(fn.body, env)
            fn.body = nb
            if bty is not None and rty is not None and not assignable(rty, bty):
                report.findings.append(
                    Finding("error", "TypeError", model.name,
                            f"body of {fn.name} has type {bty.name}, declared {fn.return_type}", fn.pos)
                )

    for comp, path in _walk_paths(model.root):
        _check_component_types(model, tables, comp, path, report)

    return report


def _walk_paths(root: ComponentSpec):
    def rec(spec: ComponentSpec, path: str):
        yield spec, path
        if isinstance(spec.behavior, Composite):
            for sub in spec.behavior.subs:
                yield from rec(sub, f"{path}/{sub.name}")

    yield from rec(root, root.name)


def _check_component_types(model, tables: ModelTables, comp: ComponentSpec, path: str, report: CheckReport):
    typer = ExprTyper(tables, report, path)
    port_ty: dict[str, TypeDef] = {}
    for p in comp.ports:
        ty = tables.type_of(p.type_name)
        if ty is None:
            report.findings.append(Finding("error", "UnknownType", path, f"port {p.name}: unknown type {p.type_name}", p.pos))
            continue
        port_ty[p.name] = ty
        ni, ity = typer.type_expr(p.init, {})
        p.init = ni
        if not is_constant(ni):
            report.findings.append(Finding("error", "NonConstantInit", path, f"port {p.name}: initial value must be constant", p.pos))
        elif ity is not None and not assignable(ty, ity):
            report.findings.append(Finding("error", "TypeError", path, f"port {p.name}: initial value has type {ity.name}, port is {p.type_name}", p.pos))

    b = comp.behavior
    if isinstance(b, Automaton):
        _check_automaton_types(tables, comp, b, path, port_ty, report)
    elif isinstance(b, FunctionTable):
        _check_table_types(tables, comp, b, path, port_ty, report)
    else:
        _check_composite_types(tables, comp, b, path, report)


def _pattern_env(
    typer: ExprTyper, comp: ComponentSpec, patterns, port_ty, base_env, path, report, pos
) -> dict[str, TypeDef]:
    env = dict(base_env)
    in_names = {p.name for p in comp.inputs()}
    for pname, pat in patterns:
        if pname not in in_names:
            report.findings.append(Finding("error", "UnknownPort", path, f"pattern on unknown input port {pname}", pos))
            continue
        pty = port_ty.get(pname)
        if isinstance(pat, PatBind):
            if pat.var in env:
                report.findings.append(Finding("error", "Shadowing", path, f"binding {pat.var} shadows another name", pos))
            if pty is not None:
                env[pat.var] = pty
        elif isinstance(pat, PatLiteral):
            nv, vty = typer.type_expr(pat.value, {})
            pat.value = nv
            if not is_constant(nv):
                report.findings.append(Finding("error", "NonConstantPattern", path, f"pattern for {pname} must be constant", pos))
            elif vty is not None and pty is not None and not assignable(pty, vty):
                report.findings.append(Finding("error", "TypeError", path, f"pattern for {pname}: {vty.name} does not match port type {pty.name}", pos))
    return env


def _check_updates(typer, comp, outputs, assignments, env, port_ty, var_ty, path, report, pos):
    out_names = {p.name for p in comp.outputs()}
    for i, (pname, expr) in enumerate(outputs):
        if pname not in out_names:
            report.findings.append(Finding("error", "UnknownPort", path, f"output to unknown port {pname}", pos))
            continue
        if expr is None:
            continue
        ne, ety = typer.type_expr(expr, env)
        outputs[i] = (pname, ne)
        pty = port_ty.get(pname)
        if ety is not None and pty is not None and not assignable(pty, ety):
            report.findings.append(Finding("error", "TypeError", path, f"output {pname}: expression has type {ety.name}, port is {pty.name}", pos))
    for i, (vname, expr) in enumerate(assignments):
        if vname not in var_ty:
            report.findings.append(Finding("error", "UnknownVar", path, f"assignment to unknown state variable {vname}", pos))
            continue
        ne, ety = typer.type_expr(expr, env)
        assignments[i] = (vname, ne)
        vty = var_ty[vname]
        if ety is not None and not assignable(vty, ety):
            report.findings.append(Finding("error", "TypeError", path, f"assignment to {vname}: expression has type {ety.name}, variable is {vty.name}", pos))


def _check_automaton_types(tables, comp, aut: Automaton, path, port_ty, report):
    typer = ExprTyper(tables, report, path)
    states = set(aut.states)
    var_ty: dict[str, TypeDef] = {}
    for v in aut.vars:
        ty = tables.type_of(v.type_name)
        if ty is None:
            report.findings.append(Finding("error", "UnknownType", path, f"variable {v.name}: unknown type {v.type_name}", v.pos))
            continue
        var_ty[v.name] = ty
        ni, ity = typer.type_expr(v.init, {})
        v.init = ni
        if not is_constant(ni):
            report.findings.append(Finding("error", "NonConstantInit", path, f"variable {v.name}: initial value must be constant", v.pos))
        elif ity is not None and not assignable(ty, ity):
            report.findings.append(Finding("error", "TypeError", path, f"variable {v.name}: initial value has type {ity.name}", v.pos))

    for tr in aut.transitions:
        for s, which in ((tr.source, "source"), (tr.target, "target")):
            if s not in states:
                report.findings.append(Finding("error", "UnknownState", path, f"transition {which} {s} is not a control state", tr.pos))
        env = _pattern_env(typer, comp, tr.patterns, port_ty, var_ty, path, report, tr.pos)
        if tr.precondition is not None:
            np, pty = typer.type_expr(tr.precondition, env)
            tr.precondition = np
            if pty is not None and not isinstance(pty.kind, BoolKind):
                report.findings.append(Finding("error", "TypeError", path, f"precondition has type {pty.name}, expected Bool", tr.pos))
        _check_updates(typer, comp, tr.outputs, tr.assignments, env, port_ty, var_ty, path, report, tr.pos)

    _warn_overlaps(aut.transitions, path, report)


def _check_table_types(tables, comp, table: FunctionTable, path, port_ty, report):
    typer = ExprTyper(tables, report, path)
    for row in table.rows:
        env = _pattern_env(typer, comp, row.patterns, port_ty, {}, path, report, row.pos)
        if row.guard is not None:
            ng, gty = typer.type_expr(row.guard, env)
            row.guard = ng
            if gty is not None and not isinstance(gty.kind, BoolKind):
                report.findings.append(Finding("error", "TypeError", path, f"row guard has type {gty.name}, expected Bool", row.pos))
        _check_updates(typer, comp, row.outputs, [], env, port_ty, {}, path, report, row.pos)
    from .ast import table_to_automaton

    _warn_overlaps(table_to_automaton(table).transitions, path, report)


def _check_composite_types(tables, comp, body: Composite, path, report):
    subs = {s.name: s for s in body.subs}

    def port_of(cname, pname, want_dir, pos, what):
        if cname not in subs:
            report.findings.append(Finding("error", "UnknownComponent", path, f"{what} references unknown sub {cname}", pos))
            return None
        sub = subs[cname]
        for p in sub.ports:
            if p.name == pname:
                if p.direction != want_dir:
                    report.findings.append(Finding("error", "PortDirection", path, f"{what}: {cname}.{pname} is not an {want_dir} port", pos))
                    return None
                return p
        report.findings.append(Finding("error", "UnknownPort", path, f"{what}: {cname} has no port {pname}", pos))
        return None

    def own_port(pname, want_dir, pos, what):
        for p in comp.ports:
            if p.name == pname:
                if p.direction != want_dir:
                    report.findings.append(Finding("error", "PortDirection", path, f"{what}: {pname} is not an {want_dir} port of {comp.name}", pos))
                    return None
                return p
        report.findings.append(Finding("error", "UnknownPort", path, f"{what}: {comp.name} has no port {pname}", pos))
        return None

    for ch in body.channels:
        src = port_of(ch.src_comp, ch.src_port, "out", ch.pos, "channel source")
        dst = port_of(ch.dst_comp, ch.dst_port, "in", ch.pos, "channel target")
        if src is not None and dst is not None and src.type_name != dst.type_name:
            report.findings.append(
                Finding("error", "TypeMismatch", path,
                        f"channel {ch.src_comp}.{ch.src_port} -> {ch.dst_comp}.{ch.dst_port}: "
                        f"{src.type_name} does not match {dst.type_name}", ch.pos)
            )
    for d in body.delegations:
        if d.src_comp is None and d.dst_comp is not None:
            src = own_port(d.src_port, "in", d.pos, "delegation source")
            dst = port_of(d.dst_comp, d.dst_port, "in", d.pos, "delegation target")
        elif d.src_comp is not None and d.dst_comp is None:
            src = port_of(d.src_comp, d.src_port, "out", d.pos, "delegation source")
            dst = own_port(d.dst_port, "out", d.pos, "delegation target")
        else:
            report.findings.append(
                Finding("error", "InvalidDelegation", path,
                        "delegations connect parent input to child input or child output to parent output", d.pos)
            )
            continue
        if src is not None and dst is not None and src.type_name != dst.type_name:
            report.findings.append(
                Finding("error", "TypeMismatch", path,
                        f"delegation: {src.type_name} does not match {dst.type_name}", d.pos)
            )


def _patterns_compatible(a, b) -> bool:
    pa = dict(a)
    pb = dict(b)
    for port in set(pa) & set(pb):
        x, y = pa[port], pb[port]
        if isinstance(x, PatAbsent) != isinstance(y, PatAbsent):
            return False
        if isinstance(x, PatLiteral) and isinstance(y, PatLiteral):
            from .eval import EMPTY_CONTEXT, EvalError, eval_expr

            try:
                if eval_expr({}, EMPTY_CONTEXT, x.value) != eval_expr({}, EMPTY_CONTEXT, y.value):
                    return False
            except EvalError:
                pass
    return True


def _warn_overlaps(transitions, path, report):
    # syntactic approximation: warn only when neither transition carries a
    # precondition and the patterns cannot rule out a shared input
    for i, a in enumerate(transitions):
        for b in transitions[i + 1:]:
            if a.source != b.source:
                continue
            if a.precondition is not None or b.precondition is not None:
                continue
            if _patterns_compatible(a.patterns, b.patterns):
                report.findings.append(
                    Finding("warning", "OverlappingTransitions", path,
                            f"transitions from {a.source} may overlap; selection follows declaration order", b.pos)
                )


# ---------------------------------------------------------------------------
# check_nonrecursive
# ---------------------------------------------------------------------------

def check_nonrecursive(model: Model) -> CheckReport:
    """Reject recursive type references and direct or mutual function
    recursion, reporting the full cycle path."""
    report = CheckReport()

    type_refs: dict[str, list[str]] = {}
    for td in model.typedefs:
        refs: list[str] = []
        if isinstance(td.kind, VariantKind):
            refs = [t for c in td.kind.ctors for _, t in c.fields]
        elif isinstance(td.kind, RecordKind):
            refs = [t for _, t in td.kind.fields]
        type_refs[td.name] = [r for r in refs if r not in BUILTINS]

    for cycle in _cycles(type_refs):
        report.findings.append(
            Finding("error", "RecursiveType", model.name,
                    "recursive type: " + " -> ".join(cycle))
        )

    func_names = {f.name for f in model.funcs}
    call_refs: dict[str, list[str]] = {}
    for fn in model.funcs:
        calls: list[str] = []
        _collect_calls(fn.body, func_names, calls)
        call_refs[fn.name] = calls

    for cycle in _cycles(call_refs):
        report.findings.append(
            Finding("error", "RecursiveFunction", model.name,
                    "recursive function: " + " -> ".join(cycle))
        )
    return report


def _collect_calls(e: Expr, func_names: set[str], out: list[str]):
    if isinstance(e, Call):
        if e.func in func_names:
            out.append(e.func)
        for a in e.args:
            _collect_calls(a, func_names, out)
    elif isinstance(e, CtorApp):
        for a in e.args:
            _collect_calls(a, func_names, out)
    elif isinstance(e, RecordLit):
        for _, x in e.fields:
            _collect_calls(x, func_names, out)
    elif isinstance(e, FieldAccess):
        _collect_calls(e.target, func_names, out)
    elif isinstance(e, Match):
        _collect_calls(e.target, func_names, out)
        for arm in e.arms:
            _collect_calls(arm.body, func_names, out)
    elif isinstance(e, IfThenElse):
        _collect_calls(e.cond, func_names, out)
        _collect_calls(e.then, func_names, out)
        _collect_calls(e.orelse, func_names, out)
    elif isinstance(e, Unary):
        _collect_calls(e.operand, func_names, out)
    elif isinstance(e, Binary):
        _collect_calls(e.left, func_names, out)
        _collect_calls(e.right, func_names, out)


def _cycles(graph: dict[str, list[str]]) -> list[list[str]]:
    out: list[list[str]] = []
    color: dict[str, int] = {}
    stack: list[str] = []

    def dfs(v: str):
        color[v] = 1
        stack.append(v)
        for w in graph.get(v, ()):
            if w not in graph:
                continue
            c = color.get(w, 0)
            if c == 1:
                cyc = stack[stack.index(w):] + [w]
                out.append(cyc)
            elif c == 0:
                dfs(w)
        stack.pop()
        color[v] = 2

    for v in sorted(graph):
        if color.get(v, 0) == 0:
            dfs(v)
    return out


# ---------------------------------------------------------------------------
# check_connectivity
# ---------------------------------------------------------------------------

def check_connectivity(model: Model) -> CheckReport:
    """Input ports take at most one driver; unconnected inputs read absent
    (warning); fan-out from one output is allowed."""
    report = CheckReport()
    for comp, path in _walk_paths(model.root):
        if not isinstance(comp.behavior, Composite):
            continue
        body = comp.behavior
        subs = {s.name: s for s in body.subs}
        drivers: dict[tuple[str, str], int] = {}
        for ch in body.channels:
            drivers[(ch.dst_comp, ch.dst_port)] = drivers.get((ch.dst_comp, ch.dst_port), 0) + 1
        for d in body.delegations:
            if d.src_comp is None and d.dst_comp is not None:
                drivers[(d.dst_comp, d.dst_port)] = drivers.get((d.dst_comp, d.dst_port), 0) + 1
            elif d.src_comp is not None and d.dst_comp is None:
                drivers[("", d.dst_port)] = drivers.get(("", d.dst_port), 0) + 1
        for (cname, pname), n in sorted(drivers.items()):
            if n > 1:
                where = f"{cname}.{pname}" if cname else pname
                report.findings.append(
                    Finding("error", "MultipleDrivers", path, f"input {where} has {n} drivers", comp.pos)
                )
        for sname, sub in sorted(subs.items()):
            for p in sub.inputs():
                if drivers.get((sname, p.name), 0) == 0:
                    report.findings.append(
                        Finding("warning", "UnconnectedInput", f"{path}/{sname}",
                                f"input {p.name} is unconnected and reads absent", p.pos)
                    )
    return report


# ---------------------------------------------------------------------------
# check_causality / check_composite_causality
# ---------------------------------------------------------------------------

def check_causality(model: Model) -> CheckReport:
    """Every channel cycle must pass through a strongly causal component:
    the instantaneous-dependency graph must be acyclic."""
    report = CheckReport()
    try:
        flatten(model)
    except CausalityCycle as e:
        names = " -> ".join("/".join(p) for p in e.cycle_paths)
        report.findings.append(
            Finding("error", "WeaklyCausalCycle", "/".join(e.cycle_paths[0]),
                    f"weakly causal feedback loop: {names}")
        )
    except ValueError as e:
        report.findings.append(Finding("error", "BadWiring", model.name, str(e)))
    return report


def check_composite_causality(model: Model) -> CheckReport:
    """Declared composite causality against the actual subnetwork: an
    instantaneous input-to-output path under a 'strong' declaration is an
    error; a 'weak' declaration with no such path is a warning."""
    report = CheckReport()
    graph = instantaneous_port_graph(model)

    def reachable(start) -> set:
        seen = {start}
        todo = [start]
        while todo:
            cur = todo.pop()
            for nxt in graph.get(cur, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return seen

    def tuple_path(prefix, comp):
        return prefix + (comp.name,)

    def rec(comp: ComponentSpec, tpath, spath):
        if not isinstance(comp.behavior, Composite):
            return
        outs = {(tpath, p.name) for p in comp.outputs()}
        instantaneous = False
        for p in comp.inputs():
            if reachable((tpath, p.name)) & outs:
                instantaneous = True
                break
        if instantaneous and comp.causality == "strong":
            report.findings.append(
                Finding("error", "CausalityOverclaim", spath,
                        "declared strong but the subnetwork reacts instantaneously", comp.pos)
            )
        if not instantaneous and comp.causality == "weak":
            report.findings.append(
                Finding("warning", "CausalityUnderclaim", spath,
                        "declared weak but the subnetwork never reacts instantaneously", comp.pos)
            )
        for sub in comp.behavior.subs:
            rec(sub, tuple_path(tpath, sub), f"{spath}/{sub.name}")

    rec(model.root, (model.root.name,), model.root.name)
    return report


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def check_model(model: Model) -> CheckReport:
    """Run all static checks in dependency order; later stages are skipped
    when earlier ones reject the model."""
    report = check_types(model)
    report.extend(check_nonrecursive(model))
    report.extend(check_connectivity(model))
    if report.passed:
        causality = check_causality(model)
        report.extend(causality)
        if causality.passed:
            report.extend(check_composite_causality(model))
    return report
