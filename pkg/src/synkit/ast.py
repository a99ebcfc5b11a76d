"""Abstract syntax for SYN models: types, functions, expressions, components."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Pos = tuple[int, int]  # (line, col), 1-based


# ---------------------------------------------------------------------------
# Type definitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnumKind:
    literals: tuple[str, ...]


@dataclass(frozen=True)
class VariantCtor:
    name: str
    fields: tuple[tuple[str, str], ...]  # (field name, type name)


@dataclass(frozen=True)
class VariantKind:
    ctors: tuple[VariantCtor, ...]


@dataclass(frozen=True)
class RecordKind:
    fields: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class BoundedIntKind:
    lo: int
    hi: int


@dataclass(frozen=True)
class BoolKind:
    pass


TypeKind = Union[EnumKind, VariantKind, RecordKind, BoundedIntKind, BoolKind]

INT32_MIN = -(2 ** 31)
INT32_MAX = 2 ** 31 - 1


@dataclass(frozen=True)
class TypeDef:
    name: str
    kind: TypeKind
    pos: Optional[Pos] = field(default=None, compare=False)


BUILTIN_BOOL = TypeDef("Bool", BoolKind())
BUILTIN_INT = TypeDef("Int", BoundedIntKind(INT32_MIN, INT32_MAX))
BUILTINS = {"Bool": BUILTIN_BOOL, "Int": BUILTIN_INT}


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------
# Nodes are structurally compared; `ty` is filled in by the type checker and
# `pos` by the parser, neither participates in equality.

@dataclass(eq=False)
class Expr:
    pass


def _exprfields(cls):
    return dataclass(eq=False, repr=True)(cls)


@_exprfields
class Lit(Expr):
    value: object  # bool | int
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class Var(Expr):
    name: str
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class EnumLit(Expr):
    # bare constructor name; resolved to an enum literal or 0-ary variant ctor
    name: str
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class Call(Expr):
    func: str
    args: list[Expr]
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class CtorApp(Expr):
    ctor: str
    args: list[Expr]
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class RecordLit(Expr):
    fields: list[tuple[str, Expr]]
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class FieldAccess(Expr):
    target: Expr
    field: str
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class MatchArm:
    ctor: str
    binders: list[str]
    body: Expr


@_exprfields
class Match(Expr):
    target: Expr
    arms: list[MatchArm]
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class IfThenElse(Expr):
    cond: Expr
    then: Expr
    orelse: Expr
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class Unary(Expr):
    op: str  # 'not' | 'neg'
    operand: Expr
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


@_exprfields
class Binary(Expr):
    op: str  # + - * div mod == != < <= > >= and or
    left: Expr
    right: Expr
    pos: Optional[Pos] = None
    ty: Optional[TypeDef] = None


def expr_eq(a: Expr, b: Expr) -> bool:
    """Structural equality ignoring positions and inferred types."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Lit):
        return a.value == b.value and type(a.value) is type(b.value)
    if isinstance(a, Var):
        return a.name == b.name
    if isinstance(a, EnumLit):
        return a.name == b.name
    if isinstance(a, Call):
        return a.func == b.func and _expr_list_eq(a.args, b.args)
    if isinstance(a, CtorApp):
        return a.ctor == b.ctor and _expr_list_eq(a.args, b.args)
    if isinstance(a, RecordLit):
        return [f for f, _ in a.fields] == [f for f, _ in b.fields] and _expr_list_eq(
            [e for _, e in a.fields], [e for _, e in b.fields]
        )
    if isinstance(a, FieldAccess):
        return a.field == b.field and expr_eq(a.target, b.target)
    if isinstance(a, Match):
        if not expr_eq(a.target, b.target) or len(a.arms) != len(b.arms):
            return False
        return all(
            x.ctor == y.ctor and x.binders == y.binders and expr_eq(x.body, y.body)
            for x, y in zip(a.arms, b.arms)
        )
    if isinstance(a, IfThenElse):
        return expr_eq(a.cond, b.cond) and expr_eq(a.then, b.then) and expr_eq(a.orelse, b.orelse)
    if isinstance(a, Unary):
        return a.op == b.op and expr_eq(a.operand, b.operand)
    if isinstance(a, Binary):
        return a.op == b.op and expr_eq(a.left, b.left) and expr_eq(a.right, b.right)
    raise TypeError(f"unknown expr node {type(a)}")


def _expr_list_eq(xs: list[Expr], ys: list[Expr]) -> bool:
    return len(xs) == len(ys) and all(expr_eq(x, y) for x, y in zip(xs, ys))


# ---------------------------------------------------------------------------
# Functions
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class FuncDef:
    name: str
    params: list[tuple[str, str]]  # (name, type name)
    return_type: str
    body: Expr
    pos: Optional[Pos] = None


# ---------------------------------------------------------------------------
# Patterns (per input port, on transitions and table rows)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatWildcard:
    """Matches any present message."""


@dataclass(frozen=True)
class PatAbsent:
    """Matches only an absent message."""


@dataclass(eq=False)
class PatLiteral:
    value: Expr  # constant expression, evaluated at check time

    def __eq__(self, other):
        return isinstance(other, PatLiteral) and expr_eq(self.value, other.value)


@dataclass(frozen=True)
class PatBind:
    var: str


Pattern = Union[PatWildcard, PatAbsent, PatLiteral, PatBind]


# ---------------------------------------------------------------------------
# Behavior
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Transition:
    source: str
    target: str
    # port name -> pattern; ports not listed are unconstrained
    patterns: list[tuple[str, Pattern]]
    precondition: Optional[Expr]
    # port name -> expression, or None for explicit absence
    outputs: list[tuple[str, Optional[Expr]]]
    # state var name -> expression (right-hand sides read the pre-state)
    assignments: list[tuple[str, Expr]]
    pos: Optional[Pos] = None

    def __eq__(self, other):
        if not isinstance(other, Transition):
            return False
        return (
            self.source == other.source
            and self.target == other.target
            and _patlist_eq(self.patterns, other.patterns)
            and _opt_expr_eq(self.precondition, other.precondition)
            and _outlist_eq(self.outputs, other.outputs)
            and len(self.assignments) == len(other.assignments)
            and all(
                a == c and expr_eq(b, d)
                for (a, b), (c, d) in zip(self.assignments, other.assignments)
            )
        )


def _opt_expr_eq(a, b):
    if a is None or b is None:
        return a is None and b is None
    return expr_eq(a, b)


def _patlist_eq(xs, ys):
    return len(xs) == len(ys) and all(
        p == q and a == b for (p, a), (q, b) in zip(xs, ys)
    )


def _outlist_eq(xs, ys):
    return len(xs) == len(ys) and all(
        p == q and _opt_expr_eq(a, b) for (p, a), (q, b) in zip(xs, ys)
    )


@dataclass(eq=False)
class VarDecl:
    name: str
    type_name: str
    init: Expr
    pos: Optional[Pos] = None

    def __eq__(self, other):
        return (
            isinstance(other, VarDecl)
            and self.name == other.name
            and self.type_name == other.type_name
            and expr_eq(self.init, other.init)
        )


@dataclass(eq=False)
class Automaton:
    states: list[str]
    initial: str
    vars: list[VarDecl]
    transitions: list[Transition]

    def __eq__(self, other):
        return (
            isinstance(other, Automaton)
            and self.states == other.states
            and self.initial == other.initial
            and self.vars == other.vars
            and self.transitions == other.transitions
        )


@dataclass(eq=False)
class TableRow:
    patterns: list[tuple[str, Pattern]]
    guard: Optional[Expr]
    outputs: list[tuple[str, Optional[Expr]]]
    pos: Optional[Pos] = None

    def __eq__(self, other):
        return (
            isinstance(other, TableRow)
            and _patlist_eq(self.patterns, other.patterns)
            and _opt_expr_eq(self.guard, other.guard)
            and _outlist_eq(self.outputs, other.outputs)
        )


@dataclass(eq=False)
class FunctionTable:
    rows: list[TableRow]

    def __eq__(self, other):
        return isinstance(other, FunctionTable) and self.rows == other.rows


IMPLICIT_STATE = "S0"


def table_to_automaton(table: FunctionTable) -> Automaton:
    """Derive the single-state automaton a function table abbreviates."""
    transitions = [
        Transition(
            source=IMPLICIT_STATE,
            target=IMPLICIT_STATE,
            patterns=row.patterns,
            precondition=row.guard,
            outputs=row.outputs,
            assignments=[],
            pos=row.pos,
        )
        for row in table.rows
    ]
    return Automaton(states=[IMPLICIT_STATE], initial=IMPLICIT_STATE, vars=[], transitions=transitions)


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class PortSpec:
    name: str
    direction: str  # 'in' | 'out'
    type_name: str
    init: Expr  # constant expression
    pos: Optional[Pos] = None

    def __eq__(self, other):
        return (
            isinstance(other, PortSpec)
            and self.name == other.name
            and self.direction == other.direction
            and self.type_name == other.type_name
            and expr_eq(self.init, other.init)
        )


@dataclass(eq=False)
class Channel:
    src_comp: str
    src_port: str
    dst_comp: str
    dst_port: str
    pos: Optional[Pos] = None

    def __eq__(self, other):
        return isinstance(other, Channel) and (
            (self.src_comp, self.src_port, self.dst_comp, self.dst_port)
            == (other.src_comp, other.src_port, other.dst_comp, other.dst_port)
        )


@dataclass(eq=False)
class Delegation:
    # parent-in -> child-in uses src_comp == None on the source side;
    # child-out -> parent-out uses dst_comp == None on the destination side.
    src_comp: Optional[str]
    src_port: str
    dst_comp: Optional[str]
    dst_port: str
    pos: Optional[Pos] = None

    def __eq__(self, other):
        return isinstance(other, Delegation) and (
            (self.src_comp, self.src_port, self.dst_comp, self.dst_port)
            == (other.src_comp, other.src_port, other.dst_comp, other.dst_port)
        )


@dataclass(eq=False)
class Composite:
    subs: list["ComponentSpec"]
    channels: list[Channel]
    delegations: list[Delegation]

    def __eq__(self, other):
        return (
            isinstance(other, Composite)
            and self.subs == other.subs
            and self.channels == other.channels
            and self.delegations == other.delegations
        )


Behavior = Union[Automaton, FunctionTable, Composite]


@dataclass(eq=False)
class ComponentSpec:
    name: str
    ports: list[PortSpec]
    causality: str  # 'weak' | 'strong'
    behavior: Behavior
    pos: Optional[Pos] = None

    def __eq__(self, other):
        return (
            isinstance(other, ComponentSpec)
            and self.name == other.name
            and self.ports == other.ports
            and self.causality == other.causality
            and self.behavior == other.behavior
        )

    def inputs(self) -> list[PortSpec]:
        return [p for p in self.ports if p.direction == "in"]

    def outputs(self) -> list[PortSpec]:
        return [p for p in self.ports if p.direction == "out"]

    def is_composite(self) -> bool:
        return isinstance(self.behavior, Composite)


@dataclass(eq=False)
class Model:
    name: str
    typedefs: list[TypeDef]
    funcs: list[FuncDef]
    root: ComponentSpec

    def __eq__(self, other):
        return (
            isinstance(other, Model)
            and self.name == other.name
            and self.typedefs == other.typedefs
            and len(self.funcs) == len(other.funcs)
            and all(
                f.name == g.name
                and f.params == g.params
                and f.return_type == g.return_type
                and expr_eq(f.body, g.body)
                for f, g in zip(self.funcs, other.funcs)
            )
            and self.root == other.root
        )


# ---------------------------------------------------------------------------
# Definition lookup
# ---------------------------------------------------------------------------

class ResolveError(Exception):
    def __init__(self, kind: str, name: str):
        super().__init__(f"{kind}: {name}")
        self.kind = kind  # 'NotFound' | 'Ambiguous'
        self.name = name


def resolve(model: Model, name: str) -> Union[TypeDef, FuncDef]:
    """Look up a type or function definition by name.

    Built-in types (Bool, Int) resolve unless shadowed; duplicates raise
    Ambiguous.
    """
    hits: list[Union[TypeDef, FuncDef]] = []
    hits.extend(t for t in model.typedefs if t.name == name)
    hits.extend(f for f in model.funcs if f.name == name)
    if len(hits) > 1:
        raise ResolveError("Ambiguous", name)
    if hits:
        return hits[0]
    if name in BUILTINS:
        return BUILTINS[name]
    raise ResolveError("NotFound", name)


def iter_components(spec: ComponentSpec):
    """Yield every component in the tree, parents before children."""
    yield spec
    if isinstance(spec.behavior, Composite):
        for sub in spec.behavior.subs:
            yield from iter_components(sub)
