"""Recursive-descent parser for `.syn` model files.

Grammar sketch (keywords anchor every construct, `#` starts a line comment):

    model M {
      type Mode enum { Off, On }
      type Volt int 0 .. 3
      type Cmd variant { Stop, Go(speed: Volt) }
      type Pair record { a: Volt, b: Bool }
      func f(x: Volt): Bool = x < 2
      component Root {
        in a: Bool init false
        out b: Bool init false
        causality strong
        automaton {
          states Off init, On
          var n: Volt init 0
          transition Off -> On when a = true with n < 3
            then b = true, n := n + 1
        }
      }
    }

Composites declare `sub Name { ... }` blocks plus `channel A.p -> B.q` and
`delegate p -> A.q` / `delegate A.q -> p` wiring. Tables hold `when ...
[with ...] [then ...]` rows. In patterns and output lists, `p = -` means
explicit absence.
"""

from __future__ import annotations

from typing import Optional

from .ast import (
    Automaton,
    Binary,
    Call,
    Channel,
    ComponentSpec,
    Composite,
    Delegation,
    EnumKind,
    Expr,
    FieldAccess,
    FuncDef,
    FunctionTable,
    IfThenElse,
    Lit,
    Match,
    MatchArm,
    Model,
    PatAbsent,
    PatBind,
    PatLiteral,
    PatWildcard,
    Pattern,
    PortSpec,
    RecordKind,
    RecordLit,
    TableRow,
    Transition,
    TypeDef,
    Unary,
    Var,
    VarDecl,
    VariantCtor,
    VariantKind,
    BoundedIntKind,
)
from .lexer import LexError, Token, tokenize


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int, expected: Optional[set[str]] = None):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col
        self.expected = expected or set()


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def at_kw(self, word: str) -> bool:
        return self.at("kw", word)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        want = text or kind
        raise ParseError(f"expected {want!r}, found {t.text or t.kind!r}", t.line, t.col, {want})

    def expect_kw(self, word: str) -> Token:
        t = self.peek()
        if t.kind == "kw" and t.text == word:
            return self.next()
        raise ParseError(f"expected {word!r}, found {t.text or t.kind!r}", t.line, t.col, {word})

    def ident(self) -> Token:
        t = self.peek()
        if t.kind == "ident":
            return self.next()
        raise ParseError(f"expected identifier, found {t.text or t.kind!r}", t.line, t.col, {"identifier"})

    # -- model structure ---------------------------------------------------

    def model(self) -> Model:
        self.expect_kw("model")
        name = self.ident().text
        self.expect("{")
        typedefs: list[TypeDef] = []
        funcs: list[FuncDef] = []
        root: Optional[ComponentSpec] = None
        seen: dict[str, Token] = {}
        while not self.at("}"):
            t = self.peek()
            if self.at_kw("type"):
                td = self.typedecl()
                self._no_dup(seen, td.name, t)
                typedefs.append(td)
            elif self.at_kw("func"):
                fd = self.funcdecl()
                self._no_dup(seen, fd.name, t)
                funcs.append(fd)
            elif self.at_kw("component"):
                if root is not None:
                    raise ParseError("duplicate definition: second root component", t.line, t.col)
                root = self.component("component")
            else:
                raise ParseError(
                    f"expected type, func or component, found {t.text or t.kind!r}",
                    t.line, t.col, {"type", "func", "component"},
                )
        self.expect("}")
        self.expect("eof")
        if root is None:
            t = self.peek()
            raise ParseError("model has no root component", t.line, t.col)
        return Model(name=name, typedefs=typedefs, funcs=funcs, root=root)

    def _no_dup(self, seen: dict[str, Token], name: str, tok: Token):
        if name in seen:
            raise ParseError(f"duplicate definition: {name}", tok.line, tok.col)
        seen[name] = tok

    def typedecl(self) -> TypeDef:
        t0 = self.expect_kw("type")
        name = self.ident().text
        if self.at_kw("enum"):
            self.next()
            self.expect("{")
            lits = [self.ident().text]
            while self.at(","):
                self.next()
                lits.append(self.ident().text)
            self.expect("}")
            if len(set(lits)) != len(lits):
                raise ParseError(f"duplicate definition: enum literal in {name}", t0.line, t0.col)
            return TypeDef(name, EnumKind(tuple(lits)), pos=(t0.line, t0.col))
        if self.at_kw("variant"):
            self.next()
            self.expect("{")
            ctors = [self.ctor()]
            while self.at(","):
                self.next()
                ctors.append(self.ctor())
            self.expect("}")
            if len({c.name for c in ctors}) != len(ctors):
                raise ParseError(f"duplicate definition: constructor in {name}", t0.line, t0.col)
            return TypeDef(name, VariantKind(tuple(ctors)), pos=(t0.line, t0.col))
        if self.at_kw("record"):
            self.next()
            self.expect("{")
            fields = [self.typedfield()]
            while self.at(","):
                self.next()
                fields.append(self.typedfield())
            self.expect("}")
            if len({f for f, _ in fields}) != len(fields):
                raise ParseError(f"duplicate definition: field in {name}", t0.line, t0.col)
            return TypeDef(name, RecordKind(tuple(fields)), pos=(t0.line, t0.col))
        if self.at_kw("int"):
            self.next()
            lo = self.intlit()
            self.expect("..")
            hi = self.intlit()
            if lo > hi:
                raise ParseError(f"empty integer range for {name}", t0.line, t0.col)
            return TypeDef(name, BoundedIntKind(lo, hi), pos=(t0.line, t0.col))
        t = self.peek()
        raise ParseError(
            f"expected enum, variant, record or int, found {t.text or t.kind!r}",
            t.line, t.col, {"enum", "variant", "record", "int"},
        )

    def intlit(self) -> int:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        t = self.expect("int")
        return -int(t.text) if neg else int(t.text)

    def ctor(self) -> VariantCtor:
        name = self.ident().text
        fields: list[tuple[str, str]] = []
        if self.at("("):
            self.next()
            fields.append(self.typedfield())
            while self.at(","):
                self.next()
                fields.append(self.typedfield())
            self.expect(")")
        return VariantCtor(name, tuple(fields))

    def typedfield(self) -> tuple[str, str]:
        name = self.ident().text
        self.expect(":")
        ty = self.ident().text
        return (name, ty)

    def funcdecl(self) -> FuncDef:
        t0 = self.expect_kw("func")
        name = self.ident().text
        self.expect("(")
        params: list[tuple[str, str]] = []
        if not self.at(")"):
            params.append(self.typedfield())
            while self.at(","):
                self.next()
                params.append(self.typedfield())
        self.expect(")")
        self.expect(":")
        ret = self.ident().text
        self.expect("=")
        body = self.expr()
        if len({p for p, _ in params}) != len(params):
            raise ParseError(f"duplicate definition: parameter in {name}", t0.line, t0.col)
        return FuncDef(name, params, ret, body, pos=(t0.line, t0.col))

    def component(self, kw: str) -> ComponentSpec:
        t0 = self.expect_kw(kw)
        name = self.ident().text
        self.expect("{")
        ports: list[PortSpec] = []
        while self.at_kw("in") or self.at_kw("out"):
            ports.append(self.portdecl())
        if len({p.name for p in ports}) != len(ports):
            raise ParseError(f"duplicate definition: port in {name}", t0.line, t0.col)
        self.expect_kw("causality")
        t = self.peek()
        if self.at_kw("weak") or self.at_kw("strong"):
            causality = self.next().text
        else:
            raise ParseError(
                f"expected weak or strong, found {t.text or t.kind!r}",
                t.line, t.col, {"weak", "strong"},
            )
        behavior = self.behavior(name)
        self.expect("}")
        return ComponentSpec(name, ports, causality, behavior, pos=(t0.line, t0.col))

    def portdecl(self) -> PortSpec:
        t0 = self.next()  # 'in' | 'out'
        name = self.ident().text
        self.expect(":")
        ty = self.ident().text
        self.expect_kw("init")
        init = self.expr()
        return PortSpec(name, t0.text, ty, init, pos=(t0.line, t0.col))

    def behavior(self, comp_name: str):
        if self.at_kw("automaton"):
            return self.automaton()
        if self.at_kw("table"):
            return self.table()
        if self.at_kw("sub") or self.at_kw("channel") or self.at_kw("delegate"):
            return self.composite(comp_name)
        t = self.peek()
        raise ParseError(
            f"expected automaton, table or composite body, found {t.text or t.kind!r}",
            t.line, t.col, {"automaton", "table", "sub", "channel", "delegate"},
        )

    def automaton(self) -> Automaton:
        self.expect_kw("automaton")
        self.expect("{")
        t0 = self.expect_kw("states")
        states: list[str] = []
        initial: Optional[str] = None
        while True:
            s = self.ident().text
            states.append(s)
            if self.at_kw("init"):
                self.next()
                if initial is not None:
                    raise ParseError("more than one initial state", t0.line, t0.col)
                initial = s
            if self.at(","):
                self.next()
                continue
            break
        if initial is None:
            raise ParseError("no state marked init", t0.line, t0.col)
        if len(set(states)) != len(states):
            raise ParseError("duplicate definition: control state", t0.line, t0.col)
        vars: list[VarDecl] = []
        while self.at_kw("var"):
            tv = self.next()
            vname = self.ident().text
            self.expect(":")
            vty = self.ident().text
            self.expect_kw("init")
            vinit = self.expr()
            vars.append(VarDecl(vname, vty, vinit, pos=(tv.line, tv.col)))
        if len({v.name for v in vars}) != len(vars):
            raise ParseError("duplicate definition: state variable", t0.line, t0.col)
        transitions: list[Transition] = []
        while self.at_kw("transition"):
            transitions.append(self.transition())
        self.expect("}")
        return Automaton(states, initial, vars, transitions)

    def transition(self) -> Transition:
        t0 = self.expect_kw("transition")
        src = self.ident().text
        self.expect("->")
        tgt = self.ident().text
        patterns: list[tuple[str, Pattern]] = []
        if self.at_kw("when"):
            self.next()
            patterns = self.patlist()
        precond = None
        if self.at_kw("with"):
            self.next()
            precond = self.expr()
        outputs: list[tuple[str, Optional[Expr]]] = []
        assignments: list[tuple[str, Expr]] = []
        if self.at_kw("then"):
            self.next()
            outputs, assignments = self.updates()
        return Transition(src, tgt, patterns, precond, outputs, assignments, pos=(t0.line, t0.col))

    def table(self) -> FunctionTable:
        self.expect_kw("table")
        self.expect("{")
        rows: list[TableRow] = []
        while self.at_kw("when"):
            t0 = self.next()
            patterns = self.patlist()
            guard = None
            if self.at_kw("with"):
                self.next()
                guard = self.expr()
            outputs: list[tuple[str, Optional[Expr]]] = []
            if self.at_kw("then"):
                self.next()
                outputs, assignments = self.updates()
                if assignments:
                    raise ParseError("table rows cannot assign state variables", t0.line, t0.col)
            rows.append(TableRow(patterns, guard, outputs, pos=(t0.line, t0.col)))
        self.expect("}")
        return FunctionTable(rows)

    def composite(self, comp_name: str) -> Composite:
        subs: list[ComponentSpec] = []
        channels: list[Channel] = []
        delegations: list[Delegation] = []
        while True:
            if self.at_kw("sub"):
                subs.append(self.component("sub"))
            elif self.at_kw("channel"):
                t0 = self.next()
                sc, sp = self.portref()
                self.expect("->")
                dc, dp = self.portref()
                if sc is None or dc is None:
                    raise ParseError("channel endpoints must be sub.port", t0.line, t0.col)
                channels.append(Channel(sc, sp, dc, dp, pos=(t0.line, t0.col)))
            elif self.at_kw("delegate"):
                t0 = self.next()
                sc, sp = self.portref()
                self.expect("->")
                dc, dp = self.portref()
                delegations.append(Delegation(sc, sp, dc, dp, pos=(t0.line, t0.col)))
            else:
                break
        if len({s.name for s in subs}) != len(subs):
            raise ParseError(f"duplicate definition: sub in {comp_name}", self.peek().line, self.peek().col)
        return Composite(subs, channels, delegations)

    def portref(self) -> tuple[Optional[str], str]:
        a = self.ident().text
        if self.at("."):
            self.next()
            b = self.ident().text
            return (a, b)
        return (None, a)

    # -- patterns and updates ----------------------------------------------

    def patlist(self) -> list[tuple[str, Pattern]]:
        pats = [self.pat()]
        while self.at(","):
            self.next()
            pats.append(self.pat())
        names = [p for p, _ in pats]
        if len(set(names)) != len(names):
            t = self.peek()
            raise ParseError("duplicate pattern for one port", t.line, t.col)
        return pats

    def pat(self) -> tuple[str, Pattern]:
        port = self.ident().text
        if self.at("?"):
            self.next()
            if self.at("ident"):
                return (port, PatBind(self.next().text))
            return (port, PatWildcard())
        self.expect("=")
        if self.at("-") and not self._minus_starts_expr():
            self.next()
            return (port, PatAbsent())
        return (port, PatLiteral(self.expr()))

    def _minus_starts_expr(self) -> bool:
        nxt = self.peek(1)
        return nxt.kind in ("int", "ident", "(") or (
            nxt.kind == "kw" and nxt.text in ("true", "false", "if", "match", "not")
        )

    def updates(self) -> tuple[list[tuple[str, Optional[Expr]]], list[tuple[str, Expr]]]:
        outputs: list[tuple[str, Optional[Expr]]] = []
        assignments: list[tuple[str, Expr]] = []
        while True:
            t = self.peek()
            name = self.ident().text
            if self.at(":="):
                self.next()
                if any(n == name for n, _ in assignments):
                    raise ParseError(f"state variable {name} assigned twice", t.line, t.col)
                assignments.append((name, self.expr()))
            else:
                self.expect("=")
                if any(n == name for n, _ in outputs):
                    raise ParseError(f"output port {name} set twice", t.line, t.col)
                if self.at("-") and not self._minus_starts_expr():
                    self.next()
                    outputs.append((name, None))
                else:
                    outputs.append((name, self.expr()))
            if self.at(","):
                self.next()
                continue
            break
        return outputs, assignments

    # -- expressions ---------------------------------------------------------

    def expr(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        e = self.and_expr()
        while self.at_kw("or"):
            t = self.next()
            e = Binary("or", e, self.and_expr(), pos=(t.line, t.col))
        return e

    def and_expr(self) -> Expr:
        e = self.not_expr()
        while self.at_kw("and"):
            t = self.next()
            e = Binary("and", e, self.not_expr(), pos=(t.line, t.col))
        return e

    def not_expr(self) -> Expr:
        if self.at_kw("not"):
            t = self.next()
            return Unary("not", self.not_expr(), pos=(t.line, t.col))
        return self.cmp_expr()

    def cmp_expr(self) -> Expr:
        e = self.add_expr()
        t = self.peek()
        if t.kind in ("==", "!=", "<", "<=", ">", ">="):
            self.next()
            return Binary(t.kind, e, self.add_expr(), pos=(t.line, t.col))
        return e

    def add_expr(self) -> Expr:
        e = self.mul_expr()
        while self.peek().kind in ("+", "-"):
            t = self.next()
            e = Binary(t.kind, e, self.mul_expr(), pos=(t.line, t.col))
        return e

    def mul_expr(self) -> Expr:
        e = self.unary_expr()
        while self.at("*") or self.at_kw("div") or self.at_kw("mod"):
            t = self.next()
            e = Binary(t.text, e, self.unary_expr(), pos=(t.line, t.col))
        return e

    def unary_expr(self) -> Expr:
        if self.at("-"):
            t = self.next()
            inner = self.unary_expr()
            if isinstance(inner, Lit) and isinstance(inner.value, int) and not isinstance(inner.value, bool):
                return Lit(-inner.value, pos=(t.line, t.col))
            return Unary("neg", inner, pos=(t.line, t.col))
        return self.postfix_expr()

    def postfix_expr(self) -> Expr:
        e = self.primary_expr()
        while self.at("."):
            t = self.next()
            fname = self.ident().text
            e = FieldAccess(e, fname, pos=(t.line, t.col))
        return e

    def primary_expr(self) -> Expr:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Lit(int(t.text), pos=(t.line, t.col))
        if self.at_kw("true"):
            self.next()
            return Lit(True, pos=(t.line, t.col))
        if self.at_kw("false"):
            self.next()
            return Lit(False, pos=(t.line, t.col))
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("{"):
            self.next()
            fields = []
            while True:
                fname = self.ident().text
                self.expect("=")
                fields.append((fname, self.expr()))
                if self.at(","):
                    self.next()
                    continue
                break
            self.expect("}")
            return RecordLit(fields, pos=(t.line, t.col))
        if self.at_kw("if"):
            self.next()
            cond = self.expr()
            self.expect_kw("then")
            then = self.expr()
            self.expect_kw("else")
            orelse = self.expr()
            return IfThenElse(cond, then, orelse, pos=(t.line, t.col))
        if self.at_kw("match"):
            self.next()
            target = self.expr()
            self.expect("{")
            arms = [self.match_arm()]
            while self.at("|"):
                self.next()
                arms.append(self.match_arm())
            self.expect("}")
            return Match(target, arms, pos=(t.line, t.col))
        if t.kind == "ident":
            self.next()
            if self.at("("):
                self.next()
                args = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.at(","):
                        self.next()
                        args.append(self.expr())
                self.expect(")")
                # call vs constructor application is settled by the checker
                return Call(t.text, args, pos=(t.line, t.col))
            return Var(t.text, pos=(t.line, t.col))
        raise ParseError(
            f"expected expression, found {t.text or t.kind!r}", t.line, t.col, {"expression"}
        )

    def match_arm(self) -> MatchArm:
        ctor = self.ident().text
        binders: list[str] = []
        if self.at("("):
            self.next()
            binders.append(self.ident().text)
            while self.at(","):
                self.next()
                binders.append(self.ident().text)
            self.expect(")")
        self.expect("->")
        return MatchArm(ctor, binders, self.expr())


def parse_model(text: str) -> Model:
    """Parse a `.syn` model file into its AST.

    Name resolution and typing are deferred to the static checks; syntax and
    duplicate definitions are rejected here with positions.
    """
    try:
        tokens = tokenize(text)
    except LexError as e:
        raise ParseError(str(e), e.line, e.col) from None
    return _Parser(tokens).model()


def parse_expr(text: str) -> Expr:
    """Parse a standalone expression (used by glossary files and tests)."""
    try:
        tokens = tokenize(text)
    except LexError as e:
        raise ParseError(str(e), e.line, e.col) from None
    p = _Parser(tokens)
    e = p.expr()
    p.expect("eof")
    return e
