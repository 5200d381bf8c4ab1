"""Recursive-descent parser for the ``.eqt`` declaration language.

Grammar (EBNF):

    file        = decl* EOF
    decl        = recordDecl | dataDecl
    recordDecl  = "record" NAME binder* ":" "Set" "where"
                  [ "constructor" NAME ] [ "field" constr* ]
    dataDecl    = "data" NAME binder* ":" "Set" "where" constr*
    constr      = NAME ":" typeExpr
    typeExpr    = binder+ "→" typeExpr          -- quantifier
                | operand [ "→" typeExpr ]      -- arrow, right-associative
    operand     = apps [ "==" apps ]            -- equation
    apps        = atom+                          -- application, left-associative
    atom        = NAME | "Set" | "(" typeExpr ")"
    binder      = "(" NAME+ ":" typeExpr ")" | "{" NAME+ ":" typeExpr "}"

Layout is free-form: a constr ends exactly where the next ``NAME ":"`` pair
(or a closing token) begins, so types may wrap across lines.  ``--`` comments
run to end of line.  Inside an equation both sides are terms; names bound by
the enclosing quantifier parse as variables and everything else as symbols.

Every node carries its source position.  If the record header omits the
``constructor`` clause the declaration still gets one, named after the record
with a ``C`` appended, so printing always round-trips.
"""

from __future__ import annotations

from . import lexer
from .ast import (
    App,
    Arrow,
    Binder,
    Constr,
    DataDecl,
    Decl,
    Equation,
    Quant,
    RecordDecl,
    SetKind,
    SortRef,
    Sym,
    Term,
    TyApp,
    TypeExpr,
    Var,
)
from .lexer import LexError, Token, tokenize


class ParseError(Exception):
    """Syntax error with position and the set of token kinds that would
    have been accepted."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        detail = f"{line}:{col}: {message}"
        if expected:
            detail += f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(detail)
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ------------------------------------------------------

    def _peek(self, k: int = 0) -> Token:
        j = min(self.pos + k, len(self.tokens) - 1)
        return self.tokens[j]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != lexer.EOF:
            self.pos += 1
        return tok

    def _error(self, message: str, tok: Token | None = None, expected: tuple[str, ...] = ()) -> ParseError:
        tok = tok or self._peek()
        return ParseError(message, tok.line, tok.col, expected)

    def _expect(self, kind: str, value: str | None = None) -> Token:
        tok = self._peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise self._error(
                f"expected {want!r}, got {tok.value!r}" if tok.value else f"expected {want!r}, got end of input",
                tok,
                expected=(want,),
            )
        return self._advance()

    def _expect_keyword(self, word: str) -> Token:
        return self._expect(lexer.KEYWORD, word)

    def _expect_name(self) -> Token:
        tok = self._peek()
        if tok.kind != lexer.NAME:
            raise self._error(f"expected a name, got {tok.value!r}", tok, expected=(lexer.NAME,))
        return self._advance()

    # -- entry points ----------------------------------------------------------

    def parse_file(self) -> list[Decl]:
        decls: list[Decl] = []
        while self._peek().kind != lexer.EOF:
            decls.append(self.parse_decl())
        return decls

    def parse_decl(self) -> Decl:
        tok = self._peek()
        if tok.kind == lexer.KEYWORD and tok.value == "record":
            return self._parse_record()
        if tok.kind == lexer.KEYWORD and tok.value == "data":
            return self._parse_data()
        raise self._error(
            f"expected 'record' or 'data', got {tok.value!r}", tok, expected=("record", "data")
        )

    # -- declarations ------------------------------------------------------------

    def _parse_record(self) -> RecordDecl:
        start = self._expect_keyword("record")
        name = self._expect_name()
        params = self._parse_binders()
        self._expect(lexer.COLON)
        self._expect_keyword("Set")
        self._expect_keyword("where")

        ctor_name = name.value + "C"
        tok = self._peek()
        if tok.kind == lexer.KEYWORD and tok.value == "constructor":
            self._advance()
            ctor_name = self._expect_name().value

        fields: list[Constr] = []
        tok = self._peek()
        if tok.kind == lexer.KEYWORD and tok.value == "field":
            self._advance()
            fields = self._parse_constr_block()
        return RecordDecl(name.value, params, ctor_name, fields, pos=(start.line, start.col))

    def _parse_data(self) -> DataDecl:
        start = self._expect_keyword("data")
        name = self._expect_name()
        params = self._parse_binders()
        self._expect(lexer.COLON)
        self._expect_keyword("Set")
        self._expect_keyword("where")
        ctors = self._parse_constr_block()
        return DataDecl(name.value, params, ctors, pos=(start.line, start.col))

    def at_constr_start(self) -> bool:
        return self._peek().kind == lexer.NAME and self._peek(1).kind == lexer.COLON

    def _parse_constr_block(self) -> list[Constr]:
        constrs: list[Constr] = []
        while self.at_constr_start():
            constrs.append(self.parse_constr())
        return constrs

    def parse_constr(self) -> Constr:
        name = self._expect_name()
        self._expect(lexer.COLON)
        ty = self.parse_type(frozenset())
        return Constr(name.value, ty, pos=(name.line, name.col))

    # -- binders --------------------------------------------------------------------

    def _looks_like_binder(self) -> bool:
        """True when the upcoming tokens open a binder group:
        ``{`` always does in type position; ``(`` only if followed by
        one or more names and a colon."""
        tok = self._peek()
        if tok.kind == lexer.LBRACE:
            return True
        if tok.kind != lexer.LPAREN:
            return False
        k = 1
        saw_name = False
        while self._peek(k).kind == lexer.NAME:
            saw_name = True
            k += 1
        return saw_name and self._peek(k).kind == lexer.COLON

    def _parse_binder_group(self) -> Binder:
        open_tok = self._advance()
        hidden = open_tok.kind == lexer.LBRACE
        close = lexer.RBRACE if hidden else lexer.RPAREN
        names = [self._expect_name()]
        while self._peek().kind == lexer.NAME:
            names.append(self._expect_name())
        seen: set[str] = set()
        for t in names:
            if t.value in seen:
                raise ParseError(f"repeated binder name {t.value!r}", t.line, t.col)
            seen.add(t.value)
        self._expect(lexer.COLON)
        ty = self.parse_type(frozenset())
        self._expect(close)
        return Binder([t.value for t in names], ty, hidden, pos=(open_tok.line, open_tok.col))

    def _parse_binders(self) -> list[Binder]:
        binders: list[Binder] = []
        while self._looks_like_binder():
            binders.append(self._parse_binder_group())
        return binders

    # -- type expressions --------------------------------------------------------------

    def parse_type(self, bound: frozenset[str]) -> TypeExpr:
        if self._looks_like_binder():
            start = self._peek()
            binders = [self._parse_binder_group()]
            while self._looks_like_binder():
                binders.append(self._parse_binder_group())
            self._expect(lexer.ARROW)
            inner = bound.union(n for b in binders for n in b.names)
            body = self.parse_type(inner)
            return Quant(binders, body, pos=(start.line, start.col))

        operand = self._parse_operand(bound)
        if self._peek().kind == lexer.ARROW:
            arrow = self._advance()
            cod = self.parse_type(bound)
            return Arrow(operand, cod, pos=(arrow.line, arrow.col))
        return operand

    def _parse_operand(self, bound: frozenset[str]) -> TypeExpr:
        lhs = self._parse_apps(bound)
        if self._peek().kind == lexer.EQEQ:
            eq = self._advance()
            rhs = self._parse_apps(bound)
            return Equation(self._to_term(lhs, bound), self._to_term(rhs, bound), pos=(eq.line, eq.col))
        return lhs

    def _at_atom_start(self) -> bool:
        tok = self._peek()
        if tok.kind == lexer.NAME:
            # a name directly followed by ':' begins the next constr
            return self._peek(1).kind != lexer.COLON
        if tok.kind == lexer.KEYWORD and tok.value == "Set":
            return True
        if tok.kind == lexer.LPAREN:
            return not self._looks_like_binder()
        return False

    def _parse_apps(self, bound: frozenset[str]) -> TypeExpr:
        if not self._at_atom_start():
            tok = self._peek()
            raise self._error(f"expected a type expression, got {tok.value!r}", tok)
        head_tok = self._peek()
        atoms = [self._parse_atom(bound)]
        while self._at_atom_start():
            atoms.append(self._parse_atom(bound))
        if len(atoms) == 1:
            return atoms[0]
        head = atoms[0]
        if not isinstance(head, SortRef):
            raise ParseError(
                "application head must be a name", head_tok.line, head_tok.col
            )
        return TyApp(head.name, atoms[1:], pos=(head_tok.line, head_tok.col))

    def _parse_atom(self, bound: frozenset[str]) -> TypeExpr:
        tok = self._peek()
        if tok.kind == lexer.NAME:
            self._advance()
            return SortRef(tok.value, pos=(tok.line, tok.col))
        if tok.kind == lexer.KEYWORD and tok.value == "Set":
            self._advance()
            return SetKind(pos=(tok.line, tok.col))
        if tok.kind == lexer.LPAREN:
            self._advance()
            inner = self.parse_type(bound)
            self._expect(lexer.RPAREN)
            return inner
        raise self._error(f"expected a type expression, got {tok.value!r}", tok)

    # -- terms ---------------------------------------------------------------------------

    def _to_term(self, ty: TypeExpr, bound: frozenset[str]) -> Term:
        """Reinterpret a parsed type expression as an equation-side term."""
        if isinstance(ty, SortRef):
            node: Term = Var(ty.name, pos=ty.pos) if ty.name in bound else Sym(ty.name, pos=ty.pos)
            return node
        if isinstance(ty, TyApp):
            head: Term = Var(ty.head, pos=ty.pos) if ty.head in bound else Sym(ty.head, pos=ty.pos)
            t: Term = head
            for arg in ty.args:
                t = App(t, self._to_term(arg, bound), pos=ty.pos)
            return t
        pos = getattr(ty, "pos", None) or (0, 0)
        raise ParseError("expected a term on this side of '=='", pos[0], pos[1])


def parse_file(source: str) -> list[Decl]:
    """Parse the top-level declarations of one source text, in order."""
    try:
        tokens = tokenize(source)
    except LexError as e:
        raise ParseError(e.message, e.line, e.col) from e
    return Parser(tokens).parse_file()


def parse_decl(source: str) -> Decl:
    decls = parse_file(source)
    if len(decls) != 1:
        raise ParseError(f"expected exactly one declaration, found {len(decls)}", 1, 1)
    return decls[0]


__all__ = ["ParseError", "Parser", "parse_decl", "parse_file"]
