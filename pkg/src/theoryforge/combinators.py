"""Declarative theory libraries: rename / extend / combine over a base.

A ``.lib`` file holds one entry per theory, in dependency order::

    theory Carrier = base { A : Set }
    theory Pointed = extend Carrier with { e : A }
    theory AdditiveMagma = rename Magma renaming (op to plus)
    theory PointedMagma = combine Pointed Magma over Carrier

``base`` blocks declare the sort first; it becomes the record parameter
(the carrier), everything after it a field.  ``combine`` forms the union of
two descendants of a shared ancestor: declarations with the same name are
identified only when they also occur, with the same type, in the ``over``
theory — any other name reuse is a :class:`ClashError`, never a silent
merge.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Union

from . import lexer
from .ast import Binder, Constr, RecordDecl, SetKind, arrow_components
from .lexer import LexError, tokenize
from .parser import ParseError, Parser
from .theory import (
    CollisionError,
    EqTheory,
    ShapeError,
    constr_to_axiom,
    extract,
    is_sort_chain,
    rename_with,
)


class ClashError(Exception):
    """Two declarations collide in a way the combinators refuse to merge."""


class LibraryError(Exception):
    def __init__(self, entry: str, cause: Exception):
        super().__init__(f"while expanding {entry!r}: {cause}")
        self.entry = entry
        self.cause = cause


@dataclass
class Base:
    name: str
    decl: RecordDecl


@dataclass
class Extend:
    name: str
    parent: str
    new_decls: list[Constr]


@dataclass
class Rename:
    name: str
    parent: str
    mapping: dict[str, str]


@dataclass
class Combine:
    name: str
    left: str
    right: str
    over: str


TheoryExpr = Union[Base, Extend, Rename, Combine]


@dataclass
class Library:
    entries: list[TheoryExpr] = dc_field(default_factory=list)
    expanded: dict[str, EqTheory] = dc_field(default_factory=dict)

    def theories(self) -> list[EqTheory]:
        return [self.expanded[e.name] for e in self.entries]


# -- expansion ---------------------------------------------------------------

def _parent(ctx: Library, name: str, wanted_by: str) -> EqTheory:
    t = ctx.expanded.get(name)
    if t is None:
        raise ClashError(f"{wanted_by!r} refers to {name!r}, which is not defined yet")
    return t


def _expand_extend(e: Extend, parent: EqTheory) -> EqTheory:
    sort = parent.sort.name
    funcs = list(parent.func_types)
    axioms = list(parent.axioms)
    names = set(parent.declared_names())
    arities = parent.arities
    for c in e.new_decls:
        if isinstance(c.ty, SetKind):
            raise ShapeError(f"{c.name!r}: the sort may not be re-declared by extend")
        if c.name in names:
            raise ClashError(f"{c.name!r} already exists in {parent.name!r}")
        names.add(c.name)
        if is_sort_chain(c.ty, sort):
            funcs.append(Constr(c.name, c.ty))
            arities[c.name] = len(arrow_components(c.ty)) - 1
        else:
            axioms.append(constr_to_axiom(c, sort, arities))
    return EqTheory(e.name, parent.sort, funcs, axioms, parent.waist)


def _expand_combine(e: Combine, left: EqTheory, right: EqTheory, over: EqTheory) -> EqTheory:
    if not (left.sort == right.sort == over.sort):
        raise ClashError(
            f"cannot combine {left.name!r} and {right.name!r}: sorts differ"
        )
    if not (left.waist == right.waist == over.waist):
        raise ClashError(
            f"cannot combine {left.name!r} and {right.name!r}: waists differ"
        )
    over_funcs = {f.name: f for f in over.func_types}
    over_axioms = {a.name: a for a in over.axioms}
    left_funcs = {f.name: f for f in left.func_types}
    left_axioms = {a.name: a for a in left.axioms}
    left_names = set(left.declared_names())

    funcs = list(left.func_types)
    for f in right.func_types:
        if f.name not in left_names:
            funcs.append(f)
            continue
        if left_funcs.get(f.name) != f or over_funcs.get(f.name) != f:
            raise ClashError(
                f"{f.name!r} appears on both sides but does not come from {over.name!r}"
            )
    axioms = list(left.axioms)
    for a in right.axioms:
        if a.name not in left_names:
            axioms.append(a)
            continue
        if left_axioms.get(a.name) != a or over_axioms.get(a.name) != a:
            raise ClashError(
                f"{a.name!r} appears on both sides but does not come from {over.name!r}"
            )
    result = EqTheory(e.name, left.sort, funcs, axioms, left.waist)
    names = result.declared_names()
    if len(set(names)) != len(names):
        raise ClashError(f"{e.name!r}: combined names are not distinct")
    return result


def expand(e: TheoryExpr, ctx: Library) -> EqTheory:
    """Expand one entry against the already-expanded context."""
    if isinstance(e, Base):
        return extract(e.decl)
    if isinstance(e, Extend):
        return _expand_extend(e, _parent(ctx, e.parent, e.name))
    if isinstance(e, Rename):
        parent = _parent(ctx, e.parent, e.name)
        values = list(e.mapping.values())
        if len(set(values)) != len(values):
            raise CollisionError(f"{e.name!r}: renaming is not injective")
        return rename_with(parent, e.mapping, new_name=e.name)
    if isinstance(e, Combine):
        return _expand_combine(
            e,
            _parent(ctx, e.left, e.name),
            _parent(ctx, e.right, e.name),
            _parent(ctx, e.over, e.name),
        )
    raise TypeError(f"not a theory expression: {e!r}")


def expand_library(entries: list[TheoryExpr]) -> Library:
    """Expand every entry in order; the first failure aborts the whole
    library, naming the entry and the cause."""
    lib = Library()
    for e in entries:
        if e.name in lib.expanded:
            raise LibraryError(e.name, ClashError("theory name defined twice"))
        try:
            lib.expanded[e.name] = expand(e, lib)
        except (ShapeError, ClashError, CollisionError) as cause:
            raise LibraryError(e.name, cause) from cause
        lib.entries.append(e)
    return lib


# -- .lib parsing ----------------------------------------------------------------

class _LibParser(Parser):
    def parse_library(self) -> list[TheoryExpr]:
        entries: list[TheoryExpr] = []
        while self._peek().kind != lexer.EOF:
            entries.append(self._parse_entry())
        return entries

    def _expect_word(self, word: str) -> None:
        tok = self._peek()
        if tok.kind != lexer.NAME or tok.value != word:
            raise ParseError(f"expected {word!r}, got {tok.value!r}", tok.line, tok.col, (word,))
        self._advance()

    def _parse_entry(self) -> TheoryExpr:
        self._expect_word("theory")
        name = self._expect_name().value
        self._expect(lexer.EQ)
        tok = self._peek()
        if tok.kind != lexer.NAME:
            raise ParseError(
                f"expected a combinator, got {tok.value!r}",
                tok.line,
                tok.col,
                ("base", "extend", "rename", "combine"),
            )
        if tok.value == "base":
            self._advance()
            decls = self._parse_block()
            return Base(name, self._assemble_base(name, decls, tok))
        if tok.value == "extend":
            self._advance()
            parent = self._expect_name().value
            self._expect_word("with")
            return Extend(name, parent, self._parse_block())
        if tok.value == "rename":
            self._advance()
            parent = self._expect_name().value
            self._expect_word("renaming")
            return Rename(name, parent, self._parse_mapping())
        if tok.value == "combine":
            self._advance()
            left = self._expect_name().value
            right = self._expect_name().value
            self._expect_word("over")
            return Combine(name, left, right, self._expect_name().value)
        raise ParseError(
            f"unknown combinator {tok.value!r}",
            tok.line,
            tok.col,
            ("base", "extend", "rename", "combine"),
        )

    def _parse_block(self) -> list[Constr]:
        self._expect(lexer.LBRACE)
        decls: list[Constr] = []
        while self.at_constr_start():
            decls.append(self.parse_constr())
        self._expect(lexer.RBRACE)
        return decls

    def _parse_mapping(self) -> dict[str, str]:
        self._expect(lexer.LPAREN)
        mapping: dict[str, str] = {}
        while True:
            src = self._expect_name()
            self._expect_word("to")
            dst = self._expect_name()
            if src.value in mapping:
                raise ParseError(f"{src.value!r} renamed twice", src.line, src.col)
            mapping[src.value] = dst.value
            if self._peek().kind == lexer.COMMA:
                self._advance()
                continue
            break
        self._expect(lexer.RPAREN)
        return mapping

    @staticmethod
    def _assemble_base(name: str, decls: list[Constr], tok: lexer.Token) -> RecordDecl:
        if not decls or not isinstance(decls[0].ty, SetKind):
            raise ParseError(
                f"base theory {name!r} must declare its sort first (e.g. 'A : Set')",
                tok.line,
                tok.col,
            )
        sort = decls[0]
        params = [Binder([sort.name], sort.ty, pos=sort.pos)]
        return RecordDecl(name, params, name + "C", decls[1:], pos=(tok.line, tok.col))


def parse_library(source: str) -> list[TheoryExpr]:
    try:
        tokens = tokenize(source)
    except LexError as e:
        raise ParseError(e.message, e.line, e.col) from e
    return _LibParser(tokens).parse_library()


def load_library(path: Path | str) -> Library:
    text = Path(path).read_text(encoding="utf-8")
    return expand_library(parse_library(text))


def standard_library_path() -> Path:
    """The bundled tiny-theories library shipped with the package."""
    return Path(str(resources.files("theoryforge").joinpath("data/standard.lib")))


__all__ = [
    "Base",
    "ClashError",
    "Combine",
    "Extend",
    "Library",
    "LibraryError",
    "Rename",
    "TheoryExpr",
    "expand",
    "expand_library",
    "load_library",
    "parse_library",
    "standard_library_path",
]
