"""Syntax trees for the theory-presentation surface language.

Two layers share one node set: the type layer (``TypeExpr``) describes what a
declaration *is* (a sort, an operation type, a quantified equation), and the
term layer (``Term``) carries the applicative first-order terms that appear on
the two sides of an equation.

Every node owns an optional source position ``(line, column)`` used for
diagnostics.  Positions never participate in equality: two trees parsed from
differently laid-out text compare equal when they have the same structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TypeAlias, Union

Pos: TypeAlias = "tuple[int, int]"

RESERVED_WORDS = frozenset({"record", "data", "field", "where", "constructor", "Set"})

_NAME_EXTRA = frozenset("_-'")


def is_valid_name(text: str) -> bool:
    """A usable identifier: nonempty, not reserved, made of letters, digits,
    ``_``, ``-`` and ``'``, starting with a letter or underscore."""
    if not text or text in RESERVED_WORDS:
        return False
    if not (text[0].isalpha() or text[0] == "_"):
        return False
    return all(c.isalnum() or c in _NAME_EXTRA for c in text)


# -- terms -------------------------------------------------------------------

@dataclass
class Var:
    """A bound variable occurrence (bound by an enclosing quantifier)."""

    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class Sym:
    """A declared symbol occurrence (a function symbol, field, or instance)."""

    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class App:
    fn: Term
    arg: Term
    pos: Pos | None = field(default=None, compare=False)


Term: TypeAlias = Union[Var, Sym, App]


def apply_spine(head: Term, args: list[Term]) -> Term:
    t = head
    for a in args:
        t = App(t, a)
    return t


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Flatten applications: ``App(App(f, a), b)`` becomes ``(f, [a, b])``."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


# -- type expressions ---------------------------------------------------------

@dataclass
class SetKind:
    """The kind of sorts, written ``Set``."""

    pos: Pos | None = field(default=None, compare=False)


@dataclass
class SortRef:
    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class TyApp:
    head: str
    args: list[TypeExpr]
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class Arrow:
    dom: TypeExpr
    cod: TypeExpr
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class Binder:
    """One binder group, ``(x y : T)`` or ``{x y : T}``."""

    names: list[str]
    ty: TypeExpr
    hidden: bool = False
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class Quant:
    binders: list[Binder]
    body: TypeExpr
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class Equation:
    lhs: Term
    rhs: Term
    pos: Pos | None = field(default=None, compare=False)


TypeExpr: TypeAlias = Union[SetKind, SortRef, TyApp, Arrow, Quant, Equation]


def arrow_components(ty: TypeExpr) -> list[TypeExpr]:
    """Split a right-nested arrow chain ``A -> B -> C`` into ``[A, B, C]``."""
    parts: list[TypeExpr] = []
    while isinstance(ty, Arrow):
        parts.append(ty.dom)
        ty = ty.cod
    parts.append(ty)
    return parts


def arrow_chain(parts: list[TypeExpr]) -> TypeExpr:
    """Inverse of :func:`arrow_components`; ``parts`` must be nonempty."""
    ty = parts[-1]
    for p in reversed(parts[:-1]):
        ty = Arrow(p, ty)
    return ty


# -- declarations --------------------------------------------------------------

@dataclass
class Constr:
    """A named typing, ``name : ty`` (a record field or data constructor)."""

    name: str
    ty: TypeExpr
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class RecordDecl:
    name: str
    params: list[Binder]
    constructor_name: str
    fields: list[Constr]
    pos: Pos | None = field(default=None, compare=False)


@dataclass
class DataDecl:
    name: str
    params: list[Binder]
    constructors: list[Constr]
    pos: Pos | None = field(default=None, compare=False)


Decl: TypeAlias = Union[RecordDecl, DataDecl]


def decl_member_names(d: Decl) -> list[str]:
    """Field or constructor names of a declaration, in source order."""
    if isinstance(d, RecordDecl):
        return [f.name for f in d.fields]
    return [c.name for c in d.constructors]


__all__ = [
    "App",
    "Arrow",
    "Binder",
    "Constr",
    "DataDecl",
    "Decl",
    "Equation",
    "Pos",
    "Quant",
    "RecordDecl",
    "RESERVED_WORDS",
    "SetKind",
    "SortRef",
    "Sym",
    "Term",
    "TyApp",
    "TypeExpr",
    "Var",
    "apply_spine",
    "arrow_chain",
    "arrow_components",
    "decl_member_names",
    "is_valid_name",
    "spine",
]
