"""Internal form of a single-sorted equational theory and its conversions.

A theory is a telescope: one sort, then function symbols whose types are
arrow chains over that sort, then equational axioms.  ``waist`` counts how
many leading telescope entries are record parameters rather than fields.

``extract`` reads this shape off a record declaration, ``embed`` writes it
back, and ``rename`` rewrites declared names consistently everywhere they
occur.  Quantifier structure of axioms (grouping and hidden/explicit marks)
is preserved verbatim so that ``embed(extract(d)) == d`` for records in
telescope order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    App,
    Arrow,
    Binder,
    Constr,
    Equation,
    Pos,
    Quant,
    RecordDecl,
    SetKind,
    SortRef,
    Sym,
    Term,
    TyApp,
    TypeExpr,
    Var,
    arrow_components,
    spine,
)


class ShapeError(Exception):
    """The declaration is not a single-sorted equational theory."""


class CollisionError(Exception):
    """A renaming would produce duplicate or captured names."""


@dataclass
class Axiom:
    name: str
    binders: list[Binder]
    lhs: Term
    rhs: Term
    pos: Pos | None = field(default=None, compare=False)

    @property
    def vars(self) -> list[tuple[str, TypeExpr]]:
        """Quantified variables flattened in binding order."""
        return [(n, b.ty) for b in self.binders for n in b.names]

    @property
    def var_names(self) -> list[str]:
        return [n for n, _ in self.vars]

    def to_constr(self) -> Constr:
        eq = Equation(self.lhs, self.rhs)
        ty: TypeExpr = Quant(list(self.binders), eq) if self.binders else eq
        return Constr(self.name, ty, pos=self.pos)


@dataclass
class EqTheory:
    name: str
    sort: Constr
    func_types: list[Constr]
    axioms: list[Axiom]
    waist: int

    @property
    def arities(self) -> dict[str, int]:
        return {f.name: len(arrow_components(f.ty)) - 1 for f in self.func_types}

    def declared_names(self) -> list[str]:
        return [self.sort.name] + [f.name for f in self.func_types] + [a.name for a in self.axioms]

    def constants(self) -> list[str]:
        """Nullary function symbols, in declaration order."""
        return [f.name for f in self.func_types if len(arrow_components(f.ty)) == 1]


# -- extraction -----------------------------------------------------------------

def is_sort_chain(ty: TypeExpr, sort: str) -> bool:
    parts = arrow_components(ty)
    return all(isinstance(p, SortRef) and p.name == sort for p in parts)


def _term_symbols(t: Term) -> set[str]:
    head, args = spine(t)
    syms = {head.name} if isinstance(head, Sym) else set()
    for a in args:
        syms |= _term_symbols(a)
    return syms


def _check_axiom_term(t: Term, vars_: dict[str, TypeExpr], arities: dict[str, int], where: str) -> None:
    head, args = spine(t)
    if isinstance(head, Var):
        if head.name not in vars_:
            raise ShapeError(f"{where}: unbound variable {head.name!r}")
        if args:
            raise ShapeError(f"{where}: variable {head.name!r} applied to arguments")
        return
    if isinstance(head, Sym):
        if head.name not in arities:
            raise ShapeError(f"{where}: unknown symbol {head.name!r}")
        if len(args) != arities[head.name]:
            raise ShapeError(
                f"{where}: {head.name!r} expects {arities[head.name]} arguments, got {len(args)}"
            )
        for a in args:
            _check_axiom_term(a, vars_, arities, where)
        return
    raise ShapeError(f"{where}: malformed term")


def constr_to_axiom(c: Constr, sort: str, arities: dict[str, int]) -> Axiom:
    binders: list[Binder] = []
    body: TypeExpr = c.ty
    if isinstance(body, Quant):
        binders = body.binders
        body = body.body
    if not isinstance(body, Equation):
        raise ShapeError(f"{c.name!r} is neither an operation over the sort nor an equation")
    vars_: dict[str, TypeExpr] = {}
    for b in binders:
        if not (isinstance(b.ty, SortRef) and b.ty.name == sort):
            raise ShapeError(f"axiom {c.name!r}: variables must range over the sort {sort!r}")
        for n in b.names:
            if n in vars_ or n in arities or n == sort:
                raise ShapeError(f"axiom {c.name!r}: variable {n!r} shadows another name")
            vars_[n] = b.ty
    for side, t in (("left side", body.lhs), ("right side", body.rhs)):
        _check_axiom_term(t, vars_, arities, f"axiom {c.name!r}, {side}")
    return Axiom(c.name, binders, body.lhs, body.rhs, pos=c.pos)


def extract(d: RecordDecl) -> EqTheory:
    """Read the equational-theory shape off a record declaration.

    The unique ``Set``-typed entry is the sort; arrow chains over it are the
    function symbols; quantified equations are the axioms; the parameter
    count is the waist.  Raises :class:`ShapeError` otherwise.
    """
    telescope: list[Constr] = []
    for b in d.params:
        for n in b.names:
            telescope.append(Constr(n, b.ty, pos=b.pos))
    telescope.extend(d.fields)
    waist = sum(len(b.names) for b in d.params)

    sorts = [c for c in telescope if isinstance(c.ty, SetKind)]
    if not sorts:
        raise ShapeError(f"{d.name}: no sort declaration (a field of type Set)")
    if len(sorts) > 1:
        names = ", ".join(s.name for s in sorts)
        raise ShapeError(f"{d.name}: multiple sorts ({names}); theories are single-sorted")
    sort = sorts[0]

    func_types: list[Constr] = []
    func_ids: set[int] = set()
    for c in telescope:
        if c is sort:
            continue
        if is_sort_chain(c.ty, sort.name):
            func_types.append(c)
            func_ids.add(id(c))
        elif isinstance(c.ty, Arrow):
            parts = arrow_components(c.ty)
            if any(isinstance(p, Arrow) for p in parts):
                raise ShapeError(f"{d.name}.{c.name}: higher-order argument types are not supported")

    arities = {f.name: len(arrow_components(f.ty)) - 1 for f in func_types}
    axioms: list[Axiom] = []
    for c in telescope:
        if c is sort or id(c) in func_ids:
            continue
        axioms.append(constr_to_axiom(c, sort.name, arities))

    names = [sort.name] + list(arities) + [a.name for a in axioms]
    if len(set(names)) != len(names):
        raise ShapeError(f"{d.name}: duplicate declaration names")
    return EqTheory(d.name, sort, func_types, axioms, waist)


# -- renaming --------------------------------------------------------------------

def _rename_type(ty: TypeExpr, mapping: dict[str, str]) -> TypeExpr:
    if isinstance(ty, SetKind):
        return SetKind()
    if isinstance(ty, SortRef):
        return SortRef(mapping.get(ty.name, ty.name))
    if isinstance(ty, TyApp):
        return TyApp(mapping.get(ty.head, ty.head), [_rename_type(a, mapping) for a in ty.args])
    if isinstance(ty, Arrow):
        return Arrow(_rename_type(ty.dom, mapping), _rename_type(ty.cod, mapping))
    if isinstance(ty, Quant):
        binders = [Binder(list(b.names), _rename_type(b.ty, mapping), b.hidden) for b in ty.binders]
        return Quant(binders, _rename_type(ty.body, mapping))
    if isinstance(ty, Equation):
        return Equation(_rename_term(ty.lhs, mapping), _rename_term(ty.rhs, mapping))
    raise ValueError(f"not a type expression: {ty!r}")


def _rename_term(t: Term, mapping: dict[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(t.name)
    if isinstance(t, Sym):
        return Sym(mapping.get(t.name, t.name))
    return App(_rename_term(t.fn, mapping), _rename_term(t.arg, mapping))


def rename_with(t: EqTheory, mapping: dict[str, str], new_name: str | None = None) -> EqTheory:
    """Apply an explicit name map to every occurrence of the declared names.

    Bound variables are left alone; the theory name changes only when
    ``new_name`` says so.  Raises :class:`CollisionError` if the renaming
    would produce duplicate declared names or capture a bound variable.
    """
    declared = t.declared_names()
    unknown = set(mapping) - set(declared)
    if unknown:
        raise CollisionError(f"renaming of undeclared names: {', '.join(sorted(unknown))}")
    renamed = [mapping.get(n, n) for n in declared]
    if len(set(renamed)) != len(renamed):
        raise CollisionError("renaming produces duplicate names")
    targets = set(mapping.values())
    for ax in t.axioms:
        captured = targets.intersection(ax.var_names)
        if captured:
            raise CollisionError(
                f"renaming captures variable(s) {', '.join(sorted(captured))} in axiom {ax.name!r}"
            )

    sort = Constr(mapping.get(t.sort.name, t.sort.name), SetKind())
    funcs = [Constr(mapping.get(f.name, f.name), _rename_type(f.ty, mapping)) for f in t.func_types]
    axioms = [
        Axiom(
            mapping.get(a.name, a.name),
            [Binder(list(b.names), _rename_type(b.ty, mapping), b.hidden) for b in a.binders],
            _rename_term(a.lhs, mapping),
            _rename_term(a.rhs, mapping),
        )
        for a in t.axioms
    ]
    return EqTheory(new_name if new_name is not None else t.name, sort, funcs, axioms, t.waist)


# -- axiom shape recognition ----------------------------------------------------

def associativity_op(ax: Axiom) -> str | None:
    """If the axiom states associativity of a binary symbol, return that
    symbol's name.  Both statement orientations are recognised."""
    names = ax.var_names
    if len(names) != 3 or len(set(names)) != 3:
        return None

    def _match(side: Term, shape: str) -> tuple[str, tuple[str, str, str]] | None:
        # shape "L": f (f a b) c ; shape "R": f a (f b c)
        head, args = spine(side)
        if not (isinstance(head, Sym) and len(args) == 2):
            return None
        outer = head.name
        first, second = args
        nested = first if shape == "L" else second
        plain = second if shape == "L" else first
        nhead, nargs = spine(nested)
        if not (isinstance(nhead, Sym) and nhead.name == outer and len(nargs) == 2):
            return None
        if not all(isinstance(x, Var) for x in (*nargs, plain)):
            return None
        if shape == "L":
            seq = (nargs[0].name, nargs[1].name, plain.name)  # type: ignore[union-attr]
        else:
            seq = (plain.name, nargs[0].name, nargs[1].name)  # type: ignore[union-attr]
        return outer, seq

    for lhs_shape, rhs_shape in (("L", "R"), ("R", "L")):
        left = _match(ax.lhs, lhs_shape)
        right = _match(ax.rhs, rhs_shape)
        if left and right and left == right and set(left[1]) == set(names):
            return left[0]
    return None


def mentioned_constants(ax: Axiom, t: EqTheory) -> list[str]:
    """Nullary symbols of ``t`` the axiom mentions, in declaration order."""
    used = _term_symbols(ax.lhs) | _term_symbols(ax.rhs)
    return [c for c in t.constants() if c in used]


@dataclass(frozen=True)
class RenameScheme:
    """Systematic renaming: every sort and function symbol gets ``suffix``
    appended; axiom names follow the library convention — an associativity
    axiom becomes ``associative_<renamed op>``, an axiom mentioning a
    constant keeps its base name plus ``_<renamed constant>``, anything else
    just gets the suffix.  The empty suffix is the identity scheme."""

    suffix: str

    def mapping_for(self, t: EqTheory) -> dict[str, str]:
        if not self.suffix:
            return {}
        mapping = {t.sort.name: t.sort.name + self.suffix}
        for f in t.func_types:
            mapping[f.name] = f.name + self.suffix
        for ax in t.axioms:
            op = associativity_op(ax)
            if op is not None:
                mapping[ax.name] = "associative_" + mapping[op]
                continue
            consts = mentioned_constants(ax, t)
            if consts:
                mapping[ax.name] = f"{ax.name}_{mapping[consts[0]]}"
            else:
                mapping[ax.name] = ax.name + self.suffix
        return mapping


def rename(t: EqTheory, scheme: RenameScheme) -> EqTheory:
    return rename_with(t, scheme.mapping_for(t))


# -- embedding ---------------------------------------------------------------------

def embed(t: EqTheory) -> RecordDecl:
    """Write the theory back as a record: the first ``waist`` telescope
    entries become parameters, the rest fields; the constructor is the
    theory name plus ``C``."""
    telescope: list[Constr] = [t.sort] + t.func_types + [a.to_constr() for a in t.axioms]
    if not 0 <= t.waist <= len(telescope):
        raise ShapeError(f"{t.name}: waist {t.waist} out of range 0..{len(telescope)}")
    params = [Binder([c.name], c.ty, hidden=False, pos=c.pos) for c in telescope[: t.waist]]
    fields = telescope[t.waist:]
    return RecordDecl(t.name, params, t.name + "C", list(fields))


__all__ = [
    "Axiom",
    "CollisionError",
    "EqTheory",
    "RenameScheme",
    "ShapeError",
    "associativity_op",
    "constr_to_axiom",
    "embed",
    "extract",
    "is_sort_chain",
    "mentioned_constants",
    "rename",
    "rename_with",
]
