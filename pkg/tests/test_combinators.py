from __future__ import annotations

import pytest

from theoryforge.combinators import (
    Combine,
    Extend,
    LibraryError,
    Rename,
    expand,
    expand_library,
    parse_library,
    standard_library_path,
)
from theoryforge.parser import ParseError
from theoryforge.theory import extract

MONOID_VIA_COMBINATORS = """
theory Carrier = base { A : Set }
theory Pointed = extend Carrier with { e : A }
theory Magma = extend Carrier with { op : A → A → A }
theory PointedMagma = combine Pointed Magma over Carrier
theory LeftUnital = extend PointedMagma with { lunit : {x : A} → op e x == x }
theory RightUnital = extend PointedMagma with { runit : {x : A} → op x e == x }
theory Unital = combine LeftUnital RightUnital over PointedMagma
theory Semigroup = extend Magma with { assoc : {x y z : A} → op x (op y z) == op (op x y) z }
theory Monoid = combine Unital Semigroup over Magma
"""


def test_lib_format_parses():
    entries = parse_library(MONOID_VIA_COMBINATORS)
    assert [type(e).__name__ for e in entries] == [
        "Base", "Extend", "Extend", "Combine", "Extend", "Extend", "Combine", "Extend", "Combine",
    ]
    assert entries[0].name == "Carrier"


def test_expansion_trace_reproduces_handwritten_monoid(monoid_decl):
    lib = expand_library(parse_library(MONOID_VIA_COMBINATORS))
    assert lib.expanded["Monoid"] == extract(monoid_decl)


def test_rename_with_identity_mapping_changes_only_the_name(library):
    magma = library.expanded["Magma"]
    renamed = expand(Rename("Magma2", "Magma", {"op": "op"}), library)
    assert renamed.name == "Magma2"
    assert renamed.sort == magma.sort
    assert renamed.func_types == magma.func_types


def test_combine_is_union_along_over(library):
    unital = library.expanded["Unital"]
    left = library.expanded["LeftUnital"]
    right = library.expanded["RightUnital"]
    # independent set-union oracle over declaration names
    assert set(unital.declared_names()) == set(left.declared_names()) | set(right.declared_names())
    names = unital.declared_names()
    assert len(names) == len(set(names))


def test_combine_rejects_untraceable_clash(library):
    lib_text = """
theory Carrier = base { A : Set }
theory P1 = extend Carrier with { e : A }
theory P2 = extend Carrier with { e : A → A }
theory Bad = combine P1 P2 over Carrier
"""
    with pytest.raises(LibraryError, match="Bad"):
        expand_library(parse_library(lib_text))


def test_combine_rejects_same_name_same_type_not_from_over():
    lib_text = """
theory Carrier = base { A : Set }
theory P1 = extend Carrier with { e : A }
theory P2 = extend Carrier with { e : A }
theory Bad = combine P1 P2 over Carrier
"""
    with pytest.raises(LibraryError, match="does not come from"):
        expand_library(parse_library(lib_text))


def test_combine_commutes_up_to_order(library):
    for entry in library.entries:
        if not isinstance(entry, Combine):
            continue
        flipped = expand(Combine(entry.name, entry.right, entry.left, entry.over), library)
        original = library.expanded[entry.name]
        assert sorted(f.name for f in flipped.func_types) == sorted(
            f.name for f in original.func_types
        )
        assert sorted(a.name for a in flipped.axioms) == sorted(a.name for a in original.axioms)
        key = lambda c: (c.name,)
        assert sorted(flipped.func_types, key=key) == sorted(original.func_types, key=key)
        assert sorted(flipped.axioms, key=lambda a: a.name) == sorted(
            original.axioms, key=lambda a: a.name
        )


def test_extend_may_not_redeclare_the_sort():
    lib_text = """
theory Carrier = base { A : Set }
theory Bad = extend Carrier with { B : Set }
"""
    with pytest.raises(LibraryError, match="re-declared"):
        expand_library(parse_library(lib_text))


def test_extend_rejects_existing_name():
    lib_text = """
theory Carrier = base { A : Set }
theory P = extend Carrier with { e : A }
theory Bad = extend P with { e : A }
"""
    with pytest.raises(LibraryError, match="already exists"):
        expand_library(parse_library(lib_text))


def test_extend_sees_symbols_from_its_own_block():
    lib_text = """
theory Carrier = base { A : Set }
theory Q = extend Carrier with {
  f : A → A
  fix : {x : A} → f (f x) == f x
}
"""
    lib = expand_library(parse_library(lib_text))
    q = lib.expanded["Q"]
    assert [c.name for c in q.func_types] == ["f"]
    assert [a.name for a in q.axioms] == ["fix"]


def test_forward_reference_fails_with_entry_name():
    with pytest.raises(LibraryError, match="Early"):
        expand_library(parse_library("theory Early = extend Later with { }\ntheory Later = base { A : Set }"))


def test_duplicate_entry_name_rejected():
    text = "theory T = base { A : Set }\ntheory T = base { A : Set }"
    with pytest.raises(LibraryError, match="defined twice"):
        expand_library(parse_library(text))


def test_rename_must_be_injective(library):
    entry = Rename("Bad", "Unital", {"lunit": "u", "runit": "u"})
    with pytest.raises(Exception, match="injective"):
        expand(entry, library)


def test_empty_library_expands_to_nothing():
    lib = expand_library([])
    assert lib.entries == [] and lib.expanded == {}


def test_base_requires_sort_first():
    with pytest.raises(ParseError, match="sort first"):
        parse_library("theory T = base { e : A }")


def test_base_theory_has_waist_one():
    lib = expand_library(parse_library("theory T = base { A : Set e : A }"))
    t = lib.expanded["T"]
    assert t.waist == 1 and t.sort.name == "A"
    assert [f.name for f in t.func_types] == ["e"]


def test_extend_is_monotone_over_parents(library):
    checked = 0
    for entry in library.entries:
        if not isinstance(entry, Extend):
            continue
        parent = library.expanded[entry.parent]
        child = library.expanded[entry.name]
        assert child.func_types[: len(parent.func_types)] == parent.func_types
        assert child.axioms[: len(parent.axioms)] == parent.axioms
        checked += 1
    assert checked > 0


def test_standard_library_has_expected_scale(library):
    assert len(library.entries) >= 50
    names = {e.name for e in library.entries}
    assert {"Carrier", "Magma", "Semigroup", "Monoid", "CommutativeMonoid", "Group",
            "AbelianGroup", "Ring", "BoundedDistributedLattice"} <= names
    for t in library.theories():
        assert t.waist == 1


def test_expansion_is_deterministic(library):
    again = expand_library(parse_library(standard_library_path().read_text(encoding="utf-8")))
    assert [e.name for e in again.entries] == [e.name for e in library.entries]
    for name, t in again.expanded.items():
        assert t == library.expanded[name]
