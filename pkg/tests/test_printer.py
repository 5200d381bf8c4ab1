from __future__ import annotations

from theoryforge.generators import gen_all, prod_decl
from theoryforge.parser import parse_decl, parse_file
from theoryforge.printer import print_decl, print_module
from theoryforge.theory import embed


def roundtrips(decl) -> bool:
    reparsed = parse_file(print_decl(decl))
    return reparsed == [decl]


def test_monoid_prints_canonically(monoid_decl):
    text = print_decl(monoid_decl)
    assert text == (
        "record Monoid (A : Set) : Set where\n"
        "  constructor monoid\n"
        "  field\n"
        "    e : A\n"
        "    op : A → A → A\n"
        "    lunit : {x : A} → op e x == x\n"
        "    runit : {x : A} → op x e == x\n"
        "    assoc : {x y z : A} → op x (op y z) == op (op x y) z"
    )


def test_roundtrip_on_input_and_constructions(monoid_decl, monoid):
    assert roundtrips(monoid_decl)
    for d in gen_all(monoid):
        assert roundtrips(d)
    assert roundtrips(prod_decl())


def test_roundtrip_across_library(library):
    for t in library.theories():
        assert roundtrips(embed(t)), t.name
        for d in gen_all(t):
            assert roundtrips(d), (t.name, d.name)


def test_record_with_zero_fields_prints_header_and_constructor():
    d = parse_decl("record M : Set where")
    assert print_decl(d) == "record M : Set where\n  constructor MC"
    assert roundtrips(d)


def test_empty_data_type_prints_header_only():
    d = parse_decl("data D : Set where")
    assert print_decl(d) == "data D : Set where"
    assert roundtrips(d)


def test_arrow_domain_parenthesized_only_when_needed():
    d = parse_decl("record M (A : Set) : Set where\n  field\n    f : (A → A) → A")
    assert "(A → A) → A" in print_decl(d)
    assert roundtrips(d)


def test_printing_is_deterministic(monoid):
    texts = {print_module([embed(monoid)] + gen_all(monoid)) for _ in range(3)}
    assert len(texts) == 1


def test_module_print_separates_with_blank_lines(monoid_decl):
    text = print_module([monoid_decl, prod_decl()])
    assert "\n\nrecord Prod" in text
    assert text.endswith("\n")
    assert parse_file(text) == [monoid_decl, prod_decl()]
