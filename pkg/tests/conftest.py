from __future__ import annotations

import hashlib
from dataclasses import replace
from pathlib import Path

import pytest

from theoryforge.ast import Decl, RecordDecl
from theoryforge.combinators import Library, load_library, standard_library_path
from theoryforge.parser import parse_file
from theoryforge.theory import EqTheory, extract

DATA = Path(__file__).parent / "data"


def read_data(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def monoid_source() -> str:
    return read_data("monoid.eqt")


@pytest.fixture(scope="session")
def monoid_decl(monoid_source: str) -> RecordDecl:
    (decl,) = parse_file(monoid_source)
    assert isinstance(decl, RecordDecl)
    return decl


@pytest.fixture(scope="session")
def monoid(monoid_decl: RecordDecl) -> EqTheory:
    return extract(monoid_decl)


@pytest.fixture(scope="session")
def golden_constructions() -> dict[str, Decl]:
    """Golden Monoid constructions, parsed from free-form text."""
    decls = parse_file(read_data("monoid_constructions.eqt"))
    return {d.name: d for d in decls}


@pytest.fixture(scope="session")
def library() -> Library:
    return load_library(standard_library_path())


def same_decl_ignoring_constructor(a: Decl, b: Decl) -> bool:
    """Structural equality that disregards record constructor names (they
    are machine-chosen and not part of the golden shape)."""
    if isinstance(a, RecordDecl) and isinstance(b, RecordDecl):
        return replace(a, constructor_name="_") == replace(b, constructor_name="_")
    return a == b


def tree_hash(root: Path) -> str:
    """Order-independent digest of a directory tree's bytes."""
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        digest.update(str(path.relative_to(root)).encode())
        digest.update(b"\0")
        digest.update(path.read_bytes())
        digest.update(b"\0")
    return digest.hexdigest()
