"""Shared fixtures: canned input documents and the symbols they define."""

import json
from pathlib import Path

import pytest

from cauchydual.cli import parse_input_document

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

FIXTURE_NAMES = (
    "antipodal_1_1",
    "antipodal_4_1",
    "single_atom_tau1",
    "refuter",
    "inconclusive",
)


def load_fixture_doc(name: str) -> dict:
    return json.loads((FIXTURES / f"{name}.json").read_text())


def load_fixture_symbol(name: str):
    _, sym = parse_input_document(load_fixture_doc(name))
    return sym


@pytest.fixture(scope="session")
def fixture_symbols():
    return {name: load_fixture_symbol(name) for name in FIXTURE_NAMES}


@pytest.fixture(scope="session")
def refuter_symbol():
    return load_fixture_symbol("refuter")


@pytest.fixture(scope="session")
def inconclusive_symbol():
    return load_fixture_symbol("inconclusive")
