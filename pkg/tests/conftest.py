import csv

import pytest

from alphabet import Alphabet
from automaton import load_automaton
from config import FIXTURES_DIR


def _fixture_pairs() -> list[dict[str, str]]:
    with open(FIXTURES_DIR / "pairs.csv", newline="") as handle:
        return list(csv.DictReader(handle))


def pytest_generate_tests(metafunc):
    if "fixture_pair" in metafunc.fixturenames:
        pairs = _fixture_pairs()
        metafunc.parametrize("fixture_pair", pairs, ids=[pair["name"] for pair in pairs])


@pytest.fixture
def ab() -> Alphabet:
    return Alphabet(("a", "b"))


@pytest.fixture
def p_only() -> Alphabet:
    return Alphabet(("p",))


@pytest.fixture
def pq() -> Alphabet:
    return Alphabet(("p", "q"))


@pytest.fixture
def load_fixture():
    """Load an automaton from the fixtures directory by file name."""
    def _load(name: str, complete_with_sink: bool = False):
        return load_automaton(FIXTURES_DIR / name, complete_with_sink)
    return _load
