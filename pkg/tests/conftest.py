import csv
import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from snpneg.kb import DeductiveDatabase, Interpretation, Rule, parse_kb

DATA = Path(__file__).parent / "data"


def load_kb(name: str) -> DeductiveDatabase:
    return parse_kb((DATA / name).read_text())


def load_table(name: str) -> dict[str, list[int]]:
    with open(DATA / name, encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter="\t"))
    return {r[0]: [int(x) for x in r[1:]] for r in rows[1:]}


def all_interpretations(n: int):
    for bits in itertools.product((0, 1), repeat=n):
        yield Interpretation(bits)


def I(*bits) -> Interpretation:
    return Interpretation(tuple(bits))


@pytest.fixture
def ex1():
    return load_kb("example1.kb")


@pytest.fixture
def three():
    return load_kb("three_vars.kb")


@st.composite
def databases(draw, n_max=6, k_max=8, max_body=3):
    n = draw(st.integers(1, n_max))
    k = draw(st.integers(0, k_max))
    var = st.integers(1, n)
    rules = []
    for rid in range(1, k + 1):
        body = draw(st.lists(var, max_size=max_body))
        rules.append(Rule(rid, tuple(body), draw(var)))
    return DeductiveDatabase(tuple(f"p{j}" for j in range(1, n + 1)), tuple(rules))


@st.composite
def db_and_interp(draw, n_max=6, k_max=8):
    db = draw(databases(n_max, k_max))
    bits = draw(st.lists(st.integers(0, 1), min_size=db.n, max_size=db.n))
    return db, Interpretation(tuple(bits))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[name])
