import pytest
from hypothesis import given, settings

from snpneg.generate import enumerate_kbs
from snpneg.kb import Rule, parse_kb
from snpneg.semantics import least_model, naf_set
from snpneg.sld import (BudgetExhausted, Status, classify, failure_set,
                        has_finite_failed_tree, replay_witness, resolvent)

from conftest import databases


def test_resolvent_examples(ex1):
    assert resolvent((3,), 1, ex1.rule(3)) == (1, 2)
    assert resolvent((1,), 1, ex1.rule(1)) == ()
    assert resolvent((9,), 1, ex1.rule(8)) == (8,)
    assert resolvent((4, 3, 5), 2, ex1.rule(3)) == (4, 1, 2, 5)


def test_resolvent_errors(ex1):
    with pytest.raises(ValueError, match="out of range"):
        resolvent((3,), 2, ex1.rule(3))
    with pytest.raises(ValueError, match="does not match"):
        resolvent((3,), 1, ex1.rule(2))


def test_classify_example(ex1):
    p6 = classify(ex1, "p6")
    assert p6.status is Status.FINITELY_FAILS
    assert p6.tree_size == 2

    p3 = classify(ex1, "p3")
    assert p3.status is Status.SUCCEEDS
    assert [s.rule for s in p3.witness] == [3, 2, 1]
    assert p3.replay(ex1) == ()

    p9 = classify(ex1, "p9")
    assert p9.status is Status.DIVERGES
    assert [s.rule for s in p9.witness] == [8, 10]
    assert p9.witness[-1].goal == (9,)


def test_derivation_layout(ex1):
    text = classify(ex1, "p3").format(ex1).splitlines()
    assert text[0].split() == ["Rule", "used", "Goals"]
    assert [line.split()[0] for line in text[2:]] == ["R3", "R2", "R1"]
    assert text[-1].endswith("□")
    assert classify(ex1, "p9").format(ex1).splitlines()[-1].startswith("...")


def test_failure_set(ex1):
    assert failure_set(ex1) == {4, 5, 6, 7}
    assert failure_set(parse_kb("vars p1, p2, p3")) == {1, 2, 3}


def test_classify_errors(ex1):
    with pytest.raises(Exception):
        classify(ex1, "p42")
    with pytest.raises(ValueError):
        classify(ex1, "p1", budget=0)


def test_budget_exhaustion(ex1):
    assert classify(ex1, "p3", budget=1).status is Status.BUDGET_EXCEEDED
    with pytest.raises(BudgetExhausted) as err:
        failure_set(ex1, budget=1)
    assert err.value.variable == "p2"


def test_fair_selection_on_looping_sibling():
    # leftmost selection would loop on q forever; FIFO reaches f and fails
    db = parse_kb("q & f -> p.\nq -> q.")
    assert classify(db, "p").status is Status.FINITELY_FAILS
    assert classify(db, "q").status is Status.DIVERGES
    assert db.names == ("q", "f", "p")
    assert failure_set(db) == naf_set(db) == {2, 3}


@settings(max_examples=200, deadline=None)
@given(databases(n_max=8, k_max=12))
def test_failure_set_matches_operator(db):
    assert failure_set(db) == naf_set(db)


@settings(deadline=None)
@given(databases(n_max=6, k_max=10))
def test_succeeds_iff_least_model(db):
    lm = least_model(db)
    for j in range(1, db.n + 1):
        out = classify(db, j)
        assert (out.status is Status.SUCCEEDS) == bool(lm(j))
        if out.status is Status.SUCCEEDS:
            assert replay_witness(db, (j,), out.witness) == ()


def _any_selection_status(db, j):
    if least_model(db)(j):
        return Status.SUCCEEDS
    return Status.FINITELY_FAILS if has_finite_failed_tree(db, j) else Status.DIVERGES


@pytest.mark.parametrize("n,k", [(1, 2), (2, 3), (3, 2), (3, 3)])
def test_fifo_status_matches_exhaustive_selection(n, k):
    for db in enumerate_kbs(n, k):
        for j in range(1, n + 1):
            assert classify(db, j).status is _any_selection_status(db, j), db.render()


@settings(max_examples=150, deadline=None)
@given(databases(n_max=5, k_max=10))
def test_fifo_status_matches_exhaustive_selection_random(db):
    for j in range(1, db.n + 1):
        assert classify(db, j).status is _any_selection_status(db, j)


@given(databases())
def test_resolvent_length_change(db):
    for r in db.rules:
        g = (r.head, r.head)
        assert len(resolvent(g, 1, r)) - len(g) == len(r.body) - 1
