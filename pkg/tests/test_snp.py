import json

import pytest
from hypothesis import given, settings, strategies as st

from snpneg.snp import (Exhaustive, FiringRule, ForgettingRule, Neuron,
                        NondeterminismError, RuleRef, SeededRandom,
                        SnpSystem, SpikeCondition, StateCapExceeded, Strict,
                        Trace, applicable_rules, explore, projection, replay,
                        run, step, validate)


def test_spike_condition_membership():
    cond = SpikeCondition(frozenset({1}), frozenset({(3, 2)}))
    assert [c for c in range(10) if c in cond] == [1, 3, 5, 7, 9]
    assert cond.render() == "a ∪ a^3(a^2)*"
    assert SpikeCondition.from_dict(cond.to_dict()) == cond


def test_applicable_rules():
    nr = Neuron(firing=(FiringRule.simple(2),))
    assert applicable_rules(nr, 1) == []
    nr = Neuron(firing=(FiringRule.simple(2),), forgetting=(ForgettingRule(1),))
    assert applicable_rules(nr, 1) == [RuleRef("forget", 0)]
    g = Neuron(1, (FiringRule.simple(1),))
    assert applicable_rules(g, 1) == [RuleRef("fire", 0)]


def test_firing_needs_count_at_least_consume():
    # condition admits 1 spike but the rule consumes 2
    rule = FiringRule(SpikeCondition.exactly(1, 2), 2, 1)
    assert not rule.applicable(1) and rule.applicable(2)


def test_exact_condition_fires_only_on_exact_count():
    rule = FiringRule.simple(3, 2)
    assert [c for c in range(8) if rule.applicable(c)] == [3]


def test_step_delivers_and_consumes():
    sys = SnpSystem(
        (Neuron(3, (FiringRule(SpikeCondition.at_least(2), 2, 3),)), Neuron(0), Neuron(0)),
        frozenset({(0, 1), (0, 2)}))
    c, ch = step(sys, sys.initial())
    assert c == (1, 3, 3)
    assert ch == (RuleRef("fire", 0), None, None)


def test_exhaustive_two_rules_lost_emission():
    lone = SnpSystem((Neuron(1, (FiringRule.simple(1),), (ForgettingRule(1),)),))
    succ = step(lone, (1,), Exhaustive())
    assert [cfg for cfg, _ in succ] == [(0,)]
    # both choices lead to the same configuration and are deduplicated
    assert len(succ) == 1
    with pytest.raises(NondeterminismError, match="2 applicable rules"):
        step(lone, (1,), Strict())


def test_exhaustive_branching_and_cap():
    sys = SnpSystem(
        (Neuron(1, (FiringRule.simple(1),), (ForgettingRule(1),)), Neuron(0)),
        frozenset({(0, 1)}))
    succ = step(sys, sys.initial(), Exhaustive())
    assert [cfg for cfg, _ in succ] == [(0, 0), (0, 1)]
    with pytest.raises(StateCapExceeded):
        step(sys, sys.initial(), Exhaustive(max_states=1))
    assert explore(sys, 2, Exhaustive()) == [[(1, 0)], [(0, 0), (0, 1)], [(0, 0), (0, 1)]]


def test_run_zero_steps_and_stop():
    sys = SnpSystem((Neuron(1, (FiringRule.simple(1),)), Neuron(0, (FiringRule.simple(1),))),
                    frozenset({(0, 1), (1, 0)}))
    assert run(sys, steps=0).configurations == [(1, 0)]
    trace = run(sys, stop=lambda tr: tr[-1][1] == 1 and tr.steps >= 3)
    assert trace.steps == 3 and trace[-1] == (0, 1)
    with pytest.raises(TypeError):
        run(sys, steps=1, policy=Exhaustive())
    with pytest.raises(ValueError):
        run(sys)


def test_projection():
    assert projection((0, 1, 2, 3), 2) == (0, 1)
    assert projection((0, 1), 2) == (0, 1)
    with pytest.raises(ValueError):
        projection((0, 1), 3)


def test_validate():
    bad = SnpSystem((Neuron(0), Neuron(0, (FiringRule.simple(0),))), frozenset({(1, 1)}))
    report = validate(bad)
    assert any("self-loop" in p for p in report)
    assert any("consumes 0" in p for p in report)
    assert validate(SnpSystem((Neuron(0, forgetting=(ForgettingRule(0),)),)))
    assert validate(SnpSystem((Neuron(0), Neuron(0)), frozenset({(0, 5)})))
    assert validate(SnpSystem((Neuron(1, (FiringRule.simple(1),)), Neuron(0)), frozenset({(0, 1)}))) == []


def test_serialization_round_trip():
    sys = SnpSystem(
        (Neuron(2, (FiringRule(SpikeCondition(frozenset({2}), frozenset({(4, 3)})), 2, 1),),
                (ForgettingRule(1),), "a"), Neuron(0, label="b")),
        frozenset({(0, 1)}))
    doc = json.loads(sys.to_json())
    assert SnpSystem.from_dict(doc) == sys
    dot = sys.to_dot()
    assert "n0 -> n1;" in dot and dot.startswith("digraph")


# --- random systems -------------------------------------------------------

@st.composite
def systems(draw):
    m = draw(st.integers(1, 5))
    neurons = []
    for _ in range(m):
        firing = tuple(
            FiringRule(SpikeCondition.exactly(p) if draw(st.booleans()) else SpikeCondition.at_least(p), p,
                       draw(st.integers(1, 2)))
            for p in draw(st.lists(st.integers(1, 3), max_size=2)))
        forgetting = tuple(ForgettingRule(s) for s in draw(st.lists(st.integers(1, 3), max_size=1)))
        neurons.append(Neuron(draw(st.integers(0, 3)), firing, forgetting))
    pairs = st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)).filter(lambda p: p[0] != p[1])
    syn = frozenset(draw(st.lists(pairs, max_size=2 * m)))
    return SnpSystem(tuple(neurons), syn)


@settings(deadline=None)
@given(systems(), st.integers(0, 2**16))
def test_replay_reproduces_trace(sys, seed):
    trace = run(sys, steps=6, policy=SeededRandom(seed))
    assert replay(sys, trace).configurations == trace.configurations


@settings(deadline=None)
@given(systems(), st.integers(0, 2**16))
def test_conservation_shape(sys, seed):
    trace = run(sys, steps=5, policy=SeededRandom(seed))
    for t, ch in enumerate(trace.choices):
        before, after = trace[t], trace[t + 1]
        received = [0] * sys.m
        for i, ref in enumerate(ch):
            if ref and ref.kind == "fire":
                for j in sys.successors(i):
                    received[j] += sys.neurons[i].rule(ref).emit
        for i in range(sys.m):
            ref = ch[i]
            used = 0 if ref is None else (
                sys.neurons[i].rule(ref).consume if ref.kind == "fire" else sys.neurons[i].rule(ref).threshold)
            assert after[i] == before[i] + received[i] - used
            if ref is None:
                assert not applicable_rules(sys.neurons[i], before[i])


@settings(deadline=None)
@given(systems(), st.integers(0, 2**16))
def test_policies_agree_on_deterministic_runs(sys, seed):
    try:
        strict = run(sys, steps=5, policy=Strict())
    except NondeterminismError:
        return
    assert run(sys, steps=5, policy=SeededRandom(seed)).configurations == strict.configurations
    levels = explore(sys, 5, Exhaustive())
    assert [lvl for lvl in levels] == [[c] for c in strict.configurations]


def test_seeded_random_is_reproducible():
    sys = SnpSystem(
        (Neuron(1, (FiringRule.simple(1),), (ForgettingRule(1),)), Neuron(0, (FiringRule.simple(1),))),
        frozenset({(0, 1), (1, 0)}))
    a = run(sys, steps=20, policy=SeededRandom(7))
    b = run(sys, steps=20, policy=SeededRandom(7))
    assert a.configurations == b.configurations and a.choices == b.choices


def test_trace_exports():
    sys = SnpSystem((Neuron(1, (FiringRule.simple(1),), label="x"), Neuron(0, label="y")), frozenset({(0, 1)}))
    trace = run(sys, steps=1)
    assert trace.to_tsv(sys) == "neuron\tC0\tC1\nx\t1\t0\ny\t0\t1\n"
    doc = trace.to_dict(sys)
    assert doc["choices"] == [["fire[0]", None]]
