"""Synchronous simulator for spiking neural P systems.

Neurons are addressed by 0-based position; labels carry display names.
Each step every neuron with an applicable rule applies exactly one of them;
firing rules consume ``consume`` spikes and send ``emit`` spikes along every
outgoing synapse, forgetting rules erase the neuron's spikes. Spikes sent
during a step arrive in the next configuration.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union


class NondeterminismError(RuntimeError):
    pass


class StateCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SpikeCondition:
    """An ultimately periodic set of spike counts.

    ``c`` matches if it is one of ``exact`` or lies on a progression
    ``offset, offset + period, ...``.
    """

    exact: frozenset[int] = frozenset()
    progressions: frozenset[tuple[int, int]] = frozenset()

    @classmethod
    def exactly(cls, *counts: int) -> "SpikeCondition":
        return cls(frozenset(counts))

    @classmethod
    def at_least(cls, count: int) -> "SpikeCondition":
        return cls(progressions=frozenset({(count, 1)}))

    def __contains__(self, c: int) -> bool:
        if c in self.exact:
            return True
        return any(c >= o and (c - o) % p == 0 for o, p in self.progressions)

    def minimum(self) -> Optional[int]:
        cands = list(self.exact) + [o for o, _ in self.progressions]
        return min(cands) if cands else None

    def render(self) -> str:
        """Unary regular expression for the set, e.g. ``a^2`` or ``a(aa)*``."""
        parts = [_power(c) for c in sorted(self.exact)]
        for o, p in sorted(self.progressions):
            parts.append(f"{_power(o) if o else ''}({_power(p)})*")
        return " ∪ ".join(parts) if parts else "∅"

    def to_dict(self) -> dict:
        return {"exact": sorted(self.exact), "progressions": [list(x) for x in sorted(self.progressions)]}

    @classmethod
    def from_dict(cls, d: dict) -> "SpikeCondition":
        return cls(frozenset(d.get("exact", ())), frozenset(tuple(x) for x in d.get("progressions", ())))


def _power(c: int) -> str:
    return "a" if c == 1 else f"a^{c}"


@dataclass(frozen=True)
class FiringRule:
    condition: SpikeCondition
    consume: int
    emit: int

    @classmethod
    def simple(cls, consume: int, emit: int = 1) -> "FiringRule":
        """The abbreviated form a^p -> a^q (condition exactly p)."""
        return cls(SpikeCondition.exactly(consume), consume, emit)

    def applicable(self, count: int) -> bool:
        return count >= self.consume and count in self.condition

    def render(self) -> str:
        rhs = _power(self.emit)
        if self.condition == SpikeCondition.exactly(self.consume):
            return f"{_power(self.consume)} → {rhs}"
        return f"{self.condition.render()}/{_power(self.consume)} → {rhs}"


@dataclass(frozen=True)
class ForgettingRule:
    threshold: int

    def applicable(self, count: int) -> bool:
        return count == self.threshold

    def render(self) -> str:
        return f"{_power(self.threshold)} → λ"


@dataclass(frozen=True)
class RuleRef:
    kind: str  # "fire" or "forget"
    index: int

    def __str__(self):
        return f"{self.kind}[{self.index}]"


@dataclass(frozen=True)
class Neuron:
    initial_spikes: int = 0
    firing: tuple[FiringRule, ...] = ()
    forgetting: tuple[ForgettingRule, ...] = ()
    label: str = ""

    def rule(self, ref: RuleRef) -> Union[FiringRule, ForgettingRule]:
        return (self.firing if ref.kind == "fire" else self.forgetting)[ref.index]

    def rules_text(self) -> list[str]:
        return [r.render() for r in self.firing] + [r.render() for r in self.forgetting]


@dataclass(frozen=True)
class SnpSystem:
    neurons: tuple[Neuron, ...]
    synapses: frozenset[tuple[int, int]] = frozenset()
    _out: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        out: list[list[int]] = [[] for _ in self.neurons]
        for i, j in self.synapses:
            if 0 <= i < len(out):
                out[i].append(j)
        object.__setattr__(self, "_out", tuple(tuple(sorted(o)) for o in out))

    @property
    def m(self) -> int:
        return len(self.neurons)

    def successors(self, i: int) -> tuple[int, ...]:
        return self._out[i]

    def initial(self) -> tuple[int, ...]:
        return tuple(nr.initial_spikes for nr in self.neurons)

    def label(self, i: int) -> str:
        return self.neurons[i].label or f"σ_{i + 1}"

    def with_initial(self, counts: Sequence[int]) -> "SnpSystem":
        if len(counts) != self.m:
            raise ValueError("initial count vector has wrong length")
        neurons = tuple(
            Neuron(c, nr.firing, nr.forgetting, nr.label) for c, nr in zip(counts, self.neurons))
        return SnpSystem(neurons, self.synapses)

    # --- serialization ---
    def to_dict(self) -> dict:
        return {
            "neurons": [
                {
                    "index": i,
                    "label": self.label(i),
                    "initial_spikes": nr.initial_spikes,
                    "firing": [
                        {"condition": r.condition.to_dict(), "consume": r.consume, "emit": r.emit,
                         "text": r.render()} for r in nr.firing],
                    "forgetting": [{"threshold": r.threshold, "text": r.render()} for r in nr.forgetting],
                }
                for i, nr in enumerate(self.neurons)
            ],
            "synapses": [list(s) for s in sorted(self.synapses)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SnpSystem":
        neurons = tuple(
            Neuron(
                nd.get("initial_spikes", 0),
                tuple(FiringRule(SpikeCondition.from_dict(r["condition"]), r["consume"], r["emit"])
                      for r in nd.get("firing", ())),
                tuple(ForgettingRule(r["threshold"]) for r in nd.get("forgetting", ())),
                nd.get("label", ""),
            )
            for nd in d["neurons"]
        )
        return cls(neurons, frozenset(tuple(s) for s in d.get("synapses", ())))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_dot(self, colors: Optional[dict[int, str]] = None) -> str:
        lines = ["digraph snp {", "  rankdir=LR;", "  node [shape=box, style=filled, fillcolor=white];"]
        for i, nr in enumerate(self.neurons):
            body = "\\n".join([self.label(i), *nr.rules_text()])
            if nr.initial_spikes:
                body += f"\\n[{nr.initial_spikes}]"
            color = (colors or {}).get(i, "white")
            lines.append(f'  n{i} [label="{body}", fillcolor="{color}"];')
        for i, j in sorted(self.synapses):
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def validate(sys: SnpSystem) -> list[str]:
    """Return a list of well-formedness violations (empty if none)."""
    problems = []
    for i, j in sorted(sys.synapses):
        if i == j:
            problems.append(f"self-loop: synapse ({i}, {i}) on {sys.label(i)}")
        if not (0 <= i < sys.m and 0 <= j < sys.m):
            problems.append(f"synapse ({i}, {j}) out of range 0..{sys.m - 1}")
    for i, nr in enumerate(sys.neurons):
        name = sys.label(i)
        if nr.initial_spikes < 0:
            problems.append(f"{name}: negative initial spikes")
        for r in nr.firing:
            if r.consume < 1:
                problems.append(f"{name}: firing rule consumes {r.consume} < 1")
            if r.emit < 1:
                problems.append(f"{name}: firing rule emits {r.emit} < 1")
            low = r.condition.minimum()
            if low is None:
                problems.append(f"{name}: firing rule with empty condition")
            elif low < r.consume:
                problems.append(f"{name}: condition admits {low} spikes, fewer than consume={r.consume}")
        for r in nr.forgetting:
            if r.threshold < 1:
                problems.append(f"{name}: forgetting threshold {r.threshold} < 1")
    return problems


def applicable_rules(nr: Neuron, count: int) -> list[RuleRef]:
    refs = [RuleRef("fire", i) for i, r in enumerate(nr.firing) if r.applicable(count)]
    refs += [RuleRef("forget", i) for i, r in enumerate(nr.forgetting) if r.applicable(count)]
    return refs


# --- choice policies -------------------------------------------------------

class Strict:
    """Deterministic: fails if any neuron has more than one applicable rule."""

    def choose(self, sys: SnpSystem, i: int, options: list[RuleRef]) -> RuleRef:
        if len(options) > 1:
            rules = ", ".join(sys.neurons[i].rule(o).render() for o in options)
            raise NondeterminismError(f"{sys.label(i)} has {len(options)} applicable rules: {rules}")
        return options[0]


class SeededRandom:
    def __init__(self, seed: int):
        self.seed = seed
        self.rng = random.Random(seed)

    def choose(self, sys: SnpSystem, i: int, options: list[RuleRef]) -> RuleRef:
        return options[0] if len(options) == 1 else self.rng.choice(options)


@dataclass
class Exhaustive:
    max_states: int = 10_000


Choices = tuple[Optional[RuleRef], ...]
Policy = Union[Strict, SeededRandom, Exhaustive]


def apply_choices(sys: SnpSystem, c: Sequence[int], choices: Choices) -> tuple[int, ...]:
    nxt = list(c)
    for i, ref in enumerate(choices):
        if ref is None:
            continue
        r = sys.neurons[i].rule(ref)
        if not r.applicable(c[i]):
            raise ValueError(f"{sys.label(i)}: rule {r.render()} not applicable to {c[i]} spikes")
        if isinstance(r, ForgettingRule):
            nxt[i] -= r.threshold
        else:
            nxt[i] -= r.consume
            for j in sys.successors(i):
                nxt[j] += r.emit
    return tuple(nxt)


def _check_config(sys: SnpSystem, c: Sequence[int]):
    if len(c) != sys.m:
        raise ValueError(f"configuration has length {len(c)}, system has {sys.m} neurons")
    if any(x < 0 for x in c):
        raise ValueError("negative spike count in configuration")


def step(sys: SnpSystem, c: Sequence[int], policy: Policy = None):
    """One synchronous transition.

    Strict/SeededRandom return ``(next_configuration, choices)``; Exhaustive
    returns the sorted list of all distinct ``(configuration, choices)``
    successors.
    """
    policy = Strict() if policy is None else policy
    _check_config(sys, c)
    options = [applicable_rules(nr, x) for nr, x in zip(sys.neurons, c)]
    if isinstance(policy, Exhaustive):
        per_neuron = [opts if opts else [None] for opts in options]
        seen: dict[tuple[int, ...], Choices] = {}
        for combo in itertools.product(*per_neuron):
            nxt = apply_choices(sys, c, combo)
            seen.setdefault(nxt, combo)
            if len(seen) > policy.max_states:
                raise StateCapExceeded(f"more than {policy.max_states} successors")
        return sorted(seen.items())
    choices = tuple(policy.choose(sys, i, opts) if opts else None for i, opts in enumerate(options))
    return apply_choices(sys, c, choices), choices


@dataclass
class Trace:
    configurations: list[tuple[int, ...]]
    choices: list[Choices] = field(default_factory=list)

    def __len__(self):
        return len(self.configurations)

    def __getitem__(self, t: int) -> tuple[int, ...]:
        return self.configurations[t]

    @property
    def steps(self) -> int:
        return len(self.configurations) - 1

    def to_tsv(self, sys: SnpSystem, highlight: Callable[[int, int], bool] = None) -> str:
        """Neuron-by-step table; ``highlight(neuron, t)`` cells get a trailing ``*``."""
        header = ["neuron"] + [f"C{t}" for t in range(len(self.configurations))]
        rows = ["\t".join(header)]
        for i in range(sys.m):
            cells = []
            for t, c in enumerate(self.configurations):
                cell = str(c[i])
                if highlight and highlight(i, t):
                    cell += "*"
                cells.append(cell)
            rows.append("\t".join([sys.label(i), *cells]))
        return "\n".join(rows) + "\n"

    def to_dict(self, sys: SnpSystem) -> dict:
        return {
            "labels": [sys.label(i) for i in range(sys.m)],
            "configurations": [list(c) for c in self.configurations],
            "choices": [[str(r) if r else None for r in ch] for ch in self.choices],
        }


def run(sys: SnpSystem, steps: Optional[int] = None,
        stop: Optional[Callable[[Trace], bool]] = None, policy: Policy = None,
        initial: Optional[Sequence[int]] = None) -> Trace:
    """Run a computation from the initial configuration.

    Stops after ``steps`` transitions or as soon as ``stop(trace)`` holds
    (checked on the trace so far, including before the first transition).
    """
    policy = Strict() if policy is None else policy
    if isinstance(policy, Exhaustive):
        raise TypeError("run() follows one computation; use explore() for Exhaustive")
    if steps is None and stop is None:
        raise ValueError("run() needs steps or stop")
    c = tuple(sys.initial() if initial is None else initial)
    _check_config(sys, c)
    trace = Trace([c])
    while True:
        if stop is not None and stop(trace):
            break
        if steps is not None and trace.steps >= steps:
            break
        c, ch = step(sys, c, policy)
        trace.configurations.append(c)
        trace.choices.append(ch)
    return trace


def explore(sys: SnpSystem, steps: int, policy: Exhaustive) -> list[list[tuple[int, ...]]]:
    """All configurations reachable at each step 0..steps, canonically sorted."""
    levels = [[sys.initial()]]
    for _ in range(steps):
        nxt: set[tuple[int, ...]] = set()
        for c in levels[-1]:
            nxt.update(cfg for cfg, _ in step(sys, c, policy))
            if len(nxt) > policy.max_states:
                raise StateCapExceeded(f"more than {policy.max_states} configurations at step {len(levels)}")
        levels.append(sorted(nxt))
    return levels


def replay(sys: SnpSystem, trace: Trace) -> Trace:
    """Re-apply the recorded choices from C_0."""
    out = Trace([trace.configurations[0]])
    for ch in trace.choices:
        out.configurations.append(apply_choices(sys, out.configurations[-1], ch))
        out.choices.append(ch)
    return out


def projection(c: Sequence[int], n: int) -> tuple[int, ...]:
    if not 0 <= n <= len(c):
        raise ValueError(f"projection length {n} out of range 0..{len(c)}")
    return tuple(c[:n])
