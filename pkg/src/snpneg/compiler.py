"""Compile a definite deductive database into an SN P system that computes
its failure operator, and drive the compiled system to the fixpoints.

Neuron layout for ``n`` variables and ``k`` rules (labels are 1-based)::

    σ_1 .. σ_n          output neurons, one per variable     (a → λ)
    σ_n+1 .. σ_2n       variable neurons                     (a^h → a)
    σ_2n+1 .. σ_2n+k    rule neurons                         (a^l → a, l = 1..b)
    σ_G, σ_T            clock pair

Starting from an encoding of ``I``, configuration ``C_3`` holds ``F(I)`` on
the output neurons, and in general ``C_{2z+1}`` holds the z-th iterate.

Variable neurons with ``h >= 2`` also get forgetting rules ``a^l → λ`` for
``l < h``. Without them a variable neuron that receives fewer than ``h``
spikes keeps them into the next cycle, which breaks the parity emptiness of
variable neurons and the exact-count firing test. ``strict_paper=True``
omits these rules.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kb import DeductiveDatabase, Interpretation, check_length
from .semantics import FixpointChain, start_interpretation
from .snp import (FiringRule, ForgettingRule, Neuron, SnpSystem, Strict, Trace,
                  projection, run, step)


class CompileError(RuntimeError):
    pass


@dataclass(frozen=True)
class NeuronLayout:
    """Where each database entity lives in the compiled system (0-based)."""

    n: int
    k: int

    @property
    def m(self) -> int:
        return 2 * self.n + self.k + 2

    def output(self, j: int) -> int:
        return j - 1

    def variable(self, j: int) -> int:
        return self.n + j - 1

    def rule(self, j: int) -> int:
        return 2 * self.n + j - 1

    @property
    def G(self) -> int:
        return 2 * self.n + self.k

    @property
    def T(self) -> int:
        return 2 * self.n + self.k + 1

    @property
    def outputs(self) -> range:
        return range(0, self.n)

    @property
    def variables(self) -> range:
        return range(self.n, 2 * self.n)

    @property
    def rule_neurons(self) -> range:
        return range(2 * self.n, 2 * self.n + self.k)

    def role(self, i: int) -> tuple[str, int]:
        """(role, 1-based entity index) for neuron position ``i``."""
        if not 0 <= i < self.m:
            raise IndexError(i)
        if i < self.n:
            return "output", i + 1
        if i < 2 * self.n:
            return "variable", i - self.n + 1
        if i < 2 * self.n + self.k:
            return "rule", i - 2 * self.n + 1
        return ("clock", 0) if i == self.G else ("clock", 1)

    def label(self, i: int) -> str:
        if i == self.G:
            return "σ_G"
        if i == self.T:
            return "σ_T"
        return f"σ_{i + 1}"

    def to_dict(self, db: DeductiveDatabase = None) -> list[dict]:
        out = []
        for i in range(self.m):
            role, ent = self.role(i)
            entry = {"index": i, "label": self.label(i), "role": role}
            if role in ("output", "variable"):
                entry["variable"] = db.names[ent - 1] if db else ent
            elif role == "rule":
                entry["rule"] = f"R{ent}"
            else:
                entry["clock"] = "G" if i == self.G else "T"
            out.append(entry)
        return out


ROLE_COLORS = {"output": "lightblue", "variable": "lightyellow", "rule": "lightpink", "clock": "lightgrey"}


def encode_interpretation(db: DeductiveDatabase, i: Interpretation) -> tuple[int, ...]:
    check_length(db, i)
    lay = NeuronLayout(db.n, db.k)
    counts = [0] * lay.m
    for j, h in enumerate(db.head_counts(), 1):
        counts[lay.variable(j)] = i(j) * h if h > 0 else i(j)
    counts[lay.G] = 1
    return tuple(counts)


def compile_kb(db: DeductiveDatabase, i: Interpretation = None, *,
               strict_paper: bool = False) -> tuple[SnpSystem, NeuronLayout]:
    if i is None:
        i = Interpretation.bottom(db.n)
    check_length(db, i)
    lay = NeuronLayout(db.n, db.k)
    init = encode_interpretation(db, i)
    heads = db.head_counts()
    neurons: list[Neuron] = []

    for j in range(1, db.n + 1):
        neurons.append(Neuron(0, (), (ForgettingRule(1),), lay.label(lay.output(j))))
    for j, h in enumerate(heads, 1):
        idx = lay.variable(j)
        if h == 0:
            firing = (FiringRule.simple(1),)
            forgetting = ()
        else:
            firing = (FiringRule.simple(h),)
            forgetting = () if strict_paper else tuple(ForgettingRule(l) for l in range(1, h))
        neurons.append(Neuron(init[idx], firing, forgetting, lay.label(idx)))
    for r in db.rules:
        b = db.body_size(r)
        firing = tuple(FiringRule.simple(l) for l in range(1, b + 1))
        neurons.append(Neuron(0, firing, (), lay.label(lay.rule(r.id))))
    neurons.append(Neuron(1, (FiringRule.simple(1),), (), "σ_G"))
    neurons.append(Neuron(0, (FiringRule.simple(1),), (), "σ_T"))

    syn = {(lay.variable(j), lay.output(j)) for j in range(1, db.n + 1)}
    for r in db.rules:
        syn.update((lay.variable(v), lay.rule(r.id)) for v in r.body)
        syn.add((lay.rule(r.id), lay.variable(r.head)))
    syn.update({(lay.G, lay.T), (lay.T, lay.G)})
    syn.update((lay.T, lay.variable(j)) for j, h in enumerate(heads, 1) if h == 0)
    return SnpSystem(tuple(neurons), frozenset(syn)), lay


def _read_outputs(c, n: int, t: int) -> Interpretation:
    vec = projection(c, n)
    if any(x not in (0, 1) for x in vec):
        raise CompileError(f"output neurons hold non-Boolean counts {vec} at C_{t}")
    return Interpretation(vec)


def failure_via_snp(db: DeductiveDatabase, i: Interpretation, *, strict_paper: bool = False) -> Interpretation:
    sys, _ = compile_kb(db, i, strict_paper=strict_paper)
    trace = run(sys, steps=3, policy=Strict())
    return _read_outputs(trace[3], db.n, 3)


@dataclass
class SnpIteration:
    chain: FixpointChain
    trace: Trace
    system: SnpSystem
    layout: NeuronLayout

    @property
    def limit_step(self) -> int:
        """First odd configuration that holds the limit, ``C_{2m+1}``."""
        return 2 * (len(self.chain.steps) - 2) + 1


def iterate_via_snp(db: DeductiveDatabase, direction: str, *, strict_paper: bool = False) -> SnpIteration:
    """Run the compiled system, reading iterate z at ``C_{2z+1}``, until two
    consecutive readings agree."""
    start = start_interpretation(db.n, direction)
    sys, lay = compile_kb(db, start, strict_paper=strict_paper)
    policy = Strict()
    max_steps = 2 * (db.n + 2) + 1
    c = sys.initial()
    trace = Trace([c])
    readings: list[Interpretation] = []
    while True:
        if trace.steps >= max_steps:
            raise CompileError(f"no fixpoint within {max_steps} steps; compiled system is broken")
        c, ch = step(sys, c, policy)
        trace.configurations.append(c)
        trace.choices.append(ch)
        t = trace.steps
        if t % 2 == 1:
            readings.append(_read_outputs(c, db.n, t))
            if len(readings) >= 2 and readings[-1] == readings[-2]:
                break
    return SnpIteration(FixpointChain(direction, tuple(readings)), trace, sys, lay)


def cwa_via_snp(db: DeductiveDatabase) -> frozenset[int]:
    return iterate_via_snp(db, "up").chain.limit.ones()


def naf_via_snp(db: DeductiveDatabase) -> frozenset[int]:
    return iterate_via_snp(db, "down").chain.limit.ones()


@dataclass
class TraceTable:
    """Neuron-by-configuration spike table; output rows at odd columns are
    the readings of the failure operator."""

    layout: NeuronLayout
    system: SnpSystem
    trace: Trace

    @property
    def labels(self) -> list[str]:
        return [self.system.label(i) for i in range(self.system.m)]

    @property
    def columns(self) -> int:
        return len(self.trace.configurations)

    def row(self, label: str) -> list[int]:
        i = self.labels.index(label)
        return [c[i] for c in self.trace.configurations]

    def highlighted(self, i: int, t: int) -> bool:
        return i < self.layout.n and t % 2 == 1

    def to_tsv(self, marks: bool = True) -> str:
        return self.trace.to_tsv(self.system, self.highlighted if marks else None)

    def to_dict(self, db: DeductiveDatabase = None) -> dict:
        d = self.trace.to_dict(self.system)
        d["layout"] = self.layout.to_dict(db)
        d["readings"] = {
            f"C{t}": "".join(str(self.trace[t][i]) for i in self.layout.outputs)
            for t in range(1, self.columns, 2)
        }
        return d


def trace_table(db: DeductiveDatabase, direction: str, *, strict_paper: bool = False,
                steps: int = None) -> TraceTable:
    """Spike table up to the first configuration that holds the limit.

    ``steps`` overrides the length (the run then ignores fixpoint detection).
    """
    if steps is None:
        it = iterate_via_snp(db, direction, strict_paper=strict_paper)
        trace = Trace(it.trace.configurations[: it.limit_step + 1], it.trace.choices[: it.limit_step])
        return TraceTable(it.layout, it.system, trace)
    sys, lay = compile_kb(db, start_interpretation(db.n, direction), strict_paper=strict_paper)
    return TraceTable(lay, sys, run(sys, steps=steps, policy=Strict()))


def lemma_violations(layout: NeuronLayout, trace: Trace) -> list[str]:
    """Check the clock alternation and parity-emptiness invariants on a trace."""
    bad = []
    for t, c in enumerate(trace.configurations):
        g, tt = (1, 0) if t % 2 == 0 else (0, 1)
        if (c[layout.G], c[layout.T]) != (g, tt):
            bad.append(f"C{t}: clock (G,T)=({c[layout.G]},{c[layout.T]}), expected ({g},{tt})")
        if t % 2 == 0:
            bad += [f"C{t}: rule neuron {layout.label(i)} holds {c[i]}" for i in layout.rule_neurons if c[i]]
            bad += [f"C{t}: output neuron {layout.label(i)} holds {c[i]}" for i in layout.outputs if c[i]]
        else:
            bad += [f"C{t}: variable neuron {layout.label(i)} holds {c[i]}" for i in layout.variables if c[i]]
    return bad


def role_colors(layout: NeuronLayout) -> dict[int, str]:
    return {i: ROLE_COLORS[layout.role(i)[0]] for i in range(layout.m)}

