"""SLD resolution for propositional definite databases.

Goals are tuples of variable indices; the empty tuple is the empty clause.
Finite failure is decided on the SLD tree built with a FIFO (oldest atom
first) selection rule, which is fair. A goal that repeats along a branch
proves an infinite derivation, so classification always terminates.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .kb import DeductiveDatabase, Rule, VarRef

Goal = tuple[int, ...]
EMPTY: Goal = ()


class Status(enum.Enum):
    FINITELY_FAILS = "FinitelyFails"
    SUCCEEDS = "Succeeds"
    DIVERGES = "Diverges"
    BUDGET_EXCEEDED = "BudgetExceeded"


class BudgetExhausted(RuntimeError):
    def __init__(self, variable: str, budget: int):
        super().__init__(f"SLD budget of {budget} nodes exhausted while classifying {variable}")
        self.variable = variable
        self.budget = budget


@dataclass(frozen=True)
class Step:
    rule: int  # rule id used
    position: int  # 1-based position of the selected atom in the previous goal
    goal: Goal  # goal after the step


@dataclass(frozen=True)
class DerivationOutcome:
    status: Status
    start: Goal
    witness: tuple[Step, ...] = ()
    tree_size: int = 0
    nodes_explored: int = 0

    def replay(self, db: DeductiveDatabase) -> Goal:
        """Re-derive the final goal of the witness from ``start``."""
        return replay_witness(db, self.start, self.witness)

    def format(self, db: DeductiveDatabase) -> str:
        """Two-column 'Rule used / Goals' layout."""
        rows = [("Rule used", "Goals"), ("", format_goal(db, self.start))]
        rows += [(f"R{s.rule}", format_goal(db, s.goal)) for s in self.witness]
        if self.status is Status.DIVERGES:
            rows.append(("...", "..."))
        width = max(len(r[0]) for r in rows)
        return "\n".join(f"{a.ljust(width)}  {b}" for a, b in rows) + "\n"


def format_goal(db: DeductiveDatabase, g: Goal) -> str:
    if not g:
        return "□"
    return ",".join(db.names[v - 1] for v in g) + " ->"


def resolvent(g: Goal, position: int, r: Rule) -> Goal:
    """Replace the atom at 1-based ``position`` by the body of ``r``, in place."""
    if not 1 <= position <= len(g):
        raise ValueError(f"position {position} out of range for goal of length {len(g)}")
    if g[position - 1] != r.head:
        raise ValueError(f"rule R{r.id} head p{r.head} does not match selected atom p{g[position - 1]}")
    return g[: position - 1] + tuple(r.body) + g[position:]


def factor(g: Goal) -> Goal:
    """Drop repeated atoms, keeping the first occurrence."""
    return tuple(dict.fromkeys(g))


def replay_witness(db: DeductiveDatabase, start: Goal, witness) -> Goal:
    g = start
    for s in witness:
        g = factor(resolvent(g, s.position, db.rule(s.rule)))
    return g


def default_budget(db: DeductiveDatabase) -> int:
    return 2 ** db.n * (db.k + 1)


class _OutOfBudget(Exception):
    pass


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def tick(self) -> bool:
        self.used += 1
        return self.used <= self.budget


def _refute(db: DeductiveDatabase, start: Goal, counter: _Counter):
    """Shortest refutation over all selections, or None. Raises _OutOfBudget."""
    by_head = _rules_by_head(db)
    parent: dict[frozenset, tuple] = {frozenset(start): None}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        if not counter.tick():
            raise _OutOfBudget
        for pos, atom in enumerate(g, 1):
            for r in by_head[atom]:
                child = factor(resolvent(g, pos, r))
                key = frozenset(child)
                if key in parent:
                    continue
                parent[key] = (g, Step(r.id, pos, child))
                if not child:
                    steps = []
                    node = child
                    while parent[frozenset(node)] is not None:
                        prev, step = parent[frozenset(node)]
                        steps.append(step)
                        node = prev
                    return tuple(reversed(steps))
                queue.append(child)
    return None


def _fifo_children(g: Goal, by_head):
    # oldest atom first; new body atoms join the back of the queue
    atom, rest = g[0], g[1:]
    for r in by_head[atom]:
        yield r, factor(rest + tuple(r.body))


def _explore_fifo(db: DeductiveDatabase, start: Goal, counter: _Counter):
    """Depth-first walk of the FIFO tree's state graph.

    Returns ("cycle", branch) on the first repeated state along a branch,
    ("success", None) if the empty clause is reached, else ("finite", size).
    """
    by_head = _rules_by_head(db)
    size: dict[Goal, int] = {}
    on_branch: dict[Goal, int] = {}
    # frames: (goal, step_into_goal, child iterator, running size)
    if not counter.tick():
        raise _OutOfBudget
    stack = [[start, None, _fifo_children(start, by_head), 1]]
    on_branch[start] = 0
    while stack:
        frame = stack[-1]
        nxt = next(frame[2], None)
        if nxt is None:
            stack.pop()
            del on_branch[frame[0]]
            size[frame[0]] = frame[3]
            if stack:
                stack[-1][3] += frame[3]
            continue
        r, child = nxt
        if not child:
            return "success", None
        if child in on_branch:
            branch = [f[1] for f in stack[1:]] + [Step(r.id, 1, child)]
            return "cycle", tuple(branch)
        if child in size:
            frame[3] += size[child]
            continue
        if not counter.tick():
            raise _OutOfBudget
        on_branch[child] = len(stack)
        stack.append([child, Step(r.id, 1, child), _fifo_children(child, by_head), 1])
    return "finite", size[start]


def _rules_by_head(db: DeductiveDatabase) -> dict[int, list[Rule]]:
    out: dict[int, list[Rule]] = {j: [] for j in range(1, db.n + 1)}
    for r in db.rules:
        out[r.head].append(r)
    return out


def classify(db: DeductiveDatabase, a: VarRef, budget: Optional[int] = None) -> DerivationOutcome:
    j = db.index_of(a)
    if budget is None:
        budget = default_budget(db)
    if budget <= 0:
        raise ValueError("budget must be positive")
    start: Goal = (j,)
    counter = _Counter(budget)
    try:
        proof = _refute(db, start, counter)
        if proof is not None:
            return DerivationOutcome(Status.SUCCEEDS, start, proof, nodes_explored=counter.used)
        kind, payload = _explore_fifo(db, start, counter)
    except _OutOfBudget:
        return DerivationOutcome(Status.BUDGET_EXCEEDED, start, nodes_explored=counter.budget)
    if kind == "cycle":
        return DerivationOutcome(Status.DIVERGES, start, payload, nodes_explored=counter.used)
    assert kind == "finite", "FIFO tree reached the empty clause after refutation search failed"
    return DerivationOutcome(Status.FINITELY_FAILS, start, tree_size=payload, nodes_explored=counter.used)


def failure_set(db: DeductiveDatabase, budget: Optional[int] = None) -> frozenset[int]:
    out = set()
    for j in range(1, db.n + 1):
        res = classify(db, j, budget)
        if res.status is Status.BUDGET_EXCEEDED:
            raise BudgetExhausted(db.names[j - 1], budget or default_budget(db))
        if res.status is Status.FINITELY_FAILS:
            out.add(j)
    return frozenset(out)


def has_finite_failed_tree(db: DeductiveDatabase, a: VarRef) -> bool:
    """Whether *some* selection rule yields a finite failed tree for ``a ->``.

    Decided as a least fixpoint over the set-valued goals reachable from
    ``a`` under every selection: a goal fails if it contains an atom all of
    whose resolvents fail. Independent of the FIFO engine.
    """
    by_head = _rules_by_head(db)
    start = frozenset([db.index_of(a)])
    succ: dict[frozenset, list[list[frozenset]]] = {}
    todo = [start]
    while todo:
        s = todo.pop()
        if s in succ:
            continue
        succ[s] = []
        for atom in s:
            kids = [(s - {atom}) | frozenset(r.body) for r in by_head[atom]]
            succ[s].append(kids)
            todo.extend(k for k in kids if k and k not in succ)
    failed: set[frozenset] = set()
    changed = True
    while changed:
        changed = False
        for s, options in succ.items():
            if s in failed:
                continue
            if any(all(k in failed for k in kids) for kids in options):
                failed.add(s)
                changed = True
    return start in failed
