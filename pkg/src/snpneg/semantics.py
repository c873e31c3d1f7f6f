"""Operator semantics: models, F-models, the failure and immediate-consequence
operators, and their fixpoint iterations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal as Lit

from .kb import DeductiveDatabase, Interpretation, check_length, evaluate

Direction = Lit["down", "up"]


def is_model(db: DeductiveDatabase, i: Interpretation) -> bool:
    check_length(db, i)
    return all(evaluate(i, r) == 1 for r in db.rules)


def is_f_model(db: DeductiveDatabase, i: Interpretation) -> bool:
    """Every rule whose head is true under ``i`` has some true body atom."""
    check_length(db, i)
    return all(any(i(v) for v in r.body) for r in db.rules if i(r.head))


def failure_operator(db: DeductiveDatabase, i: Interpretation) -> Interpretation:
    # max over an empty body is 0, so facts block their head from failing
    check_length(db, i)
    out = [1] * db.n
    for r in db.rules:
        if not any(i(v) for v in r.body):
            out[r.head - 1] = 0
    return Interpretation(tuple(out))


def t_operator(db: DeductiveDatabase, i: Interpretation) -> Interpretation:
    check_length(db, i)
    out = [0] * db.n
    for r in db.rules:
        if all(i(v) for v in r.body):
            out[r.head - 1] = 1
    return Interpretation(tuple(out))


@dataclass(frozen=True)
class FixpointChain:
    """Iterates of the failure operator from the bottom or top interpretation.

    ``steps`` ends with the first repeated iterate, so ``steps[-1] == steps[-2]``
    is the witness that the limit was reached.
    """

    direction: str
    steps: tuple[Interpretation, ...]

    @property
    def limit(self) -> Interpretation:
        return self.steps[-1]

    @property
    def iterations_to_fixpoint(self) -> int:
        """Number of applications that changed the interpretation."""
        return len(self.steps) - 2

    @property
    def iterates(self) -> tuple[Interpretation, ...]:
        """Distinct iterates F^0 .. F^m with F^m the limit."""
        return self.steps[:-1]

    def to_text(self) -> str:
        arrow = "↓" if self.direction == "down" else "↑"
        lines = [f"F{arrow}{z} = ({','.join(map(str, s.bits))})" for z, s in enumerate(self.steps)]
        lines.append(f"F{arrow}ω = ({','.join(map(str, self.limit.bits))})")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "steps": [str(s) for s in self.steps],
            "limit": str(self.limit),
            "iterations_to_fixpoint": self.iterations_to_fixpoint,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def start_interpretation(n: int, direction: str) -> Interpretation:
    if direction == "down":
        return Interpretation.bottom(n)
    if direction == "up":
        return Interpretation.top(n)
    raise ValueError(f"direction must be 'down' or 'up', got {direction!r}")


def iterate_failure(db: DeductiveDatabase, direction: Direction) -> FixpointChain:
    steps = [start_interpretation(db.n, direction)]
    while True:
        nxt = failure_operator(db, steps[-1])
        steps.append(nxt)
        if nxt == steps[-2]:
            break
        # each productive step flips at least one bit in a fixed direction
        assert len(steps) - 2 <= db.n, "failure iteration exceeded lattice height"
    return FixpointChain(direction, tuple(steps))


def least_model(db: DeductiveDatabase) -> Interpretation:
    i = Interpretation.bottom(db.n)
    while True:
        nxt = t_operator(db, i)
        if nxt == i:
            return i
        i = nxt


def cwa_set(db: DeductiveDatabase) -> frozenset[int]:
    """Variables negated under the closed world assumption (ones of F↑ω)."""
    return iterate_failure(db, "up").limit.ones()


def naf_set(db: DeductiveDatabase) -> frozenset[int]:
    """Variables negated by finite failure (ones of F↓ω)."""
    return iterate_failure(db, "down").limit.ones()


def format_set(db: DeductiveDatabase, s) -> str:
    return "{" + ", ".join(db.names[j - 1] for j in sorted(s)) + "}"
