"""Run the negation engines side by side and compare their answers."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import compiler, semantics, sld
from .kb import DeductiveDatabase

ENGINES = ("operator", "sld", "snp")
MODES = ("cwa", "naf")


class EngineModeError(ValueError):
    pass


def engines_for(mode: str, engine: str) -> tuple[str, ...]:
    if mode not in MODES:
        raise EngineModeError(f"unknown mode {mode!r}")
    if engine == "all":
        return ("operator", "snp") if mode == "cwa" else ENGINES
    if engine not in ENGINES:
        raise EngineModeError(f"unknown engine {engine!r}")
    if engine == "sld" and mode == "cwa":
        raise EngineModeError("the sld engine decides finite failure only; use --mode naf")
    return (engine,)


def negated(db: DeductiveDatabase, mode: str, engine: str, budget: int = None) -> frozenset[int]:
    if engine == "operator":
        return semantics.cwa_set(db) if mode == "cwa" else semantics.naf_set(db)
    if engine == "snp":
        return compiler.cwa_via_snp(db) if mode == "cwa" else compiler.naf_via_snp(db)
    if engine == "sld":
        return sld.failure_set(db, budget)
    raise EngineModeError(f"unknown engine {engine!r}")


@dataclass
class RunReport:
    n: int
    k: int
    mode: str
    results: dict[str, frozenset[int]] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def agreement(self) -> bool:
        return len({r for r in self.results.values()}) <= 1

    def format(self, db: DeductiveDatabase, timings: bool = False) -> str:
        lines = [f"database: {self.n} variables, {self.k} rules", f"mode: {self.mode}"]
        for name, res in self.results.items():
            line = f"{name}: {semantics.format_set(db, res)}"
            if timings:
                line += f"  ({self.timings[name] * 1000:.2f} ms)"
            lines.append(line)
        if len(self.results) > 1:
            lines.append(f"agreement: {'true' if self.agreement else 'false'}")
        return "\n".join(lines) + "\n"

    def to_dict(self, db: DeductiveDatabase) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "mode": self.mode,
            "results": {e: [db.names[j - 1] for j in sorted(r)] for e, r in self.results.items()},
            "agreement": self.agreement,
            "timings_ms": {e: round(t * 1000, 3) for e, t in self.timings.items()},
        }


def run_engines(db: DeductiveDatabase, mode: str, engine: str = "all", budget: int = None) -> RunReport:
    report = RunReport(db.n, db.k, mode)
    for name in engines_for(mode, engine):
        t0 = time.perf_counter()
        report.results[name] = negated(db, mode, name, budget)
        report.timings[name] = time.perf_counter() - t0
    return report
