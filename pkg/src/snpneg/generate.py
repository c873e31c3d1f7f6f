"""Seeded random definite databases for cross-engine campaigns."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .kb import DeductiveDatabase, Rule


def random_kb(rng: random.Random, n_max: int, k_max: int, max_body: int = 3) -> DeductiveDatabase:
    if n_max < 1 or k_max < 0:
        raise ValueError("bounds must be n_max >= 1 and k_max >= 0")
    n = rng.randint(1, n_max)
    k = rng.randint(0, k_max)
    rules = []
    for rid in range(1, k + 1):
        size = rng.choice([0, 1, 1, 2, 2, 3][: max_body + 3])
        body = tuple(rng.randint(1, n) for _ in range(min(size, max_body)))
        rules.append(Rule(rid, body, rng.randint(1, n)))
    return DeductiveDatabase(tuple(f"p{j}" for j in range(1, n + 1)), tuple(rules))


def kb_stream(seed: int, count: int, n_max: int, k_max: int) -> Iterator[DeductiveDatabase]:
    if count < 0 or n_max < 1 or k_max < 1:
        raise ValueError("bounds must be >= 1")
    rng = random.Random(seed)
    for _ in range(count):
        yield random_kb(rng, n_max, k_max)


def all_rules(n: int, max_body: int) -> list[tuple[tuple[int, ...], int]]:
    """Every (sorted body, head) with a duplicate-free body of size <= max_body."""
    out = []
    for size in range(max_body + 1):
        for body in itertools.combinations(range(1, n + 1), size):
            out.extend((body, h) for h in range(1, n + 1))
    return out


def enumerate_kbs(n: int, k: int, max_body: int = 2) -> Iterator[DeductiveDatabase]:
    """All databases over ``n`` variables with exactly ``k`` distinct rules."""
    names = tuple(f"p{j}" for j in range(1, n + 1))
    for combo in itertools.combinations(all_rules(n, max_body), k):
        yield DeductiveDatabase(names, tuple(Rule(i, b, h) for i, (b, h) in enumerate(combo, 1)))
