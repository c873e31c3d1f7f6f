"""Propositional deductive databases and interpretations.

Concrete syntax, one rule per line::

    # comment
    vars p1, p2, p3        (optional; fixes variable order)
    -> p1.                 (fact)
    p1 & p2 -> p3.

Without a ``vars`` header, variables are indexed by order of first
appearance. Only definite rules are accepted: a negated body atom
(``~p``) is a parse error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union


class KBError(ValueError):
    pass


class ParseError(KBError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class NegativeLiteralError(ParseError):
    pass


@dataclass(frozen=True)
class VariableId:
    index: int  # 1-based
    name: str


@dataclass(frozen=True)
class Rule:
    id: int  # 1-based, source order
    body: tuple[int, ...]  # variable indices, duplicates preserved
    head: int

    @property
    def is_fact(self) -> bool:
        return not self.body


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False


VarRef = Union[int, str, VariableId]


@dataclass(frozen=True)
class DeductiveDatabase:
    names: tuple[str, ...]
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise KBError("duplicate variable names")
        for pos, r in enumerate(self.rules, 1):
            if r.id != pos:
                raise KBError(f"rule ids must be 1..k in order, got {r.id} at {pos}")
            for v in (*r.body, r.head):
                if not 1 <= v <= self.n:
                    raise KBError(f"rule R{r.id} references undeclared variable {v}")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def k(self) -> int:
        return len(self.rules)

    @property
    def variables(self) -> tuple[VariableId, ...]:
        return tuple(VariableId(i, name) for i, name in enumerate(self.names, 1))

    def index_of(self, v: VarRef) -> int:
        """Resolve a variable given by 1-based index, name or VariableId."""
        if isinstance(v, VariableId):
            v = v.index
        if isinstance(v, str):
            try:
                return self.names.index(v) + 1
            except ValueError:
                raise KBError(f"unknown variable {v!r}") from None
        if isinstance(v, int) and 1 <= v <= self.n:
            return v
        raise KBError(f"unknown variable {v!r}")

    def name(self, v: VarRef) -> str:
        return self.names[self.index_of(v) - 1]

    def rule(self, rule_id: int) -> Rule:
        if not 1 <= rule_id <= self.k:
            raise KBError(f"unknown rule R{rule_id}")
        return self.rules[rule_id - 1]

    def rules_for(self, v: VarRef) -> tuple[Rule, ...]:
        j = self.index_of(v)
        return tuple(r for r in self.rules if r.head == j)

    def head_count(self, v: VarRef) -> int:
        return len(self.rules_for(v))

    def body_size(self, r: Union[Rule, int]) -> int:
        if isinstance(r, int):
            r = self.rule(r)
        return len(r.body)

    def head_counts(self) -> tuple[int, ...]:
        counts = [0] * self.n
        for r in self.rules:
            counts[r.head - 1] += 1
        return tuple(counts)

    def render(self) -> str:
        lines = []
        if self.names:
            lines.append("vars " + ", ".join(self.names))
        for r in self.rules:
            lines.append(render_rule(self, r))
        return "\n".join(lines) + "\n"

    def __str__(self):
        return self.render()


def head_count(db: DeductiveDatabase, j: VarRef) -> int:
    return db.head_count(j)


def body_size(db: DeductiveDatabase, r: Union[Rule, int]) -> int:
    return db.body_size(r)


def render_rule(db: DeductiveDatabase, r: Rule) -> str:
    body = " & ".join(db.names[v - 1] for v in r.body)
    return f"{body} -> {db.names[r.head - 1]}." if body else f"-> {db.names[r.head - 1]}."


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<arrow>->)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[&~.,])|(?P<bad>\S))")


def _tokens(line: str, lineno: int):
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:  # trailing whitespace only
            break
        kind = m.lastgroup
        if kind is None:
            break
        col = m.start(kind) + 1
        text = m.group(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {text!r}", lineno, col)
        yield kind, text, col
        pos = m.end()


def parse_kb(text: str) -> DeductiveDatabase:
    names: list[str] = []
    index: dict[str, int] = {}
    header_seen = False
    rules: list[Rule] = []

    def declare(name: str, lineno: int, col: int) -> int:
        if name not in index:
            if header_seen:
                raise ParseError(f"variable {name!r} not declared in vars header", lineno, col)
            names.append(name)
            index[name] = len(names)
        return index[name]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = list(_tokens(line, lineno))
        if toks[0][:2] == ("ident", "vars"):
            if header_seen or rules or names:
                raise ParseError("vars header must precede all rules", lineno, toks[0][2])
            _parse_header(toks[1:], lineno, names, index)
            header_seen = True
            continue
        body, head = _parse_rule(toks, lineno, line)
        body_ids = tuple(declare(name, lineno, col) for name, col in body)
        head_id = declare(head[0], lineno, head[1])
        rules.append(Rule(len(rules) + 1, body_ids, head_id))
    return DeductiveDatabase(tuple(names), tuple(rules))


def _parse_header(toks, lineno, names, index):
    expect_name = True
    for kind, text, col in toks:
        if expect_name:
            if kind != "ident":
                raise ParseError(f"expected variable name, got {text!r}", lineno, col)
            if text in index:
                raise ParseError(f"variable {text!r} declared twice", lineno, col)
            names.append(text)
            index[text] = len(names)
        elif text != ",":
            raise ParseError(f"expected ',', got {text!r}", lineno, col)
        expect_name = not expect_name
    if expect_name and toks:
        raise ParseError("trailing ',' in vars header", lineno, toks[-1][2])


def _parse_rule(toks, lineno, line):
    body: list[tuple[str, int]] = []
    i = 0
    if toks[0][0] != "arrow":
        while True:
            kind, text, col = toks[i]
            if text == "~":
                raise NegativeLiteralError(
                    "negative body literal unsupported: only definite databases "
                    "(positive rule bodies) can be compiled", lineno, col)
            if kind != "ident":
                raise ParseError(f"expected variable, got {text!r}", lineno, col)
            body.append((text, col))
            i += 1
            if i >= len(toks):
                raise ParseError("expected '->'", lineno, len(line) + 1)
            if toks[i][0] == "arrow":
                break
            if toks[i][1] != "&":
                raise ParseError(f"expected '&' or '->', got {toks[i][1]!r}", lineno, toks[i][2])
            i += 1
            if i >= len(toks):
                raise ParseError("expected variable after '&'", lineno, len(line) + 1)
    i += 1
    if i >= len(toks):
        raise ParseError("expected head variable after '->'", lineno, len(line) + 1)
    kind, text, col = toks[i]
    if text == "~":
        raise NegativeLiteralError("negated head not allowed in a definite database", lineno, col)
    if kind != "ident":
        raise ParseError(f"expected head variable, got {text!r}", lineno, col)
    head = (text, col)
    i += 1
    if i >= len(toks) or toks[i][1] != ".":
        col = toks[i][2] if i < len(toks) else len(line) + 1
        raise ParseError("expected '.' at end of rule", lineno, col)
    if i + 1 < len(toks):
        raise ParseError("one rule per line", lineno, toks[i + 1][2])
    return body, head


# --- interpretations -------------------------------------------------------

@dataclass(frozen=True)
class Interpretation:
    """A 0/1 vector; position 0 holds the value of p_1."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise KBError(f"interpretation bits must be 0/1: {self.bits}")

    @classmethod
    def of(cls, bits: Iterable[int]) -> "Interpretation":
        return cls(tuple(int(b) for b in bits))

    @classmethod
    def bottom(cls, n: int) -> "Interpretation":
        return cls((0,) * n)

    @classmethod
    def top(cls, n: int) -> "Interpretation":
        return cls((1,) * n)

    @classmethod
    def from_string(cls, s: str) -> "Interpretation":
        s = s.strip()
        if not re.fullmatch(r"[01]*", s):
            raise KBError(f"not a bit string: {s!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def from_set(cls, ones: Iterable[int], n: int) -> "Interpretation":
        ones = set(ones)
        return cls(tuple(int(j in ones) for j in range(1, n + 1)))

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __call__(self, j: int) -> int:
        """Value of variable p_j (1-based)."""
        return self.bits[j - 1]

    def __str__(self):
        return "".join(map(str, self.bits))

    def ones(self) -> frozenset[int]:
        return frozenset(j for j, b in enumerate(self.bits, 1) if b)

    def _check(self, other: "Interpretation"):
        if len(self) != len(other):
            raise KBError(f"interpretation length mismatch: {len(self)} vs {len(other)}")

    def __le__(self, other: "Interpretation") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.bits, other.bits))

    def __or__(self, other: "Interpretation") -> "Interpretation":
        self._check(other)
        return Interpretation(tuple(max(a, b) for a, b in zip(self.bits, other.bits)))

    def __and__(self, other: "Interpretation") -> "Interpretation":
        self._check(other)
        return Interpretation(tuple(min(a, b) for a, b in zip(self.bits, other.bits)))


def interp_leq(a: Interpretation, b: Interpretation) -> bool:
    return a <= b


def interp_union(a: Interpretation, b: Interpretation) -> Interpretation:
    return a | b


def interp_intersect(a: Interpretation, b: Interpretation) -> Interpretation:
    return a & b


def check_length(db: DeductiveDatabase, i: Interpretation) -> None:
    if len(i) != db.n:
        raise KBError(f"interpretation has length {len(i)}, database has {db.n} variables")


Formula = Union[Literal, Rule, Sequence[Literal]]


def evaluate(i: Interpretation, f: Formula) -> int:
    """Truth value of a literal, a conjunction of literals, or a rule under ``i``."""
    if isinstance(f, Literal):
        if not 1 <= f.var <= len(i):
            raise KBError(f"variable index {f.var} out of range 1..{len(i)}")
        v = i(f.var)
        return 1 - v if f.negated else v
    if isinstance(f, Rule):
        body = evaluate(i, [Literal(v) for v in f.body])
        head = evaluate(i, Literal(f.head))
        return 0 if body == 1 and head == 0 else 1
    return min((evaluate(i, lit) for lit in f), default=1)
