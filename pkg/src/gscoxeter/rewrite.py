"""
Rewriting with monic polynomials: elimination of leading words, compositions
(critical pairs), degree-capped Shirshov completion and interreduction.

A rule ``lhs -> tail`` stands for the monic polynomial ``lhs - tail`` whose
leading word is ``lhs``.  A :class:`RuleSystem` keeps its rules in canonical
order, ascending by ``(|lhs|, lhs, insertion number)``, and answers "leftmost
redex" queries through a dictionary keyed by left-hand side.
"""

from __future__ import annotations

import bisect
import heapq
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .freealg import (
    EMPTY,
    Polynomial,
    Word,
    deglex_key,
    find_occurrences,
    format_word,
)

log = logging.getLogger(__name__)

DEFAULT_STEP_LIMIT = 10**6

INTERSECTION = "intersection"
INCLUSION = "inclusion"


class StepBudgetExceeded(RuntimeError):
    pass


class RuleNotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    tail: Polynomial
    source: str = "input"

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        key = deglex_key(self.lhs)
        for w, _ in self.tail:
            if deglex_key(w) >= key:
                raise ValueError(
                    f"tail word {format_word(w)} is not below {format_word(self.lhs)}")

    @classmethod
    def from_polynomial(cls, f: Polynomial, source: str = "input") -> RewriteRule:
        """Orient a nonzero polynomial by its leading word (after making it monic)."""
        f = f.monic()
        lhs = f.leading_word
        return cls(lhs, Polynomial.monomial(lhs) - f, source)

    @classmethod
    def from_words(cls, lhs: Word, rhs: Word, source: str = "input") -> RewriteRule:
        """The relation ``lhs = rhs`` oriented so that the larger word is rewritten."""
        if deglex_key(lhs) < deglex_key(rhs):
            lhs, rhs = rhs, lhs
        return cls(tuple(lhs), Polynomial.monomial(rhs), source)

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial.monomial(self.lhs) - self.tail

    def same_relation(self, other: RewriteRule) -> bool:
        return self.lhs == other.lhs and self.tail == other.tail

    def __str__(self) -> str:
        if len(self.tail) == 1:
            (w, c), = self.tail
            if c == 1:
                return f"{format_word(self.lhs)} = {format_word(w)}"
        return f"{format_word(self.lhs)} = {self.tail}"


class RuleSystem:
    """Ordered collection of rewrite rules over the generators ``1..n``.

    Rules may be added but never removed; derived systems are built as new
    instances.  No two rules share the same polynomial.
    """

    def __init__(self, n: int, rules: Iterable[RewriteRule] = ()):
        self.n = n
        self._entries: list[tuple[tuple[int, Word, int], RewriteRule]] = []
        self._seq: dict[RewriteRule, int] = {}
        self._by_seq: dict[int, RewriteRule] = {}
        self._by_lhs: dict[Word, RewriteRule] = {}
        self._all_by_lhs: dict[Word, list[RewriteRule]] = {}
        self._lengths: list[int] = []
        self._polys: set[tuple[Word, Polynomial]] = set()
        self._next = 0
        self._cache: dict[Word, Polynomial] = {}
        for r in rules:
            self.add(r)

    def copy(self) -> RuleSystem:
        return RuleSystem(self.n, self.rules)

    def add(self, rule: RewriteRule) -> RewriteRule | None:
        """Insert ``rule``; returns None (and changes nothing) for a duplicate."""
        for g in rule.lhs:
            if not 1 <= g <= self.n:
                raise ValueError(f"generator s{g} outside s1..s{self.n}")
        key = (rule.lhs, rule.tail)
        if key in self._polys:
            return None
        self._polys.add(key)
        seq = self._next
        self._next += 1
        bisect.insort(self._entries, ((len(rule.lhs), rule.lhs, seq), rule), key=lambda e: e[0])
        self._seq[rule] = seq
        self._by_seq[seq] = rule
        if rule.lhs not in self._by_lhs:
            self._by_lhs[rule.lhs] = rule
        self._all_by_lhs.setdefault(rule.lhs, []).append(rule)
        if len(rule.lhs) not in self._lengths:
            self._lengths.append(len(rule.lhs))
            self._lengths.sort(reverse=True)
        self._cache.clear()
        return rule

    @property
    def rules(self) -> list[RewriteRule]:
        return [r for _, r in self._entries]

    def __iter__(self) -> Iterator[RewriteRule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, rule: RewriteRule) -> bool:
        return rule in self._seq

    def seq(self, rule: RewriteRule) -> int:
        return self._seq[rule]

    def by_seq(self, seq: int) -> RewriteRule:
        return self._by_seq[seq]

    def max_lhs_length(self) -> int:
        return self._lengths[0] if self._lengths else 0

    def leading_words(self) -> set[Word]:
        return set(self._by_lhs)

    def without(self, rule: RewriteRule) -> RuleSystem:
        return RuleSystem(self.n, (r for r in self.rules if r is not rule))

    def find_redex(self, word: Word) -> tuple[int, RewriteRule] | None:
        """Leftmost occurrence of any lhs in ``word``; the longest lhs wins ties."""
        by_lhs = self._by_lhs
        lengths = self._lengths
        size = len(word)
        for p in range(size):
            rest = size - p
            for k in lengths:
                if k <= rest:
                    rule = by_lhs.get(word[p:p + k])
                    if rule is not None:
                        return p, rule
        return None

    def is_irreducible(self, word: Word) -> bool:
        return self.find_redex(word) is None

    def matching_rules(self, word: Word) -> list[tuple[int, RewriteRule]]:
        """Every (position, rule) pair that applies somewhere in ``word``."""
        found = []
        for p in range(len(word)):
            for k in self._lengths:
                for rule in self._all_by_lhs.get(word[p:p + k], ()):
                    found.append((p, rule))
        return found

    def normal_form_word(self, word: Word, step_limit: int = DEFAULT_STEP_LIMIT) -> Polynomial:
        cache = self._cache
        hit = cache.get(word)
        if hit is not None:
            return hit
        steps = 0
        stack = [word]
        while stack:
            w = stack[-1]
            if w in cache:
                stack.pop()
                continue
            redex = self.find_redex(w)
            if redex is None:
                cache[w] = Polynomial.monomial(w)
                stack.pop()
                continue
            pos, rule = redex
            a, b = w[:pos], w[pos + len(rule.lhs):]
            images = [(a + v + b, c) for v, c in rule.tail._terms.items()]
            pending = [v for v, _ in images if v not in cache]
            if pending:
                steps += 1
                if steps > step_limit:
                    raise StepBudgetExceeded("step budget exceeded")
                stack.extend(pending)
                continue
            acc: dict[Word, Fraction] = {}
            for v, c in images:
                for u, d in cache[v]._terms.items():
                    acc[u] = acc.get(u, 0) + c * d
            cache[w] = Polynomial(acc)
            stack.pop()
        return cache[word]

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


def elw_step(f: Polynomial, rule: RewriteRule) -> Polynomial:
    """Eliminate the leftmost occurrence of ``rule.lhs`` in the leading word of ``f``."""
    top, c = f.leading_term()
    places = find_occurrences(top, rule.lhs)
    if not places:
        raise RuleNotApplicable("rule not applicable")
    p = places[0]
    return f.combine(-c, rule.polynomial.sandwich(top[:p], top[p + len(rule.lhs):]))


def reduce_at(f: Polynomial, word: Word, position: int, rule: RewriteRule) -> Polynomial:
    """One rewriting step applied to the support word ``word`` of ``f``."""
    c = f.coefficient(word)
    if not c or word[position:position + len(rule.lhs)] != rule.lhs:
        raise RuleNotApplicable("rule not applicable")
    return f.combine(-c, rule.polynomial.sandwich(word[:position], word[position + len(rule.lhs):]))


def normal_form(f: Polynomial, system: RuleSystem, step_limit: int = DEFAULT_STEP_LIMIT) -> Polynomial:
    """Fully reduce ``f``; no support word of the result contains a rule lhs."""
    acc: dict[Word, Fraction] = {}
    for w, c in f._terms.items():
        for u, d in system.normal_form_word(w, step_limit)._terms.items():
            acc[u] = acc.get(u, 0) + c * d
    return Polynomial(acc)


def normal_form_random(f: Polynomial, system: RuleSystem, rng: random.Random,
                       step_limit: int = DEFAULT_STEP_LIMIT) -> Polynomial:
    """Reduce ``f`` choosing reducible word, rule and occurrence at random."""
    steps = 0
    while True:
        reducible = [(w, m) for w in f.support() if (m := system.matching_rules(w))]
        if not reducible:
            return f
        steps += 1
        if steps > step_limit:
            raise StepBudgetExceeded("step budget exceeded")
        w, matches = rng.choice(reducible)
        p, rule = rng.choice(matches)
        f = reduce_at(f, w, p, rule)


def is_trivial(h: Polynomial, system: RuleSystem) -> bool:
    return normal_form(h, system).is_zero()


def enumerate_intersection_ambiguities(f: RewriteRule, g: RewriteRule) -> list[tuple[Word, Word, Word]]:
    """All ``(w, a, b)`` with ``w = f.lhs b = a g.lhs`` and a proper overlap."""
    u, v = f.lhs, g.lhs
    found = []
    for t in range(min(len(u), len(v)) - 1, 0, -1):
        if u[len(u) - t:] == v[:t]:
            a, b = u[:len(u) - t], v[t:]
            found.append((u + b, a, b))
    return found


def enumerate_inclusion_ambiguities(f: RewriteRule, g: RewriteRule) -> list[tuple[Word, Word, Word]]:
    """All ``(w, a, b)`` with ``w = f.lhs = a g.lhs b``; empty when ``f is g``."""
    if f is g or f == g:
        return []
    u, v = f.lhs, g.lhs
    if not v:
        raise ValueError("rule with empty leading word")
    return [(u, u[:p], u[p + len(v):]) for p in find_occurrences(u, v)]


def composition(f: RewriteRule, g: RewriteRule, w: Word, a: Word, b: Word, kind: str) -> Polynomial:
    if kind == INTERSECTION:
        if not (f.lhs + b == w == a + g.lhs) or len(f.lhs) + len(g.lhs) <= len(w):
            raise ValueError("inconsistent intersection ambiguity")
        return f.polynomial.sandwich(EMPTY, b) - g.polynomial.sandwich(a, EMPTY)
    if kind == INCLUSION:
        if not (f.lhs == w == a + g.lhs + b):
            raise ValueError("inconsistent inclusion ambiguity")
        return f.polynomial - g.polynomial.sandwich(a, b)
    raise ValueError(f"unknown composition kind {kind!r}")


@dataclass(frozen=True)
class CompositionReport:
    kind: str
    f_index: int
    g_index: int
    ambiguity: Word
    raw: Polynomial
    remainder: Polynomial
    f: RewriteRule = field(repr=False)
    g: RewriteRule = field(repr=False)

    @property
    def trivial(self) -> bool:
        return self.remainder.is_zero()

    @property
    def sources(self) -> tuple[str, str]:
        return (self.f.source, self.g.source)


def _ambiguities(f: RewriteRule, g: RewriteRule) -> Iterator[tuple[str, Word, Word, Word]]:
    for w, a, b in enumerate_intersection_ambiguities(f, g):
        yield INTERSECTION, w, a, b
    for w, a, b in enumerate_inclusion_ambiguities(f, g):
        yield INCLUSION, w, a, b


def _pairs_with(new: RewriteRule, rules: Iterable[RewriteRule]) -> Iterator[tuple[RewriteRule, RewriteRule]]:
    yield new, new
    for old in rules:
        if old is not new:
            yield new, old
            yield old, new


def compositions(system: RuleSystem, max_degree: int | None = None,
                 kinds: tuple[str, ...] = (INTERSECTION, INCLUSION)) -> list[CompositionReport]:
    """Every composition among the rules of ``system``, reduced against ``system``.

    Reports are sorted by ``(|w|, w, kind, indices)``; ambiguities longer
    than ``max_degree`` are left out.
    """
    rules = system.rules
    found = []
    for i, f in enumerate(rules):
        for g in rules[i:]:
            pairs = [(f, g)] if f is g else [(f, g), (g, f)]
            for x, y in pairs:
                for kind, w, a, b in _ambiguities(x, y):
                    if kind in kinds and (max_degree is None or len(w) <= max_degree):
                        found.append((deglex_key(w), kind, system.seq(x), system.seq(y), a, b, x, y))
    found.sort(key=lambda t: t[:6])
    reports = []
    for (_, w), kind, i, j, a, b, x, y in found:
        raw = composition(x, y, w, a, b, kind)
        reports.append(CompositionReport(kind, i, j, w, raw, normal_form(raw, system), x, y))
    return reports


def is_groebner_shirshov(system: RuleSystem, max_degree: int | None = None) -> bool:
    return all(r.trivial for r in compositions(system, max_degree))


@dataclass
class CompletionOutcome:
    system: RuleSystem
    status: str
    max_degree: int
    pairs_processed: int = 0
    rules_added: int = 0
    pairs_skipped: int = 0
    nontrivial: list[CompositionReport] = field(default_factory=list)

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    @property
    def added_rules(self) -> list[RewriteRule]:
        return [r for r in self.system.rules if r.source.startswith("derived")]


def shirshov_complete(system: RuleSystem, max_degree: int,
                      step_limit: int = DEFAULT_STEP_LIMIT) -> CompletionOutcome:
    """Add nontrivial composition remainders until every ambiguity of degree
    at most ``max_degree`` reduces to zero.

    Ambiguities are processed in ascending ``(|w|, w, kind, indices)`` order.
    Pairs that become stale after later insertions are still processed.
    """
    if system.max_lhs_length() > max_degree:
        raise ValueError(
            f"max_degree {max_degree} below the longest leading word ({system.max_lhs_length()})")
    work = system.copy()
    heap: list = []

    def schedule(new: RewriteRule, existing: Iterable[RewriteRule]):
        for x, y in _pairs_with(new, existing):
            for kind, w, a, b in _ambiguities(x, y):
                heapq.heappush(heap, (len(w), w, kind, work.seq(x), work.seq(y), a, b))

    seen: list[RewriteRule] = []
    for r in work.rules:
        seen.append(r)
        schedule(r, seen)

    outcome = CompletionOutcome(work, "closed", max_degree)
    while heap:
        size, w, kind, i, j, a, b = heapq.heappop(heap)
        if size > max_degree:
            outcome.status = "truncated"
            outcome.pairs_skipped = len(heap) + 1
            break
        f, g = work.by_seq(i), work.by_seq(j)
        raw = composition(f, g, w, a, b, kind)
        rem = normal_form(raw, work, step_limit)
        outcome.pairs_processed += 1
        if rem.is_zero():
            continue
        outcome.nontrivial.append(CompositionReport(kind, i, j, w, raw, rem, f, g))
        new = work.add(RewriteRule.from_polynomial(rem, f"derived:{outcome.rules_added}"))
        if new is None:
            continue
        outcome.rules_added += 1
        log.debug("new rule %s from %s ambiguity %s", new, kind, format_word(w))
        schedule(new, work.rules)
    return outcome


def interreduce(system: RuleSystem, step_limit: int = DEFAULT_STEP_LIMIT) -> RuleSystem:
    """Reduced form of ``system``: no lhs contains another and every tail is
    in normal form.  Generates the same ideal."""
    rules = system.rules
    while True:
        current = RuleSystem(system.n, rules)
        order = current.rules
        victim = None
        for r in reversed(order):
            rank = current.seq(r)
            for q in order:
                if q is r or len(q.lhs) > len(r.lhs):
                    continue
                if q.lhs == r.lhs and current.seq(q) > rank:
                    continue
                if find_occurrences(r.lhs, q.lhs):
                    victim = r
                    break
            if victim is not None:
                break
        if victim is None:
            break
        rest = [q for q in order if q is not victim]
        reduced = normal_form(victim.polynomial, RuleSystem(system.n, rest), step_limit)
        if not reduced.is_zero():
            rest.append(RewriteRule.from_polynomial(reduced, victim.source))
        rules = rest
    current = RuleSystem(system.n, rules)
    final = [
        RewriteRule(r.lhs, normal_form(r.tail, current, step_limit), r.source)
        for r in current.rules
    ]
    return RuleSystem(system.n, final)


def irr_words(system: RuleSystem, max_len: int) -> Iterator[Word]:
    """Words of length at most ``max_len`` avoiding every lhs, in deg-lex order."""
    layer: list[Word] = [EMPTY]
    lhs_set = system.leading_words()
    lengths = sorted({len(u) for u in lhs_set})
    for size in range(max_len + 1):
        if not layer:
            return
        yield from layer
        if size == max_len:
            return
        nxt = []
        for u in layer:
            for g in range(1, system.n + 1):
                v = u + (g,)
                if not any(k <= len(v) and v[len(v) - k:] in lhs_set for k in lengths):
                    nxt.append(v)
        layer = nxt


@dataclass(frozen=True)
class ElwStep:
    word: Word
    position: int
    rule: RewriteRule


def derive_via_elw(rule: RewriteRule, others: RuleSystem, trace: list[ElwStep] | None = None,
                   full: bool = False, step_limit: int = DEFAULT_STEP_LIMIT) -> Polynomial:
    """Eliminate leading words of ``rule``'s polynomial by the other rules.

    Stops once the leading word is irreducible (or the polynomial vanishes).
    With ``full`` the remaining tail is brought to normal form as well.
    Each elimination is appended to ``trace`` when given.
    """
    if rule in others:
        others = others.without(rule)
    f = rule.polynomial
    steps = 0
    while not f.is_zero():
        top = f.leading_word
        redex = others.find_redex(top)
        if redex is None:
            break
        steps += 1
        if steps > step_limit:
            raise StepBudgetExceeded("step budget exceeded")
        pos, r = redex
        if trace is not None:
            trace.append(ElwStep(top, pos, r))
        f = reduce_at(f, top, pos, r)
    if full and not f.is_zero():
        f = normal_form(f, others, step_limit)
    return f
