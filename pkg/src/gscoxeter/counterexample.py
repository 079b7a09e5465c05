"""
End-to-end check of the rank-4 matrix (m13 = 3, m14 = 2, m34 = 5) whose braid,
involution and chain relations are *not* a Gröbner-Shirshov basis, while a
basis of the same size is reached by eliminating leading words with the
commutation ``s4 s1 = s1 s4`` and the braid ``s3 s1 s3 = s1 s3 s1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import (
    BRAID,
    CHAIN,
    INVOLUTION,
    CoxeterMatrix,
    alternating_word as alt,
    coxeter_system,
    counterexample_matrix,
)
from .freealg import Polynomial, Word, format_word
from .rewrite import (
    RewriteRule,
    RuleSystem,
    compositions,
    derive_via_elw,
    interreduce,
    is_groebner_shirshov,
    shirshov_complete,
)

DEFAULT_CAP = 24


def _m(M: CoxeterMatrix, s: int, t: int, drop: int = 0) -> Word:
    return alt(s, t, M.order(s, t) - drop)


def expected_braid(M: CoxeterMatrix) -> list[tuple[Word, Word]]:
    return [
        ((4, 1), (1, 4)),
        ((3, 1, 3), (1, 3, 1)),
        (_m(M, 4, 3), _m(M, 3, 4)),
    ]


def expected_chain(M: CoxeterMatrix) -> list[tuple[Word, Word]]:
    head = _m(M, 4, 3, 1)
    rhs_head = _m(M, 3, 4)
    return [
        (head + _m(M, 1, 4), rhs_head + _m(M, 1, 4, 1)),
        (head + _m(M, 1, 4, 1) + _m(M, 3, 4),
         rhs_head + _m(M, 1, 4, 1) + _m(M, 3, 4, 1)),
        (head + _m(M, 1, 4, 1) + _m(M, 3, 4, 1) + _m(M, 1, 3),
         rhs_head + _m(M, 1, 4, 1) + _m(M, 3, 4, 1) + _m(M, 1, 3, 1)),
    ]


def expected_reduced_chain(M: CoxeterMatrix) -> list[tuple[Word, Word]]:
    """The chain relations after leading-word elimination; right sides unchanged."""
    mid = (1, 4, 3, 1)
    return [
        expected_chain(M)[0],
        (_m(M, 4, 3, 3) + mid + _m(M, 4, 3, 1), expected_chain(M)[1][1]),
        (_m(M, 4, 3, 3) + mid + _m(M, 4, 3, 3) + (1, 4) + _m(M, 3, 1, 1),
         expected_chain(M)[2][1]),
    ]


def expected_basis(M: CoxeterMatrix) -> RuleSystem:
    rules = [RewriteRule((s, s), Polynomial.monomial(()), INVOLUTION) for s in range(1, M.n + 1)]
    rules += [RewriteRule.from_words(a, b, BRAID) for a, b in expected_braid(M)]
    rules += [RewriteRule.from_words(a, b, CHAIN) for a, b in expected_reduced_chain(M)]
    return RuleSystem(M.n, rules)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def _pairs(rules: list[RewriteRule]) -> list[tuple[Word, Word]]:
    out = []
    for r in rules:
        (w, _), = r.tail
        out.append((r.lhs, w))
    return out


def verify_counterexample(cap: int = DEFAULT_CAP) -> list[Check]:
    M = counterexample_matrix()
    system = coxeter_system(M, cap)
    checks = []

    braid = [r for r in system if r.source == BRAID]
    chain = [r for r in system if r.source == CHAIN]
    got_braid, got_chain = _pairs(braid), _pairs(chain)
    checks.append(Check("braid relations", got_braid == expected_braid(M),
                        f"{len(got_braid)} generated"))
    checks.append(Check("chain relations", got_chain == expected_chain(M),
                        f"{len(got_chain)} generated up to degree {cap}"))

    nontrivial = [r for r in compositions(system, cap) if not r.trivial]
    detail = (f"{len(nontrivial)} nontrivial, first at {format_word(nontrivial[0].ambiguity)}"
              if nontrivial else "all compositions trivial")
    checks.append(Check("nontrivial composition", bool(nontrivial), detail))

    if system.max_lhs_length() > cap:
        checks.append(Check("completion closed", False, f"cap {cap} below longest relation"))
        return checks
    outcome = shirshov_complete(system, cap)
    checks.append(Check("completion closed", outcome.closed,
                        f"{outcome.status} at degree {cap}, {outcome.rules_added} rules added"))

    reduced = interreduce(outcome.system)
    expected = expected_basis(M)
    got_words = reduced.leading_words()
    want_words = expected.leading_words()
    missing = sorted(want_words - got_words)
    extra = sorted(got_words - want_words)
    detail = f"{len(reduced)} rules"
    if missing or extra:
        detail += (f"; missing {[format_word(w) for w in missing]}"
                   f", unexpected {[format_word(w) for w in extra]}")
    checks.append(Check("reduced leading words", got_words == want_words and outcome.closed, detail))

    derived_ok = True
    notes = []
    for lhs, rhs in expected_reduced_chain(M):
        target = RewriteRule(lhs, Polynomial.monomial(rhs), CHAIN).polynomial
        hit = None
        for s in chain:
            if len(s.lhs) != len(lhs):
                continue
            if s.polynomial == target or derive_via_elw(s, system.without(s)) == target:
                hit = s
                break
        if hit is None:
            derived_ok = False
            notes.append(f"{format_word(lhs)} not reached")
    checks.append(Check("leading-word elimination reaches reduced chains", derived_ok,
                        "; ".join(notes) or "all 3 reached"))

    checks.append(Check("target set is a Groebner-Shirshov basis",
                        is_groebner_shirshov(expected),
                        f"{len(expected)} relations"))
    return checks
