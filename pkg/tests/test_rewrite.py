import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gscoxeter.coxeter import coxeter_system, counterexample_matrix, dihedral, type_a
from gscoxeter.freealg import EMPTY, Polynomial, deglex_key, parse_word as W
from gscoxeter.rewrite import (
    INCLUSION,
    INTERSECTION,
    ElwStep,
    RewriteRule,
    RuleNotApplicable,
    RuleSystem,
    StepBudgetExceeded,
    composition,
    compositions,
    derive_via_elw,
    elw_step,
    enumerate_inclusion_ambiguities,
    enumerate_intersection_ambiguities,
    interreduce,
    irr_words,
    is_groebner_shirshov,
    is_trivial,
    normal_form,
    normal_form_random,
    reduce_at,
    shirshov_complete,
)


def rule(lhs, rhs="e", source="input"):
    return RewriteRule(W(lhs), Polynomial.monomial(W(rhs)), source)


def a2_system():
    return RuleSystem(2, [rule("s1 s1"), rule("s2 s2"), rule("s2 s1 s2", "s1 s2 s1")])


def poly(*terms):
    return Polynomial([(W(w), c) for w, c in terms])


class TestRules:
    def test_tail_must_be_smaller(self):
        with pytest.raises(ValueError):
            RewriteRule(W("s1 s2"), Polynomial.monomial(W("s2 s1")))

    def test_from_words_orients(self):
        r = RewriteRule.from_words(W("s1 s3 s1"), W("s3 s1 s3"))
        assert r.lhs == W("s3 s1 s3")
        assert str(r) == "s3 s1 s3 = s1 s3 s1"

    def test_from_polynomial_makes_monic(self):
        r = RewriteRule.from_polynomial(poly(("s2 s1", -3), ("s1", 1)))
        assert r.lhs == W("s2 s1")
        assert r.tail == poly(("s1", Fraction(1, 3)))
        assert r.polynomial.is_monic()

    def test_system_order_and_duplicates(self):
        s = RuleSystem(3, [rule("s3 s1 s3", "s1 s3 s1"), rule("s2 s2"), rule("s1 s1")])
        assert [r.lhs for r in s] == [W("s1 s1"), W("s2 s2"), W("s3 s1 s3")]
        assert s.add(rule("s2 s2")) is None
        assert len(s) == 3

    def test_generator_range_checked(self):
        with pytest.raises(ValueError):
            RuleSystem(2, [rule("s3 s3")])


class TestElw:
    def test_single_substitution(self):
        f = poly(("s1 s1 s2", 1), ("s3", -1))
        assert elw_step(f, rule("s1 s1")) == poly(("s2", 1), ("s3", -1))

    def test_self_elimination(self):
        r = rule("s2 s1 s2", "s1 s2 s1")
        assert elw_step(r.polynomial, r).is_zero()

    def test_involution_against_braid_tail(self):
        f = poly(("s4 s4 s3 s4 s3 s4", 1), ("s3 s4 s3 s4", -1))
        assert elw_step(f, rule("s4 s4")).is_zero()

    def test_not_applicable(self):
        with pytest.raises(RuleNotApplicable, match="rule not applicable"):
            elw_step(poly(("s1 s2", 1)), rule("s2 s2"))

    def test_reduce_at_checks_position(self):
        with pytest.raises(RuleNotApplicable):
            reduce_at(poly(("s1 s1 s2", 1)), W("s1 s1 s2"), 1, rule("s1 s1"))


class TestNormalForm:
    def test_involution(self):
        assert normal_form(poly(("s1 s1", 1)), RuleSystem(1, [rule("s1 s1")])) == poly(("e", 1))

    def test_a2_long_word(self):
        system = a2_system()
        nf = normal_form(poly(("s2 s1 s2 s1 s2", 1)), system)
        assert nf == poly(("s1", 1))
        # Independent check: both words give the same permutation of S3.
        gens = oracles.adjacent_transpositions(2)
        assert oracles.evaluate(W("s2 s1 s2 s1 s2"), gens) == oracles.evaluate(W("s1"), gens)

    def test_irreducible_is_fixed(self):
        assert normal_form(poly(("s1 s2", 1)), a2_system()) == poly(("s1 s2", 1))

    def test_step_budget(self):
        system = RuleSystem(1, [rule("s1 s1")])
        with pytest.raises(StepBudgetExceeded, match="step budget exceeded"):
            normal_form(poly(("s1" * 40, 1)), system, step_limit=3)

    @given(st.lists(st.integers(1, 2), max_size=12))
    def test_strict_descent(self, word):
        system = a2_system()
        f = Polynomial.monomial(tuple(word))
        while (redex := system.find_redex(f.leading_word)) is not None:
            p, r = redex
            g = reduce_at(f, f.leading_word, p, r)
            if g.is_zero():
                break
            assert deglex_key(g.leading_word) < deglex_key(f.leading_word)
            f = g

    @given(st.lists(st.integers(1, 2), max_size=12))
    def test_normal_form_matches_group(self, word):
        gens = oracles.adjacent_transpositions(2)
        nf = normal_form(Polynomial.monomial(tuple(word)), a2_system())
        (w, c), = nf
        assert c == 1
        assert oracles.evaluate(w, gens) == oracles.evaluate(tuple(word), gens)


class TestAmbiguities:
    def test_braid_self_overlap(self):
        r = rule("s2 s1 s2", "s1 s2 s1")
        assert [w for w, _, _ in enumerate_intersection_ambiguities(r, r)] == [W("s2 s1 s2 s1 s2")]

    def test_involution_self_overlap(self):
        r = rule("s1 s1")
        assert enumerate_intersection_ambiguities(r, r) == [(W("s1 s1 s1"), W("s1"), W("s1"))]

    def test_no_overlap(self):
        assert enumerate_intersection_ambiguities(rule("s1 s2"), rule("s3 s4")) == []

    def test_inclusion_in_chain_relation(self):
        f = rule("s4 s3 s4 s3 s1 s4", "s3 s4 s3 s4 s3 s1")
        g = rule("s4 s1", "s1 s4")
        # Written as (prefix, suffix) around the inner leading word.
        found = [(a, b) for _, a, b in enumerate_inclusion_ambiguities(f, rule("s1 s4"))]
        assert found == [(W("s4 s3 s4 s3"), EMPTY)]
        assert enumerate_inclusion_ambiguities(f, g) == []

    def test_inclusion_needs_shorter_inner_word(self):
        assert enumerate_inclusion_ambiguities(rule("s1 s2"), rule("s1 s2 s1", "e")) == []

    def test_inclusion_positions(self):
        found = enumerate_inclusion_ambiguities(rule("s1 s1 s1"), rule("s1 s1"))
        assert [(a, b) for _, a, b in found] == [(EMPTY, W("s1")), (W("s1"), EMPTY)]

    def test_no_self_inclusion(self):
        r = rule("s1 s1")
        assert enumerate_inclusion_ambiguities(r, r) == []


class TestComposition:
    def test_braid_self_composition(self):
        r = rule("s2 s1 s2", "s1 s2 s1")
        h = composition(r, r, W("s2 s1 s2 s1 s2"), W("s2 s1"), W("s1 s2"), INTERSECTION)
        assert h == poly(("s1 s2 s1 s1 s2", -1), ("s2 s1 s1 s2 s1", 1))
        assert is_trivial(h, a2_system())

    def test_involution_self_composition(self):
        r = rule("s1 s1")
        assert composition(r, r, W("s1 s1 s1"), W("s1"), W("s1"), INTERSECTION).is_zero()

    def test_inconsistent_ambiguity(self):
        r = rule("s1 s1")
        with pytest.raises(ValueError):
            composition(r, r, W("s1 s1 s1 s1"), W("s1 s1"), W("s1 s1"), INTERSECTION)
        with pytest.raises(ValueError):
            composition(r, rule("s2 s2"), W("s1 s1"), EMPTY, EMPTY, INCLUSION)

    def test_chain_braid_inclusion_is_nontrivial(self):
        system = coxeter_system(counterexample_matrix(), 24)
        reports = [r for r in compositions(system) if r.kind == INCLUSION and not r.trivial]
        assert reports
        for rep in reports:
            assert not rep.remainder.is_zero()
            assert rep.ambiguity == rep.f.lhs

    def test_trivial_cases(self):
        assert is_trivial(Polynomial.zero(), a2_system())
        assert not is_trivial(poly(("s1", 1)), a2_system())

    def test_report_invariants(self):
        system = coxeter_system(counterexample_matrix(), 24)
        for rep in compositions(system):
            f, g = rep.f.lhs, rep.g.lhs
            if rep.kind == INTERSECTION:
                assert rep.ambiguity[:len(f)] == f and rep.ambiguity[-len(g):] == g
                assert len(f) + len(g) > len(rep.ambiguity)
            else:
                assert rep.ambiguity == f and any(
                    f[p:p + len(g)] == g for p in range(len(f) - len(g) + 1))
            assert rep.trivial == rep.remainder.is_zero()


class TestCompletion:
    def test_a2_closed_without_new_rules(self):
        outcome = shirshov_complete(a2_system(), 10)
        assert outcome.closed and outcome.rules_added == 0

    def test_empty_system(self):
        outcome = shirshov_complete(RuleSystem(2), 5)
        assert outcome.closed and len(outcome.system) == 0

    def test_cap_below_rules(self):
        with pytest.raises(ValueError):
            shirshov_complete(a2_system(), 2)

    def test_input_not_mutated(self):
        system = coxeter_system(counterexample_matrix(), 24)
        before = len(system)
        outcome = shirshov_complete(system, 24)
        assert len(system) == before
        assert len(outcome.system) == before + outcome.rules_added

    def test_truncation_reported(self):
        system = coxeter_system(counterexample_matrix(), 12)
        outcome = shirshov_complete(system, 12)
        assert outcome.status == "truncated"

    def test_closed_system_is_groebner_shirshov(self):
        outcome = shirshov_complete(coxeter_system(counterexample_matrix(), 24), 24)
        assert outcome.closed
        assert is_groebner_shirshov(outcome.system, 24)

    def test_ideal_preserved(self):
        original = coxeter_system(counterexample_matrix(), 24)
        final = shirshov_complete(original, 24).system
        for r in list(original) + list(final):
            assert normal_form(r.polynomial, final).is_zero()

    def test_added_rules_lie_in_original_ideal(self):
        original = coxeter_system(counterexample_matrix(), 24)
        outcome = shirshov_complete(original, 24)
        reduced = interreduce(outcome.system)
        for r in outcome.added_rules:
            assert normal_form(r.polynomial, reduced).is_zero()

    def test_deterministic(self):
        runs = [shirshov_complete(coxeter_system(counterexample_matrix(), 24), 24) for _ in range(2)]
        assert [str(r) for r in runs[0].system] == [str(r) for r in runs[1].system]

    def test_two_sided_multiples_vanish(self):
        rng = random.Random(5)
        system = shirshov_complete(coxeter_system(type_a(3), 12), 12).system
        rules = system.rules
        for _ in range(200):
            a = tuple(rng.randint(1, 3) for _ in range(rng.randint(0, 4)))
            b = tuple(rng.randint(1, 3) for _ in range(rng.randint(0, 4)))
            s = rng.choice(rules)
            assert normal_form(s.polynomial.sandwich(a, b), system).is_zero()


class TestInterreduce:
    def test_redundant_rule_dropped(self):
        s = RuleSystem(2, [rule("s1 s1"), rule("s1 s1 s2", "s2")])
        assert [str(r) for r in interreduce(s)] == ["s1 s1 = e"]

    def test_a2_unchanged(self):
        assert [str(r) for r in interreduce(a2_system())] == [str(r) for r in a2_system()]

    def test_counterexample_leading_words(self):
        outcome = shirshov_complete(coxeter_system(counterexample_matrix(), 24), 24)
        expected = {W(f"s{i} s{i}") for i in range(1, 5)} | {
            W("s4 s1"), W("s3 s1 s3"), W("s4 s3 s4 s3 s4"),
            W("s4 s3 s4 s3 s1 s4"), W("s4 s3 s1 s4 s3 s1 s4 s3 s4 s3"),
            W("s4 s3 s1 s4 s3 s1 s4 s3 s1 s4 s3 s1")}
        assert interreduce(outcome.system).leading_words() == expected

    def test_no_inclusions_and_reduced_tails(self):
        outcome = shirshov_complete(coxeter_system(counterexample_matrix(), 24), 24)
        reduced = interreduce(outcome.system)
        words = reduced.leading_words()
        for u in words:
            for v in words:
                if u != v:
                    assert not any(u[p:p + len(v)] == v for p in range(len(u) - len(v) + 1))
        for r in reduced:
            for w, _ in r.tail:
                assert reduced.is_irreducible(w)

    @pytest.mark.parametrize("matrix", [counterexample_matrix(), type_a(3), dihedral(5)],
                             ids=["rank4", "A3", "I2(5)"])
    def test_same_ideal(self, matrix):
        completed = shirshov_complete(coxeter_system(matrix, 16), 16).system
        reduced = interreduce(completed)
        for r in completed:
            assert normal_form(r.polynomial, reduced).is_zero()
        for r in reduced:
            assert normal_form(r.polynomial, completed).is_zero()


class TestIrr:
    def test_a2(self):
        got = list(irr_words(a2_system(), 10))
        assert got == [EMPTY, W("s1"), W("s2"), W("s1 s2"), W("s2 s1"), W("s1 s2 s1")]
        gens = oracles.adjacent_transpositions(2)
        assert oracles.closure_order(gens) == len(got)

    def test_free_monoid(self):
        assert len(list(irr_words(RuleSystem(2), 2))) == 7

    def test_dihedral_five(self):
        system = shirshov_complete(coxeter_system(dihedral(5), 16), 16).system
        assert len(list(irr_words(system, 12))) == oracles.closure_order(oracles.dihedral_reflections(5))

    def test_deglex_order(self):
        got = list(irr_words(coxeter_system(counterexample_matrix(), 12), 5))
        assert got == sorted(got, key=deglex_key)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple),
                    min_size=1, max_size=4), st.integers(0, 5))
    def test_brute_force_counts(self, lhs_words, length):
        system = RuleSystem(3, [RewriteRule(w, Polynomial.zero()) for w in set(lhs_words)])
        ours = [w for w in irr_words(system, length) if len(w) == length]
        assert ours == oracles.words_avoiding(3, length, lhs_words)


class TestDerive:
    def test_reaches_reduced_chain_relation(self):
        system = coxeter_system(counterexample_matrix(), 24)
        second = [r for r in system if r.source == "chain"][1]
        trace: list[ElwStep] = []
        f = derive_via_elw(second, system.without(second), trace)
        assert f.leading_word == W("s4 s3 s1 s4 s3 s1 s4 s3 s4 s3")
        used = {str(step.rule) for step in trace}
        assert used == {"s4 s1 = s1 s4", "s3 s1 s3 = s1 s3 s1"}

    def test_untouched(self):
        r = rule("s2 s1", "s1 s2")
        assert derive_via_elw(r, RuleSystem(2, [rule("s1 s1")])) == r.polynomial

    def test_redundant(self):
        assert derive_via_elw(rule("s1 s1 s2", "s2"), RuleSystem(2, [rule("s1 s1")])).is_zero()

    def test_full_reduces_tail(self):
        r = RewriteRule(W("s2 s2 s2"), Polynomial.monomial(W("s1 s1")))
        others = RuleSystem(2, [rule("s1 s1"), rule("s2 s2")])
        assert derive_via_elw(r, others, full=True) == poly(("s2", 1), ("e", -1))


class TestConfluence:
    @pytest.mark.parametrize("matrix", [type_a(3), dihedral(6), counterexample_matrix()],
                             ids=["A3", "I2(6)", "rank4"])
    def test_random_strategies_agree(self, matrix):
        outcome = shirshov_complete(coxeter_system(matrix, 24), 24)
        assert outcome.closed
        rng = random.Random(11)
        for _ in range(150):
            word = tuple(rng.randint(1, matrix.n) for _ in range(rng.randint(0, 12)))
            f = Polynomial.monomial(word)
            reference = normal_form(f, outcome.system)
            for _ in range(4):
                assert normal_form_random(f, outcome.system, rng) == reference

    def test_open_system_can_disagree(self):
        # In the raw rank-4 presentation, rewriting an ambiguity first by f or
        # first by g leads to different irreducible results.
        system = coxeter_system(counterexample_matrix(), 24)
        rep = next(r for r in compositions(system) if not r.trivial)
        via_f = rep.f.tail.sandwich(EMPTY, rep.ambiguity[len(rep.f.lhs):])
        start = next(p for p in range(len(rep.ambiguity))
                     if rep.ambiguity[p:p + len(rep.g.lhs)] == rep.g.lhs)
        via_g = rep.g.tail.sandwich(rep.ambiguity[:start], rep.ambiguity[start + len(rep.g.lhs):])
        assert normal_form(via_f, system) != normal_form(via_g, system)
