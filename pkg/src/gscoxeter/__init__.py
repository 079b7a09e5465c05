"""Gröbner-Shirshov bases for Coxeter group presentations."""

from .coxeter import (
    Chain,
    ConditionWitness,
    CoxeterMatrix,
    classify_family,
    coxeter_system,
    detect_conditions,
    enumerate_chains,
    gs_guaranteed,
    relation_from_chain,
)
from .freealg import Polynomial, Word, compare_deglex, format_word, parse_word
from .rewrite import (
    CompletionOutcome,
    RewriteRule,
    RuleSystem,
    interreduce,
    irr_words,
    normal_form,
    shirshov_complete,
)

__all__ = [
    "Chain",
    "CompletionOutcome",
    "ConditionWitness",
    "CoxeterMatrix",
    "Polynomial",
    "RewriteRule",
    "RuleSystem",
    "Word",
    "classify_family",
    "compare_deglex",
    "coxeter_system",
    "detect_conditions",
    "enumerate_chains",
    "format_word",
    "gs_guaranteed",
    "interreduce",
    "irr_words",
    "normal_form",
    "parse_word",
    "relation_from_chain",
    "shirshov_complete",
]
