"""Command line front end.

Exit codes: 0 success, 1 usage or parse error, 2 truncated completion (or an
answer only valid up to the degree cap), 3 obstruction conditions detected,
4 a verification sub-check failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .coxeter import (
    CoxeterMatrix,
    MatrixError,
    braid_relations,
    chain_relations,
    classify_family,
    coxeter_system,
    detect_conditions,
    family_is_infinite,
    involution_relations,
)
from .counterexample import DEFAULT_CAP, verify_counterexample
from .freealg import Polynomial, format_word, parse_word
from .rewrite import interreduce, irr_words, normal_form, shirshov_complete

EXIT_OK, EXIT_USAGE, EXIT_TRUNCATED, EXIT_CONDITIONS, EXIT_FAILED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(path: str) -> CoxeterMatrix:
    try:
        return CoxeterMatrix.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read matrix file: {exc}") from None
    except MatrixError as exc:
        raise UsageError(f"invalid matrix: {exc}") from None


def _word(text: str, n: int):
    try:
        return parse_word(text, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _complete(M: CoxeterMatrix, maxdeg: int):
    # The cap is raised to the longest braid relation so the presentation is never cut.
    if maxdeg < 2:
        raise UsageError("--maxdeg must be at least 2")
    system = coxeter_system(M, maxdeg)
    return shirshov_complete(system, max(maxdeg, system.max_lhs_length()))


def cmd_relations(args, out):
    M = _load(args.matrix)
    families = {
        "involutions": involution_relations(M),
        "braid": braid_relations(M),
        "chain": chain_relations(M, args.maxdeg) if args.maxdeg >= 2 else [],
    }
    infinite = family_is_infinite(M)
    if args.json:
        data = {name: [str(r) for r in rules] for name, rules in families.items()}
        data.update(max_degree=args.maxdeg, chain_family_infinite=infinite)
        out.append(data)
        return EXIT_OK
    for name, rules in families.items():
        out.append(f"{name} ({len(rules)}):")
        out.extend(str(r) for r in rules)
    if infinite:
        out.append(f"note: the chain family is infinite; listed up to degree {args.maxdeg}")
    return EXIT_OK


def cmd_complete(args, out):
    M = _load(args.matrix)
    outcome = _complete(M, args.maxdeg)
    reduced = interreduce(outcome.system)
    code = EXIT_OK if outcome.closed else EXIT_TRUNCATED
    if args.json:
        out.append({
            "status": outcome.status,
            "max_degree": outcome.max_degree,
            "pairs_processed": outcome.pairs_processed,
            "rules_added": outcome.rules_added,
            "rules": [str(r) for r in reduced],
        })
        return code
    out.append(f"status: {outcome.status}")
    out.append(f"max degree: {outcome.max_degree}")
    out.append(f"pairs processed: {outcome.pairs_processed}")
    out.append(f"rules added: {outcome.rules_added}")
    out.append(f"rules ({len(reduced)}):")
    out.extend(str(r) for r in reduced)
    return code


def cmd_nf(args, out):
    M = _load(args.matrix)
    word = _word(args.word, M.n)
    outcome = _complete(M, args.maxdeg)
    nf = normal_form(Polynomial.monomial(word), outcome.system)
    (w, _), = nf
    code = EXIT_OK if outcome.closed else EXIT_TRUNCATED
    if args.json:
        out.append({"word": format_word(word), "normal_form": format_word(w),
                    "status": outcome.status, "max_degree": outcome.max_degree})
        return code
    suffix = "" if outcome.closed else f" (up to degree {outcome.max_degree})"
    out.append(f"{format_word(w)}{suffix}")
    return code


def cmd_eq(args, out):
    M = _load(args.matrix)
    u, v = _word(args.word1, M.n), _word(args.word2, M.n)
    outcome = _complete(M, args.maxdeg)
    nu = normal_form(Polynomial.monomial(u), outcome.system)
    nv = normal_form(Polynomial.monomial(v), outcome.system)
    if nu == nv:
        verdict = "equal"
    elif outcome.closed:
        verdict = "unequal"
    else:
        verdict = "unknown"
    code = EXIT_TRUNCATED if verdict == "unknown" else EXIT_OK
    if args.json:
        out.append({"verdict": verdict, "status": outcome.status, "max_degree": outcome.max_degree,
                    "normal_forms": [format_word(nu.leading_word), format_word(nv.leading_word)]})
        return code
    out.append(verdict if verdict != "unknown" else f"unknown (completion truncated at degree {outcome.max_degree})")
    return code


def cmd_irr(args, out):
    M = _load(args.matrix)
    outcome = _complete(M, args.maxdeg)
    words = list(irr_words(outcome.system, args.maxlen))
    code = EXIT_OK if outcome.closed else EXIT_TRUNCATED
    if args.json:
        out.append({"status": outcome.status, "max_degree": outcome.max_degree, "max_len": args.maxlen,
                    "count": len(words), "words": [format_word(w) for w in words]})
        return code
    suffix = "" if outcome.closed else f" (up to degree {outcome.max_degree})"
    out.append(f"irreducible words of length <= {args.maxlen}: {len(words)}{suffix}")
    out.extend(format_word(w) for w in words)
    return code


def cmd_check(args, out):
    M = _load(args.matrix)
    witnesses = detect_conditions(M)
    families = sorted(classify_family(M))
    guaranteed = not witnesses
    code = EXIT_OK if guaranteed else EXIT_CONDITIONS
    if args.json:
        out.append({
            "matrix": M.to_text(),
            "conditions": [{
                "kind": w.kind,
                "chain": [list(b) for b in w.chain.blocks],
                "i": w.i,
                "l": w.l,
                "subword": format_word(w.subword),
                "degree": w.chain.degree(M),
            } for w in witnesses],
            "guaranteed": guaranteed,
            "families": families,
        })
        return code
    out.append("matrix:")
    out.extend(M.to_text().splitlines())
    out.append("conditions: " + (", ".join(w.kind for w in witnesses) or "none"))
    out.extend(w.describe(M) for w in witnesses)
    out.append(f"guaranteed: {'yes' if guaranteed else 'no'}")
    out.append("families: " + (", ".join(families) or "none"))
    return code


def cmd_verify(args, out):
    cap = args.maxdeg if args.maxdeg is not None else DEFAULT_CAP
    checks = verify_counterexample(cap)
    passed = all(c.passed for c in checks)
    truncated = any(c.name == "completion closed" and not c.passed for c in checks)
    code = EXIT_OK if passed else (EXIT_TRUNCATED if truncated else EXIT_FAILED)
    if args.json:
        out.append({"max_degree": cap, "passed": passed,
                    "checks": {c.name: {"passed": c.passed, "detail": c.detail} for c in checks}})
        return code
    for c in checks:
        out.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
    out.append("all checks passed" if passed else "verification failed")
    return code


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    deg = _Parser(add_help=False)
    deg.add_argument("--maxdeg", type=int, default=16, help="completion degree cap (default 16)")

    parser = _Parser(prog="gscoxeter", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("relations", parents=[common, deg], help="print the three relation families")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("check", parents=[common], help="detect obstruction conditions")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("complete", parents=[common, deg], help="run degree-capped completion")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("nf", parents=[common, deg], help="normal form of a word")
    p.add_argument("matrix")
    p.add_argument("word")
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("eq", parents=[common, deg], help="decide whether two words are equal")
    p.add_argument("matrix")
    p.add_argument("word1")
    p.add_argument("word2")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("irr", parents=[common, deg], help="list irreducible words")
    p.add_argument("matrix")
    p.add_argument("--maxlen", type=int, default=10)
    p.set_defaults(func=cmd_irr)

    p = sub.add_parser("verify-ex31", parents=[common],
                       help="end-to-end check of the built-in rank-4 counterexample")
    p.add_argument("--maxdeg", type=int, default=None,
                   help=f"completion degree cap (default {DEFAULT_CAP})")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out: list = []
        code = args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    for item in out:
        if isinstance(item, dict):
            print(json.dumps(item, indent=2, sort_keys=True), file=stdout)
        else:
            print(item, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
