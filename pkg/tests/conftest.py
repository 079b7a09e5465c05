import random
import sys

import pytest

from gscoxeter.coxeter import CoxeterMatrix, counterexample_matrix, dihedral, type_a

@pytest.fixture
def ce_matrix():
    return counterexample_matrix()


@pytest.fixture
def a2():
    return type_a(2)


@pytest.fixture
def a3():
    return type_a(3)


@pytest.fixture
def rng():
    return random.Random(20240917)


def random_matrix(rng: random.Random, n: int, choices=(2, 3, 4, 5, 6, None)) -> CoxeterMatrix:
    orders = {(s, t): rng.choice(choices) for s in range(1, n + 1) for t in range(s + 1, n + 1)}
    return CoxeterMatrix.from_orders(n, orders)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, detail = results[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
