import operator

import pytest

from ramsey_algebra.algebra import FiniteAlgebra, Operation, from_function
from ramsey_algebra.terms import Interpretation, Signature

ACCEPTANCE_LINES: list[str] = []


def zmod_ring(k):
    return FiniteAlgebra(
        k,
        (
            from_function("add", k, 2, lambda a, b: (a + b) % k),
            from_function("mul", k, 2, lambda a, b: (a * b) % k),
        ),
    )


def zmod_add(k):
    return FiniteAlgebra(k, (from_function("add", k, 2, lambda a, b: (a + b) % k),))


def unary(n, *tables):
    return FiniteAlgebra(n, tuple(Operation(f"f{i}" if i else "f", 1, t) for i, t in enumerate(tables)))


NOT = unary(2, (1, 0))
ADD_SIG = Signature.of(("add", 2))
INT_ADD = Interpretation(ADD_SIG, (operator.add,))
EMPTY = Interpretation(Signature(()), ())


@pytest.fixture
def z4():
    return zmod_add(4)


@pytest.fixture
def z4_ring():
    return zmod_ring(4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
