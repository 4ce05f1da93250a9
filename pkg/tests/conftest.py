import itertools
import random

import pytest

ACCEPTANCE_LINES: list[str] = []


def brute_force_zero_sum(group, seq, L):
    """Independent oracle: try every L-subset of the expanded term list."""
    terms = [g.coords for g in seq]
    d = group.invariant_factors
    for combo in itertools.combinations(range(len(terms)), L):
        if all(sum(terms[i][j] for i in combo) % d[j] == 0 for j in range(len(d))):
            return True
    return False


def brute_force_zero_sum_free(group, seq):
    return not any(brute_force_zero_sum(group, seq, L) for L in range(1, len(seq) + 1))


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
