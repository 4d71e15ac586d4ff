import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lowdeg.poly import Polynomial, parse_polynomial, random_polynomial

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES: list = []


def poly(header: str, body: str) -> Polynomial:
    return parse_polynomial(f"{header}\n{body}\n")


def points(p: int, n: int):
    return itertools.product(range(p), repeat=n)


def sparse_random(n: int, d: int, p: int, seed: int, density: float = 0.3) -> Polynomial:
    """Random polynomial keeping each term of a dense one with the given probability."""
    f = random_polynomial(n, d, p, seed)
    rng = np.random.default_rng(seed + 7919)
    keep = {m: c for m, c in f.terms.items() if rng.random() < density}
    return Polynomial(p, n, keep)


def random_vector(rng, p: int, n: int) -> tuple:
    return tuple(int(a) for a in rng.integers(0, p, n))


def random_independent(rng, p: int, n: int, k: int) -> list:
    from lowdeg.linalg import rank

    while True:
        rows = [random_vector(rng, p, n) for _ in range(k)]
        if rank(rows, p, n) == k:
            return rows


@pytest.fixture
def record_acceptance():
    """Collects one status line per acceptance criterion for the terminal summary."""

    def record(label: str, passed: bool, detail: str):
        line = f"{label}: {'PASS' if passed else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
