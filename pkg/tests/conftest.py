from pathlib import Path

import numpy as np
import pytest

from siegelfc.fourier import random_expansion, read_fourier
from siegelfc.golden import load_tables

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

# (p, N) pairs of the randomized corpus; each gets two batches of BATCH
# expansions, one of odd and one of even weight
CORPUS_LEVELS = [(2, 4), (2, 8), (2, 16), (3, 9)]
CORPUS_WEIGHTS = (7, 10)
BATCH = 50
CORPUS_BOUND = {2: 1024, 3: 2000}


@pytest.fixture(scope="session")
def tables():
    return load_tables(FIXTURES / "tables.json")


@pytest.fixture(scope="session")
def f7():
    return read_fourier(FIXTURES / "F-7-16-2.csv")


@pytest.fixture(scope="session")
def f10():
    return read_fourier(FIXTURES / "F-10-16-2.csv")


def batch_expansion(p, N, k, seed, bound=None, size=BATCH):
    """One expansion whose values are integer vectors: ``size`` random forms at once."""
    rng = np.random.default_rng(seed)

    def value():
        return rng.integers(-50, 50, size=size).astype(object)
    return random_expansion(N, k, bound or CORPUS_BOUND[p], value)


@pytest.fixture(scope="session")
def corpus():
    """{(p, N): [batch expansions]} totalling 2 * BATCH forms per level."""
    out = {}
    for i, (p, N) in enumerate(CORPUS_LEVELS):
        out[(p, N)] = [batch_expansion(p, N, k, seed=100 * i + k) for k in CORPUS_WEIGHTS]
    return out


# criterion number -> [(check label, passed, detail)], filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture
def criterion():
    def record(number, label, passed, detail=""):
        ACCEPTANCE.setdefault(number, []).append((label, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        verdict = "PASS" if all(ok for _, ok, _ in checks) else "FAIL"
        parts = []
        for label, ok, detail in checks:
            text = label if ok else f"{label} FAILED"
            parts.append(f"{text} ({detail})" if detail else text)
        terminalreporter.write_line(f"criterion {number}: {verdict} | " + "; ".join(parts))
