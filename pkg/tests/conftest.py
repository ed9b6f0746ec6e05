import numpy as np
import pytest

from frustration import gen
from frustration.sgraph import SignedGraph


def k3_one_negative() -> SignedGraph:
    return SignedGraph(3, ((0, 1, 1), (0, 2, 1), (1, 2, -1)))


def random_signed(rng: np.random.Generator, n_lo=4, n_hi=14) -> SignedGraph:
    """ER, BA or regular graph with a random negative fraction from {0, .25, .5, .75, 1}."""
    n = int(rng.integers(n_lo, n_hi + 1))
    frac = float(rng.choice([0.0, 0.25, 0.5, 0.75, 1.0]))
    seed = int(rng.integers(2**31))
    family = rng.integers(3)
    if family == 1 and n >= 4:
        k = int(rng.integers(1, min(3, n - 2) + 1))
        G = gen.barabasi_albert(n, k, 0, seed)
    elif family == 2 and n >= 5:
        d = 3 if n % 2 == 0 else 4
        G = gen.random_regular(n, d, 0, seed)
    else:
        m = int(rng.integers(n - 1, n * (n - 1) // 2 + 1))
        G = gen.erdos_renyi(n, m, 0, seed)
    return gen.resign(G, int(round(frac * G.m)), seed + 1)


@pytest.fixture
def k3():
    return k3_one_negative()


ACCEPTANCE: dict[str, str] = {}


def record_criterion(key: str, ok: bool, detail: str) -> None:
    line = f"{key}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE[key] = line
    print(line)


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[1].rstrip("abcd"))):
            terminalreporter.write_line(ACCEPTANCE[key])
