import itertools

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record_acceptance(number, title, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def brute_force_connected(L, edges):
    """Union-find connectivity, independent of the library's DFS."""
    parent = list(range(L))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(a) for a in range(L)}) == 1


def has_odd_cycle(L, edges):
    """Search every simple cycle by trying vertex sequences; fine for L <= 7."""
    adj = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    for length in range(3, L + 1, 2):
        for combo in itertools.permutations(range(L), length):
            if combo[0] != min(combo):
                continue
            if all((combo[k], combo[(k + 1) % length]) in adj for k in range(length)):
                return True
    return False
