import itertools

import numpy as np
import pytest

from frechet_er.graph import Graph, enumerate_graphs


def brute_laplacian(n, edges):
    """Dense Laplacian built entry by entry."""
    lap = [[0] * n for _ in range(n)]
    for u, v in edges:
        lap[u - 1][v - 1] -= 1
        lap[v - 1][u - 1] -= 1
        lap[u - 1][u - 1] += 1
        lap[v - 1][v - 1] += 1
    return np.array(lap)


def brute_adjacency(n, edges):
    a = np.zeros((n, n), dtype=int)
    for u, v in edges:
        a[u - 1, v - 1] = a[v - 1, u - 1] = 1
    return a


@pytest.fixture(scope="session")
def graphs_by_n():
    return {n: list(enumerate_graphs(n)) for n in range(1, 6)}


def all_pairs(n):
    return list(itertools.combinations(range(1, n + 1), 2))


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {label}" + (f" :: {detail}" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


__all__ = ["Graph", "brute_laplacian", "brute_adjacency", "all_pairs"]
