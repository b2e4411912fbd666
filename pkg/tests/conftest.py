from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from cliqster import Graph, read_edge_list

DATA = Path(__file__).parent / "data"
TEN_PEOPLE = DATA / "ten_people.edges"

# cliques of the ten-person example in the order their coefficients are listed
TEN_PEOPLE_CLIQUES = [(8, 9, 10), (5, 6, 7), (4, 5, 7), (1, 2, 3), (6, 10), (3, 9), (3, 6)]
TEN_PEOPLE_MU = [1.00, 0.75, 0.75, 1.00, 1.00, 1.00, 1.00]


@pytest.fixture
def ten_people() -> Graph:
    return read_edge_list(TEN_PEOPLE)


def gnp(n: int, p: float, seed) -> Graph:
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph(n, np.column_stack([iu[keep], iv[keep]]))


def complete(n: int) -> Graph:
    iu, iv = np.triu_indices(n, 1)
    return Graph(n, np.column_stack([iu, iv]))


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


@st.composite
def graphs(draw, max_n=10, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, keep in zip(pairs, mask) if keep])


def tokens(g: Graph, clique) -> tuple[int, ...]:
    return tuple(sorted(int(g.label(v)) for v in clique))


# acceptance verdicts, echoed in the terminal summary
VERDICTS: list[str] = []


def record(criterion: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {criterion} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    VERDICTS.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
