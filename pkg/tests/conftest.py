from pathlib import Path

import pytest

from graphprod import DefiningGraph, parse_graph

GRAPHS = Path(__file__).resolve().parents[1] / "graphs"


def load(name: str) -> DefiningGraph:
    return parse_graph((GRAPHS / name).read_text())


def path_graph(n: int, order=2, prefix="v") -> DefiningGraph:
    vs = [(f"{prefix}{i}", order) for i in range(1, n + 1)]
    return DefiningGraph.build(vs, [(f"{prefix}{i}", f"{prefix}{i + 1}") for i in range(1, n)])


def complete_graph(n: int, order=2) -> DefiningGraph:
    vs = [(f"k{i}", order) for i in range(1, n + 1)]
    return DefiningGraph.build(
        vs, [(f"k{i}", f"k{j}") for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    )


@pytest.fixture
def p6():
    return load("p6.g")


@pytest.fixture
def ladder():
    return load("ladder.g")


@pytest.fixture
def tripod():
    return load("tripod_plus.g")


@pytest.fixture
def p3():
    return load("p3.g")


@pytest.fixture
def edge23():
    return load("edge23.g")
