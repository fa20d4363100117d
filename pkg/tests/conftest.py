"""Shared helpers: exhaustive graph enumeration, random instances, and a
solver-backed extension check used to project CNFs onto their inputs."""

from __future__ import annotations

import random
from itertools import combinations

import pytest
from pysat.solvers import Minisat22

from cabsat.graphs import Graph, gen_random_connected, is_connected


def connected_graphs_exhaustive(n: int) -> list[Graph]:
    """Every connected labeled graph on exactly n vertices."""
    pairs = list(combinations(range(n), 2))
    graphs = []
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = Graph(n, edges)
        if g.m >= n - 1 and is_connected(g):
            graphs.append(g)
    return graphs


def random_connected_sample(n: int, count: int, seed: int) -> list[Graph]:
    rng = random.Random(seed)
    max_m = n * (n - 1) // 2
    out = []
    for _ in range(count):
        m = rng.randint(n - 1, max_m)
        out.append(gen_random_connected(n, m, rng.randrange(1 << 30)))
    return out


class ExtensionChecker:
    """Asks whether an assignment to chosen input variables extends to a
    model of a CNF; the auxiliary variables are left free."""

    def __init__(self, formula):
        self.solver = Minisat22(bootstrap_with=formula.clauses)

    def extendable(self, inputs: list[int], bits: int) -> bool:
        assumptions = [
            var if bits >> i & 1 else -var for i, var in enumerate(inputs)
        ]
        return self.solver.solve(assumptions=assumptions)

    def close(self):
        self.solver.delete()


@pytest.fixture
def extension_checker():
    checkers = []

    def make(formula):
        checker = ExtensionChecker(formula)
        checkers.append(checker)
        return checker

    yield make
    for checker in checkers:
        checker.close()


def ring_windows_truth(n: int, w: int, bits: int) -> bool:
    """Direct statement of the constraint family: every length-w window on
    the ring holds at most one set bit."""
    for start in range(n):
        if sum(bits >> ((start + j) % n) & 1 for j in range(w)) > 1:
            return False
    return True
