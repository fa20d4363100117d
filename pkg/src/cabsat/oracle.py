"""Exhaustive ground truth for small instances.

Maximizes the objective over every bijective labeling, so it is the
independent reference all encoder and search claims are measured against.
The only shortcut taken is the label mirror l -> n + 1 - l, which
preserves every cyclic distance: one chosen vertex's label can be pinned
to the lower half without losing any achievable objective value.  No
other symmetry is exploited, deliberately, to keep the oracle as close to
plain enumeration as possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import InputError
from .graphs import Graph

__all__ = ["OracleResult", "brute_force_cab", "oracle_sweep", "ORACLE_VERTEX_CAP"]

ORACLE_VERTEX_CAP = 10


@dataclass(frozen=True)
class OracleResult:
    cab: int
    witness: tuple[int, ...]
    labelings_examined: int


def brute_force_cab(g: Graph, mirror_pruning: bool = True) -> OracleResult:
    """Exact optimum by enumeration; refuses graphs above the size cap.

    The cap is enforced rather than advisory: one vertex past it is an
    order of magnitude more work, and the SAT path exists for that.
    """
    n = g.n
    if n > ORACLE_VERTEX_CAP:
        raise InputError(
            f"oracle capped at {ORACLE_VERTEX_CAP} vertices (got {n}); use the SAT search"
        )
    if n < 2 or g.m == 0:
        raise InputError("oracle needs at least 2 vertices and 1 edge")

    edges = g.edges
    first_labels = range(1, (n + 1) // 2 + 1) if mirror_pruning else range(1, n + 1)
    best = -1
    best_labels: tuple[int, ...] | None = None
    examined = 0
    labels = [0] * n
    for first in first_labels:
        rest = [l for l in range(1, n + 1) if l != first]
        labels[0] = first
        for perm in permutations(rest):
            examined += 1
            labels[1:] = perm
            value = n
            for u, v in edges:
                d = labels[u] - labels[v]
                if d < 0:
                    d = -d
                if n - d < d:
                    d = n - d
                if d < value:
                    value = d
                    if value <= best:
                        break
            if value > best:
                best = value
                best_labels = tuple(labels)
    assert best_labels is not None
    return OracleResult(best, best_labels, examined)


def oracle_sweep(instances: list[tuple[str, Graph]]) -> list[tuple[str, int, int, int]]:
    """Rows (name, n, m, exact value) for a list of named instances."""
    rows = []
    for name, g in instances:
        result = brute_force_cab(g)
        rows.append((name, g.n, g.m, result.cab))
    return rows
