"""Per-candidate decision instance: is there a labeling with objective >= k?

Variable x(v, l) says vertex v gets label l.  The build combines:

  * one ring-window AMO encoding per non-isolated vertex over its n label
    variables, with window width k;
  * per edge and ring position, coupling clauses forcing at least one
    endpoint's window to be empty, which is exactly "the two labels are
    at least k apart on the ring";
  * exactly-one constraints: per label over vertices (grid encoding), and
    per vertex over labels, restated over each ring's cover registers;
  * optional symmetry-breaking units exploiting the label-mirror map.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cnf import CnfFormula, VarAllocator, amo_seq, exactly_one_product
from .errors import InputError, IntegrityError
from .graphs import Graph, validate_labeling
from .ladder import LadderEncoding, encode_ring_window_amo

__all__ = [
    "BuildOptions",
    "DecisionInstance",
    "build_instance",
    "symmetry_clauses",
    "symmetry_vertex",
    "max_symmetry_label",
]


@dataclass(frozen=True)
class BuildOptions:
    symmetry: bool = True


def symmetry_vertex(g: Graph) -> int:
    """Smallest-index vertex of maximum degree."""
    return max(range(g.n), key=lambda v: (g.degree(v), -v))


def max_symmetry_label(n: int) -> int:
    """Largest label the pinned vertex may take.

    ceil(n/2) rather than n/2 rounded down: mirroring l -> n + 1 - l maps
    any label above ceil(n/2) strictly below it, so the cap loses no
    solutions even for odd n.
    """
    return (n + 1) // 2


def symmetry_clauses(g: Graph, x_var) -> list[tuple[int]]:
    """Unit clauses pinning the busiest vertex into the lower half.

    Sound because mirroring the labels fixes the objective; it only prunes
    the mirrored copy of each solution.
    """
    pinned = symmetry_vertex(g)
    return [
        (-x_var(pinned, label),)
        for label in range(max_symmetry_label(g.n) + 1, g.n + 1)
    ]


class DecisionInstance:
    """A built CNF plus the variable map needed to decode its models."""

    def __init__(self, graph: Graph, k: int, options: BuildOptions):
        self.graph = graph
        self.k = k
        self.options = options
        self.formula = CnfFormula()
        self.alloc = VarAllocator()
        self._x_base = self.alloc.new_block(graph.n * graph.n)
        self.ladders: dict[int, LadderEncoding] = {}

    def x_var(self, v: int, label: int) -> int:
        """Variable id of "vertex v carries label" (label is 1-based)."""
        return self._x_base + v * self.graph.n + (label - 1)

    @property
    def num_vars(self) -> int:
        return self.formula.num_vars

    @property
    def num_clauses(self) -> int:
        return len(self.formula.clauses)

    def decode(self, model: list[int]) -> tuple[int, ...]:
        """Extract the labeling from a satisfying model.

        A non-bijective extraction means the encoder itself is broken, so
        it raises IntegrityError rather than a user-facing input error.
        """
        n = self.graph.n
        true_vars = {lit for lit in model if lit > 0}
        labels = []
        for v in range(n):
            assigned = [l for l in range(1, n + 1) if self.x_var(v, l) in true_vars]
            if len(assigned) != 1:
                raise IntegrityError(f"vertex {v} decoded to labels {assigned}; encoding unsound")
            labels.append(assigned[0])
        try:
            validate_labeling(n, labels)
        except InputError as exc:
            raise IntegrityError(f"decoded labeling is not a bijection: {exc}") from exc
        return tuple(labels)

    def map_comment_lines(self) -> list[str]:
        """"x v l var" triples (1-based vertex) for DIMACS sidecar comments."""
        n = self.graph.n
        return [
            f"x {v + 1} {l} {self.x_var(v, l)}" for v in range(n) for l in range(1, n + 1)
        ]

    def map_json(self) -> str:
        n = self.graph.n
        payload = {
            "n": n,
            "k": self.k,
            "x_vars": {f"{v + 1},{l}": self.x_var(v, l) for v in range(n) for l in range(1, n + 1)},
        }
        return json.dumps(payload, indent=None, sort_keys=True)


def build_instance(g: Graph, k: int, options: BuildOptions | None = None) -> DecisionInstance:
    """Build the decision CNF for "some labeling of g reaches at least k"."""
    options = options or BuildOptions()
    n = g.n
    if g.m == 0:
        raise InputError("objective undefined: graph has no edges")
    if not (2 <= k <= n // 2):
        raise InputError(f"candidate k must lie in 2..{n // 2}, got {k}")

    inst = DecisionInstance(g, k, options)
    formula, alloc = inst.formula, inst.alloc

    for v in range(n):
        if g.degree(v) > 0:
            ring = [inst.x_var(v, l) for l in range(1, n + 1)]
            inst.ladders[v] = encode_ring_window_amo(ring, k, formula, alloc)

    # Coupling: for every edge and window position, one endpoint's window
    # stays empty.  Distributing (all-of A false) or (all-of B false) over
    # the <=2 literals per side gives <=4 binary clauses per position.
    zero_lits = {
        v: [enc.window_zero_literals(l) for l in range(1, n + 1)]
        for v, enc in inst.ladders.items()
    }
    for u, v in g.edges:
        # wrap-around positions can repeat a pair within one edge; pairs
        # from different edges involve different variable blocks and
        # cannot collide, so the dedup set stays edge-local
        emitted: set[frozenset[int]] = set()
        for l in range(n):
            for a in zero_lits[u][l]:
                for b in zero_lits[v][l]:
                    key = frozenset((a, b))
                    if key in emitted:
                        continue
                    emitted.add(key)
                    formula.add((-a, -b))

    for label in range(1, n + 1):
        exactly_one_product([inst.x_var(v, label) for v in range(n)], formula, alloc)

    for v in range(n):
        enc = inst.ladders.get(v)
        if enc is None:
            exactly_one_product([inst.x_var(v, l) for l in range(1, n + 1)], formula, alloc)
        else:
            cover = enc.label_cover_literals()
            formula.add(tuple(cover))
            amo_seq(cover, formula, alloc)

    if options.symmetry:
        for unit in symmetry_clauses(g, inst.x_var):
            formula.add(unit)

    return inst
