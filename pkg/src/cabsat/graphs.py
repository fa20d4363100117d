"""Undirected graphs, labelings, file formats, and benchmark-family generators.

Vertices are 0-based internally; every textual interface (edge lists, Matrix
Market, CLI output) is 1-based.  Graph objects are immutable after
construction and safe to share across worker processes.
"""

from __future__ import annotations

import random
import warnings
from collections.abc import Iterable, Sequence

from .errors import InputError, ParseError

__all__ = [
    "Graph",
    "cyclic_distance",
    "cab_of_labeling",
    "validate_labeling",
    "identity_labeling",
    "reversed_labeling",
    "is_connected",
    "parse_edge_list",
    "format_edge_list",
    "parse_matrix_market",
    "load_graph",
    "gen_path",
    "gen_cycle",
    "gen_complete",
    "gen_mesh3d",
    "gen_double_star",
    "gen_hypercube",
    "gen_caterpillar",
    "gen_cbt",
    "gen_random_connected",
    "from_generator_spec",
    "GENERATORS",
]


class Graph:
    """Simple undirected graph: vertex count plus a set of edges.

    Edges are stored as sorted (u, v) pairs with u < v; self-loops are
    rejected and duplicates collapse.  Adjacency lists are precomputed.
    """

    __slots__ = ("n", "edges", "adjacency")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise InputError(f"vertex count must be positive, got {n}")
        normalized = set()
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            normalized.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(normalized))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def cyclic_distance(n: int, a: int, b: int) -> int:
    """Distance between labels a and b on a ring of n positions."""
    if not (1 <= a <= n and 1 <= b <= n):
        raise InputError(f"labels must lie in 1..{n}, got ({a}, {b})")
    d = abs(a - b)
    return min(d, n - d)


def validate_labeling(n: int, labels: Sequence[int]) -> None:
    """Raise unless labels is a bijection from n vertices onto 1..n."""
    if len(labels) != n or sorted(labels) != list(range(1, n + 1)):
        raise InputError(f"labeling is not a bijection onto 1..{n}: {list(labels)!r}")


def identity_labeling(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def reversed_labeling(n: int, labels: Sequence[int]) -> tuple[int, ...]:
    """The mirrored labeling l -> n + 1 - l; preserves every cyclic distance."""
    return tuple(n + 1 - l for l in labels)


def cab_of_labeling(g: Graph, labels: Sequence[int]) -> int:
    """Minimum cyclic label distance across the edges of g.

    The objective value of one candidate labeling; undefined for graphs
    without edges.
    """
    validate_labeling(g.n, labels)
    if not g.edges:
        raise InputError("objective undefined: graph has no edges")
    n = g.n
    best = n
    for u, v in g.edges:
        d = abs(labels[u] - labels[v])
        d = d if d <= n - d else n - d
        if d < best:
            best = d
    return best


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in g.adjacency[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == g.n


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def _significant_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_edge_list(text: str) -> Graph:
    """Parse the package's canonical edge-list format.

    Header "n m", then exactly m lines "u v" with 1-based endpoints.
    '#' starts a comment line.  Self-loops are dropped and duplicate
    edges collapse, so the resulting graph may have fewer than m edges.
    """
    lines = _significant_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty edge-list input") from None
    parts = header.split()
    if len(parts) != 2:
        raise ParseError(f"expected header 'n m', got {header!r}", lineno)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"non-integer header {header!r}", lineno) from None
    if n < 1 or m < 0:
        raise ParseError(f"invalid header values n={n}, m={m}", lineno)

    edges = []
    count = 0
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected edge 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer edge {line!r}", lineno) from None
        count += 1
        if count > m:
            raise ParseError(f"more than the declared {m} edges", lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"endpoint out of range 1..{n}: {line!r}", lineno)
        if u != v:
            edges.append((u - 1, v - 1))
    if count < m:
        raise ParseError(f"declared {m} edges but found only {count}")
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    """Serialize with the actual (collapsed) edge count so it re-parses exactly."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_matrix_market(text: str) -> Graph:
    """Read a Matrix Market coordinate file as an undirected graph.

    Only square symmetric matrices are accepted.  Value fields (real or
    integer) are ignored with a warning since the labeling objective only
    uses the sparsity pattern; diagonal entries are dropped.
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith("%%MatrixMarket"):
        raise ParseError("missing %%MatrixMarket banner", 1)
    banner = lines[0].split()
    if len(banner) != 5:
        raise ParseError(f"malformed banner {lines[0]!r}", 1)
    _, obj, fmt, field, symmetry = (tok.lower() for tok in banner)
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError(f"unsupported type '{obj} {fmt}', need 'matrix coordinate'", 1)
    if symmetry != "symmetric":
        raise ParseError(f"unsupported symmetry '{symmetry}', need 'symmetric'", 1)
    if field != "pattern":
        warnings.warn(
            f"matrix has '{field}' values; reading sparsity pattern only",
            stacklevel=2,
        )

    body = (
        (lineno, line.strip())
        for lineno, line in enumerate(lines[1:], start=2)
        if line.strip() and not line.lstrip().startswith("%")
    )
    try:
        lineno, size_line = next(body)
    except StopIteration:
        raise ParseError("missing size line") from None
    parts = size_line.split()
    if len(parts) != 3:
        raise ParseError(f"expected 'rows cols nnz', got {size_line!r}", lineno)
    try:
        rows, cols, nnz = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"non-integer size line {size_line!r}", lineno) from None
    if rows != cols:
        raise ParseError(f"matrix is {rows}x{cols}, need square", lineno)

    edges = []
    count = 0
    for lineno, line in body:
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(f"expected entry 'i j [value]', got {line!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer entry {line!r}", lineno) from None
        count += 1
        if count > nnz:
            raise ParseError(f"more than the declared {nnz} entries", lineno)
        if not (1 <= i <= rows and 1 <= j <= rows):
            raise ParseError(f"entry out of range 1..{rows}: {line!r}", lineno)
        if i != j:
            edges.append((i - 1, j - 1))
    if count < nnz:
        raise ParseError(f"declared {nnz} entries but found only {count}")
    return Graph(rows, edges)


def load_graph(path: str) -> Graph:
    """Load a graph file, dispatching on the Matrix Market banner or extension."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.startswith("%%MatrixMarket") or path.endswith(".mtx"):
        return parse_matrix_market(text)
    return parse_edge_list(text)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def gen_path(n: int) -> Graph:
    _require_positive(n=n)
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise InputError(f"cycle needs at least 3 vertices, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def gen_complete(n: int) -> Graph:
    _require_positive(n=n)
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def gen_mesh3d(n1: int, n2: int, n3: int) -> Graph:
    """Cartesian product of three paths; n = n1*n2*n3 vertices."""
    _require_positive(n1=n1, n2=n2, n3=n3)

    def vid(i, j, k):
        return (i * n2 + j) * n3 + k

    edges = []
    for i in range(n1):
        for j in range(n2):
            for k in range(n3):
                if i + 1 < n1:
                    edges.append((vid(i, j, k), vid(i + 1, j, k)))
                if j + 1 < n2:
                    edges.append((vid(i, j, k), vid(i, j + 1, k)))
                if k + 1 < n3:
                    edges.append((vid(i, j, k), vid(i, j, k + 1)))
    return Graph(n1 * n2 * n3, edges)


def gen_double_star(n1: int, n2: int) -> Graph:
    """Two stars of n1 and n2 vertices whose centers are joined by an edge."""
    if n1 < 2 or n2 < 2:
        raise InputError(f"each star needs at least 2 vertices, got ({n1}, {n2})")
    c1, c2 = 0, n1
    edges = [(c1, leaf) for leaf in range(1, n1)]
    edges += [(c2, leaf) for leaf in range(n1 + 1, n1 + n2)]
    edges.append((c1, c2))
    return Graph(n1 + n2, edges)


def gen_hypercube(d: int) -> Graph:
    """d-dimensional hypercube: 2^d vertices, each adjacent to d bit-flips."""
    if d < 1:
        raise InputError(f"hypercube dimension must be >= 1, got {d}")
    n = 1 << d
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)]
    return Graph(n, edges)


def gen_caterpillar(n1: int, n2: int) -> Graph:
    """Backbone path of n1 vertices, each carrying a pendant path of n2-1
    vertices; n = n1*n2 in total."""
    _require_positive(n1=n1, n2=n2)
    edges = [(i, i + 1) for i in range(n1 - 1)]
    nxt = n1
    for spine in range(n1):
        prev = spine
        for _ in range(n2 - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph(n1 * n2, edges)


def gen_cbt(n: int) -> Graph:
    """Complete binary tree on n nodes, levels filled left to right."""
    _require_positive(n=n)
    return Graph(n, [((i - 1) // 2, i) for i in range(1, n)])


def gen_random_connected(n: int, m: int, seed: int) -> Graph:
    """Seed-reproducible random connected graph with exactly m edges.

    A random spanning tree is grown first (each vertex, in a shuffled
    order, attaches to a uniformly chosen earlier one), then the
    remaining edges are rejection-sampled uniformly.
    """
    _require_positive(n=n)
    max_m = n * (n - 1) // 2
    if m < n - 1 or m > max_m:
        raise InputError(f"need n-1 <= m <= n(n-1)/2, got n={n}, m={m}")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        u = order[i]
        v = order[rng.randrange(i)]
        edges.add((u, v) if u < v else (v, u))
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        edges.add((u, v) if u < v else (v, u))
    return Graph(n, edges)


GENERATORS = {
    "path": (gen_path, 1),
    "cycle": (gen_cycle, 1),
    "complete": (gen_complete, 1),
    "mesh3d": (gen_mesh3d, 3),
    "double_star": (gen_double_star, 2),
    "hypercube": (gen_hypercube, 1),
    "caterpillar": (gen_caterpillar, 2),
    "cbt": (gen_cbt, 1),
    "random": (gen_random_connected, 3),
}


def from_generator_spec(spec: str) -> tuple[str, tuple[int, ...], Graph]:
    """Build a graph from a "family:p1,p2,..." string (CLI convention)."""
    family, sep, arg_text = spec.partition(":")
    family = family.strip().lower()
    if family not in GENERATORS:
        known = ", ".join(sorted(GENERATORS))
        raise InputError(f"unknown generator family {family!r} (known: {known})")
    fn, arity = GENERATORS[family]
    if not sep:
        raise InputError(f"generator spec {spec!r} is missing ':params'")
    try:
        params = tuple(int(p) for p in arg_text.split(",") if p.strip() != "")
    except ValueError:
        raise InputError(f"non-integer parameters in generator spec {spec!r}") from None
    if len(params) != arity:
        raise InputError(f"{family} takes {arity} parameter(s), got {len(params)}")
    return family, params, fn(*params)


def _require_positive(**kwargs: int) -> None:
    for name, value in kwargs.items():
        if value < 1:
            raise InputError(f"{name} must be >= 1, got {value}")
