"""Per-family search bounds for the cyclic antibandwidth value.

Structured families come with conjectured or analytically bounded optima;
the search window for those is seeded one above the conjecture so the
solver can certify it or beat it.  Everything else falls back to the
generic window [2, n/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

from .errors import InputError
from .graphs import Graph

__all__ = [
    "BoundRange",
    "default_bounds",
    "mesh3d_conjectured",
    "mesh3d_bounds",
    "double_star_upper",
    "double_star_bounds",
    "hypercube_antibandwidth",
    "hypercube_bounds",
    "load_bounds_table",
    "table_bounds",
    "bounds_for_family",
]

# Conjectured-value ranges for square-base 3D meshes: (n1, n2) -> valid n3 span.
_MESH3D_RANGES = {
    (2, 2): (3, 500),
    (3, 3): (3, 400),
    (4, 4): (5, 200),
    (5, 5): (7, 100),
    (6, 6): (8, 100),
}


@dataclass(frozen=True)
class BoundRange:
    """Inclusive candidate window [lb, ub] for the optimum.

    degenerate marks windows produced for instances too small for the
    generic lower bound of 2 to make sense.
    """

    lb: int
    ub: int
    degenerate: bool = False

    def __post_init__(self):
        if self.lb < 1 or self.lb > self.ub:
            raise InputError(f"invalid bound range [{self.lb}, {self.ub}]")

    def clamped(self, n: int) -> "BoundRange":
        """Clamp to [1, n//2]: no labeling exceeds half the ring."""
        cap = max(1, n // 2)
        ub = min(self.ub, cap)
        lb = min(self.lb, ub)
        return BoundRange(max(1, lb), ub, self.degenerate)


def default_bounds(g: Graph) -> BoundRange:
    """Generic window [2, n//2]; degenerate [1, n//2] below 4 vertices."""
    cap = max(1, g.n // 2)
    if g.n < 4:
        return BoundRange(1, cap, degenerate=True)
    return BoundRange(2, cap)


def mesh3d_conjectured(n1: int, n2: int, n3: int) -> int:
    """Conjectured optimum of the n1 x n2 x n3 mesh for tabulated bases."""
    key = (n1, n2)
    if key not in _MESH3D_RANGES:
        raise InputError(f"no conjectured value for base {n1}x{n2}")
    low, high = _MESH3D_RANGES[key]
    if not (low <= n3 <= high):
        raise InputError(f"{n1}x{n2} base covers n3 in {low}..{high}, got {n3}")
    if key == (2, 2):
        return 2 * (n3 - 1)
    if key == (3, 3):
        return (9 * n3 - 8) // 2 if n3 % 2 == 0 else 9 * (n3 - 1) // 2
    if key == (4, 4):
        return 8 * (n3 - 1)
    if key == (5, 5):
        return (25 * n3 - 26) // 2 if n3 % 2 == 0 else (25 * n3 - 27) // 2
    return 18 * n3 - 19


def mesh3d_bounds(n1: int, n2: int, n3: int) -> BoundRange:
    """Window [2, conjecture + 1]: one above lets the search beat the conjecture."""
    ub = mesh3d_conjectured(n1, n2, n3) + 1
    return BoundRange(2, ub).clamped(n1 * n2 * n3)


def double_star_upper(n1: int, n2: int) -> int:
    """Conjectured optimum of the double star on n1 + n2 vertices."""
    if n1 < 2 or n2 < 2:
        raise InputError(f"each star needs at least 2 vertices, got ({n1}, {n2})")
    if n1 == n2:
        return n1 // 2
    return math.ceil(min(n1, n2) / 2)


def double_star_bounds(n1: int, n2: int) -> BoundRange:
    ub = double_star_upper(n1, n2) + 1
    return BoundRange(2, ub).clamped(n1 + n2)


def hypercube_antibandwidth(d: int) -> int:
    """Linear (non-cyclic) antibandwidth of the d-cube."""
    if d < 2:
        raise InputError(f"need dimension >= 2, got {d}")
    return 2 ** (d - 1) - sum(math.comb(m, m // 2) for m in range(d - 1))


def hypercube_bounds(d: int) -> BoundRange:
    """The cyclic optimum lies within [ab/2, ab] of the linear value ab."""
    ab = hypercube_antibandwidth(d)
    return BoundRange(math.ceil(ab / 2), ab).clamped(1 << d)


def load_bounds_table(path: str | None = None) -> dict[str, tuple[int, int]]:
    """Load the named-instance bounds file ("name lb ub" per line)."""
    if path is None:
        text = resources.files("cabsat").joinpath("data/hb_bounds.txt").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    table: dict[str, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"bounds table line {lineno}: expected 'name lb ub', got {raw!r}")
        table[parts[0]] = (int(parts[1]), int(parts[2]))
    return table


def table_bounds(name: str, path: str | None = None) -> BoundRange:
    """Tabulated window for a named benchmark instance."""
    table = load_bounds_table(path)
    if name not in table:
        raise InputError(f"no tabulated bounds for instance {name!r}")
    lb, ub = table[name]
    return BoundRange(lb, ub)


def bounds_for_family(family: str, params: tuple[int, ...], g: Graph) -> BoundRange:
    """Family-specific window when one is known, else the generic default."""
    if family == "mesh3d":
        try:
            return mesh3d_bounds(*params)
        except InputError:
            return default_bounds(g)
    if family == "double_star":
        return double_star_bounds(*params)
    if family == "hypercube":
        return hypercube_bounds(*params)
    return default_bounds(g)
