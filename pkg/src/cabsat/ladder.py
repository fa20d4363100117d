"""Joint CNF encoding of all sliding-window AMO constraints on a ring.

The constraint family: given n variables arranged in a circle and a width
w, every window of w consecutive variables may contain at most one true
variable.  Encoding each of the n windows separately wastes work because
adjacent windows share w-1 variables.  Instead the ring is linearized
over positions 1..n+w-1 (the tail wraps back onto the ring start) and cut
into m = ceil((n+w-1)/w) windows of w positions (the last possibly
shorter).  Each window is summarized by register bits that accumulate
runs from its left edge (prefix block) or right edge (suffix block):
register j of a block is true in a satisfying assignment exactly when
one of the block's first j variables is true.  Any window of the original
family is then either one whole block or a suffix-run of one window glued
to a prefix-run of the next, so a single binary "connecting clause" over
two registers restores each straddling AMO.

Clause and auxiliary counts grow linearly in n for fixed w, against the
quadratic growth of the per-window encodings kept here as baselines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cnf import CnfFormula, VarAllocator, amo_pairwise, amo_seq
from .errors import InputError, IntegrityError

__all__ = [
    "Block",
    "LadderEncoding",
    "encode_ring_window_amo",
    "ladder_size_formulas",
    "encode_ring_windows_pairwise",
    "encode_ring_windows_seq",
]


@dataclass
class Block:
    """One directed accumulation over a window's variables.

    lits lists the window's variables in accumulation order: ascending ring
    order for a prefix block, descending for a suffix block.  regs[j] is the
    register covering the first j ordered variables (j >= 2; position 1 is
    the variable itself).  has_guard marks blocks that also carry the
    at-most-one clauses for their window; within a prefix/suffix pair over
    the same window only the prefix needs them, and the pair shares its
    full-window register.
    """

    index: int
    window: int
    kind: str
    lits: tuple[int, ...]
    has_guard: bool
    shares_full: bool = False
    regs: dict[int, int] = field(default_factory=dict)


class LadderEncoding:
    """Window/block decomposition of one ring, plus its emitted registers.

    Construction performs the decomposition only; encode() allocates the
    registers and appends all clauses.  Register lookups used by callers
    (window_zero_literals, label_cover_literals) are valid after encode().
    """

    def __init__(self, ring: list[int], w: int):
        n = len(ring)
        if n < 2:
            raise InputError(f"ring needs at least 2 variables, got {n}")
        if not (1 < w <= n):
            raise InputError(f"width must satisfy 1 < w <= {n}, got {w}")
        self.ring = list(ring)
        self.n = n
        self.w = w
        self.m = -(-(n + w - 1) // w)
        self.windows: list[list[int]] = []
        for t in range(1, self.m + 1):
            start = (t - 1) * w + 1
            end = min(t * w, n + w - 1)
            self.windows.append([self._var_at(p) for p in range(start, end + 1)])
        self.blocks: list[Block] = self._decompose()
        self.aux_count = 0
        self.block_clause_count = 0
        self.connect_clause_count = 0
        self._encoded = False

    def _var_at(self, p: int) -> int:
        return self.ring[(p - 1) % self.n]

    def _decompose(self) -> list[Block]:
        blocks = [Block(1, 1, "suffix", tuple(reversed(self.windows[0])), has_guard=True)]
        idx = 2
        for t in range(2, self.m):
            win = self.windows[t - 1]
            blocks.append(Block(idx, t, "prefix", tuple(win), has_guard=True))
            blocks.append(
                Block(idx + 1, t, "suffix", tuple(reversed(win)), has_guard=False, shares_full=True)
            )
            idx += 2
        blocks.append(Block(idx, self.m, "prefix", tuple(self.windows[-1]), has_guard=True))
        return blocks

    # -- clause emission ----------------------------------------------------

    def encode_blocks(self, formula: CnfFormula, alloc: VarAllocator) -> None:
        """Register chains for every block: four clause families per step.

        For step j of a block with ordered variables y and registers R
        (writing R[1] for y[1]):
          y[j] -> R[j]              a true variable sets its register
          R[j-1] -> R[j]            registers stay set along the chain
          (~y[j] & ~R[j-1]) -> ~R[j]   and are false when nothing below is true
          y[j] -> ~R[j-1]           guard: no second true variable (has_guard only)
        """
        prefix_full: dict[int, int] = {}
        for block in self.blocks:
            length = len(block.lits)
            if length < 2:
                continue
            for j in range(2, length + 1):
                if j == length and block.shares_full:
                    block.regs[j] = prefix_full[block.window]
                else:
                    block.regs[j] = alloc.new_var()
                    self.aux_count += 1
            if block.kind == "prefix":
                prefix_full[block.window] = block.regs[length]
            for j in range(2, length + 1):
                y = block.lits[j - 1]
                below = block.regs[j - 1] if j > 2 else block.lits[0]
                reg = block.regs[j]
                formula.add((-y, reg))
                formula.add((-below, reg))
                formula.add((y, below, -reg))
                self.block_clause_count += 3
                if block.has_guard:
                    formula.add((-y, -below))
                    self.block_clause_count += 1
        self._encoded = True

    def connect_blocks(self, formula: CnfFormula) -> None:
        """One binary clause per window that straddles a block boundary.

        A window starting at ring position l splits at the boundary into a
        suffix-run of length a and a prefix-run of length b = w - a; its
        AMO follows from the two per-run AMOs plus "one of the runs is
        empty", which is exactly (~suffix_register | ~prefix_register).
        """
        self._require_encoded()
        for l in range(1, self.n + 1):
            t = (l - 1) // self.w + 1
            if l == (t - 1) * self.w + 1:
                continue
            a = t * self.w - l + 1
            b = self.w - a
            formula.add((-self.suffix_literal(t, a), -self.prefix_literal(t + 1, b)))
            self.connect_clause_count += 1

    def encode(self, formula: CnfFormula, alloc: VarAllocator) -> "LadderEncoding":
        self.encode_blocks(formula, alloc)
        self.connect_blocks(formula)
        return self

    # -- register lookups ---------------------------------------------------

    def _require_encoded(self) -> None:
        if not self._encoded:
            raise IntegrityError("registers are available only after encode()")

    def _block_for(self, t: int, kind: str) -> Block:
        for block in self.blocks:
            if block.window == t and block.kind == kind:
                return block
        raise IntegrityError(f"no {kind} block over window {t}")

    def full_register(self, t: int) -> int:
        """Literal that is true iff window t contains a true variable."""
        self._require_encoded()
        win = self.windows[t - 1]
        if len(win) == 1:
            return win[0]
        kind = "suffix" if t == 1 else "prefix"
        return self._block_for(t, kind).regs[len(win)]

    def prefix_literal(self, t: int, b: int) -> int:
        """Literal true iff one of the first b variables of window t is true."""
        self._require_encoded()
        win = self.windows[t - 1]
        if not (1 <= b <= len(win)):
            raise IntegrityError(f"prefix length {b} outside window {t} of size {len(win)}")
        if b == 1:
            return win[0]
        if b == len(win):
            return self.full_register(t)
        return self._block_for(t, "prefix").regs[b]

    def suffix_literal(self, t: int, a: int) -> int:
        """Literal true iff one of the last a variables of window t is true."""
        self._require_encoded()
        win = self.windows[t - 1]
        if not (1 <= a <= len(win)):
            raise IntegrityError(f"suffix length {a} outside window {t} of size {len(win)}")
        if a == 1:
            return win[-1]
        if a == len(win):
            return self.full_register(t)
        return self._block_for(t, "suffix").regs[a]

    def window_zero_literals(self, l: int) -> tuple[int, ...]:
        """Literals whose joint falsity says "the window starting at ring
        position l holds no true variable".

        One literal when the window coincides with a block, two when it
        straddles a boundary.
        """
        if not (1 <= l <= self.n):
            raise InputError(f"ring position must lie in 1..{self.n}, got {l}")
        t = (l - 1) // self.w + 1
        if l == (t - 1) * self.w + 1:
            return (self.full_register(t),)
        a = t * self.w - l + 1
        return (self.suffix_literal(t, a), self.prefix_literal(t + 1, self.w - a))

    def label_cover_literals(self) -> list[int]:
        """Registers covering a partition of ring positions 1..n.

        The first ceil(n/w) - 1 windows are taken whole; the final segment
        uses the prefix register that stops exactly at position n, so a
        wrapped window never counts the ring start twice.  Useful to
        restate "at least/most one of the ring" over far fewer literals.
        """
        t_last = -(-self.n // self.w)
        lits = [self.full_register(t) for t in range(1, t_last)]
        lits.append(self.prefix_literal(t_last, self.n - (t_last - 1) * self.w))
        return lits

    def describe(self) -> str:
        """Stable text dump of windows, blocks, and register ids."""
        lines = [f"ring n={self.n} w={self.w} m={self.m}"]
        for t, win in enumerate(self.windows, start=1):
            lines.append(f"W{t}: vars={list(win)}")
        for block in self.blocks:
            regs = " ".join(f"{j}->{v}" for j, v in sorted(block.regs.items()))
            flags = []
            if block.has_guard:
                flags.append("guard")
            if block.shares_full:
                flags.append("shared-full")
            if len(block.lits) < 2:
                flags.append("degenerate")
            lines.append(
                f"B{block.index} {block.kind} W{block.window} vars={list(block.lits)}"
                f" regs[{regs}] {','.join(flags) or '-'}"
            )
        return "\n".join(lines)


def encode_ring_window_amo(
    ring: list[int], w: int, formula: CnfFormula, alloc: VarAllocator
) -> LadderEncoding:
    """Decompose, encode, and connect in one step."""
    return LadderEncoding(ring, w).encode(formula, alloc)


def ladder_size_formulas(n: int, w: int) -> tuple[int, int]:
    """Closed-form (auxiliaries, clauses) under the uniform-block idealization.

    Assumes all 2m-2 blocks span full width w; a shorter final window makes
    the emitted counts fall below these.
    """
    if not (1 < w <= n):
        raise InputError(f"width must satisfy 1 < w <= {n}, got {w}")
    m = -(-(n + w - 1) // w)
    aux = 2 * m * w - 3 * m - 2 * w + 4
    clauses = 8 * m * w - 8 * m - 7 * w + 7
    return aux, clauses


def _ring_windows(n: int, w: int) -> list[list[int]]:
    return [[(l + j) % n for j in range(w)] for l in range(n)]


def encode_ring_windows_pairwise(ring: list[int], w: int, formula: CnfFormula) -> int:
    """Baseline: every window AMO as binary clauses, duplicates collapsed.

    Returns the emitted clause count.  Quadratic once w grows with n.
    """
    n = len(ring)
    if not (1 < w <= n):
        raise InputError(f"width must satisfy 1 < w <= {n}, got {w}")
    seen: set[frozenset[int]] = set()
    count = 0
    for window in _ring_windows(n, w):
        lits = [ring[i] for i in window]
        for i in range(len(lits)):
            for j in range(i + 1, len(lits)):
                if lits[i] == lits[j]:
                    continue
                pair = frozenset((lits[i], lits[j]))
                if pair in seen:
                    continue
                seen.add(pair)
                formula.add((-lits[i], -lits[j]))
                count += 1
    return count


def encode_ring_windows_seq(
    ring: list[int], w: int, formula: CnfFormula, alloc: VarAllocator
) -> tuple[int, int]:
    """Baseline: an independent sequential counter per window.

    Returns (auxiliaries, clauses) emitted.
    """
    n = len(ring)
    if not (1 < w <= n):
        raise InputError(f"width must satisfy 1 < w <= {n}, got {w}")
    aux = 0
    before = len(formula.clauses)
    for window in _ring_windows(n, w):
        lits = [ring[i] for i in window]
        aux += len(amo_seq(lits, formula, alloc))
    return aux, len(formula.clauses) - before


def encode_single_window_pairwise(lits: list[int], formula: CnfFormula) -> int:
    """One plain AMO; thin wrapper kept for bench comparisons."""
    return amo_pairwise(lits, formula)
