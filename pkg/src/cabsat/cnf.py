"""Clause database, variable allocation, DIMACS I/O, and AMO/EO builders.

Builders append clauses to a CnfFormula and draw auxiliaries from a shared
VarAllocator, so the ids they hand back never collide across builders.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from typing import IO

from .errors import BackendError, InputError, ParseError

__all__ = [
    "CnfFormula",
    "VarAllocator",
    "amo_pairwise",
    "amo_seq",
    "exactly_one_product",
    "write_dimacs",
    "parse_dimacs",
    "read_model",
]


class CnfFormula:
    """Growable clause database over positive-integer variables.

    Tautological clauses (containing v and -v) are dropped at insertion so
    builders stay composable; empty clauses are rejected because no builder
    here legitimately derives falsum.
    """

    __slots__ = ("num_vars", "clauses")

    def __init__(self, num_vars: int = 0):
        self.num_vars = num_vars
        self.clauses: list[tuple[int, ...]] = []

    def add(self, lits: Iterable[int]) -> None:
        clause = tuple(lits)
        if not clause:
            raise InputError("empty clause")
        top = 0
        for lit in clause:
            if lit == 0:
                raise InputError("literal 0 is reserved as the clause terminator")
            top = max(top, abs(lit))
        seen = set(clause)
        if any(-lit in seen for lit in clause):
            return
        if top > self.num_vars:
            self.num_vars = top
        self.clauses.append(clause)

    def extend(self, clauses: Iterable[Iterable[int]]) -> None:
        for clause in clauses:
            self.add(clause)

    def __len__(self) -> int:
        return len(self.clauses)


class VarAllocator:
    """Monotone variable-id source with an optional named registry.

    Ids start at 1 and are never reused; a semantic key maps to exactly one
    id for its lifetime.
    """

    def __init__(self, first: int = 1):
        self._next = first
        self._registry: dict[object, int] = {}

    @property
    def num_vars(self) -> int:
        return self._next - 1

    def new_var(self) -> int:
        vid = self._next
        self._next += 1
        return vid

    def new_block(self, count: int) -> int:
        """Reserve count consecutive ids; returns the first."""
        if count < 0:
            raise InputError(f"cannot reserve {count} variables")
        first = self._next
        self._next += count
        return first

    def var(self, key: object) -> int:
        """Id registered under key, allocating on first use."""
        vid = self._registry.get(key)
        if vid is None:
            vid = self.new_var()
            self._registry[key] = vid
        return vid

    def lookup(self, key: object) -> int:
        return self._registry[key]


def amo_pairwise(lits: Sequence[int], formula: CnfFormula) -> int:
    """At most one of lits via all C(|lits|, 2) binary clauses; no auxiliaries.

    Returns the number of clauses emitted.  Fewer than two literals is a
    no-op.
    """
    count = 0
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            formula.add((-lits[i], -lits[j]))
            count += 1
    return count


def amo_seq(lits: Sequence[int], formula: CnfFormula, alloc: VarAllocator) -> list[int]:
    """Sequential-counter AMO over lits; returns the |lits|-1 register bits.

    Register i is forced true once any of lits[0..i] is true, and a later
    true literal next to a set register is contradicted, so satisfying
    extensions exist exactly for assignments with at most one true input.
    """
    n = len(lits)
    if n < 2:
        return []
    regs = [alloc.new_var() for _ in range(n - 1)]
    formula.add((-lits[0], regs[0]))
    for i in range(1, n - 1):
        formula.add((-lits[i], regs[i]))
        formula.add((-regs[i - 1], regs[i]))
        formula.add((-lits[i], -regs[i - 1]))
    formula.add((-lits[n - 1], -regs[n - 2]))
    return regs


def exactly_one_product(
    lits: Sequence[int], formula: CnfFormula, alloc: VarAllocator
) -> tuple[list[int], list[int]]:
    """Exactly one of lits via a near-square grid of row/column indicators.

    Input i sits in cell (i // q, i % q) of a ceil(sqrt n) x q grid and
    implies its row and column indicator; a sequential-counter AMO over
    each indicator family rules out two inputs anywhere, and a single
    long clause over the inputs provides the lower half.  Grid cells
    beyond |lits| simply stay empty.  Returns (row, column) indicator ids.
    """
    n = len(lits)
    if n == 0:
        raise InputError("exactly-one over no variables is unsatisfiable")
    if n == 1:
        formula.add((lits[0],))
        return [], []
    p = math.isqrt(n - 1) + 1
    q = -(-n // p)
    rows = [alloc.new_var() for _ in range(p)]
    cols = [alloc.new_var() for _ in range(q)]
    for i, lit in enumerate(lits):
        formula.add((-lit, rows[i // q]))
        formula.add((-lit, cols[i % q]))
    amo_seq(rows, formula, alloc)
    amo_seq(cols, formula, alloc)
    formula.add(tuple(lits))
    return rows, cols


def write_dimacs(formula: CnfFormula, sink: IO[str], comments: Iterable[str] = ()) -> None:
    """Emit standard DIMACS CNF with optional leading comment lines."""
    for comment in comments:
        sink.write(f"c {comment}\n")
    sink.write(f"p cnf {formula.num_vars} {len(formula.clauses)}\n")
    for clause in formula.clauses:
        sink.write(" ".join(str(lit) for lit in clause))
        sink.write(" 0\n")


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; used for round-trip checks and external handoff."""
    formula = None
    declared = 0
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if formula is not None:
                raise ParseError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed problem line {line!r}", lineno)
            formula = CnfFormula(num_vars=int(parts[2]))
            declared = int(parts[3])
            continue
        if formula is None:
            raise ParseError("clause before problem line", lineno)
        try:
            tokens = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        for tok in tokens:
            if tok == 0:
                formula.add(pending)
                pending = []
            else:
                pending.append(tok)
    if formula is None:
        raise ParseError("missing problem line")
    if pending:
        raise ParseError("unterminated final clause")
    if len(formula.clauses) != declared:
        raise ParseError(f"declared {declared} clauses, found {len(formula.clauses)}")
    return formula


def read_model(text: str) -> tuple[bool | None, list[int] | None]:
    """Parse SAT-competition solver output into (status, model).

    status is True for SATISFIABLE (with a signed-literal model), False
    for UNSATISFIABLE, and None for an explicit UNKNOWN.  Anything else
    is a protocol violation.
    """
    status: bool | None = None
    saw_status = False
    lits: list[int] = []
    terminated = False
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            if saw_status:
                raise BackendError("solver printed two status lines")
            answer = line[2:].strip().upper()
            if answer == "SATISFIABLE":
                status = True
            elif answer == "UNSATISFIABLE":
                status = False
            elif answer == "UNKNOWN":
                status = None
            else:
                raise BackendError(f"unrecognized status {answer!r}")
            saw_status = True
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise BackendError(f"non-integer literal {tok!r} in value line") from None
                if lit == 0:
                    terminated = True
                else:
                    lits.append(lit)
    if not saw_status:
        raise BackendError("solver output has no 's' status line")
    if status is True:
        if not lits or not terminated:
            raise BackendError("SATISFIABLE output lacks a 0-terminated model")
        return True, lits
    return status, None
