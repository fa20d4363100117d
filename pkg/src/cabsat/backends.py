"""SAT backends behind one interface: in-process pysat or an external binary.

Both speak the same contract: solve(formula, time_limit, cancel) returns a
terminal (status, model, seconds).  Budgets are enforced cooperatively by
slicing the in-process search on conflict budgets, and by process control
for external solvers.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import time
from collections.abc import Callable
from enum import Enum

from .cnf import CnfFormula, read_model, write_dimacs
from .errors import BackendError, InputError

__all__ = [
    "SolveStatus",
    "SolverBackend",
    "PysatBackend",
    "DimacsSolverBackend",
    "get_backend",
    "DEFAULT_PYSAT_SOLVER",
    "SOLVER_ENV_VAR",
]

DEFAULT_PYSAT_SOLVER = "cadical195"
SOLVER_ENV_VAR = "CABSAT_SOLVER"

CancelCheck = Callable[[], bool]


class SolveStatus(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"
    MEMOUT = "MEMOUT"
    CANCELLED = "CANCELLED"

    def __str__(self) -> str:  # plain value in reports
        return self.value


class SolverBackend:
    """Interface: terminal solve of one CNF under optional budgets."""

    def solve(
        self,
        formula: CnfFormula,
        time_limit: float | None = None,
        cancel: CancelCheck | None = None,
    ) -> tuple[SolveStatus, list[int] | None, float]:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


class PysatBackend(SolverBackend):
    """In-process solving via pysat.

    With no budget the solve runs to completion.  Under a time limit or a
    cancel check, the search is driven in conflict-budget slices and the
    limits are polled between slices, so both timeouts and cancellation
    are honored without killing the interpreter.
    """

    def __init__(self, solver_name: str = DEFAULT_PYSAT_SOLVER, slice_conflicts: int = 20000):
        self.solver_name = solver_name
        self.slice_conflicts = slice_conflicts

    def describe(self) -> str:
        return f"pysat:{self.solver_name}"

    def solve(self, formula, time_limit=None, cancel=None):
        from pysat.solvers import Solver

        start = time.monotonic()
        deadline = start + time_limit if time_limit is not None else None
        try:
            with Solver(name=self.solver_name, bootstrap_with=formula.clauses) as solver:
                if deadline is None and cancel is None:
                    result = solver.solve()
                else:
                    result = None
                    while result is None:
                        if cancel is not None and cancel():
                            return SolveStatus.CANCELLED, None, time.monotonic() - start
                        if deadline is not None and time.monotonic() >= deadline:
                            return SolveStatus.TIMEOUT, None, time.monotonic() - start
                        solver.conf_budget(self.slice_conflicts)
                        result = solver.solve_limited()
                elapsed = time.monotonic() - start
                if result:
                    return SolveStatus.SAT, list(solver.get_model()), elapsed
                return SolveStatus.UNSAT, None, elapsed
        except MemoryError:
            return SolveStatus.MEMOUT, None, time.monotonic() - start


class DimacsSolverBackend(SolverBackend):
    """External solver process fed a DIMACS file.

    The executable must accept the file path as its final argument and
    print SAT-competition output ("s SATISFIABLE/UNSATISFIABLE" plus
    0-terminated "v" lines).  Budget breaches are handled by terminating
    the process.
    """

    def __init__(self, command: list[str]):
        if not command:
            raise InputError("empty external solver command")
        self.command = list(command)

    def describe(self) -> str:
        return " ".join(self.command)

    def solve(self, formula, time_limit=None, cancel=None):
        start = time.monotonic()
        with tempfile.NamedTemporaryFile(
            "w", suffix=".cnf", prefix="cabsat_", delete=False
        ) as tmp:
            write_dimacs(formula, tmp)
            path = tmp.name
        try:
            proc = subprocess.Popen(
                self.command + [path],
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
            )
            stdout = self._communicate(proc, start, time_limit, cancel)
            if stdout is None:
                status = SolveStatus.CANCELLED if cancel is not None and cancel() else SolveStatus.TIMEOUT
                return status, None, time.monotonic() - start
            if proc.returncode not in (0, 10, 20):
                raise BackendError(
                    f"solver {self.command[0]!r} exited with code {proc.returncode}"
                )
            sat, model = read_model(stdout)
            elapsed = time.monotonic() - start
            if sat is True:
                return SolveStatus.SAT, model, elapsed
            if sat is False:
                return SolveStatus.UNSAT, None, elapsed
            return SolveStatus.TIMEOUT, None, elapsed
        finally:
            os.unlink(path)

    def _communicate(self, proc, start, time_limit, cancel) -> str | None:
        """Wait for the process, polling budgets; None means it was killed."""
        poll = 0.05
        while True:
            remaining = None
            if time_limit is not None:
                remaining = time_limit - (time.monotonic() - start)
                if remaining <= 0:
                    self._kill(proc)
                    return None
            try:
                timeout = poll if cancel is not None else remaining
                stdout, _ = proc.communicate(timeout=timeout)
                return stdout
            except subprocess.TimeoutExpired:
                if cancel is not None and cancel():
                    self._kill(proc)
                    return None

    @staticmethod
    def _kill(proc) -> None:
        proc.kill()
        proc.communicate()


def get_backend(spec: str | None = None) -> SolverBackend:
    """Resolve a backend from a spec string, the environment, or defaults.

    "pysat" or "pysat:<solvername>" select the in-process backend; any
    other non-empty string is treated as an external solver command line.
    """
    if spec is None:
        spec = os.environ.get(SOLVER_ENV_VAR) or None
    if spec is None or spec == "pysat":
        return PysatBackend()
    if spec.startswith("pysat:"):
        return PysatBackend(solver_name=spec.split(":", 1)[1])
    return DimacsSolverBackend(shlex.split(spec))
