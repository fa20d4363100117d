"""Candidate-value search: prove the largest k whose decision CNF is SAT.

The decision problem is monotone (a labeling reaching k also reaches every
smaller value), so the searched window [lb, ub] shrinks from both sides:
a SAT answer raises the proven-feasible mark, an UNSAT answer lowers the
least-infeasible mark, and the optimum is certified once they meet.

Two drivers share the bookkeeping: a sequential scan that walks the window
upward and stops at the first UNSAT, and a worker-pool driver that solves
several candidates concurrently, cancels workers made redundant by each
finished answer, and refills from a configurable candidate order (plain
ascending, or a midpoint tree linearized breadth- or depth-first).
"""

from __future__ import annotations

import time
import traceback
from dataclasses import dataclass, field

from .backends import SolveStatus, get_backend
from .bounds import BoundRange
from .errors import BackendError, InputError, IntegrityError
from .graphs import Graph, cab_of_labeling, identity_labeling
from .model import BuildOptions, build_instance

__all__ = [
    "SearchOptions",
    "SolveOutcome",
    "SearchState",
    "solve_decision",
    "candidate_order",
    "iterative_search",
    "parallel_search",
    "verify_result",
    "VerifyReport",
    "ProcessExecutor",
]

ORDERS = ("linear", "bfs", "dfs")


@dataclass(frozen=True)
class SearchOptions:
    symmetry: bool = True
    verify_lb: bool = True
    processes: int = 1
    order: str = "linear"
    time_limit: float | None = None  # wall-clock budget for the whole search
    mem_limit_mb: int | None = None  # absolute address-space cap per worker
    backend: str | None = None  # backend spec; None picks the default

    def build_options(self) -> BuildOptions:
        return BuildOptions(symmetry=self.symmetry)


@dataclass
class SolveOutcome:
    """Terminal result of one candidate value."""

    k: int
    status: SolveStatus
    labeling: tuple[int, ...] | None = None
    seconds: float = 0.0
    num_vars: int = 0
    num_clauses: int = 0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "status": str(self.status),
            "seconds": round(self.seconds, 4),
            "vars": self.num_vars,
            "clauses": self.num_clauses,
        }


class SearchState:
    """Shared bounds window plus the per-candidate outcome log.

    k_sat only increases and k_unsat only decreases; recording an answer
    that would cross them is an integrity violation, because a sound
    monotone problem can never produce one.
    """

    def __init__(self, lb: int, ub: int, n: int, lb_assumed: bool = False):
        if lb > ub:
            raise InputError(f"empty candidate window [{lb}, {ub}]")
        self.lb = lb
        self.ub = ub
        self.n = n
        self.k_sat = lb if lb_assumed else lb - 1
        self.k_unsat = ub + 1
        self.lb_assumed = lb_assumed
        self.outcomes: list[SolveOutcome] = []
        self.labeling: tuple[int, ...] | None = None
        self.proven_sat: set[int] = set()
        self.proven_unsat: set[int] = set()
        self.wall_seconds = 0.0
        self.processes = 1
        self.order = "linear"

    def record(self, outcome: SolveOutcome) -> None:
        self.outcomes.append(outcome)
        if outcome.status is SolveStatus.SAT:
            if outcome.k >= self.k_unsat:
                raise IntegrityError(
                    f"SAT at {outcome.k} contradicts proven UNSAT at {self.k_unsat}"
                )
            self.proven_sat.add(outcome.k)
            if outcome.k > self.k_sat or (outcome.k == self.k_sat and self.labeling is None):
                self.k_sat = outcome.k
                self.labeling = outcome.labeling
        elif outcome.status is SolveStatus.UNSAT:
            if outcome.k <= self.k_sat and not (self.lb_assumed and self.k_sat == self.lb):
                raise IntegrityError(
                    f"UNSAT at {outcome.k} contradicts proven SAT at {self.k_sat}"
                )
            self.proven_unsat.add(outcome.k)
            self.k_unsat = min(self.k_unsat, outcome.k)
        if self.k_sat >= self.k_unsat:
            raise IntegrityError(f"window inverted: k_sat={self.k_sat} k_unsat={self.k_unsat}")

    @property
    def k_opt(self) -> int:
        return self.k_sat

    @property
    def witnessed(self) -> bool:
        """The answer k_sat is backed by a labeling, triviality, or trust in lb."""
        if self.labeling is not None:
            return True
        if self.k_sat <= 1:
            return True  # every bijection reaches 1
        return self.lb_assumed and self.k_sat == self.lb

    @property
    def certified(self) -> bool:
        if not self.witnessed or self.k_sat < 1:
            return False
        if self.k_sat == self.n // 2:
            return True  # no labeling can exceed half the ring
        return self.k_unsat == self.k_sat + 1 and self.k_unsat in self.proven_unsat

    def to_dict(self, instance: str, graph: Graph) -> dict:
        return {
            "instance": instance,
            "n": graph.n,
            "m": graph.m,
            "lb": self.lb,
            "ub": self.ub,
            "k_opt": self.k_opt,
            "certified": self.certified,
            "lb_assumed": self.lb_assumed,
            "labeling": list(self.labeling) if self.labeling else None,
            "per_k": [o.to_dict() for o in self.outcomes],
            "wall_seconds": round(self.wall_seconds, 3),
            "processes": self.processes,
            "order": self.order,
        }


def solve_decision(
    g: Graph,
    k: int,
    options: SearchOptions,
    backend=None,
    time_limit: float | None = None,
    cancel=None,
) -> SolveOutcome:
    """Build and solve one candidate; SAT answers carry a verified labeling.

    k <= 1 never reaches the solver: any bijection works, so the identity
    labeling is returned as a trivial witness.
    """
    if k <= 1:
        labels = identity_labeling(g.n)
        return SolveOutcome(k, SolveStatus.SAT, labels)
    try:
        instance = build_instance(g, k, options.build_options())
    except MemoryError:
        return SolveOutcome(k, SolveStatus.MEMOUT)
    backend = backend or get_backend(options.backend)
    status, model, seconds = backend.solve(instance.formula, time_limit, cancel)
    labeling = None
    if status is SolveStatus.SAT:
        labeling = instance.decode(model)
        achieved = cab_of_labeling(g, labeling)
        if achieved < k:
            raise IntegrityError(
                f"decoded labeling reaches only {achieved} < k={k}; encoding unsound"
            )
    return SolveOutcome(
        k, status, labeling, seconds, instance.num_vars, instance.num_clauses
    )


def candidate_order(lo: int, hi: int, order: str) -> list[int]:
    """Candidate sequence over [lo, hi].

    "linear" ascends.  "bfs"/"dfs" linearize the midpoint tree whose root
    is the window midpoint and whose children are the midpoints of the two
    half windows, so early answers prune aggressively in either direction.
    """
    if order not in ORDERS:
        raise InputError(f"unknown order {order!r}; pick one of {ORDERS}")
    if lo > hi:
        return []
    if order == "linear":
        return list(range(lo, hi + 1))
    result: list[int] = []
    if order == "dfs":
        def visit(a: int, b: int) -> None:
            if a > b:
                return
            mid = (a + b) // 2
            result.append(mid)
            visit(a, mid - 1)
            visit(mid + 1, b)

        visit(lo, hi)
    else:
        pending = [(lo, hi)]
        while pending:
            a, b = pending.pop(0)
            if a > b:
                continue
            mid = (a + b) // 2
            result.append(mid)
            pending.append((a, mid - 1))
            pending.append((mid + 1, b))
    return result


def _effective_window(g: Graph, bounds: BoundRange) -> tuple[int, int]:
    if g.m == 0:
        raise InputError("cannot search an edgeless graph: objective undefined")
    if bounds.lb > bounds.ub:
        raise InputError(f"invalid bounds [{bounds.lb}, {bounds.ub}]")
    clamped = bounds.clamped(g.n)
    return clamped.lb, clamped.ub


def iterative_search(g: Graph, bounds: BoundRange, options: SearchOptions | None = None) -> SearchState:
    """Ascending scan: record SAT answers, stop at the first UNSAT.

    A budget breach (timeout or memory) also stops the scan; the state
    then carries proven bounds without a certificate.
    """
    options = options or SearchOptions()
    lb, ub = _effective_window(g, bounds)
    state = SearchState(lb, ub, g.n, lb_assumed=not options.verify_lb)
    state.order = "linear"
    start = time.monotonic()
    deadline = start + options.time_limit if options.time_limit is not None else None
    backend = get_backend(options.backend)
    first = lb if options.verify_lb else lb + 1
    for k in range(first, ub + 1):
        remaining = None
        if deadline is not None:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
        outcome = solve_decision(g, k, options, backend, remaining)
        state.record(outcome)
        if outcome.status is not SolveStatus.SAT:
            break
    _attach_trivial_witness(state, g)
    state.wall_seconds = time.monotonic() - start
    return state


def _attach_trivial_witness(state: SearchState, g: Graph) -> None:
    """An optimum of 1 needs no solver run: any bijection reaches it."""
    if state.k_sat == 1 and state.labeling is None:
        state.labeling = identity_labeling(g.n)


class ProcessExecutor:
    """Worker pool backed by OS processes; cancellation terminates workers.

    Each worker builds and solves one candidate and writes a single result
    message back through its pipe.  A worker killed before reporting is
    mapped to CANCELLED when we asked for it, MEMOUT when a memory cap was
    set, and a backend failure otherwise.
    """

    def __init__(self, g: Graph, options: SearchOptions):
        import multiprocessing

        self._ctx = multiprocessing.get_context("fork")
        self._graph = g
        self._options = options

    def launch(self, k: int, time_limit: float | None):
        recv, send = self._ctx.Pipe(duplex=False)
        proc = self._ctx.Process(
            target=_worker_main,
            args=(send, self._graph, k, self._options, time_limit),
            daemon=True,
        )
        proc.start()
        send.close()
        return _WorkerHandle(k, proc, recv)

    def wait_any(self, handles: list, timeout: float | None = None) -> list:
        from multiprocessing.connection import wait

        ready = wait([h.conn for h in handles], timeout)
        done = []
        for handle in list(handles):
            if handle.conn in ready:
                done.append((handle, self._collect(handle)))
        return done

    def cancel(self, handle) -> SolveOutcome:
        """Terminate a worker; a result that raced in still counts."""
        handle.cancelled = True
        if handle.conn.poll():
            outcome = self._collect(handle)
            handle.proc.terminate()
            handle.proc.join()
            return outcome
        handle.proc.terminate()
        handle.proc.join()
        handle.conn.close()
        return SolveOutcome(handle.k, SolveStatus.CANCELLED)

    def shutdown(self, handles: list) -> None:
        for handle in handles:
            self.cancel(handle)

    def _collect(self, handle) -> SolveOutcome:
        try:
            payload = handle.conn.recv()
        except EOFError:
            payload = None
        finally:
            handle.conn.close()
        handle.proc.join()
        if payload is None:
            if handle.cancelled:
                return SolveOutcome(handle.k, SolveStatus.CANCELLED)
            if self._options.mem_limit_mb is not None:
                return SolveOutcome(handle.k, SolveStatus.MEMOUT)
            raise BackendError(f"worker for k={handle.k} died without reporting")
        if payload.get("error"):
            raise BackendError(f"worker for k={handle.k} failed:\n{payload['error']}")
        return SolveOutcome(
            payload["k"],
            SolveStatus(payload["status"]),
            tuple(payload["labeling"]) if payload["labeling"] else None,
            payload["seconds"],
            payload["vars"],
            payload["clauses"],
        )


class _WorkerHandle:
    __slots__ = ("k", "proc", "conn", "cancelled")

    def __init__(self, k, proc, conn):
        self.k = k
        self.proc = proc
        self.conn = conn
        self.cancelled = False


def _worker_main(conn, g: Graph, k: int, options: SearchOptions, time_limit: float | None):
    try:
        if options.mem_limit_mb is not None:
            import resource

            cap = options.mem_limit_mb * 1024 * 1024
            resource.setrlimit(resource.RLIMIT_AS, (cap, cap))
        outcome = solve_decision(g, k, options, time_limit=time_limit)
        conn.send(
            {
                "k": outcome.k,
                "status": str(outcome.status),
                "labeling": list(outcome.labeling) if outcome.labeling else None,
                "seconds": outcome.seconds,
                "vars": outcome.num_vars,
                "clauses": outcome.num_clauses,
                "error": None,
            }
        )
    except MemoryError:
        conn.send({"k": k, "status": "MEMOUT", "labeling": None, "seconds": 0.0,
                   "vars": 0, "clauses": 0, "error": None})
    except Exception:
        conn.send({"k": k, "status": "ERROR", "labeling": None, "seconds": 0.0,
                   "vars": 0, "clauses": 0, "error": traceback.format_exc()})
    finally:
        conn.close()


def parallel_search(
    g: Graph,
    bounds: BoundRange,
    options: SearchOptions | None = None,
    executor=None,
) -> SearchState:
    """Pool-based search over the candidate window.

    Answers prune in both directions: a SAT at k cancels workers below k,
    an UNSAT at k cancels workers above, and replacements are popped from
    the candidate queue restricted to the open interval (k_sat, k_unsat).
    Budget breaches leave gaps but do not stop the remaining candidates.
    """
    options = options or SearchOptions()
    if options.processes < 1:
        raise InputError(f"need at least one process, got {options.processes}")
    lb, ub = _effective_window(g, bounds)
    state = SearchState(lb, ub, g.n, lb_assumed=not options.verify_lb)
    state.processes = options.processes
    state.order = options.order
    start = time.monotonic()
    deadline = start + options.time_limit if options.time_limit is not None else None

    first = lb if options.verify_lb else lb + 1
    queue = candidate_order(first, ub, options.order)

    # Values at or below 1 are trivially feasible; answer them inline.
    for k in [k for k in queue if k <= 1]:
        state.record(solve_decision(g, k, options))
    queue = [k for k in queue if k > 1]

    executor = executor or ProcessExecutor(g, options)
    active: list[_WorkerHandle] = []

    def eligible(k: int) -> bool:
        return state.k_sat < k < state.k_unsat

    def refill() -> None:
        while len(active) < options.processes:
            queue[:] = [k for k in queue if eligible(k)]
            if not queue:
                return
            if deadline is not None and deadline - time.monotonic() <= 0:
                return
            k = queue.pop(0)
            remaining = deadline - time.monotonic() if deadline is not None else None
            active.append(executor.launch(k, remaining))

    try:
        refill()
        while active:
            done = executor.wait_any(active)
            for handle, _ in done:
                active.remove(handle)
            for _, outcome in done:
                state.record(outcome)
                if outcome.status is SolveStatus.SAT:
                    doomed = [h for h in active if h.k < outcome.k]
                elif outcome.status is SolveStatus.UNSAT:
                    doomed = [h for h in active if h.k > outcome.k]
                else:
                    doomed = []
                for victim in doomed:
                    active.remove(victim)
                    state.record(executor.cancel(victim))
            refill()
    finally:
        executor.shutdown(active)
    _attach_trivial_witness(state, g)
    state.wall_seconds = time.monotonic() - start
    return state


@dataclass
class VerifyReport:
    ok: bool
    k_opt: int
    certified: bool
    labeling_value: int | None
    oracle_value: int | None = None
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        status = "ok" if self.ok else "FAILED"
        out = [f"verify: {status}; k_opt={self.k_opt} certified={self.certified}"]
        if self.labeling_value is not None:
            out.append(f"labeling achieves {self.labeling_value}")
        if self.oracle_value is not None:
            out.append(f"exhaustive oracle value {self.oracle_value}")
        out.extend(self.notes)
        return out


def verify_result(g: Graph, state: SearchState, oracle_check: bool = False) -> VerifyReport:
    """Re-derive everything checkable about a finished search.

    The stored labeling is re-evaluated from scratch; the certificate flag
    is recomputed from the outcome log; optionally the optimum is replayed
    against the exhaustive oracle (small graphs only).  Any mismatch is an
    integrity failure, not a soft warning.
    """
    notes = []
    value = None
    if state.labeling is not None:
        value = cab_of_labeling(g, state.labeling)
        if value < state.k_sat:
            raise IntegrityError(
                f"stored labeling achieves {value}, below claimed k_opt={state.k_sat}"
            )

    if state.certified:
        closed = state.k_unsat == state.k_sat + 1 and state.k_unsat in state.proven_unsat
        capped = state.k_sat == g.n // 2
        if not (closed or capped):
            raise IntegrityError("certified flag set without an infeasibility proof")
        if not state.witnessed:
            raise IntegrityError("certified flag set without a feasibility witness")
        if state.lb_assumed and state.labeling is None and state.k_sat > 1:
            notes.append("optimum rests on an assumed-feasible lower bound")
    else:
        lo = max(state.k_sat, 1) if state.witnessed else 1
        hi = min(state.k_unsat - 1, g.n // 2)
        notes.append(f"bounds only: optimum in [{lo}, {hi}], not certified")

    oracle_value = None
    if oracle_check:
        from .oracle import brute_force_cab

        oracle_value = brute_force_cab(g).cab
        if state.certified and oracle_value != state.k_opt:
            raise IntegrityError(
                f"oracle says {oracle_value}, search certified {state.k_opt}"
            )
    return VerifyReport(True, state.k_opt, state.certified, value, oracle_value, notes)
