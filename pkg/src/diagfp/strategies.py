"""Exploration strategies over the abstract test-solver contract.

Preferred-last (PLS) repeatedly asks "is there a candidate my set does not
cover?" and collects counterexamples; the refinement variant (PLS+r) walks
each new candidate down to a minimal one first.  Preferred-first (PFS) pops
the best untested hypothesis, tests its candidacy and expands its children on
failure; the `e` variant prunes hypotheses whose removal keeps the open+result
set covering, and the `c` variant replaces children by conflict-directed
successors.  All four PFS variants share one loop.

Every element PFS ever stores in its result set is a minimal candidate, so a
budget-exhausted run still returns sound partial output (carried by the
BudgetExhausted error).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heappop, heappush

from .contract import Conflict, TestOutcome, TestRequest
from .errors import BudgetExhausted, DiagError
from .hypothesis import (Hypothesis, Space, children, leq, lt, min_antichain,
                         order_key, otimes)
from .properties import (NEG_DESC, member, question_candidate,
                         question_coverage, question_minimal)

DEFAULT_ITERATION_CAP = 10_000

PFS_VARIANTS = ("plain", "e", "c", "ec")

STRATEGIES = ("pls", "pls-r", "pfs", "pfs-e", "pfs-c", "pfs-ec")


@dataclass
class DiagnosisResult:
    minimal_candidates: list
    stats: dict = field(default_factory=dict)

    def canon(self) -> list:
        return [h.canon() for h in self.minimal_candidates]


def _result(space, hyps, stats) -> DiagnosisResult:
    ordered = sorted(set(hyps), key=order_key)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if leq(a, b, space) or leq(b, a, space):
                raise DiagError("result is not an antichain")
    return DiagnosisResult(ordered, stats)


class _Run:
    def __init__(self, solver, strategy):
        self.solver = solver
        self.strategy = strategy
        self.t0 = time.perf_counter()
        self.tests0 = solver.stats.tests
        self.expansions = 0
        self.cache_hits = 0
        self.conflicts_recorded = 0

    def stats(self) -> dict:
        return {
            "strategy": self.strategy,
            "tests": self.solver.stats.tests - self.tests0,
            "expansions": self.expansions,
            "cache_hits": self.cache_hits,
            "conflicts_recorded": self.conflicts_recorded,
            "wall_time_s": round(time.perf_counter() - self.t0, 6),
        }


def run_pls(solver, space: Space,
            iteration_cap: int = DEFAULT_ITERATION_CAP) -> DiagnosisResult:
    run = _Run(solver, "pls")
    found = []
    while True:
        if run.solver.stats.tests - run.tests0 >= iteration_cap:
            raise BudgetExhausted(
                "pls hit its test cap",
                partial=_result(space, min_antichain(found, space),
                                run.stats()),
                stats=run.stats())
        outcome = solver.solve(
            TestRequest(question_coverage(found, space), space))
        if not outcome.is_candidate:
            return _result(space, min_antichain(found, space), run.stats())
        delta = outcome.candidate
        assert not any(leq(s, delta, space) for s in found)
        found.append(delta)


def run_pls_r(solver, space: Space,
              iteration_cap: int = DEFAULT_ITERATION_CAP) -> DiagnosisResult:
    run = _Run(solver, "pls-r")

    def budget():
        if run.solver.stats.tests - run.tests0 >= iteration_cap:
            raise BudgetExhausted(
                "pls-r hit its test cap",
                partial=_result(space, min_antichain(found, space),
                                run.stats()),
                stats=run.stats())

    found = []
    while True:
        budget()
        outcome = solver.solve(
            TestRequest(question_coverage(found, space), space))
        if not outcome.is_candidate:
            return _result(space, found, run.stats())
        delta = outcome.candidate
        while True:
            budget()
            refine = solver.solve(
                TestRequest(question_minimal(delta, space), space))
            if not refine.is_candidate:
                break
            assert lt(refine.candidate, delta, space)
            delta = refine.candidate
        found.append(delta)


def conflict_successors(h: Hypothesis, conflict: Conflict,
                        space: Space) -> list:
    """Minimal descendants of ``h`` outside the conflict's hypothesis set.

    Only neg-desc members matter: a desc property of the refuted hypothesis
    holds for every descendant, so it can never be the contradicted one.  An
    empty result means the conflict refutes the entire cone under ``h``.
    """
    if not member(h, conflict, space):
        raise DiagError("refuted hypothesis must lie inside the conflict")
    anchors = [p.anchor for p in conflict if p.kind == NEG_DESC]
    if not anchors:
        return []
    merged = []
    for g in anchors:
        merged.extend(otimes(h, g, space))
    return min_antichain(merged, space)


def run_pfs(solver, space: Space, variant: str = "ec",
            iteration_cap: int = DEFAULT_ITERATION_CAP,
            conflict_cache: bool = True) -> DiagnosisResult:
    if variant not in PFS_VARIANTS:
        raise DiagError(f"unknown pfs variant {variant!r}")
    run = _Run(solver, "pfs" if variant == "plain" else f"pfs-{variant}")
    use_essential = variant in ("e", "ec")
    use_conflicts = variant in ("c", "ec")

    open_heap = []
    open_set = set()
    result = []
    conflicts = []

    def push(h):
        if h not in open_set:
            open_set.add(h)
            heappush(open_heap, (order_key(h), h))

    push(space.h0)
    while open_heap:
        run.expansions += 1
        if run.expansions > iteration_cap:
            raise BudgetExhausted(
                f"pfs({variant}) hit its expansion cap",
                partial=_result(space, result, run.stats()),
                stats=run.stats())
        _, h = heappop(open_heap)
        open_set.remove(h)
        if any(leq(g, h, space) for g in open_set) or \
           any(leq(g, h, space) for g in result):
            continue
        if use_essential:
            others = list(open_set) + result
            covered = solver.solve(
                TestRequest(question_coverage(others, space), space))
            if not covered.is_candidate:
                if use_conflicts and conflict_cache:
                    conflicts.append(covered.conflict)
                    run.conflicts_recorded += 1
                continue
        conflict = None
        if use_conflicts and conflict_cache:
            for c in conflicts:
                if member(h, c, space):
                    conflict = c
                    run.cache_hits += 1
                    break
        if conflict is None:
            outcome = solver.solve(
                TestRequest(question_candidate(h, space), space))
            if outcome.is_candidate:
                assert outcome.candidate == h
                for g in result:
                    assert not leq(g, h, space) and not leq(h, g, space)
                result.append(h)
                continue
            conflict = outcome.conflict
            if use_conflicts:
                conflicts.append(conflict)
                run.conflicts_recorded += 1
        successors = conflict_successors(h, conflict, space) if use_conflicts \
            else children(h, space)
        for s in successors:
            push(s)
    return _result(space, result, run.stats())


@dataclass
class Verdict:
    ok: bool
    condition: str | None = None
    witness: object = None

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out["condition"] = self.condition
            if isinstance(self.witness, Hypothesis):
                out["witness"] = self.witness.canon()
            elif isinstance(self.witness, tuple):
                out["witness"] = [w.canon() for w in self.witness]
        return out


def verify_minimal_diagnosis(hyps, solver, space: Space) -> Verdict:
    """Check the three-condition characterisation of the minimal diagnosis:
    every element is a candidate, no element dominates another, and the set
    covers the diagnosis."""
    items = sorted(set(hyps), key=order_key)
    for h in items:
        outcome = solver.solve(
            TestRequest(question_candidate(h, space), space))
        if not outcome.is_candidate:
            return Verdict(False, "candidacy", h)
    for a in items:
        for b in items:
            if a != b and leq(a, b, space):
                return Verdict(False, "domination", (a, b))
    outcome = solver.solve(
        TestRequest(question_coverage(items, space), space))
    if outcome.is_candidate:
        return Verdict(False, "coverage", outcome.candidate)
    return Verdict(True)


def run_strategy(name: str, solver, space: Space,
                 iteration_cap: int = DEFAULT_ITERATION_CAP) -> DiagnosisResult:
    if name == "pls":
        return run_pls(solver, space, iteration_cap)
    if name == "pls-r":
        return run_pls_r(solver, space, iteration_cap)
    if name.startswith("pfs"):
        variant = "plain" if name == "pfs" else name.split("-", 1)[1]
        return run_pfs(solver, space, variant, iteration_cap)
    raise DiagError(f"unknown strategy {name!r}")


def terminating_strategies(space: Space) -> tuple:
    """Strategies with a termination guarantee on this space: every strategy
    on finite spaces, and the refining/essential ones on the infinite spaces
    (plain PFS and PFS+c provably diverge there when conflicts stay local)."""
    if space.is_finite():
        return STRATEGIES
    return ("pls", "pls-r", "pfs-e", "pfs-ec")
