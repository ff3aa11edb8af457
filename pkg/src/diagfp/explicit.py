"""Exact test solver by explicit-state breadth-first search.

The search runs over the product of the model's global states, an
observation tracker, and a per-space summary of the fault behaviour seen so
far (fault set / saturated counts / per-anchor subsequence monitors).  A goal
state has consumed the whole observation and satisfies every requested
property.  Exhaustion yields the trivial conflict (the full request), which
is the least informative legal conflict.

The same machinery provides the brute-force oracle for minimal diagnoses and
the horizon-fit certificate used to compare against the bounded SAT backend.
"""

from __future__ import annotations

from collections import deque

from .contract import Conflict, SolverStats, TestOutcome, TestRequest
from .desmodel import (DesModel, Observation, trace_hypothesis,
                       trace_in_model, trace_matches_observation)
from .errors import DiagError, StateBudgetExceeded
from .hypothesis import (MHS, SHS, SQHS, Space, leq, min_antichain, multi_hyp,
                         seq_hyp, set_hyp)
from .properties import ANC, DESC, NEG_ANC, NEG_DESC, member

DEFAULT_STATE_BUDGET = 5_000_000


# ----------------------------------------------------------- fault summary

class _Summary:
    """Tracks just enough about past fault events to decide the properties."""

    def __init__(self, space: Space, props):
        self.space = space
        self.faults = space.faults
        if space.kind == MHS:
            caps = {}
            for p in props:
                for f in self.faults:
                    need = p.anchor.count(f) + 1
                    if need > caps.get(f, 1):
                        caps[f] = need
            self.caps = tuple(caps.get(f, 1) for f in self.faults)
        elif space.kind == SQHS:
            self.anchors = [p.anchor.data for p in props]

    def initial(self):
        if self.space.kind == SHS:
            return frozenset()
        if self.space.kind == MHS:
            return (0,) * len(self.faults)
        # per anchor: (desc embedding index, anc leftmost position or -1)
        return tuple((0, 0) for _ in self.anchors)

    def after(self, summary, fault):
        if self.space.kind == SHS:
            return summary | {fault}
        if self.space.kind == MHS:
            i = self.faults.index(fault)
            counts = list(summary)
            if counts[i] < self.caps[i]:
                counts[i] += 1
            return tuple(counts)
        out = []
        for (didx, apos), anchor in zip(summary, self.anchors):
            if didx < len(anchor) and anchor[didx] == fault:
                didx += 1
            if apos >= 0:
                nxt = -1
                for q in range(apos, len(anchor)):
                    if anchor[q] == fault:
                        nxt = q + 1
                        break
                apos = nxt
            out.append((didx, apos))
        return tuple(out)

    def accepts(self, summary, props) -> bool:
        if self.space.kind == SHS:
            for p in props:
                anchor = p.anchor.data
                if p.kind == DESC and not anchor <= summary:
                    return False
                if p.kind == ANC and not summary <= anchor:
                    return False
                if p.kind == NEG_DESC and anchor <= summary:
                    return False
                if p.kind == NEG_ANC and summary <= anchor:
                    return False
            return True
        if self.space.kind == MHS:
            for p in props:
                need = tuple(p.anchor.count(f) for f in self.faults)
                if p.kind == DESC and any(c < n for c, n in zip(summary, need)):
                    return False
                if p.kind == ANC and any(c > n for c, n in zip(summary, need)):
                    return False
                if p.kind == NEG_DESC and all(c >= n for c, n in zip(summary, need)):
                    return False
                if p.kind == NEG_ANC and all(c <= n for c, n in zip(summary, need)):
                    return False
            return True
        for (didx, apos), anchor, p in zip(summary, self.anchors, props):
            embedded = didx == len(anchor)
            within = apos >= 0
            if p.kind == DESC and not embedded:
                return False
            if p.kind == NEG_DESC and embedded:
                return False
            if p.kind == ANC and not within:
                return False
            if p.kind == NEG_ANC and within:
                return False
        return True


# ------------------------------------------------------------------ search

def _search(model: DesModel, obs: Observation, space: Space, props,
            state_budget: int, gap_caps=None, stats: SolverStats | None = None):
    """Core BFS; returns a witness trace or None.

    ``gap_caps`` = (per-gap cap, trailing cap) restricts the number of
    unobservable events per observation gap, which certifies that a witness
    fits the SAT backend's pinned-timestep shape.
    """
    if space.kind not in (SHS, MHS, SQHS):
        raise DiagError(f"explicit solver does not handle space {space.kind}")
    summary = _Summary(space, props)
    want = obs.sequence
    events = model.events
    observable = frozenset(model.observable)
    faults = frozenset(model.faults)

    def mk(gstate, tracker, summ, gap):
        if gap_caps is None:
            return (gstate, tracker, summ)
        return (gstate, tracker, summ, gap)

    start_nodes = [mk(g, 0, summary.initial(), 0)
                   for g in model.initial_global_states()]
    parent = {node: None for node in start_nodes}
    queue = deque(start_nodes)
    visited = len(parent)
    expanded = 0

    def is_goal(node):
        return node[1] == len(want) and summary.accepts(node[2], props)

    goal = next((node for node in start_nodes if is_goal(node)), None)
    while queue and goal is None:
        node = queue.popleft()
        expanded += 1
        gstate, tracker, summ = node[0], node[1], node[2]
        gap = node[3] if gap_caps is not None else 0
        for e in events:
            if e in observable:
                if tracker >= len(want) or want[tracker] != e:
                    continue
                tracker2, gap2 = tracker + 1, 0
            else:
                tracker2 = tracker
                gap2 = gap + 1
                if gap_caps is not None:
                    cap = gap_caps[0] if tracker < len(want) else gap_caps[1]
                    if gap2 > cap:
                        continue
            summ2 = summary.after(summ, e) if e in faults else summ
            for gstate2 in model.step(gstate, e):
                node2 = mk(gstate2, tracker2, summ2, gap2)
                if node2 in parent:
                    continue
                parent[node2] = (node, e)
                visited += 1
                if visited > state_budget:
                    raise StateBudgetExceeded(
                        f"explicit search exceeded {state_budget} states")
                if is_goal(node2):
                    goal = node2
                    break
                queue.append(node2)
            if goal is not None:
                break

    if stats is not None:
        stats.extra["visited"] = stats.extra.get("visited", 0) + visited
        stats.extra["expanded"] = stats.extra.get("expanded", 0) + expanded
    if goal is None:
        return None
    trace = []
    node = goal
    while parent[node] is not None:
        node, e = parent[node]
        trace.append(e)
    trace.reverse()
    return tuple(trace)


def solve(model: DesModel, obs: Observation, request: TestRequest,
          state_budget: int = DEFAULT_STATE_BUDGET,
          stats: SolverStats | None = None) -> TestOutcome:
    """Decide a property-represented test exactly."""
    space = request.space
    props = list(request.props)
    trace = _search(model, obs, space, props, state_budget, stats=stats)
    if trace is None:
        return TestOutcome.failed(Conflict(tuple(props)))
    hyp = trace_hypothesis(trace, model, space)
    if not (trace_in_model(trace, model)
            and trace_matches_observation(trace, model, obs)
            and member(hyp, props, space)):
        raise DiagError("explicit solver produced an invalid witness")
    return TestOutcome.found(hyp, trace)


def solve_coverage(model: DesModel, obs: Observation, hyps, space: Space,
                   state_budget: int = DEFAULT_STATE_BUDGET,
                   stats: SolverStats | None = None) -> TestOutcome:
    from .properties import question_coverage
    request = TestRequest(question_coverage(hyps, space), space)
    return solve(model, obs, request, state_budget, stats)


def fits_horizon(model: DesModel, obs: Observation, request: TestRequest,
                 steps_per_obs: int,
                 state_budget: int = DEFAULT_STATE_BUDGET) -> bool:
    """Is there a witness that fits the SAT shape at this steps-per-obs bound?

    The certificate schedules one event per timestep: at most
    ``steps_per_obs - 1`` unobservable events per observation gap and at most
    ``steps_per_obs`` after the final observation.
    """
    caps = (steps_per_obs - 1, steps_per_obs)
    trace = _search(model, obs, request.space, list(request.props),
                    state_budget, gap_caps=caps)
    return trace is not None


# ------------------------------------------------------------------ oracle

def certified_bound(model: DesModel, obs: Observation) -> int:
    """Trace-length bound sufficient for the minimal diagnosis: loop-free
    witnesses exist for every minimal candidate."""
    prod = 1
    for comp in model.components:
        prod *= len(comp.states)
    return (prod + 1) * (len(obs) + 1)


def _product_graph(model: DesModel, obs: Observation):
    """Forward-reachable (global state, tracker) graph of the observed model,
    and the subset from which the observation can still complete."""
    want = obs.sequence
    observable = frozenset(model.observable)
    initial = [(g, 0) for g in model.initial_global_states()]
    succs = {}
    queue = deque(initial)
    seen = set(initial)
    while queue:
        gstate, tracker = queue.popleft()
        out = []
        for e in model.events:
            if e in observable:
                if tracker >= len(want) or want[tracker] != e:
                    continue
                tracker2 = tracker + 1
            else:
                tracker2 = tracker
            for gstate2 in model.step(gstate, e):
                node2 = (gstate2, tracker2)
                out.append((e, node2))
                if node2 not in seen:
                    seen.add(node2)
                    queue.append(node2)
        succs[(gstate, tracker)] = out
    preds = {node: [] for node in succs}
    for node, out in succs.items():
        for _, node2 in out:
            preds[node2].append(node)
    co_reach = {node for node in succs if node[1] == len(want)}
    queue = deque(co_reach)
    while queue:
        node = queue.popleft()
        for prev in preds[node]:
            if prev not in co_reach:
                co_reach.add(prev)
                queue.append(prev)
    return succs, co_reach


def _empty_acc(space: Space):
    if space.kind == SHS:
        return frozenset()
    if space.kind == MHS:
        return (0,) * len(space.faults)
    return ()


def _hyp_of(space: Space, acc):
    if space.kind == SHS:
        return set_hyp(acc)
    if space.kind == MHS:
        return multi_hyp(dict(zip(space.faults, acc)))
    return seq_hyp(acc)


def _accumulate(space: Space, acc, fault):
    if space.kind == SHS:
        return acc | {fault}
    if space.kind == MHS:
        i = space.faults.index(fault)
        return acc[:i] + (acc[i] + 1,) + acc[i + 1:]
    return acc + (fault,)


def oracle_diagnose(model: DesModel, obs: Observation, space: Space,
                    bound: int | None = None,
                    state_budget: int = DEFAULT_STATE_BUDGET) -> list:
    """Reference minimal diagnosis by bounded exhaustive search.

    Explores (global state, tracker, accumulated hypothesis) triples breadth
    first.  A node whose hypothesis already dominates a discovered candidate
    cannot contribute a new minimal candidate and is not expanded.  The bound
    must be certified by the caller; :func:`certified_bound` is sufficient.
    """
    if space.kind not in (SHS, MHS, SQHS):
        raise DiagError(f"oracle does not handle space {space.kind}")
    succs, co_reach = _product_graph(model, obs)
    # every minimal candidate has a witness that is loop-free in the
    # (global state, tracker) product, so its depth is below the number of
    # reachable product nodes
    tight = len(succs)
    if bound is None or bound > tight:
        bound = tight
    want = obs.sequence
    faults = frozenset(model.faults)
    empty_acc = _empty_acc(space)
    start = [(g, 0, empty_acc) for g in model.initial_global_states()
             if (g, 0) in co_reach]
    seen = set(start)
    queue = deque((node, 0) for node in start)
    found = []

    def record(acc):
        hyp = _hyp_of(space, acc)
        if hyp not in found:
            found.append(hyp)

    for g, tracker, acc in start:
        if tracker == len(want):
            record(acc)
    while queue:
        (gstate, tracker, acc), depth = queue.popleft()
        if depth >= bound:
            continue
        hyp = _hyp_of(space, acc)
        if any(leq(c, hyp, space) for c in found):
            continue
        for e, (gstate2, tracker2) in succs[(gstate, tracker)]:
            if (gstate2, tracker2) not in co_reach:
                continue
            acc2 = _accumulate(space, acc, e) if e in faults else acc
            node2 = (gstate2, tracker2, acc2)
            if node2 in seen:
                continue
            seen.add(node2)
            if len(seen) > state_budget:
                raise StateBudgetExceeded(
                    f"oracle exceeded {state_budget} states")
            if tracker2 == len(want):
                record(acc2)
            queue.append((node2, depth + 1))
    return min_antichain(found, space)


def oracle_candidates(model: DesModel, obs: Observation, space: Space,
                      max_faults: int,
                      state_budget: int = DEFAULT_STATE_BUDGET) -> set:
    """All diagnosis candidates with at most ``max_faults`` fault events.

    Complete for that slice: a candidate with k faults has a witness whose
    fault-free segments are loop-free, so length <= (k+|obs|+1)*(states+1).
    """
    succs, co_reach = _product_graph(model, obs)
    # fault-free stretches of a witness can be made loop-free, so a candidate
    # with k fault events has a witness of depth (k+1) * |product| + k
    bound = (max_faults + 1) * (len(succs) + 1)
    want = obs.sequence
    faults = frozenset(model.faults)
    empty_acc = _empty_acc(space)
    start = [(g, 0, empty_acc) for g in model.initial_global_states()
             if (g, 0) in co_reach]
    seen = set(start)
    queue = deque((node, 0) for node in start)
    found = set()
    for g, tracker, acc in start:
        if tracker == len(want):
            found.add(_hyp_of(space, acc))
    while queue:
        (gstate, tracker, acc), depth = queue.popleft()
        if depth >= bound:
            continue
        for e, (gstate2, tracker2) in succs[(gstate, tracker)]:
            if (gstate2, tracker2) not in co_reach:
                continue
            if e in faults:
                acc2 = _accumulate(space, acc, e)
                if space.kind == SQHS and len(acc2) > max_faults:
                    continue
                if space.kind == MHS and sum(acc2) > max_faults:
                    continue
            else:
                acc2 = acc
            node2 = (gstate2, tracker2, acc2)
            if node2 in seen:
                continue
            seen.add(node2)
            if len(seen) > state_budget:
                raise StateBudgetExceeded(
                    f"candidate enumeration exceeded {state_budget} states")
            if tracker2 == len(want):
                found.add(_hyp_of(space, acc2))
            queue.append((node2, depth + 1))
    return found


class ExplicitSolver:
    """Test-solver contract implementation backed by the BFS search."""

    name = "explicit"

    def __init__(self, model: DesModel, obs: Observation, space: Space,
                 state_budget: int = DEFAULT_STATE_BUDGET):
        self.model = model
        self.obs = obs
        self.space = space
        self.state_budget = state_budget
        self.stats = SolverStats()

    def solve(self, request: TestRequest) -> TestOutcome:
        self.stats.tests += 1
        outcome = solve(self.model, self.obs, request, self.state_budget,
                        self.stats)
        if outcome.is_candidate:
            self.stats.sat_tests += 1
        else:
            self.stats.unsat_tests += 1
        return outcome
