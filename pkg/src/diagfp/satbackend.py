"""Bounded-reachability SAT test solver for DES.

A behaviour of parallel length ``n`` is encoded with one block of variables
per timestep: component-state variables ``s[..]@t``, event variables
``e[..]@t`` and transition variables ``t[..]@t``, constrained so that every
solution decodes to a path of the model.  The i-th observed event is pinned
at timestep ``steps_per_obs * i``; all other observable events are negated
everywhere.  The horizon is ``steps_per_obs * (|obs| + 1)``, leaving room for
unobservable behaviour after the final observation (and ``steps_per_obs``
steps when the observation is empty).

Each requested property is encoded behind a fresh assumption literal, so a
failed solve yields a conflict as the kernel's failed-assumption subset.
Completeness is relative to the horizon: a Failed outcome means "no witness
within n timesteps".
"""

from __future__ import annotations

from dataclasses import dataclass

from .contract import Conflict, SolverStats, TestOutcome, TestRequest
from .desmodel import (DesModel, Observation, trace_hypothesis,
                       trace_in_model, trace_matches_observation)
from .errors import DiagError, EncodingError
from .hypothesis import MHS, SHS, SQHS, Space
from .properties import ANC, DESC, NEG_ANC, NEG_DESC, Property, member
from .satcore import MiniSolver

_PAIRWISE_LIMIT = 8


@dataclass(frozen=True)
class EncodingParams:
    steps_per_obs: int = 7

    def __post_init__(self):
        if self.steps_per_obs < 1:
            raise DiagError("steps_per_obs must be >= 1")

    def horizon(self, obs_len: int) -> int:
        return self.steps_per_obs * (obs_len + 1)


class Cnf:
    """Clause store with a named-variable registry (deterministic indices)."""

    def __init__(self):
        self.names = ["<0>"]
        self.index = {}
        self.clauses = []

    @property
    def nvars(self) -> int:
        return len(self.names) - 1

    def var(self, name: str) -> int:
        idx = self.index.get(name)
        if idx is None:
            self.names.append(name)
            idx = len(self.names) - 1
            self.index[name] = idx
        return idx

    def has(self, name: str) -> bool:
        return name in self.index

    def add(self, lits) -> None:
        self.clauses.append(list(lits))

    def unit(self, lit: int) -> None:
        self.clauses.append([lit])

    def at_most_one(self, lits, label: str) -> None:
        """Pairwise for small groups, sequential (ladder) beyond."""
        lits = list(lits)
        if len(lits) <= _PAIRWISE_LIMIT:
            for i, a in enumerate(lits):
                for b in lits[i + 1:]:
                    self.add([-a, -b])
            return
        prev = None
        for i, x in enumerate(lits[:-1]):
            cur = self.var(f"seq[{label}.{i}]")
            self.add([-x, cur])
            if prev is not None:
                self.add([-prev, cur])
                self.add([-x, -prev])
            prev = cur
        self.add([-lits[-1], -prev])

    def exactly_one(self, lits, label: str) -> None:
        self.add(list(lits))
        self.at_most_one(lits, label)

    def to_dimacs(self, extra_comments=()) -> str:
        out = [f"c {i} {name}" for i, name in enumerate(self.names) if i]
        out.extend(f"c {line}" for line in extra_comments)
        out.append(f"p cnf {self.nvars} {len(self.clauses)}")
        for cl in self.clauses:
            out.append(" ".join(map(str, cl)) + " 0")
        return "\n".join(out) + "\n"


# ------------------------------------------------------------------- model

def encode_model(model: DesModel, obs_len: int, params: EncodingParams,
                 cnf: Cnf) -> None:
    n = params.horizon(obs_len)
    sv = {}
    ev = {}
    tv = {}
    for e in model.events:
        for t in range(1, n + 1):
            ev[e, t] = cnf.var(f"e[{e}]@{t}")
    for comp in model.components:
        for s in comp.states:
            for t in range(n + 1):
                sv[comp.name, s, t] = cnf.var(f"s[{comp.name}.{s}]@{t}")
        for i in range(len(comp.trans)):
            for t in range(1, n + 1):
                tv[comp.name, i, t] = cnf.var(f"t[{comp.name}.{i}]@{t}")

    for comp in model.components:
        by_target = {s: [] for s in comp.states}
        by_event = {}
        for i, (src, e, dst) in enumerate(comp.trans):
            by_target[dst].append(i)
            by_event.setdefault(e, []).append(i)
        for t in range(1, n + 1):
            for i, (src, e, dst) in enumerate(comp.trans):
                tr = tv[comp.name, i, t]
                cnf.add([-tr, sv[comp.name, dst, t]])
                cnf.add([-tr, sv[comp.name, src, t - 1]])
                cnf.add([-tr, ev[e, t]])
            for s in comp.states:
                # frame: a state newly reached needs a transition into it
                cnf.add([-sv[comp.name, s, t], sv[comp.name, s, t - 1]]
                        + [tv[comp.name, i, t] for i in by_target[s]])
            for e, idxes in by_event.items():
                cnf.add([-ev[e, t]] + [tv[comp.name, i, t] for i in idxes])
            cnf.at_most_one([ev[e, t] for e in by_event],
                            f"ev.{comp.name}@{t}")
        for t in range(n + 1):
            cnf.exactly_one([sv[comp.name, s, t] for s in comp.states],
                            f"st.{comp.name}@{t}")
        cnf.add([sv[comp.name, s, 0] for s in comp.init])


def encode_observation(model: DesModel, obs: Observation,
                       params: EncodingParams, cnf: Cnf) -> None:
    n = params.horizon(len(obs))
    k = params.steps_per_obs
    for t in range(1, n + 1):
        designated = obs.sequence[t // k - 1] if (t % k == 0
                                                  and t // k <= len(obs)) else None
        for e in model.observable:
            lit = cnf.var(f"e[{e}]@{t}")
            cnf.unit(lit if e == designated else -lit)


def encode_fault_interleaving(model: DesModel, obs_len: int,
                              params: EncodingParams, cnf: Cnf) -> None:
    """At most one fault event per timestep.

    Required whenever fault order matters (SqHS): the sequence encodings read
    the timestep order, and the decoded linearisation must not invent one.
    """
    n = params.horizon(obs_len)
    for t in range(1, n + 1):
        cnf.at_most_one([cnf.var(f"e[{f}]@{t}") for f in model.faults],
                        f"flt@{t}")


# -------------------------------------------------------------- properties

def _occ_var(cnf: Cnf, fault: str, n: int) -> int:
    """occ[f] <-> f occurred at some timestep."""
    name = f"occ[{fault}]"
    if cnf.has(name):
        return cnf.var(name)
    occ = cnf.var(name)
    lits = [cnf.var(f"e[{fault}]@{t}") for t in range(1, n + 1)]
    cnf.add([-occ] + lits)
    for lit in lits:
        cnf.add([-lit, occ])
    return occ


def _count_ge(cnf: Cnf, fault: str, j: int, n: int) -> int:
    """Threshold literal: at least ``j`` occurrences of ``fault``.

    Sequential-counter grid r[i][j] = "at least j among the first i steps",
    with pinned borders r[i][0]=true, r[0][j>=1]=false.
    """
    if j == 0:
        name = "const[true]"
        if not cnf.has(name):
            cnf.unit(cnf.var(name))
        return cnf.var(name)
    top = f"cnt[{fault}>={j}]@{n}"
    if cnf.has(top):
        return cnf.var(top)

    def r(i, jj):
        return cnf.var(f"cnt[{fault}>={jj}]@{i}")

    # build columns 1..j that are not present yet
    for jj in range(1, j + 1):
        if cnf.has(f"cnt[{fault}>={jj}]@{n}"):
            continue
        for i in range(n + 1):
            r(i, jj)
        cnf.unit(-r(0, jj))
        for i in range(1, n + 1):
            x = cnf.var(f"e[{fault}]@{i}")
            rij = r(i, jj)
            prev_same = r(i - 1, jj)
            if jj == 1:
                cnf.add([-rij, prev_same, x])
                cnf.add([-prev_same, rij])
                cnf.add([-x, rij])
            else:
                prev_less = r(i - 1, jj - 1)
                cnf.add([-rij, prev_same, prev_less])
                cnf.add([-rij, prev_same, x])
                cnf.add([-prev_same, rij])
                cnf.add([-prev_less, -x, rij])
    return cnf.var(top)


def _desc_chain(cnf: Cnf, anchor: tuple, n: int) -> int:
    """dh[i]@t <-> prefix of the anchor embedded in the fault word up to t."""
    key = ",".join(anchor)
    top = f"dh[{key}.{len(anchor)}]@{n}"
    if cnf.has(top):
        return cnf.var(top)

    def dh(i, t):
        return cnf.var(f"dh[{key}.{i}]@{t}")

    for t in range(n + 1):
        cnf.unit(dh(0, t))
    for i in range(1, len(anchor) + 1):
        cnf.unit(-dh(i, 0))
        fi = anchor[i - 1]
        for t in range(1, n + 1):
            x = cnf.var(f"e[{fi}]@{t}")
            cur, prev, prev_less = dh(i, t), dh(i, t - 1), dh(i - 1, t - 1)
            cnf.add([-cur, prev, prev_less])
            cnf.add([-cur, prev, x])
            cnf.add([-prev, cur])
            cnf.add([-prev_less, -x, cur])
    return cnf.var(top)


def _nofault_var(cnf: Cnf, faults: tuple, t: int) -> int:
    name = f"nofault@{t}"
    if cnf.has(name):
        return cnf.var(name)
    nf = cnf.var(name)
    lits = [cnf.var(f"e[{f}]@{t}") for f in faults]
    for lit in lits:
        cnf.add([-nf, -lit])
    cnf.add([nf] + lits)
    return nf


def _anc_chain(cnf: Cnf, anchor: tuple, faults: tuple, n: int) -> int:
    """ah[i]@t <-> fault word up to t embeds into the anchor's i-prefix.

    Case split on the (at most one) fault event at t:
      no fault   -> ah[i] persists;
      fault f    -> ah[i]@t <-> OR_{p<=i, anchor[p-1]=f} ah[p-1]@(t-1).
    Relies on the at-most-one-fault-per-timestep constraint.
    """
    key = ",".join(anchor)
    top = f"ah[{key}.{len(anchor)}]@{n}"
    if cnf.has(top):
        return cnf.var(top)

    def ah(i, t):
        return cnf.var(f"ah[{key}.{i}]@{t}")

    for i in range(len(anchor) + 1):
        cnf.unit(ah(i, 0))
    for t in range(1, n + 1):
        nf = _nofault_var(cnf, faults, t)
        for i in range(len(anchor) + 1):
            cur, prev = ah(i, t), ah(i, t - 1)
            cnf.add([-nf, -prev, cur])
            cnf.add([-nf, prev, -cur])
            for f in faults:
                x = cnf.var(f"e[{f}]@{t}")
                sources = [ah(p - 1, t - 1)
                           for p in range(1, i + 1) if anchor[p - 1] == f]
                cnf.add([-x, -cur] + sources)
                for src in sources:
                    cnf.add([-x, -src, cur])
    return cnf.var(top)


def encode_property(prop: Property, space: Space, model: DesModel,
                    params: EncodingParams, obs_len: int, cnf: Cnf,
                    act: int) -> None:
    """Emit the property's semantic clauses, each guarded by ``-act`` so the
    property binds only under its assumption literal."""
    n = params.horizon(obs_len)
    faults = tuple(model.faults)
    anchor = prop.anchor
    if space.kind == SHS:
        if prop.kind == DESC:
            for f in sorted(anchor.data):
                cnf.add([-act] + [cnf.var(f"e[{f}]@{t}")
                                  for t in range(1, n + 1)])
        elif prop.kind == ANC:
            for f in faults:
                if f not in anchor.data:
                    for t in range(1, n + 1):
                        cnf.add([-act, -cnf.var(f"e[{f}]@{t}")])
        elif prop.kind == NEG_DESC:
            cnf.add([-act] + [-_occ_var(cnf, f, n)
                              for f in sorted(anchor.data)])
        else:
            cnf.add([-act] + [_occ_var(cnf, f, n)
                              for f in faults if f not in anchor.data])
    elif space.kind == MHS:
        if prop.kind == DESC:
            for f in faults:
                if anchor.count(f) >= 1:
                    cnf.add([-act, _count_ge(cnf, f, anchor.count(f), n)])
        elif prop.kind == ANC:
            for f in faults:
                cnf.add([-act, -_count_ge(cnf, f, anchor.count(f) + 1, n)])
        elif prop.kind == NEG_DESC:
            cnf.add([-act] + [-_count_ge(cnf, f, anchor.count(f), n)
                              for f in faults if anchor.count(f) >= 1])
        else:
            cnf.add([-act] + [_count_ge(cnf, f, anchor.count(f) + 1, n)
                              for f in faults])
    elif space.kind == SQHS:
        seq = tuple(anchor.data)
        if prop.kind == DESC:
            cnf.add([-act, _desc_chain(cnf, seq, n)])
        elif prop.kind == NEG_DESC:
            cnf.add([-act, -_desc_chain(cnf, seq, n)])
        elif prop.kind == ANC:
            cnf.add([-act, _anc_chain(cnf, seq, faults, n)])
        else:
            cnf.add([-act, -_anc_chain(cnf, seq, faults, n)])
    else:
        raise DiagError(f"sat backend does not handle space {space.kind}")


# ------------------------------------------------------------------ solver

def _act_var(cnf: Cnf, prop: Property) -> int:
    return cnf.var(f"act[{prop.kind}:{prop.anchor.canon()}]")


def build_request_cnf(model: DesModel, obs: Observation, request: TestRequest,
                      params: EncodingParams):
    """Full CNF for one test request; returns (cnf, assumption literal list)."""
    cnf = Cnf()
    encode_model(model, len(obs), params, cnf)
    encode_observation(model, obs, params, cnf)
    if request.space.kind == SQHS:
        encode_fault_interleaving(model, len(obs), params, cnf)
    assumptions = []
    for prop in request.props:
        fresh = not cnf.has(f"act[{prop.kind}:{prop.anchor.canon()}]")
        act = _act_var(cnf, prop)
        if fresh:
            encode_property(prop, request.space, model, params, len(obs),
                            cnf, act)
        assumptions.append(act)
    return cnf, assumptions


def decode_trace(model: DesModel, values, cnf: Cnf, n: int) -> tuple:
    """Collect true events per timestep, linearised in registry order."""
    trace = []
    for t in range(1, n + 1):
        for e in model.events:
            if values(cnf.var(f"e[{e}]@{t}")):
                trace.append(e)
    return tuple(trace)


class SatSolver:
    """Test solver backed by the bounded SAT encoding.

    The model/observation block is encoded once; every property encoding and
    its assumption literal is cached in the shared registry.  Each request
    replays the accumulated clauses into a fresh kernel (no incremental SAT
    across tests) and solves under that request's assumptions.
    """

    name = "sat"

    def __init__(self, model: DesModel, obs: Observation, space: Space,
                 params: EncodingParams | None = None):
        if space.kind not in (SHS, MHS, SQHS):
            raise DiagError(f"sat backend does not handle space {space.kind}")
        self.model = model
        self.obs = obs
        self.space = space
        self.params = params or EncodingParams()
        self.horizon = self.params.horizon(len(obs))
        self.cnf = Cnf()
        encode_model(model, len(obs), self.params, self.cnf)
        encode_observation(model, obs, self.params, self.cnf)
        if space.kind == SQHS:
            encode_fault_interleaving(model, len(obs), self.params, self.cnf)
        self.stats = SolverStats()
        self.stats.extra["horizon"] = self.horizon
        self.stats.extra["steps_per_obs"] = self.params.steps_per_obs

    def _assumptions_for(self, props) -> list:
        out = []
        for prop in props:
            name = f"act[{prop.kind}:{prop.anchor.canon()}]"
            fresh = not self.cnf.has(name)
            act = self.cnf.var(name)
            if fresh:
                encode_property(prop, self.space, self.model, self.params,
                                len(self.obs), self.cnf, act)
            out.append((prop, act))
        return out

    def solve(self, request: TestRequest) -> TestOutcome:
        if request.space.kind != self.space.kind:
            raise DiagError("request space does not match solver space")
        self.stats.tests += 1
        pairs = self._assumptions_for(request.props)
        kernel = MiniSolver()
        kernel.ensure_vars(self.cnf.nvars)
        kernel.add_clauses(self.cnf.clauses)
        sat = kernel.solve([act for _, act in pairs])
        self.stats.extra["kernel_conflicts"] = \
            self.stats.extra.get("kernel_conflicts", 0) + kernel.conflicts
        if sat:
            self.stats.sat_tests += 1
            trace = decode_trace(self.model, kernel.value, self.cnf,
                                 self.horizon)
            hyp = trace_hypothesis(trace, self.model, self.space)
            if not (trace_in_model(trace, self.model)
                    and trace_matches_observation(trace, self.model, self.obs)
                    and member(hyp, request.props, self.space)):
                raise EncodingError(
                    f"decoded witness fails re-validation: {trace}")
            return TestOutcome.found(hyp, trace)
        self.stats.unsat_tests += 1
        failed = set(kernel.failed_assumptions())
        props = tuple(p for p, act in pairs if act in failed)
        return TestOutcome.failed(Conflict(props))

    def check_conflict(self, conflict: Conflict) -> bool:
        """Re-solve under only the conflict's assumptions; True iff UNSAT."""
        pairs = self._assumptions_for(conflict)
        kernel = MiniSolver()
        kernel.ensure_vars(self.cnf.nvars)
        kernel.add_clauses(self.cnf.clauses)
        return not kernel.solve([act for _, act in pairs])


def sat_solve_test(model: DesModel, obs: Observation, request: TestRequest,
                   params: EncodingParams | None = None) -> TestOutcome:
    return SatSolver(model, obs, request.space, params).solve(request)
