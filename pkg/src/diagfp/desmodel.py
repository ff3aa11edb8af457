"""Factored discrete-event-system models: a network of partially synchronised
automata, plus observations and trace semantics.

Model text format (``#`` starts a comment):

    component <name>
    states <s1> <s2> ...
    init <s1> ...
    trans <from> <event> <to>      # repeatable
    end
    ...more components...
    observable <e1> <e2> ...
    faults <e1> ...

An observation file holds one observable event name per line.  An event
induces a global transition when every component that has the event in its
alphabet takes a matching local transition; all other components stay put.
Traces use interleaving semantics, one event per step.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .errors import DiagError, ModelFormatError
from .hypothesis import (MHS, SHS, SQHS, Hypothesis, Space, multi_hyp,
                         seq_hyp, set_hyp)


@dataclass(frozen=True)
class Component:
    name: str
    states: tuple
    init: tuple
    trans: tuple  # (from_state, event, to_state)

    @property
    def alphabet(self) -> frozenset:
        return frozenset(e for _, e, _ in self.trans)

    def moves(self, state, event):
        return [t for s, e, t in self.trans if s == state and e == event]


@dataclass(frozen=True)
class DesModel:
    components: tuple
    observable: tuple
    faults: tuple

    @property
    def events(self) -> tuple:
        """Global alphabet in first-seen component order (the registry order
        used for deterministic iteration and SAT decode linearisation)."""
        seen = []
        for comp in self.components:
            for _, e, _ in comp.trans:
                if e not in seen:
                    seen.append(e)
        return tuple(seen)

    def validate(self):
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise ModelFormatError("duplicate component names")
        for comp in self.components:
            if not comp.init:
                raise ModelFormatError(f"component {comp.name} has no init state")
            if not set(comp.init) <= set(comp.states):
                raise ModelFormatError(f"component {comp.name}: init not in states")
            for s, _, t in comp.trans:
                if s not in comp.states or t not in comp.states:
                    raise ModelFormatError(
                        f"component {comp.name}: transition endpoint undeclared")
        alphabet = set(self.events)
        overlap = set(self.observable) & set(self.faults)
        if overlap:
            raise ModelFormatError(
                f"fault events must be unobservable: {sorted(overlap)}")
        for e in list(self.observable) + list(self.faults):
            if e not in alphabet:
                raise ModelFormatError(f"event {e} appears in no component")
        return self

    def space(self, kind: str) -> Space:
        return Space(kind, tuple(self.faults))

    def initial_global_states(self):
        return [tuple(combo) for combo in
                iproduct(*(c.init for c in self.components))]

    def step(self, gstate: tuple, event: str):
        """All global states reachable from ``gstate`` by ``event``."""
        choices = []
        for comp, local in zip(self.components, gstate):
            if event in comp.alphabet:
                targets = comp.moves(local, event)
                if not targets:
                    return []
                choices.append(targets)
            else:
                choices.append([local])
        return [tuple(combo) for combo in iproduct(*choices)]


@dataclass(frozen=True)
class Observation:
    sequence: tuple

    def __len__(self):
        return len(self.sequence)


# ---------------------------------------------------------------- semantics

def trace_in_model(trace, model: DesModel) -> bool:
    """True iff the event word is accepted from some initial global state."""
    alphabet = set(model.events)
    for e in trace:
        if e not in alphabet:
            raise DiagError(f"unknown event in trace: {e!r}")
    frontier = set(model.initial_global_states())
    for e in trace:
        frontier = {nxt for g in frontier for nxt in model.step(g, e)}
        if not frontier:
            return False
    return True


def trace_hypothesis(trace, model: DesModel, space: Space) -> Hypothesis:
    faults = [e for e in trace if e in model.faults]
    if space.kind == SHS:
        return set_hyp(faults)
    if space.kind == MHS:
        counts = {}
        for f in faults:
            counts[f] = counts.get(f, 0) + 1
        return multi_hyp(counts)
    if space.kind == SQHS:
        return seq_hyp(faults)
    raise DiagError(f"trace hypothesis undefined for {space.kind}")


def trace_matches_observation(trace, model: DesModel, obs: Observation) -> bool:
    projected = tuple(e for e in trace if e in model.observable)
    return projected == obs.sequence


# ---------------------------------------------------------------- parsing

def parse_model(text: str) -> DesModel:
    components = []
    observable, faults = [], []
    cur = None  # [name, states, init, trans]

    def fail(msg, ln) -> None:
        raise ModelFormatError(msg, line=ln)

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        key, rest = words[0], words[1:]
        if key == "component":
            if cur is not None:
                fail("component block not closed before new one", ln)
            if len(rest) != 1:
                fail("component takes exactly one name", ln)
            cur = [rest[0], [], [], []]
        elif key in ("states", "init"):
            if cur is None:
                fail(f"{key} outside component block", ln)
            if not rest:
                fail(f"{key} needs at least one state", ln)
            cur[1 if key == "states" else 2].extend(rest)
        elif key == "trans":
            if cur is None:
                fail("trans outside component block", ln)
            if len(rest) != 3:
                fail("trans takes <from> <event> <to>", ln)
            src, event, dst = rest
            if src not in cur[1]:
                fail(f"undeclared state {src!r}", ln)
            if dst not in cur[1]:
                fail(f"undeclared state {dst!r}", ln)
            cur[3].append((src, event, dst))
        elif key == "end":
            if cur is None:
                fail("end outside component block", ln)
            components.append(Component(cur[0], tuple(cur[1]),
                                        tuple(cur[2]), tuple(cur[3])))
            cur = None
        elif key == "observable":
            observable.extend(rest)
        elif key == "faults":
            faults.extend(rest)
        else:
            fail(f"unknown directive {key!r}", ln)
    if cur is not None:
        raise ModelFormatError(f"component {cur[0]} not closed with 'end'")
    if not components:
        raise ModelFormatError("model declares no components")
    model = DesModel(tuple(components), tuple(dict.fromkeys(observable)),
                     tuple(dict.fromkeys(faults)))
    return model.validate()


def parse_observation(text: str, model: DesModel) -> Observation:
    events = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if len(line.split()) != 1:
            raise ModelFormatError("one event per line", line=ln)
        if line not in model.observable:
            raise ModelFormatError(f"event {line!r} is not observable", line=ln)
        events.append(line)
    return Observation(tuple(events))


def render_model(model: DesModel) -> str:
    out = []
    for comp in model.components:
        out.append(f"component {comp.name}")
        out.append("states " + " ".join(comp.states))
        out.append("init " + " ".join(comp.init))
        for s, e, t in comp.trans:
            out.append(f"trans {s} {e} {t}")
        out.append("end")
    out.append("observable " + " ".join(model.observable))
    out.append("faults " + " ".join(model.faults))
    return "\n".join(out) + "\n"


def render_observation(obs: Observation) -> str:
    return "".join(e + "\n" for e in obs.sequence)


def model_to_json(model: DesModel) -> dict:
    return {
        "components": [
            {"name": c.name, "states": list(c.states), "init": list(c.init),
             "trans": [list(t) for t in c.trans]}
            for c in model.components
        ],
        "observable": list(model.observable),
        "faults": list(model.faults),
    }


def observation_to_json(obs: Observation) -> dict:
    return {"sequence": list(obs.sequence)}


def random_walk(model: DesModel, rng, max_len: int):
    """A random trace accepted by the model (possibly shorter than asked)."""
    gstate = rng.choice(model.initial_global_states())
    trace = []
    for _ in range(max_len):
        enabled = []
        for e in model.events:
            nxt = model.step(gstate, e)
            if nxt:
                enabled.append((e, nxt))
        if not enabled:
            break
        e, nxt = rng.choice(enabled)
        trace.append(e)
        gstate = rng.choice(nxt)
    return trace
