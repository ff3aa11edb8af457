"""Boolean-circuit diagnosis frontend (SHS over gate names).

Weak-fault model: a healthy gate (``ab`` false) behaves per its function, an
abnormal gate is unconstrained.  Netlist format, one directive per line
(``#`` comments):

    input <signal> ...
    output <signal> ...
    gate <name> <and|or|not|xor|buf> <out-signal> <in-signal> ...
    obs <signal> <0|1>

Diagnosis runs through the same strategy engine as the DES path; properties
over the gate-set hypotheses become unit/clause assumptions on the ``ab``
variables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contract import Conflict, SolverStats, TestOutcome, TestRequest
from .errors import DiagError, ModelFormatError
from .hypothesis import SHS, Space, set_hyp
from .properties import ANC, DESC, NEG_ANC, NEG_DESC, member
from .satbackend import Cnf
from .satcore import MiniSolver

GATE_KINDS = ("and", "or", "not", "xor", "buf")


@dataclass(frozen=True)
class Gate:
    name: str
    kind: str
    output: str
    inputs: tuple


@dataclass(frozen=True)
class Circuit:
    gates: tuple
    inputs: tuple
    outputs: tuple

    @property
    def signals(self) -> tuple:
        seen = list(self.inputs)
        for g in self.gates:
            for s in g.inputs + (g.output,):
                if s not in seen:
                    seen.append(s)
        return tuple(seen)

    def validate(self):
        drivers = {}
        names = set()
        for g in self.gates:
            if g.name in names:
                raise ModelFormatError(f"duplicate gate name {g.name}")
            names.add(g.name)
            if g.kind not in GATE_KINDS:
                raise ModelFormatError(f"unknown gate kind {g.kind}")
            if g.kind in ("not", "buf") and len(g.inputs) != 1:
                raise ModelFormatError(f"gate {g.name}: {g.kind} takes one input")
            if g.kind in ("and", "or", "xor") and len(g.inputs) < 2:
                raise ModelFormatError(
                    f"gate {g.name}: {g.kind} needs at least two inputs")
            if g.output in drivers or g.output in self.inputs:
                raise ModelFormatError(f"signal {g.output} has two drivers")
            drivers[g.output] = g
        for g in self.gates:
            for s in g.inputs:
                if s not in drivers and s not in self.inputs:
                    raise ModelFormatError(
                        f"gate {g.name}: signal {s} has no driver")
        for s in self.outputs:
            if s not in drivers and s not in self.inputs:
                raise ModelFormatError(f"output {s} has no driver")
        # acyclicity via topological elimination
        remaining = {g.name: set(g.inputs) for g in self.gates}
        resolved = set(self.inputs)
        progress = True
        while remaining and progress:
            progress = False
            for name in list(remaining):
                gate = next(g for g in self.gates if g.name == name)
                if remaining[name] <= resolved:
                    resolved.add(gate.output)
                    del remaining[name]
                    progress = True
        if remaining:
            raise ModelFormatError(
                f"circuit is cyclic around gates {sorted(remaining)}")
        return self

    def space(self) -> Space:
        return Space(SHS, tuple(g.name for g in self.gates))


@dataclass(frozen=True)
class PinObservation:
    assignments: tuple  # (signal, bool) pairs

    def as_dict(self) -> dict:
        return dict(self.assignments)


def parse_circuit(text: str):
    gates, inputs, outputs, obs = [], [], [], []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        key, rest = words[0], words[1:]
        if key == "input":
            inputs.extend(rest)
        elif key == "output":
            outputs.extend(rest)
        elif key == "gate":
            if len(rest) < 4:
                raise ModelFormatError(
                    "gate takes <name> <kind> <out> <in...>", line=ln)
            gates.append(Gate(rest[0], rest[1], rest[2], tuple(rest[3:])))
        elif key == "obs":
            if len(rest) != 2 or rest[1] not in ("0", "1"):
                raise ModelFormatError("obs takes <signal> <0|1>", line=ln)
            obs.append((rest[0], rest[1] == "1"))
        else:
            raise ModelFormatError(f"unknown directive {key!r}", line=ln)
    circuit = Circuit(tuple(gates), tuple(dict.fromkeys(inputs)),
                      tuple(dict.fromkeys(outputs))).validate()
    signals = set(circuit.signals)
    for s, _ in obs:
        if s not in signals:
            raise ModelFormatError(f"observed signal {s} not in circuit")
    return circuit, PinObservation(tuple(obs))


def encode_circuit(circuit: Circuit, cnf: Cnf) -> None:
    """Health-conditioned gate semantics: -ab[g] -> (out = fn(inputs))."""
    for s in circuit.signals:
        cnf.var(f"sig[{s}]")
    for g in circuit.gates:
        ab = cnf.var(f"ab[{g.name}]")
        out = cnf.var(f"sig[{g.output}]")
        ins = [cnf.var(f"sig[{s}]") for s in g.inputs]
        if g.kind == "and":
            for i in ins:
                cnf.add([ab, -out, i])
            cnf.add([ab, out] + [-i for i in ins])
        elif g.kind == "or":
            for i in ins:
                cnf.add([ab, out, -i])
            cnf.add([ab, -out] + ins)
        elif g.kind == "not":
            cnf.add([ab, -out, -ins[0]])
            cnf.add([ab, out, ins[0]])
        elif g.kind == "buf":
            cnf.add([ab, -out, ins[0]])
            cnf.add([ab, out, -ins[0]])
        else:  # xor, folded pairwise
            cur = ins[0]
            for idx, nxt in enumerate(ins[1:-1], start=1):
                aux = cnf.var(f"xor[{g.name}.{idx}]")
                _xor_clauses(cnf, ab, aux, cur, nxt)
                cur = aux
            _xor_clauses(cnf, ab, out, cur, ins[-1])


def _xor_clauses(cnf: Cnf, ab: int, out: int, a: int, b: int) -> None:
    cnf.add([ab, -out, a, b])
    cnf.add([ab, -out, -a, -b])
    cnf.add([ab, out, a, -b])
    cnf.add([ab, out, -a, b])


class CircuitSolver:
    """Test-solver contract over a circuit and pin observation."""

    name = "circuit-sat"

    def __init__(self, circuit: Circuit, obs: PinObservation):
        self.circuit = circuit
        self.obs = obs
        self.space = circuit.space()
        self.cnf = Cnf()
        encode_circuit(circuit, self.cnf)
        for signal, value in obs.assignments:
            lit = self.cnf.var(f"sig[{signal}]")
            self.cnf.unit(lit if value else -lit)
        self.stats = SolverStats()

    def _encode_property(self, prop, act: int) -> None:
        gates = self.space.faults
        anchor = prop.anchor.data

        def ab(name):
            return self.cnf.var(f"ab[{name}]")

        if prop.kind == DESC:
            for name in sorted(anchor):
                self.cnf.add([-act, ab(name)])
        elif prop.kind == ANC:
            for name in gates:
                if name not in anchor:
                    self.cnf.add([-act, -ab(name)])
        elif prop.kind == NEG_DESC:
            self.cnf.add([-act] + [-ab(name) for name in sorted(anchor)])
        else:
            self.cnf.add([-act] + [ab(name) for name in gates
                                   if name not in anchor])

    def _assumptions_for(self, props) -> list:
        pairs = []
        for prop in props:
            name = f"act[{prop.kind}:{prop.anchor.canon()}]"
            fresh = not self.cnf.has(name)
            act = self.cnf.var(name)
            if fresh:
                self._encode_property(prop, act)
            pairs.append((prop, act))
        return pairs

    def solve(self, request: TestRequest) -> TestOutcome:
        if request.space.kind != SHS:
            raise DiagError("circuit diagnosis runs on the set space")
        self.stats.tests += 1
        pairs = self._assumptions_for(request.props)
        kernel = MiniSolver()
        kernel.ensure_vars(self.cnf.nvars)
        kernel.add_clauses(self.cnf.clauses)
        if kernel.solve([act for _, act in pairs]):
            self.stats.sat_tests += 1
            hyp = set_hyp(name for name in self.space.faults
                          if kernel.value(self.cnf.var(f"ab[{name}]")))
            witness = {s: kernel.value(self.cnf.var(f"sig[{s}]"))
                       for s in self.circuit.signals}
            if not member(hyp, request.props, self.space):
                raise DiagError("circuit witness fails property re-validation")
            return TestOutcome.found(hyp, witness)
        self.stats.unsat_tests += 1
        failed = set(kernel.failed_assumptions())
        props = tuple(p for p, act in pairs if act in failed)
        return TestOutcome.failed(Conflict(props))

    def check_conflict(self, conflict: Conflict) -> bool:
        pairs = self._assumptions_for(conflict)
        kernel = MiniSolver()
        kernel.ensure_vars(self.cnf.nvars)
        kernel.add_clauses(self.cnf.clauses)
        return not kernel.solve([act for _, act in pairs])


def circuit_solve_test(circuit: Circuit, obs: PinObservation,
                       request: TestRequest) -> TestOutcome:
    return CircuitSolver(circuit, obs).solve(request)


def brute_force_diagnosis(circuit: Circuit, obs: PinObservation) -> list:
    """Reference minimal diagnosis: filter all health assignments by
    satisfiability of gate semantics plus observation, then minimise."""
    from itertools import product as iproduct

    from .hypothesis import min_antichain

    space = circuit.space()
    names = space.faults
    out = []
    for bits in iproduct([False, True], repeat=len(names)):
        cnf = Cnf()
        encode_circuit(circuit, cnf)
        for signal, value in obs.assignments:
            lit = cnf.var(f"sig[{signal}]")
            cnf.unit(lit if value else -lit)
        for name, bit in zip(names, bits):
            lit = cnf.var(f"ab[{name}]")
            cnf.unit(lit if bit else -lit)
        kernel = MiniSolver()
        kernel.ensure_vars(cnf.nvars)
        ok = kernel.add_clauses(cnf.clauses)
        if ok and kernel.solve():
            out.append(set_hyp(n for n, b in zip(names, bits) if b))
    return min_antichain(out, space)
