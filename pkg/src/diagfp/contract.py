"""Shared test-solver contract: requests, outcomes and conflicts.

A test solver answers one question: does the symbolically described
hypothesis set contain a diagnosis candidate?  Any object with a

    solve(request: TestRequest) -> TestOutcome

method (and a ``space`` attribute) can drive the strategies.  On success the
outcome carries a witnessed candidate; on failure it carries a conflict,
i.e. a subset of the requested properties that already rules every candidate
out.  The least informative legal conflict is the full request.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .hypothesis import Hypothesis, Space
from .properties import PropertySet


@dataclass(frozen=True)
class Conflict:
    """Set of properties whose conjunction provably contains no candidate."""

    props: tuple

    def __iter__(self):
        return iter(self.props)

    def __len__(self):
        return len(self.props)

    def to_json(self):
        return [p.to_json() for p in self.props]


@dataclass(frozen=True)
class TestRequest:
    __test__ = False  # not a pytest class

    props: PropertySet
    space: Space


@dataclass(frozen=True)
class TestOutcome:
    """Either Candidate(hypothesis, witness) or Failed(conflict)."""

    __test__ = False  # not a pytest class

    candidate: Hypothesis | None = None
    witness: object = None
    conflict: Conflict | None = None

    @classmethod
    def found(cls, candidate, witness):
        return cls(candidate=candidate, witness=witness)

    @classmethod
    def failed(cls, conflict):
        return cls(conflict=conflict)

    @property
    def is_candidate(self) -> bool:
        return self.candidate is not None


@dataclass
class SolverStats:
    """Counters every solver keeps; strategies aggregate them into reports."""

    tests: int = 0
    sat_tests: int = 0
    unsat_tests: int = 0
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"tests": self.tests, "sat_tests": self.sat_tests,
               "unsat_tests": self.unsat_tests}
        out.update(self.extra)
        return out
