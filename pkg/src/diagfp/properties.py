"""Symbolic hypothesis sets as property conjunctions, and the builders for
the three diagnostic questions (candidacy, minimality, coverage).

A property is one of four statements anchored at a hypothesis ``g``:

* ``desc(g)``     -- holds for descendants of g (g preferred-or-equal),
* ``anc(g)``      -- holds for ancestors of g,
* ``neg_desc(g)`` / ``neg_anc(g)`` -- their complements.

A :class:`PropertySet` denotes the intersection of its members' hypothesis
sets.  Insertion order is preserved: the SAT backend numbers assumption
literals by it, which keeps unsat cores reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConvexityViolation, DiagError
from .hypothesis import (Hypothesis, Space, children, leq, lt, min_antichain,
                         order_key)

DESC = "desc"
ANC = "anc"
NEG_DESC = "neg_desc"
NEG_ANC = "neg_anc"

_KINDS = (DESC, ANC, NEG_DESC, NEG_ANC)


@dataclass(frozen=True)
class Property:
    kind: str
    anchor: Hypothesis

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DiagError(f"unknown property kind {self.kind!r}")

    def negate(self) -> "Property":
        flip = {DESC: NEG_DESC, NEG_DESC: DESC, ANC: NEG_ANC, NEG_ANC: ANC}
        return Property(flip[self.kind], self.anchor)

    def to_json(self) -> dict:
        return {"kind": self.kind, "anchor": self.anchor.canon()}

    def __repr__(self):
        return f"{self.kind}({self.anchor.canon()})"


class PropertySet:
    """Duplicate-free, insertion-ordered conjunction of properties."""

    def __init__(self, props=()):
        self._props = []
        seen = set()
        for p in props:
            if p not in seen:
                seen.add(p)
                self._props.append(p)

    def __iter__(self):
        return iter(self._props)

    def __len__(self):
        return len(self._props)

    def __contains__(self, p):
        return p in self._props

    def __eq__(self, other):
        return isinstance(other, PropertySet) and set(self._props) == set(other._props)

    def __hash__(self):
        return hash(frozenset(self._props))

    def union(self, props) -> "PropertySet":
        return PropertySet(list(self._props) + list(props))

    def to_json(self) -> list:
        return [p.to_json() for p in self._props]

    def __repr__(self):
        return "{" + ", ".join(map(repr, self._props)) + "}"


def exhibits(h: Hypothesis, p: Property, space: Space) -> bool:
    """Does ``h`` exhibit property ``p``?"""
    space.validate(p.anchor)
    if p.kind == DESC:
        return leq(p.anchor, h, space)
    if p.kind == ANC:
        return leq(h, p.anchor, space)
    if p.kind == NEG_DESC:
        return not leq(p.anchor, h, space)
    return not leq(h, p.anchor, space)


def member(h: Hypothesis, props, space: Space) -> bool:
    """Conjunction of :func:`exhibits` over a property collection."""
    return all(exhibits(h, p, space) for p in props)


def question_candidate(h: Hypothesis, space: Space,
                       anc_form: bool = False) -> PropertySet:
    """Property set whose hypothesis set is exactly ``{h}``.

    The default children-based form produces more general conflicts for the
    conflict-directed strategies; ``anc_form`` switches to the two-property
    alternative {desc(h), anc(h)}.
    """
    space.validate(h)
    if anc_form:
        return PropertySet([Property(DESC, h), Property(ANC, h)])
    props = [Property(DESC, h)]
    props.extend(Property(NEG_DESC, c) for c in children(h, space))
    return PropertySet(props)


def question_minimal(d: Hypothesis, space: Space) -> PropertySet:
    """Property set of the strict ancestors of candidate ``d``."""
    space.validate(d)
    return PropertySet([Property(ANC, d), Property(NEG_DESC, d)])


def question_coverage(hyps, space: Space) -> PropertySet:
    """Property set of the hypotheses dominated by no element of ``hyps``."""
    anchors = sorted(set(hyps), key=order_key)
    for h in anchors:
        space.validate(h)
    return PropertySet([Property(NEG_DESC, h) for h in anchors])


def convex_representation(h_set, space: Space, universe_bound: int) -> PropertySet:
    """Property set representing an explicitly enumerated convex set.

    Follows the constructive side of the convexity theorem: exclude the
    maximal off-set ancestors via neg_anc, and the minimal off-set descendants
    and unrelated hypotheses via neg_desc.  Only certifies convexity within
    the enumerated universe (all of SHS; counts/lengths up to
    ``universe_bound`` for MHS/SqHS).
    """
    target = set(h_set)
    for h in target:
        space.validate(h)
    universe = space.enumerate(universe_bound)
    if not target:
        h0 = space.h0
        return PropertySet([Property(DESC, h0), Property(NEG_DESC, h0)])

    for c in universe:
        if c in target:
            continue
        below = next((a for a in target if lt(a, c, space)), None)
        above = next((b for b in target if lt(c, b, space)), None)
        if below is not None and above is not None:
            raise ConvexityViolation(below, c, above)

    anc_side, desc_side, unrelated = [], [], []
    for c in universe:
        if c in target:
            continue
        is_anc = any(leq(c, h, space) for h in target)
        is_desc = any(leq(h, c, space) for h in target)
        if is_anc:
            anc_side.append(c)
        elif is_desc:
            desc_side.append(c)
        else:
            unrelated.append(c)

    max_anc = [c for c in anc_side
               if not any(lt(c, d, space) for d in anc_side)]
    props = [Property(NEG_ANC, c) for c in sorted(max_anc, key=order_key)]
    props.extend(Property(NEG_DESC, c)
                 for c in min_antichain(desc_side, space))
    props.extend(Property(NEG_DESC, c)
                 for c in min_antichain(unrelated, space))
    return PropertySet(props)
