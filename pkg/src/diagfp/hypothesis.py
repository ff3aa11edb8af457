"""Hypothesis spaces: values, preference order, children, least common
descendants and abstraction projections.

Four space variants are supported.  A hypothesis is an immutable value whose
payload depends on the variant:

* ``shs``  -- frozenset of fault names (which faults occurred),
* ``mhs``  -- sorted tuple of (fault, count) pairs, zero counts dropped,
* ``sqhs`` -- tuple of fault names in occurrence order,
* ``bhs``  -- bool (``True`` = faulty).

Preference (``leq``) is subset / pointwise-at-most / subsequence / implication
respectively.  All operations are pure; results that are mathematically sets
are returned as lists sorted by :func:`order_key` so every run is
reproducible.  The sort order is a tie-break only and carries no preference
meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .errors import DiagError, SpaceMismatchError, UnsupportedProjectionError

BHS = "bhs"
SHS = "shs"
MHS = "mhs"
SQHS = "sqhs"

KINDS = (BHS, SHS, MHS, SQHS)

# Abstraction chain, most refined first.
_CHAIN = (SQHS, MHS, SHS, BHS)


@dataclass(frozen=True)
class Hypothesis:
    """A point of one hypothesis space; compare only within one space."""

    kind: str
    data: object

    def canon(self) -> str:
        """Canonical text rendering, shared by CLI output and JSON."""
        if self.kind == SHS:
            return "{" + ",".join(sorted(self.data)) + "}"
        if self.kind == MHS:
            return "{" + ",".join(f"{f}:{c}" for f, c in self.data) + "}"
        if self.kind == SQHS:
            return "[" + ",".join(self.data) + "]"
        return "faulty" if self.data else "nominal"

    def size(self) -> int:
        """Total number of fault occurrences recorded by the hypothesis."""
        if self.kind == SHS:
            return len(self.data)
        if self.kind == MHS:
            return sum(c for _, c in self.data)
        if self.kind == SQHS:
            return len(self.data)
        return 1 if self.data else 0

    def faults(self) -> frozenset:
        if self.kind == SHS:
            return self.data
        if self.kind == MHS:
            return frozenset(f for f, _ in self.data)
        if self.kind == SQHS:
            return frozenset(self.data)
        return frozenset()

    def count(self, fault) -> int:
        if self.kind == MHS:
            return dict(self.data).get(fault, 0)
        if self.kind == SQHS:
            return self.data.count(fault)
        if self.kind == SHS:
            return 1 if fault in self.data else 0
        raise DiagError("count() undefined on bhs")

    def __repr__(self):
        return f"<{self.kind} {self.canon()}>"


def set_hyp(faults) -> Hypothesis:
    return Hypothesis(SHS, frozenset(faults))


def multi_hyp(counts) -> Hypothesis:
    items = tuple(sorted((f, c) for f, c in dict(counts).items() if c > 0))
    for _, c in items:
        if c < 0:
            raise DiagError("negative fault count")
    return Hypothesis(MHS, items)


def seq_hyp(seq) -> Hypothesis:
    return Hypothesis(SQHS, tuple(seq))


def bin_hyp(faulty: bool) -> Hypothesis:
    return Hypothesis(BHS, bool(faulty))


def parse_hyp(text: str, kind: str) -> Hypothesis:
    """Inverse of :meth:`Hypothesis.canon` for the given space variant."""
    text = text.strip()
    if kind == BHS:
        if text in ("nominal", "faulty"):
            return bin_hyp(text == "faulty")
        raise DiagError(f"bad bhs hypothesis: {text!r}")
    if kind == SQHS:
        if not (text.startswith("[") and text.endswith("]")):
            raise DiagError(f"bad sqhs hypothesis: {text!r}")
        body = text[1:-1].strip()
        return seq_hyp([] if not body else [p.strip() for p in body.split(",")])
    if not (text.startswith("{") and text.endswith("}")):
        raise DiagError(f"bad {kind} hypothesis: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return set_hyp([]) if kind == SHS else multi_hyp({})
    parts = [p.strip() for p in body.split(",")]
    if kind == SHS:
        return set_hyp(parts)
    counts = {}
    for part in parts:
        if ":" not in part:
            raise DiagError(f"bad mhs entry: {part!r}")
        f, c = part.split(":", 1)
        counts[f.strip()] = counts.get(f.strip(), 0) + int(c)
    return multi_hyp(counts)


def order_key(h: Hypothesis):
    """Deterministic total tie-break: size first, then canonical encoding."""
    return (h.size(), h.canon())


@dataclass(frozen=True)
class Space:
    """A hypothesis space: variant tag plus the declared fault alphabet."""

    kind: str
    faults: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DiagError(f"unknown space kind {self.kind!r}")
        if len(set(self.faults)) != len(self.faults):
            raise DiagError("fault alphabet has duplicates")

    @property
    def h0(self) -> Hypothesis:
        """The unique most preferred hypothesis (nominal behaviour)."""
        if self.kind == SHS:
            return set_hyp([])
        if self.kind == MHS:
            return multi_hyp({})
        if self.kind == SQHS:
            return seq_hyp([])
        return bin_hyp(False)

    def validate(self, h: Hypothesis) -> Hypothesis:
        if h.kind != self.kind:
            raise SpaceMismatchError(
                f"hypothesis of kind {h.kind!r} used in {self.kind!r} space")
        if not h.faults() <= frozenset(self.faults):
            raise SpaceMismatchError(
                f"{h.canon()} mentions faults outside the alphabet")
        return h

    def is_finite(self) -> bool:
        return self.kind in (BHS, SHS)

    def enumerate(self, bound: int):
        """All hypotheses of the space, limited by ``bound`` for the infinite
        variants (max count for mhs, max length for sqhs)."""
        if self.kind == BHS:
            return [bin_hyp(False), bin_hyp(True)]
        if self.kind == SHS:
            out = []
            n = len(self.faults)
            for mask in range(1 << n):
                out.append(set_hyp(f for i, f in enumerate(self.faults)
                                   if mask >> i & 1))
            return sorted(out, key=order_key)
        if self.kind == MHS:
            ranges = [range(bound + 1)] * len(self.faults)
            out = [multi_hyp(dict(zip(self.faults, counts)))
                   for counts in iproduct(*ranges)]
            return sorted(set(out), key=order_key)
        out = [seq_hyp(())]
        frontier = [()]
        for _ in range(bound):
            frontier = [seq + (f,) for seq in frontier for f in self.faults]
            out.extend(seq_hyp(s) for s in frontier)
        return sorted(out, key=order_key)


def _is_subsequence(a: tuple, b: tuple) -> bool:
    it = iter(b)
    return all(any(x == y for y in it) for x in a)


def leq(a: Hypothesis, b: Hypothesis, space: Space) -> bool:
    """Preference order: True iff ``a`` is preferred-or-equal to ``b``."""
    space.validate(a)
    space.validate(b)
    if space.kind == SHS:
        return a.data <= b.data
    if space.kind == MHS:
        bc = dict(b.data)
        return all(c <= bc.get(f, 0) for f, c in a.data)
    if space.kind == SQHS:
        return _is_subsequence(a.data, b.data)
    return (not a.data) or b.data


def lt(a: Hypothesis, b: Hypothesis, space: Space) -> bool:
    return a != b and leq(a, b, space)


def children(h: Hypothesis, space: Space) -> list:
    """Minimal strict descendants of ``h`` (a finite antichain)."""
    space.validate(h)
    if space.kind == SHS:
        out = {set_hyp(h.data | {f}) for f in space.faults if f not in h.data}
    elif space.kind == MHS:
        counts = dict(h.data)
        out = set()
        for f in space.faults:
            bumped = dict(counts)
            bumped[f] = bumped.get(f, 0) + 1
            out.add(multi_hyp(bumped))
    elif space.kind == SQHS:
        seq = h.data
        out = set()
        for f in space.faults:
            for i in range(len(seq) + 1):
                out.add(seq_hyp(seq[:i] + (f,) + seq[i:]))
    else:
        out = set() if h.data else {bin_hyp(True)}
    return sorted(out, key=order_key)


def _seq_merge(a: tuple, b: tuple, memo: dict) -> frozenset:
    """Shuffle-merge of two sequences: advance in a, in b, or in both when the
    heads coincide."""
    key = (a, b)
    got = memo.get(key)
    if got is not None:
        return got
    if not a:
        res = frozenset({b})
    elif not b:
        res = frozenset({a})
    else:
        acc = set()
        for rest in _seq_merge(a[1:], b, memo):
            acc.add((a[0],) + rest)
        for rest in _seq_merge(a, b[1:], memo):
            acc.add((b[0],) + rest)
        if a[0] == b[0]:
            for rest in _seq_merge(a[1:], b[1:], memo):
                acc.add((a[0],) + rest)
        res = frozenset(acc)
    memo[key] = res
    return res


def otimes(a: Hypothesis, b: Hypothesis, space: Space) -> list:
    """Least common descendants of ``a`` and ``b``."""
    space.validate(a)
    space.validate(b)
    if space.kind == SHS:
        return [set_hyp(a.data | b.data)]
    if space.kind == MHS:
        ac, bc = dict(a.data), dict(b.data)
        return [multi_hyp({f: max(ac.get(f, 0), bc.get(f, 0))
                           for f in set(ac) | set(bc)})]
    if space.kind == SQHS:
        merged = [seq_hyp(s) for s in _seq_merge(a.data, b.data, {})]
        return min_antichain(merged, space)
    return [bin_hyp(a.data or b.data)]


def min_antichain(hyps, space: Space) -> list:
    """Minimal elements of a finite hypothesis set."""
    items = sorted(set(hyps), key=order_key)
    out = []
    for h in items:
        if not any(leq(kept, h, space) for kept in out):
            out.append(h)
    return out


def project(h: Hypothesis, from_kind: str, to_kind: str) -> Hypothesis:
    """Abstraction projection along the SqHS -> MHS -> SHS -> BHS chain."""
    if from_kind not in _CHAIN or to_kind not in _CHAIN:
        raise UnsupportedProjectionError(f"{from_kind} -> {to_kind}")
    i, j = _CHAIN.index(from_kind), _CHAIN.index(to_kind)
    if i > j:
        raise UnsupportedProjectionError(
            f"{from_kind} -> {to_kind} goes against the abstraction chain")
    if h.kind != from_kind:
        raise SpaceMismatchError(
            f"hypothesis is {h.kind}, projection starts at {from_kind}")
    cur = h
    for step in range(i, j):
        src = _CHAIN[step]
        if src == SQHS:
            counts = {}
            for f in cur.data:
                counts[f] = counts.get(f, 0) + 1
            cur = multi_hyp(counts)
        elif src == MHS:
            cur = set_hyp(f for f, c in cur.data if c > 0)
        else:  # SHS -> BHS
            cur = bin_hyp(bool(cur.data))
    return cur
