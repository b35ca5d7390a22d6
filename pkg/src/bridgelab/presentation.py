"""Plat presentations of links as level-indexed event words.

A link on ``2n`` strands is recorded as an ordered word of *level events*
(braid letters and vertical twist regions), read top to bottom along a
height coordinate, and closed by plat caps pairing strand ``2i-1`` with
``2i`` at the top and at the bottom.  Levels are exact rationals so that
half-integer heights are representable without rounding.

Positions and strand indices are 1-based throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union


def frac(value) -> Fraction:
    """Coerce ints, strings like '5/2', and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def frac_str(value: Fraction) -> str:
    """Canonical string form: 'p' for integers, 'p/q' otherwise."""
    return str(value)


@dataclass(frozen=True)
class BraidLetter:
    """A single crossing of the strands at positions (pos, pos+1).

    sign=+1 means the strand coming from position ``pos`` crosses over the
    strand coming from ``pos+1``; sign=-1 is the inverse crossing.
    """

    level: Fraction
    pos: int
    sign: int

    def to_obj(self) -> dict:
        return {"level": frac_str(self.level), "kind": "braid",
                "pos": self.pos, "sign": self.sign}


@dataclass(frozen=True)
class TwistRegion:
    """A vertical twist region on the strands at (pos, pos+1).

    ``half_twists`` is a positive even number of half twists, so the region
    induces the identity permutation.  Handedness is 'right' for the links
    built here; the field exists so hand-written inputs can deviate.
    """

    level: Fraction
    pos: int
    half_twists: int
    handedness: str = "right"

    def to_obj(self) -> dict:
        return {"level": frac_str(self.level), "kind": "twist",
                "pos": self.pos, "half_twists": self.half_twists,
                "handedness": self.handedness}


LevelEvent = Union[BraidLetter, TwistRegion]

#: Braid sign realizing one right-handed half twist.
RIGHT_HANDED_SIGN = +1


def twist_sign(handedness: str) -> int:
    if handedness == "right":
        return RIGHT_HANDED_SIGN
    if handedness == "left":
        return -RIGHT_HANDED_SIGN
    raise ValueError(f"unknown handedness {handedness!r}")


def event_from_obj(obj: dict) -> LevelEvent:
    kind = obj["kind"]
    level = frac(obj["level"])
    if kind == "braid":
        return BraidLetter(level=level, pos=int(obj["pos"]), sign=int(obj["sign"]))
    if kind == "twist":
        return TwistRegion(level=level, pos=int(obj["pos"]),
                           half_twists=int(obj["half_twists"]),
                           handedness=obj.get("handedness", "right"))
    raise ValueError(f"unknown event kind {kind!r}")


@dataclass(frozen=True)
class PlatPresentation:
    """A link as a plat: 2n strands, a level word, and the two cap rows.

    The strand count is constant along the word; extrema occur only in the
    closures.  ``component_of_strand`` maps each bottom-boundary strand index
    to a component label; when absent it is derived from the word.
    """

    strand_count: int
    events: tuple
    meta: dict = field(default_factory=dict)
    component_labels: Optional[tuple] = None

    # -- basic structure ---------------------------------------------------

    @property
    def bridge_number(self) -> int:
        return self.strand_count // 2

    def top_arcs(self) -> list:
        n = self.bridge_number
        return [(2 * i - 1, 2 * i) for i in range(1, n + 1)]

    def bottom_arcs(self) -> list:
        return self.top_arcs()

    def top_level(self) -> Fraction:
        """Smallest integer level at or above every event."""
        if not self.events:
            return Fraction(0)
        hi = max(e.level for e in self.events)
        lv = Fraction(int(hi))
        while lv <= hi:
            lv += 1
        return lv

    def special_heights(self) -> set:
        """Heights at which the sweep state is well defined.

        All integer and half-integer levels from 0 up to the top, together
        with every event level.
        """
        top = self.top_level()
        if "m" in self.meta:
            top = max(top, Fraction(2 * int(self.meta["m"]) - 1))
        heights = {Fraction(k, 2) for k in range(0, 2 * int(top) + 1)}
        heights.update(e.level for e in self.events)
        return heights

    # -- serialization -----------------------------------------------------

    def to_obj(self) -> dict:
        obj = {
            "strand_count": self.strand_count,
            "events": [e.to_obj() for e in self.events],
            "meta": _meta_to_obj(self.meta),
        }
        if self.component_labels is not None:
            obj["component_of_strand"] = list(self.component_labels)
        return obj

    @classmethod
    def from_obj(cls, obj: dict) -> "PlatPresentation":
        events = tuple(event_from_obj(e) for e in obj.get("events", []))
        labels = obj.get("component_of_strand")
        return cls(
            strand_count=int(obj["strand_count"]),
            events=events,
            meta=_meta_from_obj(obj.get("meta", {})),
            component_labels=tuple(labels) if labels is not None else None,
        )


def _meta_to_obj(meta: dict) -> dict:
    out = {}
    for key, value in meta.items():
        if isinstance(value, Fraction):
            out[key] = frac_str(value)
        elif isinstance(value, (list, tuple)):
            out[key] = [frac_str(v) if isinstance(v, Fraction) else v for v in value]
        else:
            out[key] = value
    return out


def _meta_from_obj(obj: dict) -> dict:
    return dict(obj)


def emit(p: PlatPresentation) -> str:
    """Canonical JSON text; byte-stable for identical presentations."""
    return json.dumps(p.to_obj(), sort_keys=True, separators=(",", ":"))


def parse(text: str) -> PlatPresentation:
    return PlatPresentation.from_obj(json.loads(text))


# -- validation --------------------------------------------------------------


def validate(p: PlatPresentation) -> list:
    """Return every invariant violation, tagged with the event index.

    Violations are data, not failures: an empty list means the presentation
    is valid.
    """
    violations = []
    if p.strand_count < 2 or p.strand_count % 2 != 0:
        violations.append("strand_count must be a positive even integer")
        return violations
    prev_level = None
    for idx, ev in enumerate(p.events):
        if not isinstance(ev, (BraidLetter, TwistRegion)):
            violations.append(f"event {idx}: unknown event type {type(ev).__name__}")
            continue
        if not isinstance(ev.level, Fraction):
            violations.append(f"event {idx}: level is not an exact rational")
        if prev_level is not None and ev.level >= prev_level:
            violations.append(f"event {idx}: non-decreasing levels "
                              f"({ev.level} after {prev_level})")
        prev_level = ev.level
        if not (1 <= ev.pos <= p.strand_count - 1):
            violations.append(f"event {idx}: position {ev.pos} out of range")
        if isinstance(ev, BraidLetter) and ev.sign not in (+1, -1):
            violations.append(f"event {idx}: sign must be +1 or -1")
        if isinstance(ev, TwistRegion):
            if ev.half_twists < 2 or ev.half_twists % 2 != 0:
                violations.append(f"event {idx}: odd or non-positive half-twist "
                                  f"count {ev.half_twists}")
            if ev.handedness not in ("right", "left"):
                violations.append(f"event {idx}: unknown handedness "
                                  f"{ev.handedness!r}")
    if p.component_labels is not None:
        if len(p.component_labels) != p.strand_count:
            violations.append("component_of_strand has wrong length")
        else:
            derived = component_of_strand(p)
            if _label_partition(derived) != _label_partition(p.component_labels):
                violations.append("component_of_strand inconsistent with the "
                                  "event word and plat closures")
    return violations


def _label_partition(labels: Sequence) -> set:
    groups = {}
    for idx, lab in enumerate(labels):
        groups.setdefault(lab, set()).add(idx)
    return {frozenset(g) for g in groups.values()}


def is_valid(p: PlatPresentation) -> bool:
    return not validate(p)


# -- permutations and components ----------------------------------------------


def induced_permutation(p: PlatPresentation) -> tuple:
    """Map top position i to bottom position perm[i-1] (values 1-based).

    Braid letters contribute the transposition (pos, pos+1); twist regions
    are even and contribute the identity.
    """
    where = list(range(p.strand_count + 1))  # where[i] = current position of top strand i
    occupant = list(range(p.strand_count + 1))
    for ev in p.events:
        if isinstance(ev, BraidLetter):
            k = ev.pos
            a, b = occupant[k], occupant[k + 1]
            occupant[k], occupant[k + 1] = b, a
            where[a], where[b] = k + 1, k
    return tuple(where[1:])


def component_of_strand(p: PlatPresentation) -> tuple:
    """Component label per bottom-boundary strand index (1-based order).

    Labels are 1..c in order of each component's smallest bottom strand.
    """
    n2 = p.strand_count
    perm = induced_permutation(p)  # top position -> bottom position
    parent = list(range(n2 + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for a, b in p.bottom_arcs():
        union(a, b)
    for a, b in p.top_arcs():
        union(perm[a - 1], perm[b - 1])
    labels = {}
    out = []
    for strand in range(1, n2 + 1):
        root = find(strand)
        if root not in labels:
            labels[root] = len(labels) + 1
        out.append(labels[root])
    return tuple(out)


def with_component_labels(p: PlatPresentation) -> PlatPresentation:
    return PlatPresentation(p.strand_count, p.events, dict(p.meta),
                            component_of_strand(p))


# -- sub-presentations ---------------------------------------------------------


def prefix_to_level(p: PlatPresentation, s) -> PlatPresentation:
    """Events strictly above the sphere at height s (an event at level s
    happens in the open slab just above s, so it is included)."""
    s = frac(s)
    if s not in p.special_heights():
        raise ValueError(f"level {s} is not a special height of this presentation")
    events = tuple(e for e in p.events if e.level >= s)
    return PlatPresentation(p.strand_count, events, dict(p.meta))


def expand_twists(p: PlatPresentation) -> PlatPresentation:
    """Replace every twist region by its half_twists equal-sign letters.

    The letters are spread through the slab occupied by the region, so the
    event word stays strictly decreasing in level.
    """
    events = []
    levels_above = sorted({e.level for e in p.events}, reverse=True)
    for idx, ev in enumerate(p.events):
        if isinstance(ev, BraidLetter):
            events.append(ev)
            continue
        gap = Fraction(1, 2)
        for other in p.events:
            if other.level > ev.level:
                gap = min(gap, other.level - ev.level)
        sign = twist_sign(ev.handedness)
        t = ev.half_twists
        for j in range(t):
            lv = ev.level + gap * Fraction(t - j, t + 1)
            events.append(BraidLetter(level=lv, pos=ev.pos, sign=sign))
    events.sort(key=lambda e: e.level, reverse=True)
    return PlatPresentation(p.strand_count, tuple(events), dict(p.meta))


# -- bridge split bookkeeping ---------------------------------------------------


@dataclass(frozen=True)
class BridgeSplit:
    """Punctures, intervals, and lower shadow arcs of a bridge sphere.

    For the standard plat closure the lower shadow arc of bridge i is the
    interval from puncture 2i-1 to 2i.
    """

    sphere: str
    bridge_count: int

    @property
    def puncture_count(self) -> int:
        return 2 * self.bridge_count

    def punctures(self) -> list:
        return list(range(1, self.puncture_count + 1))

    def intervals(self) -> list:
        """Interval i runs from puncture i to puncture i+1 (mod 2n)."""
        N = self.puncture_count
        return [(i, i % N + 1) for i in range(1, N + 1)]

    def lower_shadow(self) -> list:
        """sigma_i^- occupies interval 2i-1, for i = 1..n."""
        return [2 * i - 1 for i in range(1, self.bridge_count + 1)]


def bridge_split(p: PlatPresentation, sphere: str = "H") -> BridgeSplit:
    return BridgeSplit(sphere=sphere, bridge_count=p.bridge_number)
