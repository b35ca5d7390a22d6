"""Arc systems on the 2n-punctured sphere and the half-twist action.

The reference loop through all punctures cuts the sphere into two
hemispheres (+ and -) and is itself cut by the punctures into 2n closed
intervals; interval k runs from puncture k to puncture k+1 (mod 2n).  An
arc system is n disjoint embedded arcs joining the punctures in pairs.
Each arc is stored combinatorially: its endpoint punctures, the hemisphere
it leaves its first endpoint into, and its *crossing word* -- the ordered
sequence of intervals at which its interior crosses the loop.

Words are kept reduced: no two consecutive crossings in the same interval
(a bigon with the loop) and no first/last crossing in an interval adjacent
to the endpoint puncture (a half-bigon).  Reduced position realizes the
minimal geometric intersection number with the loop, and the reduced word
is a complete isotopy invariant of the arc rel the punctures.

A braid letter at position k acts as the half twist swapping punctures k
and k+1, rewriting crossing words locally and re-reducing.  Nesting depths
of crossings within an interval are *derived* data, recomputed on demand
by racing parallel strands along their arcs until they diverge.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Optional, Sequence, Tuple

from .presentation import (BraidLetter, PlatPresentation, TwistRegion, frac,
                           prefix_to_level, twist_sign, validate)

POS = +1
NEG = -1


@dataclass(frozen=True)
class Arc:
    """One embedded arc: endpoints a, b; eps_a is the hemisphere the arc
    leaves puncture a into; word lists the crossed intervals from a to b."""

    owner: int
    a: int
    b: int
    eps_a: int
    word: tuple

    @property
    def eps_b(self) -> int:
        return self.eps_a * (-1 if len(self.word) % 2 else 1)

    def hemisphere_of_chord(self, t: int) -> int:
        """Chord t runs from the t-th to the (t+1)-th point of the arc
        (point 0 = endpoint a); it lies in eps_a * (-1)^t."""
        return self.eps_a * (-1 if t % 2 else 1)


@dataclass(frozen=True)
class ArcSystem:
    puncture_count: int
    arcs: tuple

    @property
    def n(self) -> int:
        return self.puncture_count // 2

    def total_crossings(self) -> int:
        return sum(len(arc.word) for arc in self.arcs)

    def endpoint_pairs(self) -> list:
        return sorted((arc.a, arc.b) for arc in self.arcs)

    def dump(self) -> str:
        """One arc per line: endpoints, start hemisphere, crossing word."""
        lines = []
        for arc in sorted(self.arcs, key=lambda r: r.owner):
            word = " ".join(str(w) for w in arc.word)
            sign = "+" if arc.eps_a == POS else "-"
            lines.append(f"{arc.owner}: {arc.a} {arc.b} {sign}: {word}".rstrip())
        return "\n".join(lines)


def _iv(k: int, n2: int) -> int:
    return (k - 1) % n2 + 1


def _adjacent_intervals(puncture: int, n2: int) -> tuple:
    """The two intervals whose closure contains the puncture."""
    return (_iv(puncture - 1, n2), puncture)


def _cyclically_adjacent(a: int, b: int, n2: int) -> bool:
    return _iv(a + 1, n2) == b or _iv(b + 1, n2) == a


def reduce_arc(arc: Arc, n2: int) -> Arc:
    """Cancel bigons and endpoint half-bigons until the word is reduced.

    One stack pass removes all bigons (equal adjacent letters); endpoint
    strips cannot create new interior pairs, so a front and a back sweep
    finish the job in linear time."""
    eps_a = arc.eps_a
    stack = []
    for w in arc.word:
        if stack and stack[-1] == w:
            stack.pop()
        else:
            stack.append(w)
    lo, hi = 0, len(stack)
    adj_a = _adjacent_intervals(arc.a, n2)
    while lo < hi and stack[lo] in adj_a:
        lo += 1
        eps_a = -eps_a
    adj_b = _adjacent_intervals(arc.b, n2)
    while lo < hi and stack[hi - 1] in adj_b:
        hi -= 1
    word = tuple(stack[lo:hi])
    if not word and _cyclically_adjacent(arc.a, arc.b, n2):
        # an empty arc between adjacent punctures can be pushed across the
        # interval joining them; normalize its hemisphere
        eps_a = POS
    return Arc(arc.owner, arc.a, arc.b, eps_a, word)


def _orient(arc: Arc) -> Arc:
    if arc.a <= arc.b:
        return arc
    return Arc(arc.owner, arc.b, arc.a, arc.eps_b, tuple(reversed(arc.word)))


def make_system(puncture_count: int, arcs: Iterable[Arc]) -> ArcSystem:
    """Canonical form: each arc reduced and oriented, sorted by owner."""
    fixed = tuple(sorted((_orient(reduce_arc(a, puncture_count)) for a in arcs),
                         key=lambda r: r.owner))
    return ArcSystem(puncture_count, fixed)


def validate_system(sys: ArcSystem) -> list:
    violations = []
    n2 = sys.puncture_count
    if n2 < 2 or n2 % 2:
        violations.append("puncture count must be positive and even")
        return violations
    seen = {}
    for arc in sys.arcs:
        for p in (arc.a, arc.b):
            if not 1 <= p <= n2:
                violations.append(f"arc {arc.owner}: endpoint {p} out of range")
            seen[p] = seen.get(p, 0) + 1
        if arc.a == arc.b:
            violations.append(f"arc {arc.owner}: endpoints coincide")
        if arc.eps_a not in (POS, NEG):
            violations.append(f"arc {arc.owner}: bad hemisphere {arc.eps_a}")
        for w in arc.word:
            if not 1 <= w <= n2:
                violations.append(f"arc {arc.owner}: interval {w} out of range")
    for p in range(1, n2 + 1):
        if seen.get(p, 0) != 1:
            violations.append(f"puncture {p} is an endpoint of {seen.get(p, 0)} "
                              "arc ends (expected 1)")
    return violations


def trivial_top_system(n: int) -> ArcSystem:
    """n arcs joining punctures (2i-1, 2i), all in the + hemisphere."""
    if n < 1:
        raise ValueError("need at least one bridge")
    arcs = [Arc(i, 2 * i - 1, 2 * i, POS, ()) for i in range(1, n + 1)]
    return ArcSystem(2 * n, tuple(arcs))


# -- the half-twist action ------------------------------------------------------

def _end_crossing(sign: int, eps: int, k: int, n2: int) -> int:
    """Interval of the crossing picked up by an arc end at the twisted pair."""
    if sign * eps == POS:
        return _iv(k + 1, n2)
    return _iv(k - 1, n2)


def _crossing_triple(sign: int, eps: int, k: int, n2: int) -> tuple:
    """Replacement for a crossing of interval k entered from hemisphere eps."""
    if sign * eps == POS:
        return (_iv(k + 1, n2), k, _iv(k - 1, n2))
    return (_iv(k - 1, n2), k, _iv(k + 1, n2))


def apply_letter(sys: ArcSystem, pos: int, sign: int) -> ArcSystem:
    """Image of the system under the half twist at punctures (pos, pos+1).

    sign follows the braid convention of the presentation module: +1 when
    the strand from position pos crosses over the strand from pos+1.
    """
    n2 = sys.puncture_count
    k = pos
    if not 1 <= k <= n2 - 1:
        raise ValueError(f"letter position {k} out of range")
    if sign not in (POS, NEG):
        raise ValueError("sign must be +1 or -1")
    swapped = {k: k + 1, k + 1: k}
    new_arcs = []
    for arc in sys.arcs:
        active_a = arc.a in swapped
        active_b = arc.b in swapped
        if not active_a and not active_b and k not in arc.word:
            new_arcs.append(arc)  # untouched and already canonical
            continue
        eps_b = arc.eps_b
        word = []
        if active_a:
            word.append(_end_crossing(sign, arc.eps_a, k, n2))
        eps_in = arc.eps_a
        for w in arc.word:
            if w == k:
                word.extend(_crossing_triple(sign, eps_in, k, n2))
            else:
                word.append(w)
            eps_in = -eps_in
        if active_b:
            word.append(_end_crossing(sign, eps_b, k, n2))
        new_arc = Arc(
            arc.owner,
            swapped.get(arc.a, arc.a),
            swapped.get(arc.b, arc.b),
            -arc.eps_a if active_a else arc.eps_a,
            tuple(word),
        )
        new_arcs.append(_orient(reduce_arc(new_arc, n2)))
    new_arcs.sort(key=lambda r: r.owner)
    return ArcSystem(n2, tuple(new_arcs))


def apply_twist(sys: ArcSystem, pos: int, half_twists: int,
                handedness: str = "right") -> ArcSystem:
    """half_twists successive identical letters at the same position."""
    if half_twists < 2 or half_twists % 2:
        raise ValueError("half_twists must be a positive even integer")
    sign = twist_sign(handedness)
    for _ in range(half_twists):
        sys = apply_letter(sys, pos, sign)
    return sys


def apply_event(sys: ArcSystem, event) -> ArcSystem:
    if isinstance(event, BraidLetter):
        return apply_letter(sys, event.pos, event.sign)
    if isinstance(event, TwistRegion):
        return apply_twist(sys, event.pos, event.half_twists, event.handedness)
    raise TypeError(f"unknown event {event!r}")


def sweep(p: PlatPresentation, s) -> ArcSystem:
    """Push the trivial top system down through all events above level s."""
    problems = validate(p)
    if problems:
        raise ValueError("invalid presentation: " + "; ".join(problems))
    prefix = prefix_to_level(p, s)
    sys = trivial_top_system(p.bridge_number)
    for event in prefix.events:
        sys = apply_event(sys, event)
    return sys


# -- chord decomposition and derived depths ----------------------------------

PUNCTURE = "p"
CROSSING = "x"


@dataclass(frozen=True)
class Chord:
    """A component of (arc system) intersect (one hemisphere).

    Endpoints are either ("p", puncture) or ("x", interval, depth); ranks
    give their positions in the cyclic order around the loop.
    """

    owner: int
    hemisphere: int
    end1: tuple
    end2: tuple
    rank1: int
    rank2: int

    @property
    def span(self) -> tuple:
        return (min(self.rank1, self.rank2), max(self.rank1, self.rank2))

    def puncture_endpoints(self) -> int:
        return sum(1 for e in (self.end1, self.end2) if e[0] == PUNCTURE)


class ChordDiagram:
    """Both hemispheres' chords of a reduced system, with derived depths.

    Raises UnrealizableError if no planar nesting exists (which cannot
    happen for genuine images of the twist action, but can for hand-built
    data).
    """

    def __init__(self, sys: ArcSystem):
        problems = validate_system(sys)
        if problems:
            raise ValueError("invalid system: " + "; ".join(problems))
        self.sys = make_system(sys.puncture_count, sys.arcs)
        self.n2 = sys.puncture_count
        self._index_crossings()
        self._order_intervals()
        self._assign_ranks()
        self._build_chords()
        self._check_planarity()

    # crossing identity: (arc_index, j); arc point sequence:
    # point 0 = endpoint a, point j+1 = crossing j, point L+1 = endpoint b.

    def _index_crossings(self):
        self.interval_sets = {k: [] for k in range(1, self.n2 + 1)}
        for ai, arc in enumerate(self.sys.arcs):
            for j, w in enumerate(arc.word):
                self.interval_sets[w].append((ai, j))

    def _chord_other_end(self, ai: int, j: int, hemi: int):
        """Other endpoint of the hemi-side chord at crossing (ai, j).

        Returns ("p", puncture) or ("x", ai, j')."""
        arc = self.sys.arcs[ai]
        before = arc.hemisphere_of_chord(j)
        if hemi == before:
            if j == 0:
                return (PUNCTURE, arc.a)
            return (CROSSING, ai, j - 1)
        if j == len(arc.word) - 1:
            return (PUNCTURE, arc.b)
        return (CROSSING, ai, j + 1)

    def _coarse2(self, point, k: int) -> int:
        """Twice the cut-at-puncture-k circular coordinate (exact int)."""
        if point[0] == PUNCTURE:
            return 2 * (((point[1] - k - 1) % self.n2) + 1)
        _, ai, j = point
        m = self.sys.arcs[ai].word[j]
        return 2 * (((m - k - 1) % self.n2) + 1) + 1

    def _race(self, x, y, k: int) -> bool:
        """True iff crossing x precedes y (closer to puncture k) in interval k.

        Race the two strands along their arcs through alternating
        hemispheres until their positions become coarsely distinguishable;
        the order sense flips at every hop because parallel chords reverse
        their foot order at the far interval."""
        hemi = POS
        flip = False
        ax, ay = x, y
        while True:
            ex = self._chord_other_end(ax[0], ax[1], hemi)
            ey = self._chord_other_end(ay[0], ay[1], hemi)
            cx, cy = self._coarse2(ex, k), self._coarse2(ey, k)
            if cx != cy:
                return (cx > cy) != flip
            if ex[0] == PUNCTURE:
                raise UnrealizableError("two arc ends at one puncture")
            k = self.sys.arcs[ex[1]].word[ex[2]]
            ax, ay = (ex[1], ex[2]), (ey[1], ey[2])
            hemi = -hemi
            flip = not flip

    def _order_intervals(self):
        """Order every interval's crossings by bucket refinement: group by
        the coarse position of the race step, recurse into ties with the
        order sense flipped.  Equivalent to sorting with _race, but each
        tie group walks its arcs only until it reaches an interval whose
        order is already settled, which keeps parallel bundles cheap."""
        # flat tables: crossings numbered globally; points = crossings then
        # punctures (puncture j -> C + j - 1)
        n2 = self.n2
        arcs = self.sys.arcs
        ids = {}
        xs = []
        for ai, arc in enumerate(arcs):
            for j in range(len(arc.word)):
                ids[(ai, j)] = len(xs)
                xs.append((ai, j))
        C = len(xs)
        iv = [arcs[ai].word[j] for (ai, j) in xs]          # interval per crossing
        prev_pt = [0] * C   # point across the chord before the crossing
        next_pt = [0] * C   # point across the chord after it
        prev_hemi = [0] * C
        for cid, (ai, j) in enumerate(xs):
            arc = arcs[ai]
            prev_hemi[cid] = arc.hemisphere_of_chord(j)
            prev_pt[cid] = ids[(ai, j - 1)] if j > 0 else C + arc.a - 1
            next_pt[cid] = (ids[(ai, j + 1)] if j + 1 < len(arc.word)
                            else C + arc.b - 1)

        def coarse(pt, k):
            if pt >= C:  # puncture
                return 2 * (((pt - C + 1 - k - 1) % n2) + 1)
            return 2 * (((iv[pt] - k - 1) % n2) + 1) + 1

        settled = {}  # interval -> {crossing id: index in final order}
        order = {}
        for k in sorted(self.interval_sets, key=lambda q: len(self.interval_sets[q])):
            items = [ids[it] for it in self.interval_sets[k]]
            if len(items) <= 1:
                order[k] = items
                settled[k] = {c: 0 for c in items}
                continue
            out = [None] * len(items)
            stack = [(list(zip(items, items)), k, POS, list(range(len(items))), True)]
            while stack:
                entries, kk, hemi, slots, sense = stack.pop()
                buckets = {}
                for orig, cur in entries:
                    e = prev_pt[cur] if hemi == prev_hemi[cur] else next_pt[cur]
                    buckets.setdefault(coarse(e, kk), []).append((orig, e))
                pos = 0
                for key in sorted(buckets, reverse=sense):
                    group = buckets[key]
                    gslots = slots[pos:pos + len(group)]
                    pos += len(group)
                    if len(group) == 1:
                        out[gslots[0]] = group[0][1 - 1]
                        continue
                    nxt = group[0][1]
                    if nxt >= C:
                        raise UnrealizableError("two arc ends at one puncture")
                    k2 = iv[nxt]
                    if k2 in settled:
                        rank = settled[k2]
                        group.sort(key=lambda oe: rank[oe[1]], reverse=sense)
                        for slot, (orig, _e) in zip(gslots, group):
                            out[slot] = orig
                        continue
                    stack.append(([(orig, e) for orig, e in group],
                                  k2, -hemi, gslots, not sense))
            order[k] = out
            settled[k] = {c: t for t, c in enumerate(out)}
        self.interval_order = {k: [xs[c] for c in order[k]] for k in order}

    def _assign_ranks(self):
        self.rank = {}
        r = 0
        for k in range(1, self.n2 + 1):
            self.rank[(PUNCTURE, k)] = r
            r += 1
            for depth, (ai, j) in enumerate(self.interval_order[k]):
                self.rank[(CROSSING, ai, j)] = r
                r += 1
        self.total_points = r
        self.depth = {}
        for k in range(1, self.n2 + 1):
            for depth, (ai, j) in enumerate(self.interval_order[k]):
                self.depth[(ai, j)] = depth

    def _point_label(self, point) -> tuple:
        if point[0] == PUNCTURE:
            return point
        _, ai, j = point
        return (CROSSING, self.sys.arcs[ai].word[j], self.depth[(ai, j)])

    def _build_chords(self):
        self.chords = {POS: [], NEG: []}
        for ai, arc in enumerate(self.sys.arcs):
            points = [(PUNCTURE, arc.a)]
            points += [(CROSSING, ai, j) for j in range(len(arc.word))]
            points.append((PUNCTURE, arc.b))
            for t in range(len(arc.word) + 1):
                hemi = arc.hemisphere_of_chord(t)
                p1, p2 = points[t], points[t + 1]
                chord = Chord(
                    owner=arc.owner,
                    hemisphere=hemi,
                    end1=self._point_label(p1),
                    end2=self._point_label(p2),
                    rank1=self.rank[p1],
                    rank2=self.rank[p2],
                )
                self.chords[hemi].append(chord)

    def _check_planarity(self):
        for hemi in (POS, NEG):
            opens = {}
            closes = {}
            for chord in self.chords[hemi]:
                lo, hi = chord.span
                if lo == hi:
                    raise UnrealizableError("degenerate chord")
                opens.setdefault(lo, []).append(chord)
                closes.setdefault(hi, []).append(chord)
            stack = []
            for r in range(self.total_points):
                # a rank carries at most one chord endpoint per hemisphere
                if len(opens.get(r, [])) + len(closes.get(r, [])) > 1:
                    raise UnrealizableError("chord endpoints collide")
                for chord in closes.get(r, []):
                    if not stack or stack[-1] is not chord:
                        raise UnrealizableError("crossing chords in one hemisphere")
                    stack.pop()
                for chord in opens.get(r, []):
                    stack.append(chord)
            if stack:
                raise UnrealizableError("unclosed chord")

    # -- public views ----------------------------------------------------

    def family(self, hemisphere: int) -> list:
        """Chords of one hemisphere, sorted by left rank."""
        return sorted(self.chords[hemisphere], key=lambda c: c.span)

    def puncture_rank(self, j: int) -> int:
        return self.rank[(PUNCTURE, j)]

    def interval_counts(self) -> dict:
        return {k: len(v) for k, v in self.interval_order.items()}

    def interval_orders(self) -> dict:
        """Per interval, the owner sequence of crossings from puncture k."""
        return {k: [self.sys.arcs[ai].owner for (ai, j) in items]
                for k, items in self.interval_order.items()}


class UnrealizableError(Exception):
    """The combinatorial data admits no planar embedding."""


def chords_in_hemisphere(sys: ArcSystem, hemisphere: int) -> list:
    """Cut every arc at its loop crossings; return the hemisphere's chords."""
    return ChordDiagram(sys).family(hemisphere)


def realizable(sys: ArcSystem) -> bool:
    """True iff the chord families admit a consistent non-crossing nesting."""
    if validate_system(sys):
        return False
    try:
        ChordDiagram(sys)
    except UnrealizableError:
        return False
    return True
