"""Independent second implementation of the half-twist action.

Where the main engine stores bare crossing words per arc and recomputes
nesting on demand, this oracle keeps the full normal data of the curve
system relative to the loop: for every interval, the ordered list of
crossing points along it.  A half twist is applied by explicit placement
rules (new crossings land in known zones next to the twisted punctures, in
a known order), and reduction splices the ordered lists directly.

The two implementations share no code paths; agreement on endpoint
pairings, reduced words, intersection counts, and per-interval crossing
orders is the correctness argument for both.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .presentation import (BraidLetter, PlatPresentation, TwistRegion,
                           prefix_to_level, twist_sign, validate)

POS = +1
NEG = -1


@dataclass
class _OArc:
    owner: int
    a: int
    b: int
    eps_a: int
    xs: list  # crossing ids from a to b


class OracleSystem:
    """Arc system with authoritative per-interval crossing orders."""

    def __init__(self, puncture_count: int):
        self.n2 = puncture_count
        self.arcs = []
        self.interval = {}          # crossing id -> interval
        self.lists = {k: [] for k in range(1, puncture_count + 1)}
        self._next_id = 0

    # -- construction ------------------------------------------------------

    @classmethod
    def trivial(cls, n: int) -> "OracleSystem":
        sys = cls(2 * n)
        for i in range(1, n + 1):
            sys.arcs.append(_OArc(i, 2 * i - 1, 2 * i, POS, []))
        return sys

    def _new_crossing(self, interval: int) -> int:
        cid = self._next_id
        self._next_id += 1
        self.interval[cid] = interval
        return cid

    def _iv(self, k: int) -> int:
        return (k - 1) % self.n2 + 1

    # -- the half twist ------------------------------------------------------

    def apply_letter(self, pos: int, sign: int) -> None:
        k = pos
        n2 = self.n2
        if not 1 <= k <= n2 - 1:
            raise ValueError(f"letter position {k} out of range")
        if sign not in (POS, NEG):
            raise ValueError("sign must be +1 or -1")
        left, right = self._iv(k - 1), self._iv(k + 1)
        X = list(self.lists[k])

        # Participants entering the twist disk from each hemisphere, in
        # left-to-right order of their attachment points: the arc end at
        # puncture k, the strands through interval k, the end at k+1.
        # Tags name the splice site on the owning arc.
        upper = []
        lower = []

        def add_end(puncture):
            arc = self._arc_end_at(puncture)
            if arc is None:
                raise ValueError(f"no arc end at puncture {puncture}")
            eps = arc.eps_a if arc.a == puncture else self._end_eps(arc)
            (upper if eps == POS else lower).append(("end", id(arc), puncture))

        add_end(k)
        for cid in X:
            arc, j = self._locate(cid)
            eps_in = self._entry_hemisphere(arc, j)
            if eps_in == POS:
                upper.append(("midin", cid))
                lower.append(("midout", cid))
            else:
                lower.append(("midin", cid))
                upper.append(("midout", cid))
        add_end(k + 1)

        if sign == POS:          # clockwise: upper feeds right, lower left
            right_feed, left_feed = upper, lower
        else:                    # counterclockwise
            right_feed, left_feed = lower, upper

        right_new = [(entry, self._new_crossing(right)) for entry in right_feed]
        left_new = [(entry, self._new_crossing(left)) for entry in left_feed]

        # splice the interval lists: the right zone hugs puncture k+1, the
        # left zone hugs puncture k (the far end of interval k-1)
        self.lists[k] = list(reversed(X))
        if left == right:
            # two punctures only: both zones sit in the single other interval
            self.lists[left] = ([c for _, c in right_new] + self.lists[left]
                                + [c for _, c in left_new])
        else:
            self.lists[right] = [c for _, c in right_new] + self.lists[right]
            self.lists[left] = self.lists[left] + [c for _, c in left_new]

        # splice the arcs
        at_site = {}
        for entry, cid in right_new + left_new:
            at_site.setdefault(entry, []).append(cid)
        for arc in self.arcs:
            new_xs = []
            if arc.a in (k, k + 1):
                new_xs.extend(at_site.get(("end", id(arc), arc.a), []))
            for cid in arc.xs:
                if self.interval[cid] == k:
                    new_xs.extend(at_site.get(("midin", cid), []))
                    new_xs.append(cid)
                    new_xs.extend(at_site.get(("midout", cid), []))
                else:
                    new_xs.append(cid)
            if arc.b in (k, k + 1):
                new_xs.extend(at_site.get(("end", id(arc), arc.b), []))
            arc.xs = new_xs
        swap = {k: k + 1, k + 1: k}
        for arc in self.arcs:
            if arc.a in swap:
                arc.a = swap[arc.a]
                arc.eps_a = -arc.eps_a
            if arc.b in swap:
                arc.b = swap[arc.b]
        self.reduce()

    def apply_twist(self, pos: int, half_twists: int,
                    handedness: str = "right") -> None:
        sign = twist_sign(handedness)
        for _ in range(half_twists):
            self.apply_letter(pos, sign)

    # -- bookkeeping ---------------------------------------------------------

    def _arc_end_at(self, puncture: int):
        for arc in self.arcs:
            if arc.a == puncture or arc.b == puncture:
                return arc
        return None

    def _end_eps(self, arc) -> int:
        return arc.eps_a * (-1 if len(arc.xs) % 2 else 1)

    def _locate(self, cid: int):
        for arc in self.arcs:
            if cid in arc.xs:
                return arc, arc.xs.index(cid)
        raise KeyError(cid)

    def _entry_hemisphere(self, arc, j: int) -> int:
        return arc.eps_a * (-1 if j % 2 else 1)

    # -- reduction -----------------------------------------------------------

    def reduce(self) -> None:
        changed = True
        while changed:
            changed = False
            for arc in self.arcs:
                if self._cancel_bigon(arc):
                    changed = True
                    break
                if self._cancel_half_bigon(arc):
                    changed = True
                    break

    def _list_adjacent(self, c1: int, c2: int) -> bool:
        lst = self.lists[self.interval[c1]]
        i1, i2 = lst.index(c1), lst.index(c2)
        return abs(i1 - i2) == 1

    def _remove(self, arc, cid: int) -> None:
        arc.xs.remove(cid)
        self.lists[self.interval[cid]].remove(cid)
        del self.interval[cid]

    def _cancel_bigon(self, arc) -> bool:
        for t in range(len(arc.xs) - 1):
            c1, c2 = arc.xs[t], arc.xs[t + 1]
            if self.interval[c1] == self.interval[c2] and self._list_adjacent(c1, c2):
                self._remove(arc, c1)
                self._remove(arc, c2)
                return True
        return False

    def _cancel_half_bigon(self, arc) -> bool:
        if arc.xs:
            cid = arc.xs[0]
            k = self.interval[cid]
            if (k == arc.a and self.lists[k][0] == cid) or \
               (k == self._iv(arc.a - 1) and self.lists[k][-1] == cid):
                self._remove(arc, cid)
                arc.eps_a = -arc.eps_a
                return True
        if arc.xs:
            cid = arc.xs[-1]
            k = self.interval[cid]
            if (k == arc.b and self.lists[k][0] == cid) or \
               (k == self._iv(arc.b - 1) and self.lists[k][-1] == cid):
                self._remove(arc, cid)
                return True
        return False

    # -- canonical views -------------------------------------------------------

    def canonical_arcs(self) -> list:
        """(owner, a, b, eps_a, word) tuples matching the engine's format."""
        out = []
        for arc in self.arcs:
            a, b, eps, xs = arc.a, arc.b, arc.eps_a, list(arc.xs)
            if a > b:
                a, b = b, a
                eps = self._end_eps(arc)
                xs = list(reversed(xs))
            if not xs and (self._iv(a + 1) == b or self._iv(b + 1) == a):
                eps = POS
            out.append((arc.owner, a, b, eps, tuple(self.interval[c] for c in xs)))
        return sorted(out)

    def endpoint_pairs(self) -> list:
        return sorted((min(a.a, a.b), max(a.a, a.b)) for a in self.arcs)

    def total_crossings(self) -> int:
        return sum(len(a.xs) for a in self.arcs)

    def interval_orders(self) -> dict:
        """Per interval, (owner, position-along-arc) in order from puncture k.

        Positions are measured in the canonical arc orientation (from the
        smaller endpoint), matching the engine's convention."""
        where = {}
        for arc in self.arcs:
            for j, cid in enumerate(arc.xs):
                jj = j if arc.a <= arc.b else len(arc.xs) - 1 - j
                where[cid] = (arc.owner, jj)
        return {k: [where[c] for c in lst] for k, lst in self.lists.items()}


def oracle_sweep(p: PlatPresentation, s) -> OracleSystem:
    problems = validate(p)
    if problems:
        raise ValueError("invalid presentation: " + "; ".join(problems))
    prefix = prefix_to_level(p, s)
    sys = OracleSystem.trivial(p.bridge_number)
    for event in prefix.events:
        if isinstance(event, BraidLetter):
            sys.apply_letter(event.pos, event.sign)
        elif isinstance(event, TwistRegion):
            sys.apply_twist(event.pos, event.half_twists, event.handedness)
    return sys
