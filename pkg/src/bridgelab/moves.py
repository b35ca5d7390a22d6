"""Perturbation moves and the move-count lower bound.

A perturbation inserts a cancelling maximum/minimum pair next to a chosen
bridge, raising the bridge number by one without changing the link.  The
inverse move (de-perturbation) is not searched for here; only the forward
move and the arithmetic bound are provided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .presentation import (BraidLetter, PlatPresentation, TwistRegion,
                           validate, with_component_labels)


@dataclass(frozen=True)
class MoveRecord:
    kind: str          # "perturb" or "deperturb"
    site: int          # bridge index the move was applied next to
    before: int        # bridge number before
    after: int         # bridge number after


def perturb(p: PlatPresentation, bridge: int) -> tuple:
    """Insert a perturbed bridge next to top arc `bridge`.

    Two new strands appear at positions 2b+1, 2b+2 with a single clasp
    letter tying the new minimum under the old bridge; the link type is
    unchanged.  Returns (presentation, move record).
    """
    problems = validate(p)
    if problems:
        raise ValueError("invalid presentation: " + "; ".join(problems))
    n = p.bridge_number
    if not 1 <= bridge <= n:
        raise ValueError(f"bridge index {bridge} out of range 1..{n}")
    cut = 2 * bridge
    events = []
    top = p.top_level()
    clasp_level = top - Fraction(1, 2)
    if p.events:
        clasp_level = max(p.events[0].level + 1, clasp_level)
    events.append(BraidLetter(clasp_level, cut, +1))
    for ev in p.events:
        pos = ev.pos + 2 if ev.pos > cut else ev.pos
        if isinstance(ev, BraidLetter):
            events.append(BraidLetter(ev.level, pos, ev.sign))
        else:
            events.append(TwistRegion(ev.level, pos, ev.half_twists,
                                      ev.handedness))
    meta = dict(p.meta)
    meta["perturbed_at"] = bridge
    out = PlatPresentation(p.strand_count + 2, tuple(events), meta)
    problems = validate(out)
    if problems:
        raise AssertionError("perturb emitted an invalid presentation: "
                             + "; ".join(problems))
    record = MoveRecord("perturb", bridge, n, n + 1)
    return with_component_labels(out), record


def move_lower_bound(m: int, n: int) -> int:
    """Minimum number of perturbation/de-perturbation moves relating the
    n-bridge and m-bridge spheres of the family: n - m + 2."""
    if not 3 < m < n:
        raise ValueError(f"need 3 < m < n, got m={m}, n={n}")
    return n - m + 2
