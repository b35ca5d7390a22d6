"""Generator for the twist-surgered link family.

The links are built on 2n strands as a height-ordered event word: a fixed
top pattern of two long sweeps below the bridges, then one block per
twist-surgery row (a rightward sweep under the standing strands into the
twist region, the region itself, and a leftward sweep over them back to
the second position), and finally two long bottom sweeps.  Surgery sites
come from a staircase of distinguished positions, one per row, each later
site strictly higher and strictly to the right.

The V-side presentation (height read along the other axis) is produced in
v_model: the same link is laid out as an explicit orthogonal wire diagram
and swept sideways.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .presentation import (BraidLetter, PlatPresentation, TwistRegion,
                           component_of_strand, validate,
                           with_component_labels)


# -- parameters ------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorParams:
    m: int
    n: int
    staircase: tuple  # ((pos, level) pairs, bottom row first)
    twists: tuple     # positive even half-twist counts, bottom row first

    def validate(self) -> list:
        problems = []
        if not 3 < self.m < self.n:
            problems.append(f"need 3 < m < n, got m={self.m}, n={self.n}")
            return problems
        grid = highlighted_grid(self.m, self.n)
        rows = sorted({site[1] for site in grid})
        if len(self.staircase) != self.m - 2:
            problems.append("staircase must pick one site per row "
                            f"({self.m - 2} rows)")
            return problems
        for idx, site in enumerate(self.staircase):
            site = (site[0], Fraction(site[1]))
            if site not in grid:
                problems.append(f"site {site} is not a highlighted crossing")
            elif site[1] != rows[idx]:
                problems.append(f"site {site} is out of row order")
        for s1, s2 in zip(self.staircase, self.staircase[1:]):
            if not (s2[0] > s1[0] and Fraction(s2[1]) > Fraction(s1[1])):
                problems.append(f"staircase not monotone at {s1} -> {s2}")
        if len(self.twists) != self.m - 2:
            problems.append(f"need {self.m - 2} twist counts")
        for t in self.twists:
            if t < 2 or t % 2:
                problems.append(f"twist count {t} is not a positive even integer")
        return problems


def highlighted_grid(m: int, n: int) -> set:
    """The grid of candidate surgery sites: (position, level) pairs.

    One site at (5, 5/2), one at (2n-2, 2m-7/2), and rows of sites at the
    odd positions 7..2n-3 on every level 9/2, 13/2, ..., 2m-11/2.
    """
    if not 3 < m < n:
        raise ValueError(f"need 3 < m < n, got m={m}, n={n}")
    grid = {(5, Fraction(5, 2)), (2 * n - 2, Fraction(4 * m - 7, 2))}
    level = Fraction(9, 2)
    while level <= Fraction(4 * m - 11, 2):
        for pos in range(7, 2 * n - 2, 2):
            grid.add((pos, level))
        level += 2
    return grid


def default_staircase(m: int, n: int) -> tuple:
    """The rightmost monotone choice: middle rows descend from 2n-3 by 2."""
    grid = highlighted_grid(m, n)
    rows = sorted({site[1] for site in grid})
    picks = []
    for idx, level in enumerate(rows):
        positions = sorted(pos for pos, lv in grid if lv == level)
        if idx == 0 or idx == len(rows) - 1:
            picks.append((positions[-1], level))
        else:
            offset = len(rows) - 2 - idx
            picks.append((2 * n - 3 - 2 * offset, level))
    for s1, s2 in zip(picks, picks[1:]):
        assert s2[0] > s1[0], "default staircase is not monotone"
    return tuple(picks)


def all_staircases(m: int, n: int) -> list:
    """Every monotone staircase choice (for small-parameter enumeration)."""
    grid = highlighted_grid(m, n)
    rows = sorted({site[1] for site in grid})
    out = [[]]
    for level in rows:
        positions = sorted(pos for pos, lv in grid if lv == level)
        nxt = []
        for partial in out:
            for pos in positions:
                if not partial or pos > partial[-1][0]:
                    nxt.append(partial + [(pos, level)])
        out = nxt
    return [tuple(s) for s in out]


def make_params(m: int, n: int, twists: Optional[Sequence] = None,
                staircase: Optional[Sequence] = None) -> GeneratorParams:
    if staircase is None:
        staircase = default_staircase(m, n)
    else:
        staircase = tuple((pos, Fraction(level)) for pos, level in staircase)
    if twists is None:
        twists = (2,) * (m - 2)
    params = GeneratorParams(m, n, tuple(staircase), tuple(twists))
    problems = params.validate()
    if problems:
        raise ValueError("; ".join(problems))
    return params


# -- crossing patterns -------------------------------------------------------------

# A pattern maps the ordinal of a crossing along a sweep to whether the
# moving strand passes over.  "oouu:p" is the over-over-under-under weave
# with phase p.


def _mover_over(pattern: str, ordinal: int) -> bool:
    if pattern == "over":
        return True
    if pattern == "under":
        return False
    if pattern.startswith("oouu:"):
        phase = int(pattern.split(":")[1])
        return (ordinal + phase) % 4 < 2
    if pattern.startswith("ou:"):
        phase = int(pattern.split(":")[1])
        return (ordinal + phase) % 2 == 0
    raise ValueError(f"unknown pattern {pattern!r}")


def _split_pattern(pattern: str) -> tuple:
    """A pattern is either uniform or 'self=PAT/other=PAT', choosing the
    rule by whether the crossed strand belongs to the mover's component."""
    if pattern.startswith("self="):
        self_pat, other = pattern[5:].split("/other=")
        return self_pat, other
    return pattern, pattern


def _sweep_letters(start: int, end: int, pattern: str, flip: bool,
                   same_component=None) -> list:
    """Letters moving one strand from position start to position end.

    Returns (position, sign) pairs; sign encodes the braid convention, so a
    leftward mover passing over yields sign -1.  same_component, when
    given, maps the ordinal to whether the crossed strand is in the
    mover's component (for color-selective rules).
    """
    self_pat, other_pat = _split_pattern(pattern)
    letters = []
    if end > start:
        rng = range(start, end)
        moving_right = True
    else:
        rng = range(start - 1, end - 1, -1)
        moving_right = False
    for ordinal, k in enumerate(rng):
        pat = self_pat if (same_component and same_component(ordinal)) else other_pat
        over = _mover_over(pat, ordinal)
        if flip:
            over = not over
        if moving_right:
            sign = +1 if over else -1
        else:
            sign = -1 if over else +1
        letters.append((k, sign))
    return letters


@dataclass(frozen=True)
class GeneratorKnobs:
    """Crossing-pattern choices for the sweeps.

    Calibrated so the generated family reproduces the expected bundle
    structure and certificates; red_flip lists the sweeps whose crossings
    are mirrored when n is odd.
    """

    th1: str = "over"
    th2: str = "under"
    th_dir: str = "right"
    ls: str = "over"
    rs: str = "under"
    bh1: str = "oouu:0"
    bh2: str = "over"
    bh1_end_offset: int = -1  # BH1 sweep ends at 2n + this offset
    bh2_dest: int = 2
    site_rounding: str = "down"
    red_flip: tuple = ()


DEFAULT_KNOBS = GeneratorKnobs()


def _site_positions(params: GeneratorParams, knobs: GeneratorKnobs) -> list:
    """Word positions of the twist regions, bottom row first.

    The surgered pair must sit at an even position for every surgery to
    split off a component (the two knot passages through a site have to
    run parallel); the staircase abscissas are rounded accordingly, and
    the top site is pinned at 2n-2 where the two sweeps above leave it.
    """
    n = params.n
    positions = []
    prev = 0
    for pos, _level in params.staircase[:-1]:
        rounded = pos + 1 if knobs.site_rounding == "up" else pos - 1
        rounded = max(rounded, prev + 2)
        if rounded % 2:
            rounded += 1
        positions.append(rounded)
        prev = rounded
    top = 2 * n - 2
    if prev >= top:
        raise ValueError("staircase too wide for the strand count")
    positions.append(top)
    return positions


# -- the H-presentation --------------------------------------------------------------


def _slab_levels(lo: Fraction, hi: Fraction, count: int) -> list:
    return [lo + (hi - lo) * Fraction(count - i, count + 1)
            for i in range(count)]


@dataclass
class ConstructionLog:
    """Replayable record of the build; identical params give identical logs."""

    lines: list = field(default_factory=list)

    def add(self, text: str) -> None:
        self.lines.append(text)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _run_plan(params: GeneratorParams, knobs: GeneratorKnobs) -> list:
    """The ordered run/site schedule: ('run', name, start, end, lo, hi) and
    ('site', row, pos, level) entries."""
    m, n = params.m, params.n
    n2 = 2 * n
    F = Fraction
    top = 2 * m - 1
    plan = []
    if knobs.th_dir == "right":
        plan.append(("run", "th1", 1, n2, F(top - 1), F(top)))
        plan.append(("run", "th2", 1, n2 - 1, F(top - 2), F(top - 1)))
    else:
        plan.append(("run", "th1", n2, 1, F(top - 1), F(top)))
        plan.append(("run", "th2", n2, 2, F(top - 2), F(top - 1)))
    rows = list(params.staircase)  # bottom row first
    word_pos = _site_positions(params, knobs)
    level_top = rows[-1][1]
    plan.append(("site", m - 3, word_pos[-1], level_top))
    plan.append(("run", "ls", word_pos[-1], 2, F(2 * m - 4), level_top))
    for row in range(m - 4, -1, -1):
        pos, level = word_pos[row], rows[row][1]
        plan.append(("run", "rs", 2, pos + 1, level + F(1, 2), level + F(3, 2)))
        plan.append(("site", row, pos, level))
        plan.append(("run", "ls", pos, 2, level - F(1, 2), level))
    bh1_end = n2 + knobs.bh1_end_offset
    plan.append(("run", "bh1", 2, bh1_end, F(1), F(2)))
    plan.append(("run", "bh2", bh1_end, knobs.bh2_dest, F(0), F(1)))
    return plan


def _strand_components(plan: list, n2: int, surgery: bool) -> list:
    """Component label per top strand id; depends on positions only."""
    occupant = list(range(n2 + 1))
    for entry in plan:
        if entry[0] == "run":
            _, _name, start, end, _lo, _hi = entry
            mover = occupant.pop(start)
            occupant.insert(end, mover)
        elif entry[0] == "site" and not surgery:
            _, _row, pos, _level = entry
            occupant[pos], occupant[pos + 1] = occupant[pos + 1], occupant[pos]
    parent = list(range(n2 + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(1, n2, 2):
        ra, rb = find(i), find(i + 1)
        if ra != rb:
            parent[ra] = rb
        ra, rb = find(occupant[i]), find(occupant[i + 1])
        if ra != rb:
            parent[ra] = rb
    return [find(i) for i in range(n2 + 1)]


def _h_events(params: GeneratorParams, knobs: GeneratorKnobs,
              surgery: bool, log: Optional[ConstructionLog] = None) -> list:
    """The event word shared by the knot (surgery=False, switched
    distinguished crossings) and the link (surgery=True, twist regions).

    Runs twice over the plan: the first pass fixes the component of every
    strand (positions only), the second emits crossing signs, which may be
    color-selective (the mover's own component vs the rest)."""
    m, n = params.m, params.n
    n2 = 2 * n
    flip = {name: (name in knobs.red_flip) and n % 2 == 1
            for name in ("th1", "th2", "ls", "rs", "bh1", "bh2")}
    plan = _run_plan(params, knobs)
    comp = _strand_components(plan, n2, surgery)

    events = []
    occupant = list(range(n2 + 1))
    for entry in plan:
        if entry[0] == "site":
            _, row, pos, level = entry
            if surgery:
                events.append(TwistRegion(level, pos, params.twists[row]))
                if log:
                    log.add(f"surgery row {row}: twist region at pos {pos} "
                            f"level {level} half_twists {params.twists[row]}")
            else:
                # the distinguished crossing after the switch: the arriving
                # strand crosses leftward over the standing strand
                events.append(BraidLetter(level, pos, -1))
                occupant[pos], occupant[pos + 1] = occupant[pos + 1], occupant[pos]
                if log:
                    log.add(f"distinguished crossing row {row}: pos {pos} "
                            f"level {level} (switched)")
            continue
        _, name, start, end, lo, hi = entry
        mover = occupant[start]
        step = 1 if end > start else -1
        crossed = []
        pos = start
        while pos != end:
            crossed.append(occupant[pos + 1] if step > 0 else occupant[pos - 1])
            pos += step
        pattern = getattr(knobs, name)
        same = lambda ordinal: comp[crossed[ordinal]] == comp[mover]
        letters = _sweep_letters(start, end, pattern, flip[name], same)
        for level, (k, sign) in zip(_slab_levels(lo, hi, len(letters)), letters):
            events.append(BraidLetter(level, k, sign))
        occupant.pop(start)
        occupant.insert(end, mover)
        if log:
            log.add(f"run {name}: {start}->{end} pattern={pattern} "
                    f"flip={flip[name]} slab=({lo},{hi})")
    return events


def build_h_presentation(params: GeneratorParams,
                         knobs: GeneratorKnobs = DEFAULT_KNOBS,
                         log: Optional[ConstructionLog] = None) -> PlatPresentation:
    """The 2n-strand presentation of the link, height read down the rows."""
    if log is not None:
        log.add(f"params m={params.m} n={params.n} "
                f"staircase={[(p, str(l)) for p, l in params.staircase]} "
                f"twists={list(params.twists)}")
        log.add(f"grid rows: {sorted({str(l) for _, l in highlighted_grid(params.m, params.n)})}")
    events = _h_events(params, knobs, surgery=True, log=log)
    events = _cancel_rii(events, log)
    p = PlatPresentation(
        strand_count=2 * params.n,
        events=tuple(events),
        meta={
            "family": "twist-surgered",
            "sphere": "H",
            "m": params.m,
            "n": params.n,
            "staircase": [[pos, str(level)] for pos, level in params.staircase],
            "twists": list(params.twists),
        },
    )
    problems = validate(p)
    if problems:
        raise AssertionError("generator emitted an invalid presentation: "
                             + "; ".join(problems))
    if log is not None:
        log.add(f"emitted H word: {len(p.events)} events")
    return with_component_labels(p)


def build_knot_presentation(m: int, n: int,
                            knobs: GeneratorKnobs = DEFAULT_KNOBS,
                            log: Optional[ConstructionLog] = None) -> PlatPresentation:
    """The pre-surgery knot: distinguished crossings switched, no twists."""
    params = make_params(m, n)
    events = _h_events(params, knobs, surgery=False, log=log)
    events = _cancel_rii(events, log)
    p = PlatPresentation(
        strand_count=2 * n,
        events=tuple(events),
        meta={"family": "pre-surgery-knot", "sphere": "H", "m": m, "n": n},
    )
    problems = validate(p)
    if problems:
        raise AssertionError("generator emitted an invalid presentation: "
                             + "; ".join(problems))
    return with_component_labels(p)


def _cancel_rii(events: list, log: Optional[ConstructionLog] = None) -> list:
    """Symbolic Reidemeister-II cleanup: cancel adjacent inverse letters at
    the same position.

    Only pairs inside one unit slab are cancelled, so the sweep states at
    the special heights are untouched."""
    removed = 0
    changed = True
    events = list(events)
    while changed:
        changed = False
        for t in range(len(events) - 1):
            e1, e2 = events[t], events[t + 1]
            if (isinstance(e1, BraidLetter) and isinstance(e2, BraidLetter)
                    and e1.pos == e2.pos and e1.sign == -e2.sign
                    and int(e1.level) == int(e2.level)):
                del events[t:t + 2]
                removed += 2
                changed = True
                break
    if log is not None:
        log.add(f"reidemeister-II cleanup removed {removed} letters")
    return events
