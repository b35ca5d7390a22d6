"""Component structure and numeric invariants of plat presentations.

The determinant |Delta_L(-1)| is computed two independent ways: a Goeritz
matrix read off the checkerboard coloring of the plat diagram, and a
Kauffman bracket state sum evaluated at A = exp(i pi / 4) via the
Temperley-Lieb transfer on non-crossing matchings.  The two paths must
agree exactly; the bracket is the oracle for the Goeritz sign conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .presentation import (BraidLetter, PlatPresentation, TwistRegion,
                           component_of_strand, expand_twists,
                           induced_permutation, validate)


# -- components -----------------------------------------------------------------


def component_count(p: PlatPresentation) -> int:
    return len(set(component_of_strand(p)))


def _top_labels(p: PlatPresentation) -> list:
    """Component label of each top-boundary strand."""
    labels = component_of_strand(p)
    perm = induced_permutation(p)
    return [labels[perm[i] - 1] for i in range(p.strand_count)]


def split_components(p: PlatPresentation) -> list:
    """One sub-presentation per component: delete the other components'
    strands and renumber positions.  Returns (label, presentation) pairs."""
    problems = validate(p)
    if problems:
        raise ValueError("invalid presentation: " + "; ".join(problems))
    labels = component_of_strand(p)
    top_labels = _top_labels(p)
    out = []
    for target in sorted(set(labels)):
        occupant = list(range(p.strand_count + 1))  # position -> top strand id
        keep = [top_labels[i - 1] == target for i in range(1, p.strand_count + 1)]
        events = []
        for ev in p.events:
            k = ev.pos
            t1, t2 = occupant[k], occupant[k + 1]
            both = keep[t1 - 1] and keep[t2 - 1]
            if both:
                new_pos = sum(1 for q in range(1, k + 1) if keep[occupant[q] - 1])
                if isinstance(ev, BraidLetter):
                    events.append(BraidLetter(ev.level, new_pos, ev.sign))
                else:
                    events.append(TwistRegion(ev.level, new_pos, ev.half_twists,
                                              ev.handedness))
            if isinstance(ev, BraidLetter):
                occupant[k], occupant[k + 1] = t2, t1
        count = sum(keep)
        meta = dict(p.meta)
        meta["component"] = target
        sub = PlatPresentation(count, tuple(events), meta)
        problems = validate(sub)
        if problems:
            raise AssertionError("split produced an invalid presentation: "
                                 + "; ".join(problems))
        out.append((target, sub))
    return out


def v_maxima(p: PlatPresentation, component) -> int:
    """Number of top-closure arcs belonging to the component."""
    labels = set(component_of_strand(p))
    if component not in labels:
        raise ValueError(f"unknown component label {component!r}")
    top_labels = _top_labels(p)
    count = 0
    for a, b in p.top_arcs():
        la, lb = top_labels[a - 1], top_labels[b - 1]
        if la != lb:
            raise AssertionError("top arc joins distinct components")
        if la == component:
            count += 1
    return count


def linking_matrix(p: PlatPresentation) -> dict:
    """Pairwise linking numbers between components, keyed by label pairs."""
    q = expand_twists(p)
    labels = component_of_strand(q)
    top_labels = _top_labels(q)
    direction = _strand_directions(q)
    occupant = list(range(q.strand_count + 1))
    totals = {}
    for ev in q.events:
        k = ev.pos
        t1, t2 = occupant[k], occupant[k + 1]
        l1, l2 = top_labels[t1 - 1], top_labels[t2 - 1]
        if l1 != l2:
            key = (min(l1, l2), max(l1, l2))
            contribution = ev.sign * direction[t1] * direction[t2]
            totals[key] = totals.get(key, 0) + contribution
        occupant[k], occupant[k + 1] = t2, t1
    out = {}
    for key, total in totals.items():
        if total % 2:
            raise AssertionError("odd inter-component crossing sum")
        out[key] = total // 2
    return out


def _strand_directions(p: PlatPresentation) -> dict:
    """Orient each component; direction +1 = downward, per top strand id.

    Walking a component alternates descending and ascending strands: down a
    strand, across a bottom arc, up the partner, across a top arc."""
    perm = induced_permutation(p)
    inv = {perm[i]: i + 1 for i in range(p.strand_count)}
    direction = {}
    for start in range(1, p.strand_count + 1):
        if start in direction:
            continue
        strand = start
        while strand not in direction:
            direction[strand] = +1
            bottom = perm[strand - 1]
            partner_bottom = bottom + 1 if bottom % 2 else bottom - 1
            up = inv[partner_bottom]
            direction[up] = -1
            strand = up + 1 if up % 2 else up - 1
    return direction


# -- Kauffman bracket determinant ------------------------------------------------


def _tl_apply_cupcap(matching: tuple, k: int):
    """Apply e_k to a non-crossing matching (1-based positions, 0-based
    tuple).  Returns (new_matching, closed_loop)."""
    a = matching[k - 1]
    b = matching[k]
    if a == k + 1:
        return matching, True
    m = list(matching)
    m[k - 1], m[k] = k + 1, k
    m[a - 1], m[b - 1] = b, a
    return tuple(m), False


def _poly_mul_A(poly: dict, shift: int, scale: int = 1) -> dict:
    return {e + shift: c * scale for e, c in poly.items()}


def _poly_add(target: dict, poly: dict) -> None:
    for e, c in poly.items():
        target[e] = target.get(e, 0) + c
        if target[e] == 0:
            del target[e]


def _poly_mul_delta(poly: dict) -> dict:
    """Multiply by the loop value -A^2 - A^-2."""
    out = {}
    _poly_add(out, _poly_mul_A(poly, 2, -1))
    _poly_add(out, _poly_mul_A(poly, -2, -1))
    return out


def kauffman_bracket(p: PlatPresentation) -> dict:
    """Bracket polynomial of the plat closure, as {exponent of A: coeff}."""
    q = expand_twists(p)
    n2 = q.strand_count
    start = list(range(n2))
    for i in range(1, n2, 2):
        start[i - 1], start[i] = i + 1, i
    state = {tuple(start): {0: 1}}
    for ev in q.events:
        k = ev.pos
        new_state = {}
        for matching, poly in state.items():
            id_shift = 1 if ev.sign > 0 else -1
            cup_shift = -id_shift
            entry = new_state.setdefault(matching, {})
            _poly_add(entry, _poly_mul_A(poly, id_shift))
            if not entry:
                del new_state[matching]
            cup, loop = _tl_apply_cupcap(matching, k)
            contrib = _poly_mul_A(poly, cup_shift)
            if loop:
                contrib = _poly_mul_delta(contrib)
            entry = new_state.setdefault(cup, {})
            _poly_add(entry, contrib)
            if not entry:
                del new_state[cup]
        state = new_state
    result = {}
    bottom = tuple(start)
    for matching, poly in state.items():
        loops = _count_loops(matching, bottom)
        for _ in range(loops - 1):
            poly = _poly_mul_delta(poly)
        _poly_add(result, poly)
    return result


def _count_loops(top: tuple, bottom: tuple) -> int:
    n2 = len(top)
    seen = [False] * n2
    loops = 0
    for s in range(n2):
        if seen[s]:
            continue
        loops += 1
        x = s
        while not seen[x]:
            seen[x] = True
            y = top[x] - 1
            seen[y] = True
            x = bottom[y] - 1
    return loops


def bracket_determinant(p: PlatPresentation) -> int:
    """|bracket at A = exp(i pi/4)|; equals |Delta_L(-1)|."""
    poly = kauffman_bracket(p)
    if not poly:
        return 0
    parities = {e % 2 for e in poly}
    if len(parities) > 1:
        raise AssertionError("mixed exponent parity in bracket")
    re = 0
    im = 0
    for e, c in poly.items():
        quarter = ((e - e % 2) // 2) % 4
        if quarter == 0:
            re += c
        elif quarter == 1:
            im += c
        elif quarter == 2:
            re -= c
        else:
            im -= c
    norm2 = re * re + im * im
    root = math.isqrt(norm2)
    if root * root != norm2:
        raise AssertionError("bracket norm is not a perfect square")
    return root


# -- Goeritz determinant ----------------------------------------------------------

# Relative Goeritz sign between crossings at odd and even plat positions;
# calibrated once against the bracket oracle (tests pin it).
_GOERITZ_PARITY_FLIP = True


def _goeritz_eta(pos: int, sign: int) -> int:
    if _GOERITZ_PARITY_FLIP and pos % 2 == 0:
        return -sign
    return sign


def goeritz_determinant(p: PlatPresentation) -> int:
    """|det| of the Goeritz matrix of the plat diagram's shaded surface.

    Regions are the segments of the odd inter-strand gaps between their
    pinch events (closure caps and crossings at that gap)."""
    q = expand_twists(p)
    n2 = q.strand_count
    events = list(q.events)
    # region ids per odd gap: segments between consecutive pinches
    pinch_index = {g: [] for g in range(1, n2)}
    for t, ev in enumerate(events):
        pinch_index[ev.pos].append(t)
    regions = {}
    next_region = 0
    for g in range(1, n2, 2):
        count = len(pinch_index[g]) + 1
        regions[g] = list(range(next_region, next_region + count))
        next_region += count
    if next_region == 0:
        return 1 if n2 == 2 and not events else 0

    def region_at(g: int, t: float) -> int:
        idx = 0
        for pt in pinch_index[g]:
            if pt < t:
                idx += 1
        return regions[g][idx]

    size = next_region
    G = [[0] * size for _ in range(size)]
    for t, ev in enumerate(events):
        k = ev.pos
        sign = ev.sign if isinstance(ev, BraidLetter) else None
        assert sign is not None
        eta = _goeritz_eta(k, sign)
        if k % 2 == 1:
            seg = regions[k]
            idx = pinch_index[k].index(t)
            r, s = seg[idx], seg[idx + 1]
        else:
            r = region_at(k - 1, t)
            s = region_at(k + 1, t)
        G[r][s] -= eta
        G[s][r] -= eta
        G[r][r] += eta
        G[s][s] += eta
    minor = [row[1:] for row in G[1:]]
    return abs(_int_det(minor))


def _int_det(mat: list) -> int:
    """Integer determinant by fraction-free Gaussian elimination."""
    n = len(mat)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if m[row][col] != 0:
                pivot = row
                break
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for row in range(col + 1, n):
            factor = m[row][col] * inv
            if factor:
                for c2 in range(col, n):
                    m[row][c2] -= factor * m[col][c2]
    assert det.denominator == 1
    return int(det)


def determinant(p: PlatPresentation, cross_check: bool = True) -> int:
    """|Delta_L(-1)| via the Goeritz matrix; cross-checked against the
    bracket oracle unless disabled."""
    g = goeritz_determinant(p)
    if cross_check:
        b = bracket_determinant(p)
        if g != b:
            raise AssertionError(
                f"determinant paths disagree: goeritz={g} bracket={b}")
    return g


# -- companion classification -------------------------------------------------------

UNKNOT_BY_BRIDGE_1 = "unknot-by-bridge-1"
CANDIDATE_4_1 = "candidate-4_1"
CANDIDATE_5_2 = "candidate-5_2"
OTHER = "other"


def classify_companion(p: PlatPresentation, n: int) -> str:
    """Classify a companion sub-presentation by determinant and the parity
    of the ambient bridge count n.  'candidate' because the determinant is
    not a complete invariant."""
    det = determinant(p)
    if det == 5 and n % 2 == 0:
        return CANDIDATE_4_1
    if det == 7 and n % 2 == 1:
        return CANDIDATE_5_2
    return OTHER


@dataclass(frozen=True)
class ComponentReport:
    label: object
    strand_count: int
    v_maxima: Optional[int]
    h_maxima: Optional[int]
    determinant: int
    classification: str


def component_reports(h_pres: PlatPresentation,
                      v_pres: Optional[PlatPresentation] = None,
                      n: Optional[int] = None) -> list:
    """Per-component summary.  V-maxima are read from the V-presentation
    when one is supplied; the two presentations are matched by their
    component invariants (determinant multisets must agree)."""
    if n is None:
        n = h_pres.bridge_number
    h_split = split_components(h_pres)
    h_top = _top_labels(h_pres)
    reports = []
    v_info = []
    if v_pres is not None:
        for label, sub in split_components(v_pres):
            v_info.append((v_maxima(v_pres, label), determinant(sub)))
        v_info.sort()
    used = [False] * len(v_info)
    for label, sub in h_split:
        det = determinant(sub)
        h_max = v_maxima(h_pres, label)
        v_max = None
        if v_pres is not None:
            for idx, (vm, vd) in enumerate(v_info):
                if not used[idx] and vd == det:
                    v_max = vm
                    used[idx] = True
                    break
        if v_max == 1:
            tag = UNKNOT_BY_BRIDGE_1
        elif det == 5 and n % 2 == 0:
            tag = CANDIDATE_4_1
        elif det == 7 and n % 2 == 1:
            tag = CANDIDATE_5_2
        else:
            tag = OTHER
        reports.append(ComponentReport(
            label=label,
            strand_count=sub.strand_count,
            v_maxima=v_max,
            h_maxima=h_max,
            determinant=det,
            classification=tag,
        ))
    return reports
