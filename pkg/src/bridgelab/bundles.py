"""Separation families, adjacency graphs, and the 2-connected condition.

For a bridge diagram on the 2n-punctured sphere, the lower shadow arc of
bridge i occupies interval 2i-1 of the reference loop.  For every pair
i != j and hemisphere eps, the chords of the upper system that separate
the two shadow arcs form a nested family; consecutive members are adjacent
across an empty region, and recording which owner labels become adjacent
yields a simple graph on 1..n.  If every such graph is 2-connected, the
bridge sphere is strongly irreducible, hence unperturbed.  The converse
fails, so a negative verdict proves nothing.

Also here: detection of n-bundles, the parallel chord bands realizing
every cyclically consecutive owner adjacency between two fixed intervals.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import __version__
from .arcs import (POS, NEG, ArcSystem, Chord, ChordDiagram, PUNCTURE,
                   CROSSING, sweep)
from .presentation import PlatPresentation, emit, frac, validate


class InternalInconsistencyError(Exception):
    """A structural assertion failed; indicates a bug upstream."""


# -- separation ---------------------------------------------------------------


def _shadow_span(diag: ChordDiagram, i: int) -> tuple:
    """Rank span of sigma_i^- (interval 2i-1, punctures 2i-1 .. 2i)."""
    return (diag.puncture_rank(2 * i - 1), diag.puncture_rank(2 * i))


def separates(diag: ChordDiagram, chord: Chord, i: int, j: int) -> bool:
    """True iff the chord splits the loop with sigma_i^- and sigma_j^- on
    opposite sides.

    A chord with an endpoint at a puncture of either shadow arc does not
    count: the cut subdisks are open, so containment would not be strict.
    """
    if i == j:
        raise ValueError("need distinct bridge indices")
    boundary = {2 * i - 1, 2 * i, 2 * j - 1, 2 * j}
    for end in (chord.end1, chord.end2):
        if end[0] == PUNCTURE and end[1] in boundary:
            return False
    lo, hi = chord.span
    sides = []
    for idx in (i, j):
        r1, r2 = _shadow_span(diag, idx)
        if lo in (r1, r2) or hi in (r1, r2):
            return False
        if r1 < lo < r2 or r1 < hi < r2:
            return False  # chord endpoint interior to the shadow arc
        sides.append(lo < r1 < hi)
    return sides[0] != sides[1]


@dataclass(frozen=True)
class SeparationFamily:
    """The separating chords for (i, j, eps), nested order from sigma_i^-."""

    i: int
    j: int
    hemisphere: int
    chords: tuple


def _side_size(diag: ChordDiagram, chord: Chord, i: int) -> int:
    """Number of ranks in the subdisk side containing sigma_i^-."""
    lo, hi = chord.span
    r1, _ = _shadow_span(diag, i)
    inside = hi - lo - 1
    if lo < r1 < hi:
        return inside
    return diag.total_points - inside - 2


def _spans_cross(s1: tuple, s2: tuple) -> bool:
    (a, b), (c, d) = s1, s2
    return (a < c < b < d) or (c < a < d < b)


def separation_family(diag: ChordDiagram, i: int, j: int,
                      hemisphere: int) -> SeparationFamily:
    members = [c for c in diag.chords[hemisphere] if separates(diag, c, i, j)]
    members.sort(key=lambda c: _side_size(diag, c, i))
    for t in range(len(members) - 1):
        if _spans_cross(members[t].span, members[t + 1].span):
            raise InternalInconsistencyError(
                f"separating chords cross for ({i},{j},{hemisphere:+d})")
    return SeparationFamily(i, j, hemisphere, tuple(members))


# -- graphs --------------------------------------------------------------------


@dataclass(frozen=True)
class AdjacencyGraph:
    """Simple graph on vertices 1..n; edges as sorted pairs."""

    n: int
    edges: frozenset

    def neighbors(self, v: int) -> set:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out


def build_graph(sf: SeparationFamily, n: int) -> AdjacencyGraph:
    """Edge {v, w} iff chords consecutive in the separation order have
    owners v != w; equal consecutive owners contribute nothing."""
    edges = set()
    owners = [c.owner for c in sf.chords]
    for t in range(len(owners) - 1):
        v, w = owners[t], owners[t + 1]
        if v != w:
            edges.add((min(v, w), max(v, w)))
    return AdjacencyGraph(n, frozenset(edges))


def is_two_connected(g: AdjacencyGraph) -> bool:
    """Connected with no cut vertex.  Defined only for n >= 3."""
    if g.n < 3:
        raise ValueError("2-connectivity requires at least 3 vertices")
    vertices = set(range(1, g.n + 1))

    def connected(verts: set) -> bool:
        if not verts:
            return True
        adj = {v: set() for v in verts}
        for a, b in g.edges:
            if a in verts and b in verts:
                adj[a].add(b)
                adj[b].add(a)
        start = next(iter(verts))
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen == verts

    if not connected(vertices):
        return False
    return all(connected(vertices - {v}) for v in vertices)


def contains_full_cycle(g: AdjacencyGraph) -> bool:
    """Whether the graph contains the cycle 1-2-...-n-1."""
    need = {(min(v, v % g.n + 1), max(v, v % g.n + 1)) for v in range(1, g.n + 1)}
    return need <= set(g.edges)


# -- n-bundles -----------------------------------------------------------------


@dataclass(frozen=True)
class BundleRecord:
    hemisphere: int
    k1: int
    k2: int
    owners: tuple
    puncture_endpoints: int

    def interval_pair(self) -> tuple:
        return (min(self.k1, self.k2), max(self.k1, self.k2))


def _coarse_pairs(chord: Chord, n2: int) -> set:
    """Possible (k1, k2) interval assignments for a chord's endpoints.

    A puncture endpoint lies on the two closed intervals it bounds."""
    options = []
    for end in (chord.end1, chord.end2):
        if end[0] == CROSSING:
            options.append({end[1]})
        else:
            q = end[1]
            options.append({(q - 2) % n2 + 1, q})
    pairs = set()
    for a in options[0]:
        for b in options[1]:
            if a != b:
                pairs.add((min(a, b), max(a, b)))
    return pairs


def _nested_chains(chords: list) -> list:
    """Maximal chains of immediately nested chords (empty gaps on both
    sides), outermost first."""
    ranks = sorted({r for c in chords for r in c.span})
    succ = {ranks[t]: ranks[t + 1] for t in range(len(ranks) - 1)}
    at_rank = {}
    for c in chords:
        lo, hi = c.span
        at_rank[lo] = c
        at_rank[hi] = c
    inner = {}
    has_parent = set()
    for c in chords:
        lo, hi = c.span
        nxt = succ.get(lo)
        if nxt is None or nxt not in at_rank:
            continue
        cand = at_rank[nxt]
        clo, chi = cand.span
        if cand is not c and clo == nxt and succ.get(chi) == hi:
            inner[id(c)] = cand
            has_parent.add(id(cand))
    chains = []
    for c in chords:
        if id(c) in has_parent:
            continue
        chain = [c]
        while id(chain[-1]) in inner:
            chain.append(inner[id(chain[-1])])
        chains.append(chain)
    return chains


def find_n_bundles(sys: ArcSystem, hemisphere: int,
                   diag: Optional[ChordDiagram] = None) -> list:
    """All n-bundles in one hemisphere.

    A bundle is a maximal-band sub-run of parallel chords between two fixed
    intervals realizing, for every i, an adjacent (i, i+1 mod n) owner
    pair, with at most one puncture among all its endpoints.
    """
    if diag is None:
        diag = ChordDiagram(sys)
    n = sys.n
    n2 = sys.puncture_count
    chords = diag.family(hemisphere)
    found = []
    for chain in _nested_chains(chords):
        # split the chain into maximal runs with a common interval pair
        t = 0
        while t < len(chain):
            allowed = _coarse_pairs(chain[t], n2)
            u = t
            while u + 1 < len(chain):
                nxt = allowed & _coarse_pairs(chain[u + 1], n2)
                if not nxt:
                    break
                allowed = nxt
                u += 1
            band = chain[t:u + 1]
            found.extend(_bundles_in_band(band, allowed, n))
            t = u + 1
    return found


def _bundles_in_band(band: list, allowed: set, n: int) -> list:
    """Scan one parallel band for sub-runs satisfying the bundle conditions."""
    out = []
    if len(band) < n:
        return out
    punct = [c.puncture_endpoints() for c in band]
    # maximal sub-runs with at most one puncture endpoint in total
    starts = []
    lo = 0
    total = 0
    for hi in range(len(band)):
        total += punct[hi]
        while total > 1:
            total -= punct[lo]
            lo += 1
        starts.append((lo, hi))
    seen_runs = set()
    for lo, hi in starts:
        # extend to the maximal run ending at hi; record unique maximal runs
        run = (lo, hi)
        if run in seen_runs:
            continue
        seen_runs.add(run)
    maximal = []
    for lo, hi in sorted(seen_runs):
        if any(l2 <= lo and hi <= h2 and (l2, h2) != (lo, hi)
               for l2, h2 in seen_runs):
            continue
        maximal.append((lo, hi))
    for lo, hi in maximal:
        owners = [c.owner for c in band[lo:hi + 1]]
        pairs = {(min(owners[t], owners[t + 1]), max(owners[t], owners[t + 1]))
                 for t in range(len(owners) - 1)}
        need = {(min(v, v % n + 1), max(v, v % n + 1)) for v in range(1, n + 1)}
        if need <= pairs:
            k1, k2 = sorted(allowed)[0]
            out.append(BundleRecord(
                hemisphere=band[0].hemisphere,
                k1=k1, k2=k2,
                owners=tuple(owners),
                puncture_endpoints=sum(punct[lo:hi + 1]),
            ))
    return out


def bundle_interval_pairs(sys: ArcSystem, hemisphere: int,
                          diag: Optional[ChordDiagram] = None) -> set:
    return {b.interval_pair() for b in find_n_bundles(sys, hemisphere, diag)}


# -- the certificate ------------------------------------------------------------


@dataclass(frozen=True)
class TripleVerdict:
    i: int
    j: int
    hemisphere: int
    two_connected: bool
    full_cycle: bool


@dataclass(frozen=True)
class Certificate:
    """Full verdict of the 2-connected condition for one presentation."""

    input_digest: str
    n: int
    m: Optional[int]
    engine_version: str
    triples: tuple
    condition_holds: bool
    strongly_irreducible: bool
    unperturbed: bool
    bundles_at_level: dict

    def to_obj(self) -> dict:
        return {
            "input_digest": self.input_digest,
            "n": self.n,
            "m": self.m,
            "engine_version": self.engine_version,
            "triples": [
                {"i": t.i, "j": t.j, "eps": "+" if t.hemisphere == POS else "-",
                 "two_connected": t.two_connected, "full_cycle": t.full_cycle}
                for t in self.triples
            ],
            "condition_holds": self.condition_holds,
            "strongly_irreducible": self.strongly_irreducible,
            "unperturbed": self.unperturbed,
            "bundles_at_level": self.bundles_at_level,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))


def _thread_count() -> int:
    raw = os.environ.get("BRIDGELAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _evaluate_triple(diag: ChordDiagram, n: int, i: int, j: int,
                     hemisphere: int) -> TripleVerdict:
    sf = separation_family(diag, i, j, hemisphere)
    g = build_graph(sf, n)
    return TripleVerdict(i, j, hemisphere, is_two_connected(g),
                         contains_full_cycle(g))


def check_condition(p: PlatPresentation, bundle_level=2) -> Certificate:
    """Sweep to level 0 and check 2-connectivity of every G_{i,j,eps}.

    The verdict is one-sided: if the condition holds, the bridge sphere is
    strongly irreducible and therefore unperturbed; if it fails, nothing
    is concluded.
    """
    problems = validate(p)
    if problems:
        raise ValueError("invalid presentation: " + "; ".join(problems))
    n = p.bridge_number
    if n < 3:
        raise ValueError("the 2-connected condition requires n >= 3")
    sys = sweep(p, 0)
    diag = ChordDiagram(sys)
    jobs = [(i, j, eps) for i in range(1, n + 1) for j in range(i + 1, n + 1)
            for eps in (POS, NEG)]
    workers = _thread_count()
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda job: _evaluate_triple(diag, n, *job), jobs))
    else:
        results = [_evaluate_triple(diag, n, *job) for job in jobs]
    holds = all(t.two_connected for t in results)

    bundles = {}
    if bundle_level is not None and frac(bundle_level) in p.special_heights():
        level_sys = sweep(p, bundle_level)
        level_diag = ChordDiagram(level_sys)
        bundles[str(bundle_level)] = {
            ("+" if eps == POS else "-"): sorted(
                {b.interval_pair() for b in
                 find_n_bundles(level_sys, eps, level_diag)})
            for eps in (POS, NEG)
        }

    return Certificate(
        input_digest=hashlib.sha256(emit(p).encode()).hexdigest(),
        n=n,
        m=int(p.meta["m"]) if "m" in p.meta else None,
        engine_version=__version__,
        triples=tuple(results),
        condition_holds=holds,
        strongly_irreducible=holds,
        unperturbed=holds,
        bundles_at_level={k: {e: [list(pair) for pair in v] for e, v in d.items()}
                          for k, d in bundles.items()},
    )
