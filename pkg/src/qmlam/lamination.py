"""Invariant laminations generated by a periodic angle.

Three chord families are built here, all by exact inverse-branch pullback:

* the step-k lamination: the long chord between the two preimages of alpha
  and its first k-1 preimage generations;
* the limit (boundary) lamination: pullbacks of the root chord joining
  alpha to its companion along the branch labeled by the opposite of the
  characteristic symbol — these are the chords rays actually land on;
* the quadrilateral lamination: pullbacks of all four sides of the center
  gap spanned by the critical preimages of both companions.

On top of these sit the itinerary regions D_x (all angles whose itinerary
starts with a word x), the encoding of infinite gaps by regular words, and
the chord-chain equivalence joining angles that land together.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .angles import (
    Angle,
    Chord,
    HALF,
    arc_len,
    chords_cross,
    critical_pair,
    dot_points,
    double,
    format_angle,
    in_open_arc,
    inverse_branch_step,
    is_periodic,
    norm_angle,
    orbit_info,
)
from .kneading import (
    EpSequence,
    ExtendedAngle,
    characteristic_symbol,
    companion_angle,
    is_precritical,
    itinerary,
    repetition_word,
)


@dataclass(frozen=True)
class Lamination:
    """A finite, pairwise non-crossing chord family tied to an angle."""

    alpha: Angle
    chords: Tuple[Chord, ...]

    def __len__(self) -> int:
        return len(self.chords)

    def check(self) -> None:
        cs = self.chords
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if chords_cross(cs[i], cs[j]):
                    raise AssertionError(f"chords cross: {cs[i]} x {cs[j]}")


def _pull_chord(alpha: Angle, t: int, s: int, c: Chord) -> Chord:
    word = str(s) + (c.label[0] if c.label else "")
    return Chord(inverse_branch_step(alpha, t, s, c.a),
                 inverse_branch_step(alpha, t, s, c.b),
                 label=(word, t))


def step_lamination(alpha: Angle, k: int, t: Optional[int] = None) -> Lamination:
    """Long chord of alpha plus its preimages to depth k-1 (2^k - 1 chords).

    Where a pullback hits alpha the branch tie is broken by t; the default
    follows the accumulation branch (opposite of the characteristic symbol).
    """
    alpha = norm_angle(alpha)
    if k < 1:
        raise ValueError("k must be >= 1")
    if t is None:
        t = 1 - characteristic_symbol(alpha)
    lo, hi = critical_pair(alpha)
    level = [Chord(lo, hi, label=("", t))]
    chords = list(level)
    for _ in range(k - 1):
        level = [_pull_chord(alpha, t, s, c) for c in level for s in (0, 1)]
        chords.extend(level)
    return Lamination(alpha, tuple(chords))


def boundary_lamination(alpha: Angle, depth: int) -> Lamination:
    """Root chord (alpha, companion) and its pullbacks along the
    accumulation branch, to the given word depth."""
    alpha = norm_angle(alpha)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    t = 1 - characteristic_symbol(alpha)
    beta = companion_angle(alpha)
    root = Chord(alpha, beta, label=("", t))
    level = [root]
    seen = {root}
    order = [root]
    for _ in range(depth):
        nxt = []
        for c in level:
            for s in (0, 1):
                cc = _pull_chord(alpha, t, s, c)
                nxt.append(cc)
                if cc not in seen:
                    seen.add(cc)
                    order.append(cc)
        level = nxt
    return Lamination(alpha, tuple(order))


# ---------------------------------------------------------------------------
# quadrilateral lamination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadGap:
    """Gap of the quadrilateral lamination: vertices in cyclic order plus
    the branch word addressing it.

    ``is_chord[i]`` tells whether the side from vertex i to vertex i+1 is a
    genuine lamination chord; sides descending from the critical diameter
    (the gap diagonals) are flagged off.  Generic preimage gaps are
    quadrilaterals; a gap gains a fifth vertex whenever one of its vertices
    is alpha itself, because the pullback then opens along the diameter.
    """

    vertices: Tuple[Angle, ...]
    prefix: str
    is_chord: Tuple[bool, ...] = ()

    def __post_init__(self):
        if not self.is_chord:
            object.__setattr__(self, "is_chord", (True,) * len(self.vertices))
        if len(self.is_chord) != len(self.vertices):
            raise ValueError("one side flag per vertex required")

    def sides(self) -> Tuple[Chord, ...]:
        """The genuine chord sides, in boundary order."""
        v = self.vertices
        k = len(v)
        return tuple(Chord(v[i], v[(i + 1) % k])
                     for i in range(k) if self.is_chord[i])


def center_gap(alpha: Angle) -> QuadGap:
    beta = companion_angle(alpha)
    vs = sorted(critical_pair(alpha) + critical_pair(beta))
    return QuadGap(tuple(vs), "")


def _pull_gap(alpha: Angle, s: int, gap: QuadGap,
              obstacles: Sequence[Chord]) -> QuadGap:
    """Preimage component of a gap inside one closed half of the diameter.

    Doubling is an order-preserving bijection from each closed half onto
    the circle cut at alpha, so vertices pull back by halving their cyclic
    position relative to alpha.  A vertex at alpha itself has both halves'
    boundary points as preimages; the component keeps the single copy whose
    incident sides stay non-crossing with the ambient chords.
    """
    lo, hi = critical_pair(alpha)
    start = lo if s == 0 else hi
    other = hi if s == 0 else lo
    k = len(gap.vertices)
    r = min(range(k), key=lambda i: (gap.vertices[i] - alpha) % 1)
    order = [(r + m) % k for m in range(k)]
    if [(gap.vertices[i] - alpha) % 1 for i in order] != \
            sorted((v - alpha) % 1 for v in gap.vertices):
        raise AssertionError("gap vertices must be in cyclic order")
    split = (gap.vertices[r] - alpha) % 1 == 0
    prefix = str(s) + gap.prefix

    if not split:
        pts = [norm_angle(start + ((gap.vertices[i] - alpha) % 1) / 2)
               for i in order]
        flags = [gap.is_chord[i] for i in order]
        return QuadGap(tuple(pts), prefix, tuple(flags))

    inner = [norm_angle(start + ((gap.vertices[i] - alpha) % 1) / 2)
             for i in order[1:]]
    inner_flags = [gap.is_chord[i] for i in order[1:]]
    out_flag, in_flag = gap.is_chord[order[0]], gap.is_chord[order[-1]]
    blocking = list(obstacles) + [Chord(gap.vertices[i], gap.vertices[(i + 1) % k])
                                  for i in range(k)]

    def clean(c: Chord) -> bool:
        return not any(chords_cross(c, o) for o in blocking)

    for copy in (other, start):
        out_side = Chord(copy, inner[0])
        in_side = Chord(inner[-1], copy)
        if clean(out_side) and clean(in_side):
            if copy == start:
                pts = [start] + inner
                flags = [out_flag] + inner_flags
            else:
                pts = inner + [other]
                flags = inner_flags[:-1] + [in_flag, out_flag]
            return QuadGap(tuple(pts), prefix, tuple(flags))
    raise AssertionError(f"no valid preimage component for gap {gap.prefix!r}")


def quad_lamination(alpha: Angle, depth: int) -> Tuple[Tuple[QuadGap, ...], Lamination]:
    """Center gap, its preimage gaps to the given depth, and all side chords.

    A chord is *long* when it belongs to the accumulation branch tree of
    the root chord (the same family the limit lamination is built from);
    the remaining sides are the short chords across which first itinerary
    symbols flip.
    """
    alpha = norm_angle(alpha)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    gaps = [center_gap(alpha)]
    root = Chord(alpha, companion_angle(alpha), label=("", 1))
    chords: List[Chord] = [root]
    seen = {root}
    for c in gaps[0].sides():
        if c not in seen:
            seen.add(c)
            chords.append(c)
    level = [gaps[0]]
    for _ in range(depth):
        nxt = []
        for g in level:
            for s in (0, 1):
                gg = _pull_gap(alpha, s, g, chords)
                nxt.append(gg)
                for c in gg.sides():
                    if c not in seen:
                        seen.add(c)
                        chords.append(c)
        gaps.extend(nxt)
        level = nxt
    return tuple(gaps), Lamination(alpha, tuple(chords))


def quad_long_chords(alpha: Angle, depth: int) -> Tuple[Chord, ...]:
    """The long chords of the quadrilateral lamination: the root chord and
    its pullbacks along the accumulation branch."""
    return boundary_lamination(alpha, depth + 1).chords


# ---------------------------------------------------------------------------
# itinerary regions D_x
# ---------------------------------------------------------------------------

Arc = Tuple[Angle, Angle]  # closed ccw arc (a, b), positive length


def _map_arc_one_branch(alpha: Angle, s: int, arc: Arc) -> List[Arc]:
    """Image of a closed arc under the inverse branch l_s, split at alpha.

    At the cut point alpha the branch has one-sided limits: approaching
    alpha from above lands at the start of the image side, from below at
    its end.
    """
    lo, hi = critical_pair(alpha)
    # one-sided limit values of l_s at the cut
    if s == 0:
        at_plus, at_minus = lo, hi
    else:
        at_plus, at_minus = hi, lo

    def lift(x: Angle, side: int) -> Angle:
        if x == alpha:
            return at_plus if side > 0 else at_minus
        return inverse_branch_step(alpha, 0, s, x)

    a, b = arc
    if in_open_arc(alpha, a, b):
        return [(lift(a, +1), lift(alpha, -1)), (lift(alpha, +1), lift(b, -1))]
    return [(lift(a, +1), lift(b, -1))]


def region_arcs(alpha: Angle, word: str) -> List[Arc]:
    """Closed arcs of the region D_word = {theta : itinerary starts with word}."""
    alpha = norm_angle(alpha)
    if not set(word) <= {"0", "1"}:
        raise ValueError("word must be over {0,1}")
    if not word:
        return [(Fraction(0), HALF), (HALF, Fraction(0))]
    lo, hi = critical_pair(alpha)
    arcs: List[Arc] = []
    for i, ch in enumerate(reversed(word)):
        s = int(ch)
        if i == 0:
            arcs = [(lo, hi) if s == 0 else (hi, lo)]
        else:
            arcs = [im for a in arcs for im in _map_arc_one_branch(alpha, s, a)]
    return arcs


@dataclass(frozen=True)
class WordRegion:
    """Bounding data of D_x: its circle arcs, boundary chords, and the
    triangle gap when x ends with a full repetition block."""

    word: str
    regular: bool
    arcs: Tuple[Arc, ...]
    chords: Tuple[Chord, ...]
    triangle: Optional[Tuple[Chord, Chord, Chord]]


def is_regular_word(alpha: Angle, word: str) -> bool:
    """A word is regular for alpha unless it ends with 0v or 1v."""
    v = repetition_word(alpha)
    tail = len(v) + 1
    return not (len(word) >= tail and word[len(word) - tail + 1:] == v)


def region_of_word(alpha: Angle, word: str) -> WordRegion:
    """Boundary description of D_word, with the splitting chords."""
    alpha = norm_angle(alpha)
    arcs = tuple(region_arcs(alpha, word))
    lo, hi = critical_pair(alpha)
    chords: List[Chord] = []
    if word:
        chords.append(Chord(lo, hi, label=("", 0)))
        for j in range(1, len(word)):
            prefix, rest = word[:j], word[j:]
            # chord S_prefix bounds D_word once the remaining symbols rest
            # are consumed; pull the long chord back along prefix
            c = Chord(lo, hi)
            for ch in reversed(prefix):
                c = Chord(inverse_branch_step(alpha, 0, int(ch), c.a),
                          inverse_branch_step(alpha, 0, int(ch), c.b),
                          label=(prefix, 0))
            chords.append(c)
    regular = is_regular_word(alpha, word)
    triangle = None
    if word and not regular:
        v = repetition_word(alpha)
        stem = word[:-(len(v) + 1)]
        tri: List[Chord] = []
        for t in (0, 1):
            c = Chord(lo, hi)
            for ch in reversed(word):
                c = Chord(inverse_branch_step(alpha, t, int(ch), c.a),
                          inverse_branch_step(alpha, t, int(ch), c.b),
                          label=(word, t))
            tri.append(c)
        base = Chord(lo, hi)
        for ch in reversed(stem):
            base = Chord(inverse_branch_step(alpha, 0, int(ch), base.a),
                         inverse_branch_step(alpha, 0, int(ch), base.b),
                         label=(stem, 0))
        triangle = (tri[0], tri[1], base)
    return WordRegion(word, regular, arcs, tuple(chords), triangle)


def realize_prefix(alpha: Angle, word: str) -> ExtendedAngle:
    """Some angle whose itinerary starts with the given word."""
    arcs = region_arcs(alpha, word)
    for a, b in arcs:
        span = arc_len(a, b)
        for k in (2, 3, 5, 7, 11):
            cand = norm_angle(a + span / k)
            seq = itinerary(alpha, ExtendedAngle(cand, 0))
            if seq.head(len(word)) == word and not seq.has_star:
                return ExtendedAngle(cand, 0)
    raise AssertionError(f"could not realize prefix {word!r} at {format_angle(alpha)}")


# ---------------------------------------------------------------------------
# gap encoding
# ---------------------------------------------------------------------------

def _tail_tiles(seq: EpSequence, j: int, v: str, horizon: int) -> Optional[bool]:
    """Does seq[j:] split into whole blocks (0v | 1v) forever?"""
    n = len(v) + 1
    m = j
    while m + n <= horizon:
        if seq.head(m + n)[m + 1:m + n] != v:
            return False
        m += n
    return True


def _block_tail_start(alpha: Angle, seq: EpSequence) -> List[int]:
    """All positions where a full block tiling of the tail can begin,
    restricted to regular prefixes."""
    v = repetition_word(alpha)
    n = len(v) + 1
    L = _lcm(len(seq.cyc), n)
    horizon = len(seq.pre) + 2 * L + 2 * n
    out = []
    for j in range(len(seq.pre) + L + n):
        if _tail_tiles(seq, j, v, max(horizon, j + 2 * L + n)):
            prefix = seq.head(j)
            if _regular(prefix, v):
                out.append(j)
    return out


def _regular(word: str, v: str) -> bool:
    tail = len(v) + 1
    return not (len(word) >= tail and word[len(word) - tail + 1:] == v)


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a // gcd(a, b) * b


def gap_encoding(alpha: Angle, theta: ExtendedAngle) -> Optional[str]:
    """Regular word w with theta on the closure of the infinite gap G_w,
    or None when theta's itinerary never settles into whole blocks.

    The candidate tiling positions come from the itinerary; among them the
    gap is the first whose shifted angle sits, marker included, on the
    closed central band between the two short sides of the center gap.
    """
    alpha = norm_angle(alpha)
    seq = itinerary(alpha, theta)
    if seq.has_star:
        raise ValueError("gap encoding needs a marker-resolved itinerary")
    starts = _block_tail_start(alpha, seq)
    if not starts:
        return None
    if len(starts) == 1:
        return seq.head(starts[0])
    beta = companion_angle(alpha)
    a1, a2 = critical_pair(alpha)
    b1, b2 = critical_pair(beta)
    band = [(min(a1, b1), max(a1, b1)), (min(a2, b2), max(a2, b2))]

    def in_band(x: Angle, side: int) -> bool:
        for lo, hi in band:
            if in_open_arc(x, lo, hi):
                return True
            if x == lo and side > 0:
                return True
            if x == hi and side < 0:
                return True
        return False

    x = theta.angle
    pos = 0
    for j in starts:
        while pos < j:
            x = double(x)
            pos += 1
        if in_band(x, theta.side):
            return seq.head(j)
    return None


# ---------------------------------------------------------------------------
# chord-chain (landing) equivalence
# ---------------------------------------------------------------------------

def _chain_partner(alpha: Angle, t: int, path: Sequence[Angle],
                   target: Angle) -> Angle:
    """Pull target back along the branch sides taken by path (deepest first).

    The side of each path point fixes the branch symbol; boundary points
    (the two preimages of alpha) resolve through the tie bit t, matching
    the branch family that generates the limit lamination.
    """
    adot, addot = dot_points(alpha)
    lo, hi = critical_pair(alpha)
    y = target
    for x in reversed(path):
        if x == adot:
            s = t
        elif x == addot:
            s = 1 - t
        elif in_open_arc(x, lo, hi):
            s = 0
        else:
            s = 1
        y = inverse_branch_step(alpha, t, s, y)
    return y


def _neighbors(alpha: Angle, beta: Angle, t: int, x: Angle) -> List[Angle]:
    """Endpoints joined to x by a chord of the limit lamination."""
    info = orbit_info(x)
    out = []
    path: List[Angle] = []
    y = x
    for _ in range(info.preperiod + info.period):
        if y == alpha:
            p = _chain_partner(alpha, t, path, beta)
            if p != x:
                out.append(p)
        elif y == beta:
            p = _chain_partner(alpha, t, path, alpha)
            if p != x:
                out.append(p)
        path.append(y)
        y = double(y)
    return out


def julia_class(alpha: Angle, theta: Angle) -> Tuple[Angle, ...]:
    """All angles reachable from theta through chords of the limit lamination."""
    alpha = norm_angle(alpha)
    beta = companion_angle(alpha)
    t = 1 - characteristic_symbol(alpha)
    theta = norm_angle(theta)
    seen = {theta}
    queue = [theta]
    while queue:
        x = queue.pop()
        for y in _neighbors(alpha, beta, t, x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
        if len(seen) > 4 * orbit_info(alpha).period + 8:
            raise AssertionError("landing class unexpectedly large")
    return tuple(sorted(seen))


def julia_equivalent(alpha: Angle, t1: Angle, t2: Angle) -> bool:
    """True iff t1 and t2 are joined by a finite chain of limit chords."""
    t1, t2 = norm_angle(t1), norm_angle(t2)
    if t1 == t2:
        return True
    return t2 in julia_class(alpha, t1)
