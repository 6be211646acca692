"""Enumeration and classification of characteristic arcs (the QML).

The minor leaves of the quadratic minor lamination are generated by the
classical greedy pairing: walk the angles of exact period p in increasing
order and join each unpaired angle to the lowest unpaired angle that the
chord can reach without crossing any leaf already drawn (earlier periods
included).  Because leaves never cross, "reachable" means "in the same face
of the partial lamination", which a single circular sweep computes; inside
one face the pairing is simply adjacent-in-order.

On top of the enumeration sit the orbit portrait of an arc, the narrowness
test (no proper portrait arc nests the characteristic one), internal
addresses read off the *-periodic kneading sequence, the divisibility test
for simple renormalizability, and the summary/classification tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .angles import (
    Angle,
    Chord,
    HALF,
    arc_len,
    chord_nests,
    format_angle,
    norm_angle,
)
from .kneading import companion_angle

# float sort keys are exact separators for rationals with denominator
# below 2^26 (distinct values differ by more than 2^-52); the enumeration
# is capped well under that.
MAX_ENUM_PERIOD = 20

NONPRIME_PERIODS = tuple(p for p in range(4, MAX_ENUM_PERIOD + 1)
                         if any(p % d == 0 for d in range(2, p)))


@dataclass(frozen=True)
class CharacteristicArc:
    """Companion pair (lo, hi) with classification metadata."""

    lo: Angle
    hi: Angle
    period: int
    width: Fraction
    narrow: bool
    satellite: bool

    def __str__(self) -> str:
        return f"({format_angle(self.lo)}, {format_angle(self.hi)})"

    def endpoints(self) -> Tuple[Angle, Angle]:
        return self.lo, self.hi

    def chord(self) -> Chord:
        return Chord(self.lo, self.hi)

    def mirror(self) -> "CharacteristicArc":
        """Image under conjugation x -> 1 - x (the vertical symmetry)."""
        return make_arc(norm_angle(1 - self.hi), norm_angle(1 - self.lo))


def _orbit_nums(j: int, den: int) -> Tuple[int, ...]:
    out = [j]
    x = (2 * j) % den
    while x != j:
        out.append(x)
        x = (2 * x) % den
    return tuple(out)


def _exact_period(j: int, den: int, p: int) -> bool:
    for m in range(1, p):
        if p % m == 0 and (j * (2**m - 1)) % den == 0:
            return False
    return True


def make_arc(lo: Angle, hi: Angle) -> CharacteristicArc:
    """Build an arc record from a companion pair given as (lo, hi), lo < hi on the arc."""
    lo, hi = norm_angle(lo), norm_angle(hi)
    width = arc_len(lo, hi)
    if width >= HALF:
        raise ValueError("characteristic arc must be shorter than a half circle")
    den = lo.denominator
    if den % 2 == 0 or hi.denominator % 2 == 0:
        raise ValueError("arc endpoints must be periodic angles")
    p = len(_orbit_nums(lo.numerator, lo.denominator))
    if len(_orbit_nums(hi.numerator, hi.denominator)) != p:
        raise ValueError("endpoints must share the doubling period")
    D = 2**p - 1
    narrow = width == Fraction(1, D)
    lo_scaled = lo.numerator * (D // lo.denominator)
    hi_scaled = hi.numerator * (D // hi.denominator)
    satellite = set(_orbit_nums(lo_scaled, D)) == set(_orbit_nums(hi_scaled, D))
    return CharacteristicArc(lo, hi, p, width, narrow, satellite)


# ---------------------------------------------------------------------------
# Lavaurs enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def lavaurs_arcs(max_period: int) -> Tuple[CharacteristicArc, ...]:
    """All characteristic arcs of period <= max_period, sorted by (period, lo)."""
    if max_period < 2:
        raise ValueError("max_period must be at least 2")
    if max_period > MAX_ENUM_PERIOD:
        raise ValueError(f"enumeration capped at period {MAX_ENUM_PERIOD}")
    leaves: List[Tuple[Fraction, Fraction, int]] = []  # (lo, hi, period)
    for p in range(2, max_period + 1):
        den = 2**p - 1
        pts = [j for j in range(1, den) if _exact_period(j, den, p)]
        events: List[Tuple[float, int, int]] = []
        for idx, (lo, hi, _) in enumerate(leaves):
            events.append((lo.numerator / lo.denominator, 0, idx))
            events.append((hi.numerator / hi.denominator, 1, idx))
        for j in pts:
            events.append((j / den, 2, j))
        events.sort(key=lambda t: t[0])
        stack: List[int] = []
        groups: Dict[int, List[int]] = {}
        for _, kind, payload in events:
            if kind == 0:
                stack.append(payload)
            elif kind == 1:
                top = stack.pop()
                if top != payload:
                    raise AssertionError("leaf intervals must nest")
            else:
                groups.setdefault(stack[-1] if stack else -1, []).append(payload)
        for face, members in groups.items():
            if len(members) % 2:
                raise AssertionError(f"odd face population at period {p}")
            for i in range(0, len(members), 2):
                lo = Fraction(members[i], den)
                hi = Fraction(members[i + 1], den)
                if arc_len(lo, hi) >= HALF:
                    raise AssertionError("paired leaf spans a half circle")
                leaves.append((lo, hi, p))
    return tuple(sorted((make_arc(lo, hi) for lo, hi, _ in leaves),
                        key=lambda a: (a.period, a.lo)))


def arcs_of_period(period: int) -> Tuple[CharacteristicArc, ...]:
    return tuple(a for a in lavaurs_arcs(period) if a.period == period)


def narrow_arcs(max_period: int) -> Tuple[CharacteristicArc, ...]:
    return tuple(a for a in lavaurs_arcs(max_period) if a.narrow)


def arc_of(alpha: Angle) -> CharacteristicArc:
    """Characteristic arc having alpha as one endpoint (via the companion map)."""
    beta = companion_angle(alpha)
    lo, hi = (alpha, beta) if arc_len(alpha, beta) < HALF else (beta, alpha)
    return make_arc(lo, hi)


# ---------------------------------------------------------------------------
# orbit portraits and narrowness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitPortrait:
    """Oriented arcs A_1..A_n carried around by doubling."""

    arcs: Tuple[Tuple[Angle, Angle], ...]

    @property
    def chords(self) -> Tuple[Chord, ...]:
        return tuple(Chord(a, b) for a, b in self.arcs)

    def long_indices(self) -> Tuple[int, ...]:
        """1-based indices of arcs longer than a half circle."""
        return tuple(i + 1 for i, (a, b) in enumerate(self.arcs)
                     if arc_len(a, b) > HALF)


def orbit_portrait(arc: CharacteristicArc) -> OrbitPortrait:
    """Forward arc orbit: double short arcs; across a long arc take the
    complementary arc covered only once by its image."""
    arcs = [(arc.lo, arc.hi)]
    for _ in range(arc.period - 1):
        x, y = arcs[-1]
        if arc_len(x, y) < HALF:
            arcs.append(((2 * x) % 1, (2 * y) % 1))
        else:
            arcs.append(((2 * y) % 1, (2 * x) % 1))
    return OrbitPortrait(tuple(arcs))


@dataclass(frozen=True)
class Narrowness:
    narrow: bool
    first_nesting_index: int
    longest_nested_narrow: Optional[CharacteristicArc]


def classify_narrowness(arc: CharacteristicArc) -> Narrowness:
    """Narrow iff no portrait arc before the last one nests the first.

    For a non-narrow arc the widest narrow arc strictly inside it is also
    reported; its period is determined by the width window.
    """
    portrait = orbit_portrait(arc)
    base = portrait.chords[0]
    first = arc.period
    for i in range(2, arc.period + 1):
        if chord_nests(base, portrait.chords[i - 1]):
            first = i
            break
    else:
        raise AssertionError("the final portrait arc always nests the first")
    narrow = first == arc.period and arc.narrow
    if arc.narrow != (first == arc.period):
        raise AssertionError(f"width and nesting tests disagree on {arc}")
    nested = None
    if not narrow:
        nested = _longest_nested_narrow(arc)
    return Narrowness(narrow, first, nested)


def _longest_nested_narrow(arc: CharacteristicArc) -> CharacteristicArc:
    k = 2
    while Fraction(1, 2**k - 1) >= arc.width:
        k += 1
    den = 2**k - 1
    inside = [j for j in range(1, den)
              if _exact_period(j, den, k)
              and in_strict(Fraction(j, den), arc)]
    if len(inside) != 2:
        raise AssertionError(
            f"expected exactly two period-{k} angles inside {arc}, got {len(inside)}")
    nested = make_arc(Fraction(inside[0], den), Fraction(inside[1], den))
    if not nested.narrow:
        raise AssertionError(f"nested arc {nested} must be narrow")
    return nested


def in_strict(x: Angle, arc: CharacteristicArc) -> bool:
    return Fraction(0) < arc_len(arc.lo, x) < arc.width


# ---------------------------------------------------------------------------
# internal addresses and renormalizability
# ---------------------------------------------------------------------------

def kneading_word(arc: CharacteristicArc) -> str:
    """Repetition word of the arc (length period - 1), via integer orbit walk."""
    p = arc.period
    D = 2**p - 1
    a = arc.lo.numerator * (D // arc.lo.denominator)
    x = a
    symbols: List[str] = []
    for _ in range(p):
        two = 2 * x
        if (two - a) % D == 0:
            symbols.append("*")
        elif a < two < a + D:
            symbols.append("0")
        else:
            symbols.append("1")
        x = two % D
    if symbols[-1] != "*" or "*" in symbols[:-1]:
        raise AssertionError(f"kneading block of {arc} must end with the unique *")
    return "".join(symbols[:-1])


def internal_address(arc: CharacteristicArc) -> Tuple[int, ...]:
    """Strictly increasing address from the *-periodic kneading sequence.

    Start at 1; repeatedly compare the sequence against the periodic
    extension of its first S symbols and jump to the first disagreement.
    """
    p = arc.period
    block = kneading_word(arc) + "*"
    addr = [1]
    S = 1
    while S < p:
        i = S
        while block[i % p] == block[i % S]:
            i += 1
        S = i + 1
        addr.append(S)
    if addr[-1] != p:
        raise AssertionError("internal address must end at the arc period")
    return tuple(addr)


def is_simply_renormalizable(arc: CharacteristicArc) -> bool:
    """Divisibility scan of the internal address, proper entries only."""
    addr = internal_address(arc)
    n = addr[-1]
    for i, entry in enumerate(addr):
        if entry == 1 or entry == n:
            continue
        if all(later % entry == 0 for later in addr[i:]):
            return True
    return False


# ---------------------------------------------------------------------------
# summary tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioRow:
    period: int
    narrow: int
    non_narrow: int
    total: int
    nonrenorm_non_narrow: int
    nonrenorm_total: int

    @property
    def ratio(self) -> Fraction:
        if self.nonrenorm_total == 0:
            return Fraction(0)
        return Fraction(self.nonrenorm_non_narrow, self.nonrenorm_total)

    def ratio_text(self) -> str:
        # truncated, not rounded, to six decimal places
        scaled = self.ratio.numerator * 10**6 // self.ratio.denominator
        return f"{scaled // 10**6}.{scaled % 10**6:06d}"


@dataclass(frozen=True)
class ArcRow:
    arc: CharacteristicArc
    kneading: str
    address: Tuple[int, ...]


@dataclass(frozen=True)
class Tables:
    ratio_rows: Tuple[RatioRow, ...]
    arc_rows: Dict[int, Tuple[ArcRow, ...]]


def symmetry_representative(arc: CharacteristicArc) -> CharacteristicArc:
    """Of an arc and its conjugation mirror, the one with the smaller lo."""
    mirror = arc.mirror()
    return arc if arc.lo <= mirror.lo else mirror


def build_tables(max_period: int = 10, extended: bool = False) -> Tables:
    """Per-period counts and the classified arc listing.

    Rows cover composite periods only.  Counts: narrow / non-narrow / all
    arcs, then the not-simply-renormalizable ones, with the ratio of
    non-narrow arcs among them.  The arc listing keeps, per period, every
    non-narrow non-renormalizable arc, one representative per mirror pair,
    with its repetition word and internal address.
    """
    if max_period < 4:
        raise ValueError("tables need max_period >= 4")
    top = max(max_period, 15) if extended else max_period
    periods = [p for p in NONPRIME_PERIODS if p <= top]
    arcs = lavaurs_arcs(top)
    ratio_rows: List[RatioRow] = []
    arc_rows: Dict[int, Tuple[ArcRow, ...]] = {}
    for p in periods:
        members = [a for a in arcs if a.period == p]
        narrow_n = sum(1 for a in members if a.narrow)
        nonrenorm = [a for a in members if not is_simply_renormalizable(a)]
        nn_nonrenorm = [a for a in nonrenorm if not a.narrow]
        ratio_rows.append(RatioRow(
            period=p,
            narrow=narrow_n,
            non_narrow=len(members) - narrow_n,
            total=len(members),
            nonrenorm_non_narrow=len(nn_nonrenorm),
            nonrenorm_total=len(nonrenorm),
        ))
        reps = sorted(
            {(r.lo, r.hi) for r in (symmetry_representative(a) for a in nn_nonrenorm)})
        rows = []
        for lo, hi in reps:
            a = make_arc(lo, hi)
            rows.append(ArcRow(a, kneading_word(a), internal_address(a)))
        arc_rows[p] = tuple(rows)
    return Tables(tuple(ratio_rows), arc_rows)
