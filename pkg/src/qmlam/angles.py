"""Exact rational arithmetic on the circle R/Z and the angle doubling map.

Every angle is a reduced rational in [0, 1), held as a ``fractions.Fraction``.
All predicates (cyclic order, arc membership, chord crossing) are decided by
exact integer arithmetic; no floating point enters any result.

Conventions used throughout the package:

* ``h`` denotes the doubling map ``x -> 2x (mod 1)``.
* An *arc* ``(a, b)`` is the set of points met when walking counterclockwise
  from ``a`` to ``b``; its length is ``(b - a) mod 1``.
* A *chord* is an unordered pair of angles, drawn as a straight segment in
  the closed unit disk.
* A point lies *behind* a chord when it is interior to the shorter of the
  two complementary arcs.  The notion is undefined for exact diameters and
  raises ``ValueError`` there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Tuple

Angle = Fraction

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# construction / parsing
# ---------------------------------------------------------------------------

def norm_angle(x: Fraction | int) -> Angle:
    """Reduce x modulo 1 into [0, 1)."""
    return Fraction(x) % 1


def angle(num: int, den: int = 1) -> Angle:
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(num, den) % 1


def parse_angle(text: str) -> Angle:
    """Parse 'p/q', an integer, or a binary expansion '0.pre(per)'."""
    t = text.strip()
    if "(" in t or t.startswith("0.") or t.startswith("."):
        return _parse_binary(t)
    if "/" in t:
        num, den = t.split("/", 1)
        return angle(int(num), int(den))
    return angle(int(t))


def _parse_binary(t: str) -> Angle:
    body = t
    if body.startswith("0."):
        body = body[2:]
    elif body.startswith("."):
        body = body[1:]
    if "(" in body:
        if not body.endswith(")"):
            raise ValueError(f"bad binary angle syntax: {t!r}")
        pre, per = body[:-1].split("(", 1)
    else:
        pre, per = body, "0"
    if per == "":
        per = "0"
    if not set(pre) <= {"0", "1"} or not set(per) <= {"0", "1"}:
        raise ValueError(f"bad binary angle syntax: {t!r}")
    return angle_from_binary(pre, per)


def format_angle(a: Angle) -> str:
    a = norm_angle(a)
    return f"{a.numerator}/{a.denominator}" if a.denominator != 1 else str(a.numerator)


# ---------------------------------------------------------------------------
# doubling dynamics
# ---------------------------------------------------------------------------

def double(a: Angle) -> Angle:
    """Image of a under the doubling map."""
    return (2 * a) % 1


def is_periodic(a: Angle) -> bool:
    """True iff a is purely periodic under doubling (odd reduced denominator)."""
    return norm_angle(a).denominator % 2 == 1


@dataclass(frozen=True)
class OrbitInfo:
    """Forward doubling orbit of an angle, split into transient and cycle."""

    preperiod: int
    period: int
    orbit: Tuple[Angle, ...]

    @property
    def cycle(self) -> Tuple[Angle, ...]:
        return self.orbit[self.preperiod:]


def orbit_info(a: Angle) -> OrbitInfo:
    """Minimal preperiod and period of a under doubling, with the full orbit."""
    a = norm_angle(a)
    seen: dict[Angle, int] = {}
    orbit: list[Angle] = []
    x = a
    while x not in seen:
        seen[x] = len(orbit)
        orbit.append(x)
        x = double(x)
    pre = seen[x]
    return OrbitInfo(pre, len(orbit) - pre, tuple(orbit))


def angle_period(a: Angle) -> int:
    """Exact doubling period of a purely periodic angle."""
    a = norm_angle(a)
    if not is_periodic(a):
        raise ValueError(f"{format_angle(a)} is not periodic under doubling")
    info = orbit_info(a)
    return info.period


# ---------------------------------------------------------------------------
# binary expansions
# ---------------------------------------------------------------------------

def binary_expansion(a: Angle) -> Tuple[str, str]:
    """Base-2 expansion a = 0.pre(per) with minimal preperiod and period."""
    a = norm_angle(a)
    num, den = a.numerator, a.denominator
    seen: dict[int, int] = {}
    digits: list[str] = []
    r = num
    while r not in seen:
        seen[r] = len(digits)
        r *= 2
        digits.append("1" if r >= den else "0")
        if r >= den:
            r -= den
    cut = seen[r]
    return "".join(digits[:cut]), "".join(digits[cut:])


def angle_from_binary(pre: str, per: str) -> Angle:
    """Inverse of binary_expansion; (pre, per) need not be minimal."""
    if per == "":
        raise ValueError("repeating part must be nonempty")
    m, L = len(pre), len(per)
    ipre = int(pre, 2) if pre else 0
    iper = int(per, 2)
    val = Fraction(ipre, 2**m) + Fraction(iper, (2**L - 1) * 2**m)
    return val % 1


# ---------------------------------------------------------------------------
# arcs
# ---------------------------------------------------------------------------

def arc_len(a: Angle, b: Angle) -> Fraction:
    """Length of the counterclockwise arc from a to b."""
    return (b - a) % 1


def in_open_arc(x: Angle, a: Angle, b: Angle) -> bool:
    """True iff x is strictly inside the ccw arc (a, b)."""
    if a == b:
        return False
    return Fraction(0) < arc_len(a, x) < arc_len(a, b)


def arc_contains_arc(a1: Angle, b1: Angle, a2: Angle, b2: Angle) -> bool:
    """True iff ccw arc (a2, b2) is contained in ccw arc (a1, b1), endpoints allowed."""
    d = arc_len(a1, a2)
    return d + arc_len(a2, b2) <= arc_len(a1, b1)


# ---------------------------------------------------------------------------
# critical pair and inverse branches
# ---------------------------------------------------------------------------

def critical_pair(alpha: Angle) -> Tuple[Angle, Angle]:
    """The two preimages (alpha/2, (alpha+1)/2) of alpha; they cut S^1 in half."""
    alpha = norm_angle(alpha)
    return alpha / 2, (alpha + 1) / 2


def dot_points(alpha: Angle) -> Tuple[Angle, Angle]:
    """(periodic, preperiodic) preimage of a nonzero periodic alpha.

    The periodic one is h^(n-1)(alpha) where n is the period; the other
    preimage of alpha is strictly preperiodic.
    """
    alpha = norm_angle(alpha)
    if alpha == 0 or not is_periodic(alpha):
        raise ValueError("need a nonzero periodic angle")
    n = angle_period(alpha)
    dot = alpha
    for _ in range(n - 1):
        dot = double(dot)
    lo, hi = critical_pair(alpha)
    if dot == lo:
        return lo, hi
    if dot == hi:
        return hi, lo
    raise AssertionError("periodic preimage must be one of the two halves")


def inverse_branch_step(alpha: Angle, t: int, s: int, x: Angle) -> Angle:
    """One inverse branch of doubling, labeled by the itinerary symbol s.

    For s = 0 the preimage inside the open arc (alpha/2, (alpha+1)/2) is
    selected, for s = 1 the preimage in the complementary arc.  When the
    input equals alpha itself both candidate preimages sit on the arc
    boundary; the tie is broken by t: the periodic preimage is returned
    when t == s, the preperiodic one otherwise.
    """
    alpha = norm_angle(alpha)
    if s not in (0, 1):
        raise ValueError("branch symbol must be 0 or 1")
    if alpha == 0 or not is_periodic(alpha):
        raise ValueError("inverse branches require a nonzero periodic angle")
    x = norm_angle(x)
    if x == alpha:
        dot, ddot = dot_points(alpha)
        return dot if t == s else ddot
    lo, hi = critical_pair(alpha)
    for cand in (x / 2, x / 2 + HALF):
        if in_open_arc(cand, lo, hi) == (s == 0):
            return cand
    raise AssertionError("exactly one preimage lies on each side")


def inverse_branch(alpha: Angle, t: int, word: str, theta: Angle) -> Angle:
    """Compose inverse branches right-to-left along a 0/1 word."""
    if not word:
        raise ValueError("word must be nonempty")
    if not set(word) <= {"0", "1"}:
        raise ValueError("word must be over {0,1}")
    x = norm_angle(theta)
    for ch in reversed(word):
        x = inverse_branch_step(alpha, t, int(ch), x)
    return x


# ---------------------------------------------------------------------------
# chords
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chord:
    """Unordered pair of angles; optional (word, branch) label for laminations."""

    a: Angle
    b: Angle
    label: Optional[Tuple[str, int]] = field(default=None, compare=False)

    def __post_init__(self):
        a, b = norm_angle(self.a), norm_angle(self.b)
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    def endpoints(self) -> Tuple[Angle, Angle]:
        return self.a, self.b

    def behind_arc(self) -> Tuple[Angle, Angle]:
        """The shorter complementary arc (ccw endpoints); error on a diameter."""
        if self.degenerate:
            raise ValueError("degenerate chord has no behind side")
        if arc_len(self.a, self.b) == HALF:
            raise ValueError("behind is undefined for a diameter")
        if arc_len(self.a, self.b) < HALF:
            return self.a, self.b
        return self.b, self.a

    def __str__(self) -> str:
        return f"({format_angle(self.a)}, {format_angle(self.b)})"


def chords_cross(c1: Chord, c2: Chord) -> bool:
    """True iff endpoint pairs strictly interleave on the circle."""
    if c1.degenerate or c2.degenerate:
        return False
    inside = sum(1 for p in (c2.a, c2.b) if in_open_arc(p, c1.a, c1.b))
    on = sum(1 for p in (c2.a, c2.b) if p in (c1.a, c1.b))
    return on == 0 and inside == 1


def point_behind(p: Angle, c: Chord) -> bool:
    """True iff p is interior to the shorter complementary arc of c."""
    lo, hi = c.behind_arc()
    return in_open_arc(norm_angle(p), lo, hi)


def chord_nests(c1: Chord, c2: Chord) -> bool:
    """True iff every point behind c1 also lies behind c2."""
    a1, b1 = c1.behind_arc()
    a2, b2 = c2.behind_arc()
    return arc_contains_arc(a2, b2, a1, b1)


def chord_relations(c1: Chord, c2: Chord, p: Angle) -> dict:
    """Bundle of the three chord predicates used by the CLI."""
    return {
        "crosses": chords_cross(c1, c2),
        "nests": chord_nests(c1, c2),
        "point_behind": point_behind(p, c1),
    }
