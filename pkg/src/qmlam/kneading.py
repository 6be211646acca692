"""Itinerary and kneading sequences for the angle doubling map.

Fix a nonzero periodic angle alpha.  The circle splits at the two preimages
alpha/2, (alpha+1)/2 into the near arc A (containing alpha) and the far arc
B.  The itinerary of theta records 0/1 as the doubling orbit of theta visits
A/B, with ``*`` at exact boundary hits.  One-sided markers theta+ / theta-
resolve boundary hits to the itinerary limit from that side, so marked
itineraries are genuine 0-1 sequences.

Also here: the repetition word (the repeating 0/1 block of alpha's own
kneading sequence), the characteristic symbol selecting the short side of
the first triangle gap, the companion angle pairing, and binary-word tuning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .angles import (
    Angle,
    Chord,
    angle_from_binary,
    angle_period,
    binary_expansion,
    critical_pair,
    dot_points,
    double,
    format_angle,
    in_open_arc,
    inverse_branch_step,
    is_periodic,
    norm_angle,
    orbit_info,
    parse_angle,
)

SYMBOLS = {"0", "1", "*"}


# ---------------------------------------------------------------------------
# extended angles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtendedAngle:
    """Angle with an optional one-sided marker: side -1 (minus), 0, +1 (plus)."""

    angle: Angle
    side: int = 0

    def __post_init__(self):
        object.__setattr__(self, "angle", norm_angle(self.angle))
        if self.side not in (-1, 0, 1):
            raise ValueError("side must be -1, 0 or +1")

    def __str__(self) -> str:
        suffix = {-1: "-", 0: "", 1: "+"}[self.side]
        return format_angle(self.angle) + suffix


def parse_extended(text: str) -> ExtendedAngle:
    t = text.strip()
    side = 0
    if t.endswith("+"):
        side, t = 1, t[:-1]
    elif t.endswith("-"):
        side, t = -1, t[:-1]
    return ExtendedAngle(parse_angle(t), side)


def is_precritical(alpha: Angle, theta: Angle) -> bool:
    """True iff some forward doubling image of theta equals alpha."""
    alpha = norm_angle(alpha)
    return alpha in orbit_info(theta).orbit


# ---------------------------------------------------------------------------
# eventually periodic symbol sequences
# ---------------------------------------------------------------------------

def _primitive_root(word: str) -> str:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word == word[:d] * (n // d):
            return word[:d]
    return word


@dataclass(frozen=True)
class EpSequence:
    """Eventually periodic sequence over {0,1,*}: pre + cyc repeated forever.

    Canonical form (minimal cycle, minimal preperiod) is enforced on
    construction, so equality is semantic equality of infinite sequences.
    """

    pre: str
    cyc: str

    def __post_init__(self):
        if not self.cyc:
            raise ValueError("cycle part must be nonempty")
        if not (set(self.pre) | set(self.cyc)) <= SYMBOLS:
            raise ValueError("symbols must be in {0,1,*}")
        pre, cyc = self.pre, _primitive_root(self.cyc)
        while pre and pre[-1] == cyc[-1]:
            pre = pre[:-1]
            cyc = cyc[-1] + cyc[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "cyc", cyc)

    @classmethod
    def parse(cls, text: str) -> "EpSequence":
        t = text.strip()
        if "(" in t:
            if not t.endswith(")"):
                raise ValueError(f"bad sequence syntax: {text!r}")
            pre, cyc = t[:-1].split("(", 1)
        else:
            pre, cyc = "", t
        return cls(pre, cyc)

    def head(self, m: int) -> str:
        if m <= len(self.pre):
            return self.pre[:m]
        k = m - len(self.pre)
        reps = -(-k // len(self.cyc))
        return self.pre + (self.cyc * reps)[:k]

    def __getitem__(self, i: int) -> str:
        if i < len(self.pre):
            return self.pre[i]
        return self.cyc[(i - len(self.pre)) % len(self.cyc)]

    def shift(self) -> "EpSequence":
        if self.pre:
            return EpSequence(self.pre[1:], self.cyc)
        return EpSequence("", self.cyc[1:] + self.cyc[0])

    @property
    def has_star(self) -> bool:
        return "*" in self.pre or "*" in self.cyc

    def __str__(self) -> str:
        return f"{self.pre}({self.cyc})"


# ---------------------------------------------------------------------------
# itineraries
# ---------------------------------------------------------------------------

def _require_cut(alpha: Angle) -> Tuple[Angle, Angle]:
    alpha = norm_angle(alpha)
    if alpha == 0 or not is_periodic(alpha):
        raise ValueError(f"{format_angle(alpha)} is not a nonzero periodic angle")
    return critical_pair(alpha)


def _symbol(x: Angle, lo: Angle, hi: Angle, side: int) -> str:
    if x == lo:
        return "*" if side == 0 else ("0" if side > 0 else "1")
    if x == hi:
        return "*" if side == 0 else ("1" if side > 0 else "0")
    return "0" if in_open_arc(x, lo, hi) else "1"


def itinerary(alpha: Angle, theta: Union[ExtendedAngle, Angle, Fraction]) -> EpSequence:
    """Itinerary of theta w.r.t. the cut of alpha, as a canonical EpSequence.

    A marker on theta is only legal when theta is precritical for alpha
    (some forward image equals alpha); marked itineraries contain no '*'.
    """
    if not isinstance(theta, ExtendedAngle):
        theta = ExtendedAngle(norm_angle(theta), 0)
    lo, hi = _require_cut(alpha)
    if theta.side != 0 and not is_precritical(norm_angle(alpha), theta.angle):
        raise ValueError(f"marker on {theta} is meaningless: not precritical for "
                         f"{format_angle(alpha)}")
    info = orbit_info(theta.angle)
    symbols = [_symbol(x, lo, hi, theta.side) for x in info.orbit]
    return EpSequence("".join(symbols[:info.preperiod]),
                      "".join(symbols[info.preperiod:]))


def kneading_sequence(alpha: Angle) -> EpSequence:
    """Itinerary of alpha itself; the repeating block is (repetition word + *)."""
    return itinerary(alpha, ExtendedAngle(norm_angle(alpha), 0))


def repetition_word(alpha: Angle) -> str:
    """The length (n-1) word v with kneading sequence = (v*) repeated."""
    alpha = norm_angle(alpha)
    _require_cut(alpha)
    n = angle_period(alpha)
    lo, hi = critical_pair(alpha)
    x = alpha
    symbols = []
    for _ in range(n):
        symbols.append(_symbol(x, lo, hi, 0))
        x = double(x)
    word = "".join(symbols)
    if word[-1] != "*" or "*" in word[:-1]:
        raise AssertionError(f"kneading block of {format_angle(alpha)} must be v*")
    if n > 1 and word[0] != "0":
        raise AssertionError("repetition word must start with 0")
    return word[:-1]


# ---------------------------------------------------------------------------
# companion angles
# ---------------------------------------------------------------------------

def companion_angle(alpha: Angle) -> Angle:
    """The unique second angle whose parameter ray lands with alpha's.

    Computed by the exact displacement formula: push the preperiodic
    preimage back along the repetition word and rescale by 2^n/(2^n - 1).
    """
    alpha = norm_angle(alpha)
    _require_cut(alpha)
    n = angle_period(alpha)
    _, ddot = dot_points(alpha)
    x = ddot
    for ch in reversed(repetition_word(alpha)):
        if x == alpha:
            raise AssertionError("branch chain must avoid alpha")
        x = inverse_branch_step(alpha, 0, int(ch), x)
    beta = norm_angle(alpha + Fraction(2**n, 2**n - 1) * (x - alpha))
    if angle_period(beta) != n:
        raise AssertionError("companion must share the period")
    return beta


def characteristic_symbol(alpha: Angle) -> int:
    """The branch bit whose triangle-gap side is the short one.

    Determined by the separation test on the two preimage chords of the
    chord (alpha, companion): the symbol is 0 when the periodic-preimage
    chord separates the preperiodic one from angle 0, and 1 in the
    symmetric case.  Cross-checked against the parity of the numerator of
    the smaller endpoint over 2^n - 1; disagreement raises.
    """
    alpha = norm_angle(alpha)
    _require_cut(alpha)
    beta = companion_angle(alpha)
    adot, addot = dot_points(alpha)
    bdot, bddot = dot_points(beta)
    zero = Fraction(0)

    def separates(c: Chord, p: Angle, q: Angle, r: Angle) -> bool:
        side_p = in_open_arc(p, c.a, c.b)
        side_q = in_open_arc(q, c.a, c.b)
        side_r = in_open_arc(r, c.a, c.b)
        return side_p == side_q and side_p != side_r

    e: int
    if separates(Chord(adot, bdot), addot, bddot, zero):
        e = 0
    elif separates(Chord(addot, bddot), adot, bdot, zero):
        e = 1
    else:
        raise AssertionError("separation test must decide the symbol")

    n = angle_period(alpha)
    lower = min(alpha, beta)
    parity = (lower * (2**n - 1)) % 2
    if parity != e:
        raise AssertionError(
            f"characteristic symbol mismatch at {format_angle(alpha)}: "
            f"separation={e}, lower-endpoint parity={parity}")
    return e


# ---------------------------------------------------------------------------
# tuning
# ---------------------------------------------------------------------------

def tune(pair: Tuple[Angle, Angle], theta: Angle) -> Angle:
    """Binary-word substitution of a companion pair into theta's expansion.

    Each binary digit t of theta is replaced by the repeating word of the
    pair endpoint selected by t; order on angles is preserved.
    """
    lo, hi = norm_angle(pair[0]), norm_angle(pair[1])
    if lo > hi:
        lo, hi = hi, lo
    if companion_angle(lo) != hi:
        raise ValueError(f"({format_angle(lo)}, {format_angle(hi)}) is not a "
                         "companion pair")
    w = (binary_expansion(lo)[1], binary_expansion(hi)[1])
    n = angle_period(lo)
    if len(w[0]) != n or len(w[1]) != n:
        raise AssertionError("repeating binary words must have the pair's period")
    pre, per = binary_expansion(norm_angle(theta))
    new_pre = "".join(w[int(b)] for b in pre)
    new_per = "".join(w[int(b)] for b in per)
    return angle_from_binary(new_pre, new_per)
