"""The itinerary rewriting involution for narrow companion pairs.

Swapping a narrow pair's endpoints leaves every dynamic ray in place but
changes the itinerary cut, and the change is purely combinatorial: wherever
the sequence runs through whole blocks 0v / 1v (v the repetition word), a
block's leading bit flips exactly when the block chain is followed by the
characteristic symbol.  The scanner below implements that rule:

* blocks of equal leading bit are consumed as one run;
* when the run ends, the next symbol decides: equal to the characteristic
  symbol, the whole run swaps; otherwise the run is retried against its own
  leading bits, swapping the blocks before the last bit that matches, and
  scanning resumes one symbol past the spot that failed.

Sequences that *end* in an infinite block tail are handled separately: the
tail's blocks all swap, and when the tail is a constant block repeated the
regular prefix is ambiguous, so one output per admissible reading is
produced.  Lifting sequences back to marked angles (via the itinerary
regions), the chord-chain equivalence, and the induced class map complete
the picture; on classes the rewrite is a shift-commuting involution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .angles import (
    Angle,
    arc_len,
    double,
    format_angle,
    norm_angle,
    orbit_info,
)
from .kneading import (
    EpSequence,
    ExtendedAngle,
    characteristic_symbol,
    companion_angle,
    itinerary,
    repetition_word,
)
from .lamination import julia_equivalent, region_arcs

Arc = Tuple[Angle, Angle]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True)
class RewriteResult:
    outputs: Tuple[EpSequence, ...]
    ambiguous: bool

    def single(self) -> EpSequence:
        if len(self.outputs) != 1:
            raise ValueError("rewrite produced several readings")
        return self.outputs[0]


def _narrow_data(alpha: Angle) -> Tuple[str, int, int]:
    """(repetition word, characteristic symbol, period); errors off narrow pairs."""
    alpha = norm_angle(alpha)
    v = repetition_word(alpha)
    n = len(v) + 1
    beta = companion_angle(alpha)
    width = min(arc_len(alpha, beta), arc_len(beta, alpha))
    if width != Fraction(1, 2**n - 1):
        raise ValueError(
            f"rewriting requires a narrow pair; ({format_angle(alpha)}, "
            f"{format_angle(beta)}) has width {width}")
    e = characteristic_symbol(alpha)
    return v, e, n


# ---------------------------------------------------------------------------
# the scanner
# ---------------------------------------------------------------------------

def _scan(buf: List[int], v: Tuple[int, ...], e: int,
          limit: Optional[int] = None,
          record_empty=None) -> List[int]:
    """Run the block scanner over buf in place and return the output.

    limit restricts block detection to windows wholly inside buf[:limit]
    (used for finite prefixes); record_empty, when given, is called at
    every empty-run scan position for cycle detection.
    """
    n = len(v) + 1
    out = list(buf)
    end = len(buf) if limit is None else limit
    i = 0
    run_start = -1  # position of first block in the current run
    run_t = -1
    blocks: List[int] = []

    def is_block(p: int) -> Optional[int]:
        if p + n > end:
            return None
        if tuple(buf[p + 1:p + n]) != v:
            return None
        return buf[p]

    while i < end:
        if not blocks and record_empty is not None:
            stop = record_empty(i)
            if stop:
                return out
        t = is_block(i)
        if t is not None and (not blocks or t == run_t):
            if not blocks:
                run_t = t
            blocks.append(i)
            i += n
            continue
        if not blocks:
            i += 1
            continue
        follower = buf[i] if i < end else None
        if follower == e:
            for p in blocks:
                out[p] = 1 - out[p]
            blocks, run_t = [], -1
            continue
        # trace back: with equal leading bits the run either sheds its last
        # block (leading bit matches the symbol) or dissolves entirely
        if run_t == e and len(blocks) > 1:
            for p in blocks[:-1]:
                out[p] = 1 - out[p]
            i = blocks[-1] + 1
        else:
            i = blocks[0] + 1
        blocks, run_t = [], -1
    return out


def rewrite_prefix(alpha: Angle, bits: str) -> str:
    """Scanner transform of a finite 0/1 prefix (itinerary coordinates)."""
    v, e, _ = _narrow_data(alpha)
    if not set(bits) <= {"0", "1"}:
        raise ValueError("prefix must be over {0,1}")
    buf = [int(b) for b in bits]
    out = _scan(buf, tuple(int(c) for c in v), e)
    return "".join(str(b) for b in out)


# ---------------------------------------------------------------------------
# block-tail readings
# ---------------------------------------------------------------------------

def _tiles_from(seq: EpSequence, j: int, v: str, span: int) -> bool:
    n = len(v) + 1
    m = j
    while m < j + span:
        if any(seq[m + 1 + q] != v[q] for q in range(n - 1)):
            return False
        m += n
    return True


def _is_regular(word: str, v: str) -> bool:
    tail = len(v) + 1
    return not (len(word) >= tail and word[len(word) - tail + 1:] == v)


def _readings(seq: EpSequence, v: str, n: int) -> List[int]:
    L = _lcm(len(seq.cyc), n)
    span = len(seq.pre) + 2 * L + 2 * n
    out = []
    for j in range(len(seq.pre) + L + n):
        if _tiles_from(seq, j, v, span) and _is_regular(seq.head(j), v):
            out.append(j)
    return out


def _constant_tail(seq: EpSequence, v: str, n: int) -> bool:
    """True iff the sequence ends in one block repeated forever."""
    L = _lcm(len(seq.cyc), n)
    for j in range(len(seq.pre) + L + n):
        block = seq.head(j + n)[j:]
        if len(block) == n and block[1:] == v and \
                all(seq[j + m] == block[m % n] for m in range(2 * L + n)):
            return True
    return False


def rewrite_sequence(alpha: Angle, s: EpSequence) -> RewriteResult:
    """Image(s) of an itinerary under the endpoint swap of a narrow pair.

    For sequences with an eventual whole-block tail the blocks swap and one
    output is produced per admissible regular prefix (several only when the
    tail repeats a single block).  All other sequences run through the
    scanner, whose output is folded back to its eventual period.
    """
    v, e, n = _narrow_data(alpha)
    if s.has_star:
        raise ValueError("rewriting is undefined on sequences containing *")
    vt = tuple(int(c) for c in v)

    starts = _readings(s, v, n)
    if starts:
        outputs = []
        for j in starts:
            prefix = [int(c) for c in s.head(j)]
            pre_out = _scan(prefix, vt, e)
            L = _lcm(len(s.cyc), n)
            blocks_pre = max(0, -(-(len(s.pre) - j) // n))
            cyc_blocks = L // n
            head = list(pre_out)
            for q in range(blocks_pre):
                tbit = int(s[j + q * n])
                head.extend([1 - tbit] + list(vt))
            cyc: List[int] = []
            for q in range(blocks_pre, blocks_pre + cyc_blocks):
                tbit = int(s[j + q * n])
                cyc.extend([1 - tbit] + list(vt))
            outputs.append(EpSequence("".join(map(str, head)),
                                      "".join(map(str, cyc))))
        uniq = sorted(set(outputs), key=str)
        return RewriteResult(tuple(uniq), _constant_tail(s, v, n))

    # scanner with cycle folding at empty-run positions
    L = _lcm(len(s.cyc), n)
    pre_len = len(s.pre)
    budget = 8
    while True:
        length = pre_len + budget * L + 2 * n
        buf = [int(c) for c in s.head(length)]
        seen: Dict[int, int] = {}
        fold: List[Tuple[int, int]] = []

        def record(i: int) -> bool:
            if i < pre_len or i + 2 * n + L > length:
                return False
            phase = (i - pre_len) % L
            if phase in seen and i > seen[phase]:
                fold.append((seen[phase], i))
                return True
            seen.setdefault(phase, i)
            return False

        out = _scan(buf, vt, e, record_empty=record)
        if fold:
            i0, i1 = fold[0]
            word = "".join(map(str, out))
            return RewriteResult(
                (EpSequence(word[:i0], word[i0:i1]),), False)
        budget *= 2
        if budget > 512:
            raise AssertionError(
                f"scanner failed to fold on {s} at {format_angle(alpha)}")


# ---------------------------------------------------------------------------
# lifting sequences to extended angles
# ---------------------------------------------------------------------------

def _cycle_fiber_candidates(alpha: Angle, cyc: str) -> Set[Angle]:
    """Candidate angles whose itinerary could be the pure cycle.

    The itinerary regions of repeated cycle words contract each surviving
    arc chain by one inverse-branch composition per repetition, an affine
    map; the chain limits are the affine fixed points of consecutive arc
    endpoints.  Unstable pairings produce junk candidates, which the caller
    weeds out by verifying itineraries.
    """
    k = len(cyc)
    two_k = 2**k
    # enough repetitions that every chain separates from alpha
    J = 2 + (alpha.denominator.bit_length() + 2 * k + 6) // k
    arcs1 = region_arcs(alpha, cyc * J)
    arcs2 = region_arcs(alpha, cyc * (J + 1))
    out: Set[Angle] = set()
    for a2, b2 in arcs2:
        for a1, b1 in arcs1:
            span = arc_len(a1, b1)
            if arc_len(a1, a2) + arc_len(a2, b2) <= span:
                for x1, x2 in ((a1, a2), (b1, b2)):
                    shift = two_k * x2 - x1
                    out.add(norm_angle(shift / (two_k - 1)))
                break
    return out


def lift_sequence(alpha: Angle, s: EpSequence) -> Tuple[ExtendedAngle, ...]:
    """The full fiber of the itinerary map over s, inside the marked circle.

    Candidates for the periodic tail come from the contracting itinerary
    region chains; they are pulled back through the preperiod one symbol at
    a time (keeping boundary preimages, whose symbol a marker may decide),
    and every candidate is kept iff one of its marked or unmarked
    itineraries verifies against s exactly.
    """
    alpha = norm_angle(alpha)
    if s.has_star:
        raise ValueError("cannot lift sequences containing *")
    lo, hi = alpha / 2, (alpha + 1) / 2
    candidates = _cycle_fiber_candidates(alpha, s.cyc)
    for ch in reversed(s.pre):
        nxt: Set[Angle] = set()
        for y in candidates:
            for p in (y / 2, y / 2 + Fraction(1, 2)):
                p = norm_angle(p)
                if p == lo or p == hi:
                    nxt.add(p)  # symbol depends on the marker
                    continue
                inside = Fraction(0) < arc_len(lo, p) < arc_len(lo, hi)
                if inside == (ch == "0"):
                    nxt.add(p)
        candidates = nxt

    fiber: List[ExtendedAngle] = []
    for x in sorted(candidates):
        for side in (0, 1, -1):
            theta = ExtendedAngle(x, side)
            try:
                if itinerary(alpha, theta) == s:
                    fiber.append(theta)
            except ValueError:
                continue
    return tuple(fiber)


# ---------------------------------------------------------------------------
# sequence classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceClass:
    representatives: Tuple[EpSequence, ...]
    angles: Tuple[ExtendedAngle, ...]


def sequences_equivalent(alpha: Angle, s1: EpSequence, s2: EpSequence) -> bool:
    """Do s1 and s2 lift to angles joined by limit-lamination chords?"""
    if s1 == s2:
        return True
    f1 = lift_sequence(alpha, s1)
    f2 = lift_sequence(alpha, s2)
    if not f1 or not f2:
        raise AssertionError("itinerary fiber unexpectedly empty")
    return any(julia_equivalent(alpha, a.angle, b.angle)
               for a in f1 for b in f2)


def sequence_class(alpha: Angle, s: EpSequence) -> SequenceClass:
    """All itineraries of the landing class of s's fiber."""
    from .lamination import julia_class

    fiber = lift_sequence(alpha, s)
    if not fiber:
        raise AssertionError(f"empty fiber for {s}")
    base: Set[Angle] = set()
    for th in fiber:
        base.update(julia_class(alpha, th.angle))
    angles: List[ExtendedAngle] = []
    reps: Set[EpSequence] = set()
    for x in sorted(base):
        for side in (0, 1, -1):
            th = ExtendedAngle(x, side)
            try:
                seq = itinerary(alpha, th)
            except ValueError:
                continue
            if seq.has_star:
                continue
            angles.append(th)
            reps.add(seq)
    return SequenceClass(tuple(sorted(reps, key=str)), tuple(angles))


def rewrite_class(alpha: Angle, cls: SequenceClass) -> SequenceClass:
    """Apply the rewrite to every representative; the targets must all fall
    into one class, which is returned."""
    outputs: Set[EpSequence] = set()
    for rep in cls.representatives:
        outputs.update(rewrite_sequence(alpha, rep).outputs)
    outs = sorted(outputs, key=str)
    target = sequence_class(alpha, outs[0])
    for s in outs[1:]:
        if s not in target.representatives and \
                not sequences_equivalent(alpha, outs[0], s):
            raise AssertionError("rewrite outputs span several classes")
    return target
