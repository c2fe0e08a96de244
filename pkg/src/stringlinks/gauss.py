"""Gauss data extracted from diagrams: crossing signs, curling deltas, and
canonical chord diagram classes of order <= 2."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import ArityMismatch, BadCrossingId, SingularInput
from .tangle import TangleWord, _curl_with_offset, validate


class CrossingType(enum.Enum):
    TYPE1 = 1      # strings {1,3} of a 3-string link
    TYPE2 = 2      # strings {2,3} of a 3-string link
    OTHER = 0


@dataclass(frozen=True)
class ChordClass:
    """Canonical chord diagram of order <= 2 on n ordered strands.

    Chords are pairs of endpoints (strand, rank); per strand the ranks of
    the listed endpoints are exactly 1..m in order.
    """

    n: int
    chords: tuple

    @classmethod
    def from_raw(cls, n, raw_chords):
        """Build the canonical class from chords with sortable raw positions.

        ``raw_chords`` is an iterable of 2-tuples of (strand, key) endpoints;
        keys are compared within each strand only.
        """
        per_strand: dict = {}
        for chord in raw_chords:
            for strand, key in chord:
                per_strand.setdefault(strand, []).append(key)
        rank = {}
        for strand, keys in per_strand.items():
            for r, key in enumerate(sorted(keys), start=1):
                rank[(strand, key)] = r
        chords = []
        for chord in raw_chords:
            eps = tuple(sorted((strand, rank[(strand, key)]) for strand, key in chord))
            chords.append(eps)
        return cls(n, tuple(sorted(chords)))

    @property
    def order(self) -> int:
        return len(self.chords)

    def isolated_chords(self) -> tuple:
        """Chords whose double point can be split off by a ball: same-strand
        chords with consecutive ranks."""
        out = []
        for chord in self.chords:
            (s1, r1), (s2, r2) = chord
            if s1 == s2 and r2 == r1 + 1:
                out.append(chord)
        return tuple(out)

    @property
    def admissible(self) -> bool:
        return not self.isolated_chords()

    def key(self) -> str:
        inner = "; ".join(
            f"({s1},{r1})-({s2},{r2})" for (s1, r1), (s2, r2) in self.chords)
        return f"D{self.n}[{inner}]"

    def __str__(self):
        return self.key()


@dataclass(frozen=True)
class CrossingDatum:
    """Per-crossing Gauss data of an open diagram."""

    crossing_id: int
    epsilon: int
    delta_tilde: int
    ctype: CrossingType
    strings: tuple


def effective_delta(datum: CrossingDatum, delta_v: int) -> int:
    """Delta entering the state sum: the invariant's own bit on type-1
    crossings, the flipped curling delta on type-2, the curling delta
    otherwise."""
    if datum.ctype is CrossingType.TYPE1:
        return delta_v
    if datum.ctype is CrossingType.TYPE2:
        return 1 - datum.delta_tilde
    return datum.delta_tilde


def _ctype(n: int, strings: tuple) -> CrossingType:
    if n == 3 and strings == (1, 3):
        return CrossingType.TYPE1
    if n == 3 and strings == (2, 3):
        return CrossingType.TYPE2
    return CrossingType.OTHER


def gauss_data(sigma: TangleWord) -> tuple:
    """One CrossingDatum per crossing of an open non-singular word, in
    word order.  delta_tilde is read off the curling: 0 exactly when the
    first-visited branch of the corresponding crossing passes over.  The
    curl crossings themselves are not reported."""
    if sigma.closed:
        raise ArityMismatch("gauss_data needs an open word")
    if sigma.singular:
        raise SingularInput("gauss_data needs a non-singular word")
    trace = validate(sigma)
    curled, offset = _curl_with_offset(sigma)
    curl_trace = validate(curled)
    first_branch = {}
    for idx, branch in curl_trace.visits[0]:
        first_branch.setdefault(idx, branch)
    out = []
    for cid, idx in enumerate(sigma.crossing_indices()):
        info = trace.crossings[idx]
        cinfo = curl_trace.crossings[idx + offset]
        delta = 0 if first_branch[idx + offset] == cinfo.over_branch else 1
        out.append(CrossingDatum(cid, info.epsilon, delta,
                                 _ctype(sigma.n, info.strings), info.strings))
    return tuple(out)


def _visit_sequence(trace):
    """(event index, branch) -> (component, position along that component)."""
    seq = {}
    for comp, visits in enumerate(trace.visits, start=1):
        for pos, (idx, branch) in enumerate(visits):
            seq[(idx, branch)] = (comp, pos)
    return seq


def chord_class(sigma: TangleWord, x: int, y: int) -> ChordClass:
    """Order-2 chord class of the pair of crossings x, y (crossing ids)."""
    if x == y:
        raise BadCrossingId("chord_class needs two distinct crossings")
    trace = validate(sigma)
    seq = _visit_sequence(trace)
    idxs = sigma.crossing_indices()
    for cid in (x, y):
        if not 0 <= cid < len(idxs):
            raise BadCrossingId(f"crossing {cid} out of range")
    raw = []
    for cid in (x, y):
        idx = idxs[cid]
        raw.append((seq[(idx, "slash")], seq[(idx, "back")]))
    return ChordClass.from_raw(sigma.n, raw)


def pair_classes(sigma: TangleWord, trace=None):
    """All unordered crossing pairs of sigma with their chord classes.

    Yields (i, j, ChordClass) for crossing ids i < j; used by the state sums
    so the trace is computed once.
    """
    if trace is None:
        trace = validate(sigma)
    seq = _visit_sequence(trace)
    idxs = sigma.crossing_indices()
    ends = [((seq[(idx, "slash")]), (seq[(idx, "back")])) for idx in idxs]
    for i in range(len(idxs)):
        for j in range(i + 1, len(idxs)):
            yield i, j, ChordClass.from_raw(sigma.n, (ends[i], ends[j]))


def singular_chord_class(word: TangleWord) -> ChordClass:
    """Chord diagram respected by a singular word (double points only)."""
    trace = validate(word)
    seq = _visit_sequence(trace)
    raw = []
    for idx in word.double_point_indices():
        raw.append((seq[(idx, "slash")], seq[(idx, "back")]))
    return ChordClass.from_raw(max(word.n, 1), raw)


def enumerate_classes(n: int, k: int) -> tuple:
    """All canonical chord classes of order exactly k on n strands, k <= 2."""
    if n < 1:
        raise ArityMismatch("enumerate_classes needs n >= 1")
    if k == 0:
        return (ChordClass(n, ()),)
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]
    if k == 1:
        out = set()
        for a, b in pairs:
            out.add(ChordClass.from_raw(n, (((a, 0), (b, 1)),)))
        return tuple(sorted(out, key=lambda c: c.chords))
    if k != 2:
        raise ArityMismatch("only orders 0, 1, 2 are supported")
    out = set()
    for p1, p2 in itertools.combinations_with_replacement(pairs, 2):
        endpoints = [(0, p1[0]), (0, p1[1]), (1, p2[0]), (1, p2[1])]
        by_strand: dict = {}
        for slot, (chord_idx, strand) in enumerate(endpoints):
            by_strand.setdefault(strand, []).append(slot)
        orders = [itertools.permutations(slots) for slots in by_strand.values()]
        for choice in itertools.product(*orders):
            pos = {}
            for slots in choice:
                for r, slot in enumerate(slots):
                    pos[slot] = r
            raw = [
                (((endpoints[0][1]), pos[0]), ((endpoints[1][1]), pos[1])),
                (((endpoints[2][1]), pos[2]), ((endpoints[3][1]), pos[3])),
            ]
            out.add(ChordClass.from_raw(n, raw))
    return tuple(sorted(out, key=lambda c: c.chords))
