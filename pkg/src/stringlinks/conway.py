"""Conway polynomial of closed diagrams by skein recursion.

The recursion descends to descending diagrams: components are ordered by
their lowest cup, each is traversed from that cup, and the first crossing
whose first passage runs under is switched and smoothed via
nabla(L+) - nabla(L-) = z * nabla(L0).  Descending diagrams are unlinks,
so they evaluate to 1 (single unknot) or 0 (split).

Orientations matter for multi-component values, and the skein relation only
holds when the smoothed diagram inherits them.  Top-level closed diagrams
are oriented canonically (each component runs up the left leg of its lowest
cup; for closures of string links this is the upward strand orientation).
Inside the recursion every surviving crossing branch carries its inherited
direction as a seed, and re-traced components are flipped to match.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedWord, MultiComponent, NotClosed, RecursionBudgetExceeded, SingularInput
from .tangle import (CrossingInfo, EventKind, StrandTrace, TangleEvent,
                     TangleWord, cap, close, cup, validate, xneg, xpos)

_CROSS = (EventKind.CROSS_POS, EventKind.CROSS_NEG)


@dataclass(frozen=True)
class ConwayPoly:
    """Finitely supported integer polynomial in z."""

    coeffs: tuple = ()   # ((degree, coefficient), ...) sorted, no zeros

    @classmethod
    def from_dict(cls, d):
        items = tuple(sorted((k, v) for k, v in d.items() if v))
        return cls(items)

    @classmethod
    def constant(cls, c):
        return cls(((0, c),) if c else ())

    def coefficient(self, degree: int) -> int:
        for d, c in self.coeffs:
            if d == degree:
                return c
        return 0

    def __add__(self, other):
        d = dict(self.coeffs)
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + v
        return ConwayPoly.from_dict(d)

    def __sub__(self, other):
        d = dict(self.coeffs)
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) - v
        return ConwayPoly.from_dict(d)

    def shift(self):
        """Multiply by z."""
        return ConwayPoly(tuple((d + 1, c) for d, c in self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs:
            term = str(c) if d == 0 else (f"{c}*z" if d == 1 else f"{c}*z^{d}")
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")


_ZERO = ConwayPoly()
_ONE = ConwayPoly.constant(1)

_memo: dict = {}


def clear_cache():
    _memo.clear()


def _reduce(word: TangleWord):
    """Apply link-preserving shrink moves until stable.

    Returns (reduced word, split unknot count, event index map old->new).
    Moves: adjacent and guarded-distant R2 pairs, kinks on fresh cups and
    dying caps, full cup-kink-cap blocks, cup/cap zigzags, free circles.
    None of them changes the direction in which a surviving arc is traversed.
    """
    events = list(word.events)
    ids = list(range(len(events)))
    circles = 0

    def delete(positions):
        for pos in sorted(positions, reverse=True):
            del events[pos]
            del ids[pos]

    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(events) and not changed:
            a, b = events[i], events[i + 1]
            ka, kb, pa, pb = a.kind, b.kind, a.position, b.position
            if ka in _CROSS and kb in _CROSS and pa == pb and ka is not kb:
                delete((i, i + 1))
                changed = True
            elif ka is EventKind.CUP and kb in _CROSS and pb == pa:
                delete((i + 1,))
                changed = True
            elif ka in _CROSS and kb is EventKind.CAP and pa == pb:
                delete((i,))
                changed = True
            elif ka is EventKind.CUP and kb is EventKind.CAP and pb == pa:
                delete((i, i + 1))
                circles += 1
                changed = True
            elif (ka is EventKind.CUP and kb is EventKind.CAP
                  and pb in (pa - 1, pa + 1)):
                delete((i, i + 1))
                changed = True
            elif (i + 2 < len(events) and ka is EventKind.CUP
                  and events[i + 2].kind is EventKind.CAP
                  and events[i + 2].position == pa
                  and kb in _CROSS and pb in (pa - 1, pa + 1)):
                delete((i, i + 1, i + 2))
                changed = True
            else:
                i += 1
        if changed:
            continue
        # distant R2: the two points stay untouched in between
        for i, a in enumerate(events):
            if a.kind not in _CROSS:
                continue
            p = a.position
            for j in range(i + 1, len(events)):
                b = events[j]
                if b.kind in _CROSS and b.position in (p - 1, p, p + 1):
                    if b.position == p and b.kind is not a.kind:
                        delete((i, j))
                        changed = True
                    break
                if b.kind in (EventKind.CUP, EventKind.CAP) and b.position <= p + 1:
                    break
            if changed:
                break
    index_map = {old: new for new, old in enumerate(ids)}
    reduced = TangleWord(-1 if word.closed else word.n, tuple(events),
                         word.closed, word.singular)
    return reduced, circles, index_map


def _oriented_trace(word: TangleWord, seeds: dict) -> StrandTrace:
    """Trace the word, then flip components so every seeded crossing branch
    (event index, branch name) runs in its seeded direction."""
    trace = validate(word)
    if not seeds:
        return trace
    flip = set()
    for comp_idx, comp_visits in enumerate(trace.visits, start=1):
        want = None
        for idx, branch in comp_visits:
            if (idx, branch) not in seeds:
                continue
            info = trace.crossings[idx]
            have = info.slash_up if branch == "slash" else info.back_up
            need = seeds[(idx, branch)]
            agree = have == need
            if want is None:
                want = agree
            elif want != agree:
                raise MalformedWord("inconsistent orientation seeds")
        if want is False:
            flip.add(comp_idx)
    if not flip:
        return trace
    infos = {}
    for idx, info in trace.crossings.items():
        su = info.slash_up ^ (info.slash_component in flip)
        bu = info.back_up ^ (info.back_component in flip)
        infos[idx] = CrossingInfo(idx, info.kind, info.slash_component,
                                  info.back_component, su, bu)
    visits = tuple(tuple(reversed(v)) if c in flip else v
                   for c, v in enumerate(trace.visits, start=1))
    return StrandTrace(word, trace.components, infos, visits, trace.port_components)


def _first_discordant(trace):
    """First crossing whose first passage runs under, in the traversal order
    of the oriented trace."""
    seen = set()
    for comp_visits in trace.visits:
        for idx, branch in comp_visits:
            if idx in seen:
                continue
            seen.add(idx)
            if trace.crossings[idx].over_branch != branch:
                return idx
    return None


def _direction_key(trace):
    return tuple(sorted((idx, info.slash_up, info.back_up)
                        for idx, info in trace.crossings.items()))


def _switch_at(word, idx):
    e = word.events[idx]
    new = xneg(e.position) if e.kind is EventKind.CROSS_POS else xpos(e.position)
    return TangleWord(-1, word.events[:idx] + (new,) + word.events[idx + 1:],
                      True, word.singular)


def _smooth_at(word, idx, info):
    e = word.events[idx]
    if info.slash_up == info.back_up:
        mid: tuple = ()
    else:
        mid = (cap(e.position), cup(e.position))
    events = word.events[:idx] + mid + word.events[idx + 1:]
    return TangleWord(-1, events, True, word.singular), len(mid) - 1


def _conway_rec(word: TangleWord, seeds: dict) -> ConwayPoly:
    word, circles, index_map = _reduce(word)
    seeds = {(index_map[i], br): up for (i, br), up in seeds.items()
             if i in index_map}
    if circles:
        if not word.events and circles == 1:
            return _ONE
        return _ZERO
    if not word.events:
        return _ZERO  # no components at all
    trace = _oriented_trace(word, seeds)
    key = (word.events, _direction_key(trace))
    hit = _memo.get(key)
    if hit is not None:
        return hit
    pivot = _first_discordant(trace)
    if pivot is None:
        value = _ONE if trace.components == 1 else _ZERO
    else:
        info = trace.crossings[pivot]
        inherit = {(idx, br): (inf.slash_up if br == "slash" else inf.back_up)
                   for idx, inf in trace.crossings.items() if idx != pivot
                   for br in ("slash", "back")}
        sw_seeds = dict(inherit)
        sw_seeds[(pivot, "slash")] = info.slash_up
        sw_seeds[(pivot, "back")] = info.back_up
        switched = _conway_rec(_switch_at(word, pivot), sw_seeds)
        sm_word, shift = _smooth_at(word, pivot, info)
        sm_seeds = {(idx + shift if idx > pivot else idx, br): up
                    for (idx, br), up in inherit.items()}
        smoothed = _conway_rec(sm_word, sm_seeds).shift()
        value = switched + smoothed if info.epsilon > 0 else switched - smoothed
    _memo[key] = value
    return value


def conway(word: TangleWord, budget: int = 16) -> ConwayPoly:
    """Conway polynomial of a closed, non-singular diagram.

    Components are oriented canonically: each runs upward through the left
    leg of its lowest cup.  For closures of string links this is the upward
    orientation of the strands.
    """
    if not word.closed:
        raise NotClosed("conway needs a closed diagram")
    if any(e.kind is EventKind.CROSS_DOUBLE for e in word.events):
        raise SingularInput("conway needs a non-singular diagram")
    trace = validate(word)
    if word.crossing_count > budget:
        reduced, _, _ = _reduce(word)
        if reduced.crossing_count > budget:
            raise RecursionBudgetExceeded(
                f"{reduced.crossing_count} crossings exceed budget {budget}")
    seeds = {(idx, br): (info.slash_up if br == "slash" else info.back_up)
             for idx, info in trace.crossings.items() for br in ("slash", "back")}
    return _conway_rec(word, seeds)


def casson_knot(word: TangleWord, budget: int = 16) -> int:
    """z^2 coefficient of the Conway polynomial of a closed knot diagram."""
    if not word.closed:
        raise NotClosed("casson_knot needs a closed diagram")
    if any(e.kind is EventKind.CROSS_DOUBLE for e in word.events):
        raise SingularInput("casson_knot needs a non-singular diagram")
    components = validate(word).components
    if components != 1:
        raise MultiComponent(f"knot oracle on a {components}-component diagram")
    return conway(word, budget).coefficient(2)


def casson_closure(sigma: TangleWord, budget: int = 16) -> int:
    """Casson invariant of a 1-string link via the closure knot."""
    if sigma.n != 1 or sigma.closed:
        raise MultiComponent("casson_closure needs an open 1-string word")
    return casson_knot(close(sigma), budget)
