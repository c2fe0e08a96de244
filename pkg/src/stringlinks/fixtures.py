"""Reference diagrams and singular-word realizations of chord classes.

Every word here is pinned by oracle-verified properties (linking numbers,
Casson values of closures, Conway polynomials of plat closures); the tests
re-derive those properties from the skein recursion.
"""

from __future__ import annotations

from .errors import ArityMismatch, MalformedWord
from .gauss import ChordClass, singular_chord_class
from .tangle import (EventKind, TangleEvent, TangleWord, cap, cup, shift_events,
                     stack, validate, xdbl, xneg, xpos)


def trivial(n: int) -> TangleWord:
    return TangleWord(n, ())


def trefoil_clasp() -> TangleWord:
    """1-string trefoil with the loop on the left: three negative crossings,
    curling deltas (0, 1, 0)."""
    return TangleWord(1, (cup(1), xneg(2), xneg(2), xneg(2), cap(1)))


def figure_eight_long() -> TangleWord:
    """1-string figure-eight knot (Casson value -1)."""
    return TangleWord(1, (cup(1), xpos(2), xneg(1), xpos(2), xpos(2), cap(1)))


def whitehead() -> TangleWord:
    """Whitehead string link W: linking 0, trivial strings, plat closure the
    trefoil, so the extra order-2 invariant evaluates to +1."""
    return TangleWord(2, (cup(1), xpos(2), xneg(3), xpos(2), xneg(3), xneg(3), cap(1)))


def whitehead_negative() -> TangleWord:
    """Clasp-flipped Whitehead word w: plat closure the figure eight, extra
    invariant -1 (the generator representative of Lemma-type computations)."""
    return TangleWord(2, (cup(1), xpos(2), xpos(2), xneg(3), xpos(2), xneg(3), cap(1)))


def borromean() -> TangleWord:
    """Borromean string link: all linking numbers vanish, every 2-strand
    sublink is trivial, triple linking number +1."""
    return TangleWord(3, (xpos(2), xneg(1)) * 3)


def borromean_mirror() -> TangleWord:
    """Mirror Borromean word with triple linking number -1."""
    return TangleWord(3, (xpos(1), xneg(2)) * 3)


def clasp(sign: int) -> TangleWord:
    """2-string clasp with linking number +1 or -1."""
    ev = xpos(1) if sign > 0 else xneg(1)
    return TangleWord(2, (ev, ev))


def chain() -> TangleWord:
    """3-string chain: consecutive positive clasps."""
    return TangleWord(3, (xpos(1), xpos(1), xpos(2), xpos(2)))


# -- embedding gadgets on selected strands ----------------------------------


def embed(gadget: TangleWord, strands: tuple, n: int) -> TangleWord:
    """Place a k-strand gadget word onto the given strands of the trivial
    n-string link.

    The selected strands are transported next to the leftmost one by passing
    over every intermediate strand, the gadget runs, and the transports are
    undone.  The transport crossings cancel in signed pairs, so they change
    no linking data.
    """
    k = gadget.n
    strands = tuple(strands)
    if len(strands) != k or sorted(set(strands)) != sorted(strands):
        raise ArityMismatch(f"embed needs {k} distinct strands, got {strands}")
    if any(not 1 <= s <= n for s in strands):
        raise ArityMismatch(f"strands {strands} out of range for n={n}")
    order = sorted(strands)
    base = order[0]
    events = []
    moves = []          # (from, to) in current coordinates, for undo
    layout = list(range(1, n + 1))
    for t, s in enumerate(order[1:], start=1):
        c = layout.index(s) + 1
        target = base + t
        for q in range(c - 1, target - 1, -1):
            events.append(xneg(q))
            layout[q - 1], layout[q] = layout[q], layout[q - 1]
            moves.append(q)
    perm = [0] * k
    for new_pos, s in enumerate(layout[base - 1:base - 1 + k], start=1):
        perm[new_pos - 1] = order.index(s) + 1
    if perm != list(range(1, k + 1)):
        raise MalformedWord("transport scrambled the selected strands")
    events.extend(shift_events(gadget.events, base - 1))
    for q in reversed(moves):
        events.append(xpos(q))
    return TangleWord(n, tuple(events), singular=gadget.singular)


def trefoil_on(i: int, n: int) -> TangleWord:
    """Trivial n-string link with a trefoil tied into strand i."""
    return embed(trefoil_clasp(), (i,), n)


def whitehead_on(i: int, j: int, n: int, sign: int) -> TangleWord:
    """Whitehead word on strands i < j; sign +1 for the trefoil-plat version
    (extra invariant +1), -1 for the figure-eight version."""
    gadget = whitehead() if sign > 0 else whitehead_negative()
    return embed(gadget, (i, j), n)


def borromean_on(i: int, j: int, k: int, n: int, sign: int = 1) -> TangleWord:
    gadget = borromean() if sign > 0 else borromean_mirror()
    return embed(gadget, (i, j, k), n)


def clasp_on(i: int, j: int, n: int, sign: int) -> TangleWord:
    return embed(clasp(sign), (i, j), n)


# -- singular fixtures -------------------------------------------------------


def sing_fixture(i: int, j: int, n: int) -> TangleWord:
    """One double point between strands i and j whose negative resolution is
    trivial and whose positive resolution is the +1 clasp."""
    gadget = TangleWord(2, (xdbl(1), xpos(1)), singular=True)
    return embed(gadget, (i, j), n)


def _gadget_self_pair(kind: str) -> TangleWord:
    if kind == "interleaved":
        events = (cup(1), xdbl(2), xdbl(2), xneg(2), cap(1))
    elif kind == "nested":
        events = (cup(2), xdbl(1), xdbl(1), xpos(1), cap(1))
    else:  # disjoint
        events = (cup(2), xdbl(1), cap(2), cup(2), xdbl(1), cap(2))
    return TangleWord(1, events, singular=True)


def _gadget_kink_double() -> TangleWord:
    return TangleWord(1, (cup(2), xdbl(1), cap(2)), singular=True)


def _gadget_self_cross(self_on_left: bool) -> TangleWord:
    """Self chord interleaved with a cross chord on two strands."""
    if self_on_left:
        events = (cup(2), xdbl(1), xdbl(3), xpos(3), cap(2))
    else:
        events = (cup(3), xdbl(2), xdbl(1), xpos(1), cap(2))
    return TangleWord(2, events, singular=True)


def _gadget_cross_pair(crossed: bool) -> TangleWord:
    if crossed:
        events = (cup(2), xdbl(1), xdbl(1), xpos(3), cap(2))
    else:
        events = (xdbl(1), xdbl(1))
    return TangleWord(2, events, singular=True)


def realize_chord_class(cls: ChordClass) -> TangleWord:
    """A singular word respecting the given chord class.

    Order-2 values of Vassiliev invariants do not depend on the choice of
    representative, so routing crossings are chosen freely.  The construction
    is verified against the class before returning.
    """
    word = _realize(cls)
    got = singular_chord_class(word)
    if got != cls:
        raise MalformedWord(f"realization produced {got}, wanted {cls}")
    return word


def _realize(cls: ChordClass) -> TangleWord:
    n = cls.n
    if cls.order == 0:
        return trivial(n)
    if cls.order == 1:
        ((a, _), (b, _)), = cls.chords
        if a == b:
            return embed(_gadget_kink_double(), (a,), n)
        return embed(TangleWord(2, (xdbl(1), xpos(1)), singular=True), (a, b), n)
    c1, c2 = cls.chords
    s1 = (c1[0][0], c1[1][0])
    s2 = (c2[0][0], c2[1][0])
    selfs = [c for c in (c1, c2) if c[0][0] == c[1][0]]
    crosses = [c for c in (c1, c2) if c[0][0] != c[1][0]]
    if len(selfs) == 2:
        a, b = s1[0], s2[0]
        if a == b:
            ranks = tuple(sorted((c1[0][1], c1[1][1])))
            if ranks == (1, 3):
                kind = "interleaved"
            elif ranks == (1, 4):
                kind = "nested"
            else:
                kind = "disjoint"
            return embed(_gadget_self_pair(kind), (a,), n)
        return stack(embed(_gadget_kink_double(), (a,), n),
                     embed(_gadget_kink_double(), (b,), n))
    if len(selfs) == 1:
        self_chord, cross_chord = selfs[0], crosses[0]
        a = self_chord[0][0]
        u, v = cross_chord[0][0], cross_chord[1][0]
        if a not in (u, v):
            return stack(embed(_gadget_kink_double(), (a,), n),
                         embed(TangleWord(2, (xdbl(1), xpos(1)), singular=True), (u, v), n))
        other = v if u == a else u
        rx = cross_chord[0][1] if cross_chord[0][0] == a else cross_chord[1][1]
        r1, r2 = sorted((self_chord[0][1], self_chord[1][1]))
        lo, hi = min(a, other), max(a, other)
        if rx < r1:
            return stack(embed(TangleWord(2, (xdbl(1), xpos(1)), singular=True), (lo, hi), n),
                         embed(_gadget_kink_double(), (a,), n))
        if rx > r2:
            return stack(embed(_gadget_kink_double(), (a,), n),
                         embed(TangleWord(2, (xdbl(1), xpos(1)), singular=True), (lo, hi), n))
        return embed(_gadget_self_cross(self_on_left=(a < other)), (lo, hi), n)
    # two cross chords
    pair1, pair2 = frozenset(s1), frozenset(s2)
    if pair1 == pair2:
        a, b = sorted(pair1)
        crossed = any(set(c) == {(a, 1), (b, 2)} for c in (c1, c2))
        return embed(_gadget_cross_pair(crossed), (a, b), n)
    shared = pair1 & pair2
    g1 = embed(TangleWord(2, (xdbl(1), xpos(1)), singular=True), tuple(sorted(pair1)), n)
    g2 = embed(TangleWord(2, (xdbl(1), xpos(1)), singular=True), tuple(sorted(pair2)), n)
    if not shared:
        return stack(g1, g2)
    s = next(iter(shared))
    r_first = min(r for (t, r) in c1 if t == s)
    r_second = min(r for (t, r) in c2 if t == s)
    if r_first < r_second:
        return stack(g1, g2)
    return stack(g2, g1)


def triple_double_probe(n: int, variant: int = 0) -> TangleWord:
    """Singular word with three double points; any order-2 invariant must
    vanish on it."""
    if n >= 2:
        if variant == 0:
            gadget = TangleWord(2, (xdbl(1), xdbl(1), xdbl(1), xpos(1)), singular=True)
        else:
            gadget = TangleWord(2, (xdbl(1), xpos(1), xdbl(1), xdbl(1)), singular=True)
        return embed(gadget, (1, 2), n)
    events = (cup(1), xdbl(2), xdbl(2), xdbl(2), cap(1))
    return TangleWord(1, events, singular=True)
