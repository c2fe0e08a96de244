"""Morse tangle words: the diagram model for string links and closed links.

A diagram is a bottom-to-top sequence of elementary events acting on a row of
active points: crossings between adjacent points, cups (local minima) and caps
(local maxima).  Open words keep n boundary points at bottom and top; closed
words start and end with an empty row.

Crossing conventions.  At a crossing event in position p the two transversal
branches are the "slash" branch (bottom p to top p+1) and the "back" branch
(bottom p+1 to top p).  A CROSS_POS event puts the slash branch on top, a
CROSS_NEG event the back branch.  The sign of the crossing as an oriented
diagram is the event's nominal sign times -1 when exactly one branch is
traversed downward by its strand.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ArityMismatch, BadCrossingId, EmptySelection, MalformedWord, NotAStringLink


class EventKind(enum.Enum):
    CROSS_POS = "X+"
    CROSS_NEG = "X-"
    CROSS_DOUBLE = "XD"
    CUP = "U"
    CAP = "A"


_CROSSINGS = (EventKind.CROSS_POS, EventKind.CROSS_NEG, EventKind.CROSS_DOUBLE)


@dataclass(frozen=True)
class TangleEvent:
    kind: EventKind
    position: int

    def __repr__(self):
        return f"{self.kind.value} {self.position}"


def xpos(p: int) -> TangleEvent:
    return TangleEvent(EventKind.CROSS_POS, p)


def xneg(p: int) -> TangleEvent:
    return TangleEvent(EventKind.CROSS_NEG, p)


def xdbl(p: int) -> TangleEvent:
    return TangleEvent(EventKind.CROSS_DOUBLE, p)


def cup(p: int) -> TangleEvent:
    return TangleEvent(EventKind.CUP, p)


def cap(p: int) -> TangleEvent:
    return TangleEvent(EventKind.CAP, p)


@dataclass(frozen=True)
class TangleWord:
    """A diagram word.

    For open words ``n`` is the strand count at the bottom (equal to the top).
    For closed words ``n`` is the number of components, or -1 when the caller
    does not track it (internal skein surgery); validation recomputes it.
    """

    n: int
    events: tuple = ()
    closed: bool = False
    singular: bool = False

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    # -- basic views ------------------------------------------------------

    def crossing_indices(self) -> tuple:
        return tuple(i for i, e in enumerate(self.events) if e.kind in _CROSSINGS)

    @property
    def crossing_count(self) -> int:
        return len(self.crossing_indices())

    def double_point_indices(self) -> tuple:
        return tuple(i for i, e in enumerate(self.events)
                     if e.kind is EventKind.CROSS_DOUBLE)

    def event_for_crossing(self, crossing_id: int) -> int:
        """Map a crossing id (index among crossing events) to an event index."""
        idxs = self.crossing_indices()
        if not 0 <= crossing_id < len(idxs):
            raise BadCrossingId(f"crossing {crossing_id} out of range (have {len(idxs)})")
        return idxs[crossing_id]

    def mirror(self) -> "TangleWord":
        """Exchange over and under strands at every crossing."""
        flip = {EventKind.CROSS_POS: EventKind.CROSS_NEG,
                EventKind.CROSS_NEG: EventKind.CROSS_POS}
        evs = tuple(TangleEvent(flip.get(e.kind, e.kind), e.position) for e in self.events)
        return TangleWord(self.n, evs, self.closed, self.singular)


def shift_events(events: Iterable[TangleEvent], offset: int) -> tuple:
    return tuple(TangleEvent(e.kind, e.position + offset) for e in events)


# -- strand tracing ---------------------------------------------------------

_NOMINAL = {EventKind.CROSS_POS: 1, EventKind.CROSS_NEG: -1}


@dataclass(frozen=True)
class CrossingInfo:
    """One crossing of a traced word, with both branch traversals resolved."""

    index: int              # event index in the word
    kind: EventKind
    slash_component: int
    back_component: int
    slash_up: bool
    back_up: bool

    @property
    def is_double(self) -> bool:
        return self.kind is EventKind.CROSS_DOUBLE

    @property
    def strings(self) -> tuple:
        a, b = self.slash_component, self.back_component
        return (a, b) if a <= b else (b, a)

    @property
    def epsilon(self) -> Optional[int]:
        nominal = _NOMINAL.get(self.kind)
        if nominal is None:
            return None
        return nominal if self.slash_up == self.back_up else -nominal

    @property
    def over_branch(self) -> Optional[str]:
        if self.kind is EventKind.CROSS_POS:
            return "slash"
        if self.kind is EventKind.CROSS_NEG:
            return "back"
        return None

    @property
    def over_string(self) -> Optional[int]:
        ob = self.over_branch
        if ob is None:
            return None
        return self.slash_component if ob == "slash" else self.back_component


@dataclass(frozen=True)
class StrandTrace:
    word: TangleWord
    components: int
    crossings: dict = field(compare=False)           # event index -> CrossingInfo
    visits: tuple = ()                               # per component: ((event idx, branch), ...)
    port_components: dict = field(compare=False, default_factory=dict)

    def crossing_list(self) -> tuple:
        """Crossings in word order."""
        return tuple(self.crossings[i] for i in sorted(self.crossings))


def active_counts(word: TangleWord) -> list:
    """Active-point count before each event (and after the last).

    Raises MalformedWord on out-of-range positions, negative counts, a
    CrossDouble in a non-singular word, or a boundary count mismatch.
    """
    start = 0 if word.closed else word.n
    if not word.closed and word.n < 1:
        raise MalformedWord(f"open word needs n >= 1, got {word.n}")
    counts = [start]
    for i, e in enumerate(word.events):
        c = counts[-1]
        p = e.position
        if p < 1:
            raise MalformedWord(f"event {i}: position {p} is not 1-based")
        if e.kind is EventKind.CUP:
            if p > c + 1:
                raise MalformedWord(f"event {i}: cup at {p} with {c} active points")
            counts.append(c + 2)
        elif e.kind is EventKind.CAP:
            if p + 1 > c:
                raise MalformedWord(f"event {i}: cap at {p} with {c} active points")
            counts.append(c - 2)
        else:
            if e.kind is EventKind.CROSS_DOUBLE and not word.singular:
                raise MalformedWord(f"event {i}: double point in a non-singular word")
            if p + 1 > c:
                raise MalformedWord(f"event {i}: crossing at {p} with {c} active points")
            counts.append(c)
    end = 0 if word.closed else word.n
    if counts[-1] != end:
        raise MalformedWord(f"word ends with {counts[-1]} active points, expected {end}")
    return counts


def _walk(word, start_level, start_index, component, visited, crossings, visit_list):
    """Trace one strand.  Returns ('top'|'bottom'|'closed', exit index)."""
    events = word.events
    top = len(events)
    level, i, up = start_level, start_index, True
    start = (start_level, start_index)
    first = True
    while True:
        if not first and (level, i) == start and up:
            return ("closed", i)
        if (level, i) in visited:
            raise MalformedWord(f"port {(level, i)} visited twice; inconsistent word")
        visited[(level, i)] = component
        first = False
        if up:
            if level == top:
                return ("top", i)
            e = events[level]
            k, p = e.kind, e.position
            if k in _CROSSINGS:
                if i == p:
                    _record(crossings, visit_list, level, "slash", component, True, e)
                    level, i = level + 1, p + 1
                elif i == p + 1:
                    _record(crossings, visit_list, level, "back", component, True, e)
                    level, i = level + 1, p
                else:
                    level += 1
            elif k is EventKind.CUP:
                level, i = level + 1, (i if i < p else i + 2)
            else:  # cap
                if i == p:
                    i, up = p + 1, False
                elif i == p + 1:
                    i, up = p, False
                else:
                    level, i = level + 1, (i if i < p else i - 2)
        else:
            if level == 0:
                return ("bottom", i)
            e = events[level - 1]
            k, p = e.kind, e.position
            if k in _CROSSINGS:
                if i == p + 1:
                    _record(crossings, visit_list, level - 1, "slash", component, False, e)
                    level, i = level - 1, p
                elif i == p:
                    _record(crossings, visit_list, level - 1, "back", component, False, e)
                    level, i = level - 1, p + 1
                else:
                    level -= 1
            elif k is EventKind.CAP:
                level, i = level - 1, (i if i < p else i + 2)
            else:  # cup below
                if i == p:
                    i, up = p + 1, True
                elif i == p + 1:
                    i, up = p, True
                else:
                    level, i = level - 1, (i if i < p else i - 2)


def _record(crossings, visit_list, index, branch, component, upward, event):
    slot = crossings.setdefault(index, {"kind": event.kind})
    if branch in slot:
        raise MalformedWord(f"crossing {index}: branch {branch} traversed twice")
    slot[branch] = (component, upward)
    visit_list.append((index, branch))


def validate(word: TangleWord) -> StrandTrace:
    """Check all word invariants and return the full strand trace.

    Open words must trace each strand from bottom position k to top position
    k with no leftover closed components.  Closed words must consist of
    exactly ``word.n`` circles (any n < 0 is accepted and recomputed).
    """
    counts = active_counts(word)
    events = word.events
    visited: dict = {}
    crossings: dict = {}
    all_visits = []

    if not word.closed:
        for k in range(1, word.n + 1):
            vlist: list = []
            kind, out = _walk(word, 0, k, k, visited, crossings, vlist)
            if kind == "bottom":
                raise NotAStringLink(f"strand {k} returns to the bottom at {out}")
            if kind == "closed":
                raise MalformedWord(f"strand {k} closes on itself")
            if out != k:
                raise NotAStringLink(f"strand {k} exits at top position {out}")
            all_visits.append(tuple(vlist))
        components = word.n
    else:
        components = 0
        for idx, e in enumerate(events):
            if e.kind is not EventKind.CUP:
                continue
            port = (idx + 1, e.position)
            if port in visited:
                continue
            components += 1
            vlist = []
            kind, _ = _walk(word, idx + 1, e.position, components, visited, crossings, vlist)
            if kind != "closed":
                raise MalformedWord("closed word has a strand reaching the boundary")
            all_visits.append(tuple(vlist))
        if word.n >= 0 and components != word.n:
            raise MalformedWord(f"closed word has {components} components, declared {word.n}")

    # every diagram point must belong to some strand
    total_ports = sum(counts)
    if len(visited) != total_ports:
        if word.closed:
            raise MalformedWord("unreachable points in closed word")
        raise NotAStringLink("open word contains closed components")

    infos = {}
    for idx, slot in crossings.items():
        if "slash" not in slot or "back" not in slot:
            raise MalformedWord(f"crossing {idx} not traversed on both branches")
        (sc, su), (bc, bu) = slot["slash"], slot["back"]
        infos[idx] = CrossingInfo(idx, slot["kind"], sc, bc, su, bu)
    return StrandTrace(word, components, infos, tuple(all_visits), visited)


# -- constructions ----------------------------------------------------------


def _require_open(word, op):
    if word.closed:
        raise ArityMismatch(f"{op} needs an open word")


def stack(sigma: TangleWord, tau: TangleWord) -> TangleWord:
    """Stacking product: tau drawn on top of sigma."""
    _require_open(sigma, "stack")
    _require_open(tau, "stack")
    if sigma.n != tau.n:
        raise ArityMismatch(f"stack: {sigma.n}-strand with {tau.n}-strand word")
    return TangleWord(sigma.n, sigma.events + tau.events,
                      singular=sigma.singular or tau.singular)


def close(sigma: TangleWord) -> TangleWord:
    """Standard closure: each strand returns around the right, no new
    crossings between components."""
    _require_open(sigma, "close")
    n = sigma.n
    head = tuple(cup(k) for k in range(1, n + 1))
    tail = tuple(cap(k) for k in range(n, 0, -1))
    return TangleWord(-1, head + sigma.events + tail, closed=True,
                      singular=sigma.singular)


def plat_close(sigma: TangleWord) -> TangleWord:
    """Plat closure of a 2-string link: origins joined below, ends above."""
    _require_open(sigma, "plat_close")
    if sigma.n != 2:
        raise ArityMismatch(f"plat_close needs n=2, got {sigma.n}")
    events = (cup(1),) + sigma.events + (cap(1),)
    return TangleWord(-1, events, closed=True, singular=sigma.singular)


def curl(sigma: TangleWord) -> TangleWord:
    """Curling: chain the n strands into one, each connecting curl passing
    over the first string with a positive crossing."""
    return _curl_with_offset(sigma)[0]


def _curl_with_offset(sigma: TangleWord):
    _require_open(sigma, "curl")
    n = sigma.n
    head = []
    for j in range(n - 1):
        head.append(cup(j + 1))
        head.append(xpos(j + 2))
    tail = tuple(cap(k) for k in range(n - 1, 0, -1))
    events = tuple(head) + shift_events(sigma.events, n - 1) + tail
    word = TangleWord(1, events, singular=sigma.singular)
    return word, 2 * (n - 1)


def tilde(sigma: TangleWord, sign: str) -> TangleWord:
    """Merge strands 1 and 3 into one by a stacked crossing over strand 2.

    ``sign`` is '+' or '-' and fixes the sign of the crossing between the
    first and third strands; both pass over the second.  The endpoints over
    the first marked point are identified around the left of the diagram.
    """
    _require_open(sigma, "tilde")
    if sigma.n != 3:
        raise ArityMismatch(f"tilde needs n=3, got {sigma.n}")
    if sigma.singular:
        raise ArityMismatch("tilde needs a non-singular word")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    mid = xpos(2) if sign == "+" else xneg(2)
    events = ((cup(1),) + shift_events(sigma.events, 1)
              + (xneg(3), mid, xpos(3), cap(1)))
    return TangleWord(2, events)


def sublink(sigma: TangleWord, keep) -> TangleWord:
    """Extract the strands in ``keep`` (re-indexed order-preservingly)."""
    _require_open(sigma, "sublink")
    keep = frozenset(keep)
    if not keep:
        raise EmptySelection("sublink of the empty strand set")
    if not keep <= set(range(1, sigma.n + 1)):
        raise ArityMismatch(f"sublink strands {sorted(keep)} out of range for n={sigma.n}")
    trace = validate(sigma)
    ports = trace.port_components
    new_events = []
    level_count = 0 if sigma.closed else sigma.n
    level = 0
    counts = active_counts(sigma)
    for idx, e in enumerate(sigma.events):
        c = counts[idx]
        kept_before = sum(1 for q in range(1, e.position) if ports[(idx, q)] in keep)
        if e.kind is EventKind.CUP:
            comp = ports[(idx + 1, e.position)]
            if comp in keep:
                new_events.append(cup(kept_before + 1))
        elif e.kind is EventKind.CAP:
            comp = ports[(idx, e.position)]
            if comp in keep:
                new_events.append(cap(kept_before + 1))
        else:
            info = trace.crossings[idx]
            a, b = info.slash_component, info.back_component
            inside = (a in keep) + (b in keep)
            if e.kind is EventKind.CROSS_DOUBLE and inside not in (0, 2):
                raise MalformedWord("double point involves a deleted strand")
            if inside == 2:
                new_events.append(TangleEvent(e.kind, kept_before + 1))
    word = TangleWord(len(keep), tuple(new_events),
                      singular=any(e.kind is EventKind.CROSS_DOUBLE for e in new_events))
    return word


def switch(sigma: TangleWord, crossing_id: int) -> TangleWord:
    """Flip one crossing between positive and negative."""
    idx = sigma.event_for_crossing(crossing_id)
    e = sigma.events[idx]
    if e.kind is EventKind.CROSS_DOUBLE:
        raise BadCrossingId(f"crossing {crossing_id} is a double point")
    flipped = xneg(e.position) if e.kind is EventKind.CROSS_POS else xpos(e.position)
    events = sigma.events[:idx] + (flipped,) + sigma.events[idx + 1:]
    return TangleWord(sigma.n, events, sigma.closed, sigma.singular)


def smooth(sigma: TangleWord, crossing_id: int, trace: Optional[StrandTrace] = None) -> TangleWord:
    """Oriented 0-smoothing of one crossing.

    Branches traversed in the same vertical direction smooth to parallel
    arcs (the event disappears); opposite directions smooth to a turn-back
    (cap then cup).  Component count of a closed diagram may change, so the
    result of a closed smoothing carries n = -1.
    """
    idx = sigma.event_for_crossing(crossing_id)
    e = sigma.events[idx]
    if e.kind is EventKind.CROSS_DOUBLE:
        raise BadCrossingId(f"crossing {crossing_id} is a double point")
    if trace is None:
        trace = validate(sigma)
    info = trace.crossings[idx]
    if info.slash_up == info.back_up:
        mid: tuple = ()
    else:
        mid = (cap(e.position), cup(e.position))
    events = sigma.events[:idx] + mid + sigma.events[idx + 1:]
    n = -1 if sigma.closed else sigma.n
    return TangleWord(n, events, sigma.closed, sigma.singular)


def make_double(sigma: TangleWord, crossing_id: int) -> TangleWord:
    """Replace one crossing by a double point; the word becomes singular."""
    idx = sigma.event_for_crossing(crossing_id)
    e = sigma.events[idx]
    if e.kind is EventKind.CROSS_DOUBLE:
        raise BadCrossingId(f"crossing {crossing_id} is already a double point")
    events = sigma.events[:idx] + (xdbl(e.position),) + sigma.events[idx + 1:]
    return TangleWord(sigma.n, events, sigma.closed, singular=True)


def resolve_double(sigma: TangleWord, event_index: int, sign: int) -> TangleWord:
    """Resolve the double point at ``event_index`` into a +/- crossing."""
    e = sigma.events[event_index]
    if e.kind is not EventKind.CROSS_DOUBLE:
        raise BadCrossingId(f"event {event_index} is not a double point")
    ev = xpos(e.position) if sign > 0 else xneg(e.position)
    events = sigma.events[:event_index] + (ev,) + sigma.events[event_index + 1:]
    still = any(x.kind is EventKind.CROSS_DOUBLE for x in events)
    return TangleWord(sigma.n, events, sigma.closed, singular=still)


def permutation_braid(perm: tuple, positive: bool = True) -> list:
    """Positive (or negative) braid word realizing bottom position i ->
    top position perm[i-1], built by adjacent transpositions."""
    n = len(perm)
    desired = [0] * n
    for i, target in enumerate(perm, start=1):
        desired[target - 1] = i
    current = list(range(1, n + 1))
    events = []
    kind = xpos if positive else xneg
    for t in range(n):
        want = desired[t]
        j = current.index(want)
        while j > t:
            events.append(kind(j))
            current[j - 1], current[j] = current[j], current[j - 1]
            j -= 1
    return events


def permute_strands(sigma: TangleWord, tau: tuple) -> TangleWord:
    """Relabel strands: strand m of the result runs through strand tau[m-1]
    of sigma.  Realized as conjugation by a positive permutation braid."""
    _require_open(sigma, "permute_strands")
    if sorted(tau) != list(range(1, sigma.n + 1)):
        raise ArityMismatch(f"{tau} is not a permutation of 1..{sigma.n}")
    below = permutation_braid(tau)
    above = [xneg(e.position) if e.kind is EventKind.CROSS_POS else xpos(e.position)
             for e in reversed(below)]
    events = tuple(below) + sigma.events + tuple(above)
    return TangleWord(sigma.n, events, singular=sigma.singular)
