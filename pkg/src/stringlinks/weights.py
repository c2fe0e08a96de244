"""Weight systems on order-2 chord classes: validity checks, built-in
tables computed from the definitional invariants, the calibration solver,
and the arrow-diagram pairing engine."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import fixtures, linalg
from .errors import ArityMismatch, Inconsistent, Underdetermined, UnknownName
from .gauss import ChordClass, enumerate_classes
from .invariants import (Evaluator, evaluate_singular, lannes_eval,
                         mu_perm_evaluator, mu_product_evaluator,
                         mu_triple_evaluator, phi_evaluator, sublink,
                         v2_evaluator)
from .tangle import EventKind, TangleEvent, TangleWord, validate


@dataclass
class WeightSystem:
    """Integer weights on order-2 chord classes plus the per-invariant
    delta bit used on type-1 crossings of 3-string links."""

    n: int
    values: dict
    delta_v: int = 0
    name: str = ""
    validated: bool = field(default=False, compare=False)

    def value(self, cls: ChordClass) -> int:
        return self.values.get(cls, 0)

    def validate(self) -> "WeightSystem":
        violations = check_weight(self)
        if violations:
            raise Inconsistent(
                f"{self.name or 'weight system'}: {violations[0]}"
                + (f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""))
        self.validated = True
        return self

    def quotient_signature(self) -> tuple:
        """Coordinates of the weight system as a functional; two systems in
        the same 1T/4T class evaluate equally on every class."""
        return tuple(self.value(c) for c in enumerate_classes(self.n, 2))


# -- 1T / 4T -------------------------------------------------------------


@lru_cache(maxsize=None)
def four_t_instances(n: int) -> tuple:
    """All four-term relations on order-2 classes of n strands.

    Each instance is a dict class -> coefficient; a weight system W must
    satisfy sum(coeff * W(class)) = 0.  Instances are generated by sliding
    one endpoint of a chord past both endpoints of another chord:
    (above p) - (below p) - (above q) + (below q) = 0.
    """
    out = {}
    strands = range(1, n + 1)
    d_forms = [((sp, 10), (sq, 20 if sp == sq else 10))
               for sp in strands for sq in strands if sp <= sq]
    for d in d_forms:
        (sp, kp), (sq, kq) = d
        for se in strands:
            taken = sorted(k for s, k in d if s == se)
            slots = [Fraction(5)]
            for a, b in zip(taken, taken[1:]):
                slots.append(Fraction(a + b, 2))
            slots.append(Fraction((taken[-1] if taken else 20) + 10))
            for ke in slots:
                relation: dict = {}
                for (sm, km), sign in (((sp, kp + Fraction(1, 4)), 1),
                                       ((sp, kp - Fraction(1, 4)), -1),
                                       ((sq, kq + Fraction(1, 4)), -1),
                                       ((sq, kq - Fraction(1, 4)), 1)):
                    if (sm, km) == (se, ke):
                        continue
                    cls = ChordClass.from_raw(n, (d, ((se, ke), (sm, km))))
                    relation[cls] = relation.get(cls, 0) + sign
                relation = {c: v for c, v in relation.items() if v}
                if relation:
                    key = tuple(sorted((c.chords, v) for c, v in relation.items()))
                    out.setdefault(key, relation)
    return tuple(out.values())


def check_weight(weight_system: WeightSystem) -> list:
    """1T and 4T violations; empty exactly when the map is a weight system."""
    violations = []
    for cls, value in sorted(weight_system.values.items(), key=lambda kv: kv[0].chords):
        if value and not cls.admissible:
            violations.append(f"1T violation: {cls} has an isolated chord, value {value}")
    for relation in four_t_instances(weight_system.n):
        total = sum(coeff * weight_system.value(cls) for cls, coeff in relation.items())
        if total:
            terms = " ".join(f"{coeff:+d}*{cls}" for cls, coeff in relation.items())
            violations.append(f"4T violation: {terms} = {total}")
    return violations


@lru_cache(maxsize=None)
def admissible_rank_mod_4t(n: int) -> int:
    """Rank of the space of order-2 weight systems on n strands: classes
    modulo isolated-chord classes and the 4T relations."""
    classes = enumerate_classes(n, 2)
    index = {c: k for k, c in enumerate(classes)}
    rows = []
    for c in classes:
        if not c.admissible:
            row = [0] * len(classes)
            row[index[c]] = 1
            rows.append(row)
    for relation in four_t_instances(n):
        row = [0] * len(classes)
        for cls, coeff in relation.items():
            row[index[cls]] = coeff
        rows.append(row)
    return len(classes) - linalg.rank(rows)


# -- built-in weight systems ---------------------------------------------


def _parse_builtin(name: str, n: int) -> Evaluator:
    if name == "W22":
        if n != 2:
            raise UnknownName("W22 is the 2-strand table")
        return v2_evaluator(1, 2, 2)
    parts = name.split("_")
    try:
        if parts[0] == "casson" and len(parts) == 2:
            return phi_evaluator(int(parts[1]), n)
        if parts[0] == "mu" and parts[1] == "sq" and len(parts) == 3:
            i, j = (int(c) for c in parts[2])
            return mu_product_evaluator(((i, j), (i, j)), n)
        if parts[0] == "V2" and len(parts) == 2:
            i, j = (int(c) for c in parts[1])
            return v2_evaluator(i, j, n)
        if parts[0] == "mu" and parts[1] == "prod":
            pairs = tuple((int(p[0]), int(p[1])) for p in parts[2:])
            return mu_product_evaluator(pairs, n)
        if parts[0] == "mu" and len(parts) == 2 and len(parts[1]) == 3:
            a, b, c = (int(ch) for ch in parts[1])
            if n == 3:
                return mu_perm_evaluator((a, b, c))
            if (a, b, c) == tuple(sorted((a, b, c))):
                return mu_triple_evaluator(a, b, c, n)
            raise UnknownName(f"permuted {name} only available for n=3")
        if parts[0] == "mu" and len(parts) == 3 and all(len(p) == 2 for p in parts[1:]):
            pairs = tuple((int(p[0]), int(p[1])) for p in parts[1:])
            return mu_product_evaluator(pairs, n)
    except (ValueError, IndexError):
        pass
    raise UnknownName(f"no built-in weight system named {name!r}")


_builtin_cache: dict = {}


def builtin(name: str, n: int) -> WeightSystem:
    """Built-in weight system: the order-2 symbol of the named invariant,
    computed from the definitional routes on class representatives, with
    the delta bit calibrated against the invariant itself."""
    key = (name, n)
    hit = _builtin_cache.get(key)
    if hit is not None:
        return hit
    evaluator = _parse_builtin(name, n)
    values = {}
    for cls in enumerate_classes(n, 2):
        v = evaluate_singular(evaluator, fixtures.realize_chord_class(cls))
        if v:
            values[cls] = v
    ws = WeightSystem(n, values, 0, name)
    ws.validate()
    if n == 3:
        ws.delta_v = _calibrate_delta_v(ws, evaluator)
    _builtin_cache[key] = ws
    return ws


def _delta_corpus(n: int, count: int = 18, seed: int = 2026) -> list:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = rng.randint(2, 6)
        events = []
        cur = list(range(1, n + 1))
        for _ in range(k):
            p = rng.randint(1, n - 1)
            kind = rng.choice((EventKind.CROSS_POS, EventKind.CROSS_NEG))
            events.append(TangleEvent(kind, p))
            cur[p - 1], cur[p] = cur[p], cur[p - 1]
        while cur != sorted(cur):
            for i in range(n - 1):
                if cur[i] > cur[i + 1]:
                    kind = rng.choice((EventKind.CROSS_POS, EventKind.CROSS_NEG))
                    events.append(TangleEvent(kind, i + 1))
                    cur[i], cur[i + 1] = cur[i + 1], cur[i]
                    break
        word = TangleWord(n, tuple(events))
        validate(word)
        out.append(word)
    return out


def _calibrate_delta_v(ws: WeightSystem, evaluator: Evaluator) -> int:
    """The delta bit is fixed by matching the state sum against the
    invariant on a seeded corpus with type-1 crossings."""
    matches = {0: True, 1: True}
    for word in _delta_corpus(3):
        expected = evaluator(word)
        for bit in (0, 1):
            if not matches[bit]:
                continue
            ws.delta_v = bit
            if lannes_eval(ws, word) != expected:
                matches[bit] = False
        if not any(matches.values()):
            break
    if matches[0]:
        ws.delta_v = 0
        return 0
    if matches[1]:
        ws.delta_v = 1
        return 1
    raise Inconsistent(f"no delta bit makes {ws.name} match its state sum")


# -- calibration solver ----------------------------------------------------


def state_sum_coefficients(sigma: TangleWord, delta_v: int) -> dict:
    """Coefficients of each chord class in the Lannes state sum of sigma,
    as exact rationals: v(sigma) = sum_cls coeff * W(cls)."""
    from .gauss import effective_delta, gauss_data, pair_classes
    data = gauss_data(sigma)
    deltas = [effective_delta(d, delta_v) for d in data]
    coeffs: dict = {}
    for i, j, cls in pair_classes(sigma):
        c = Fraction(data[i].epsilon * data[j].epsilon
                     * abs(deltas[i] - deltas[j]), 2)
        if c:
            coeffs[cls] = coeffs.get(cls, 0) + c
    return coeffs


def calibrate(n: int, corpus, oracle, delta_v_unknown: bool = True,
              classes=None) -> WeightSystem:
    """Solve for the integer weight assignment (and delta bit) reproducing
    the oracle exactly on the corpus, subject to 1T and 4T.

    Raises Inconsistent when no assignment exists and Underdetermined (with
    the kernel basis) when the corpus does not pin the weights modulo the
    relations.
    """
    corpus = list(corpus)
    if len(corpus) < 50:
        raise ArityMismatch(f"calibration needs >= 50 diagrams, got {len(corpus)}")
    all_classes = enumerate_classes(n, 2)
    unknowns = [c for c in (classes if classes is not None else all_classes)
                if c.admissible]
    index = {c: k for k, c in enumerate(unknowns)}
    relation_rows = []
    for relation in four_t_instances(n):
        row = [Fraction(0)] * len(unknowns)
        for cls, coeff in relation.items():
            if cls in index:
                row[index[cls]] += coeff
            # weights outside the unknown set are pinned to zero
        relation_rows.append(row)
    oracle_values = [oracle(word) for word in corpus]
    bits = (0, 1) if (delta_v_unknown and n == 3) else (0,)
    last_error = None
    for bit in bits:
        rows = [list(r) for r in relation_rows]
        rhs = [Fraction(0)] * len(rows)
        for word, target in zip(corpus, oracle_values):
            row = [Fraction(0)] * len(unknowns)
            for cls, coeff in state_sum_coefficients(word, bit).items():
                if cls in index:
                    row[index[cls]] += coeff
                elif coeff:
                    # contribution of a class pinned to zero by 1T
                    if cls.admissible:
                        raise ArityMismatch(
                            f"corpus word hits class {cls} outside the unknown set")
            rows.append(row)
            rhs.append(Fraction(target))
        solved = linalg.solve(rows, rhs)
        if solved is None:
            last_error = Inconsistent(f"no weight assignment with delta_v={bit}")
            continue
        particular, null_basis = solved
        if null_basis:
            raise Underdetermined(
                f"corpus leaves {len(null_basis)} free weight directions",
                kernel=tuple(tuple(v) for v in null_basis))
        if any(x.denominator != 1 for x in particular):
            last_error = Inconsistent(f"non-integral weights with delta_v={bit}")
            continue
        values = {cls: int(particular[index[cls]]) for cls in unknowns
                  if particular[index[cls]]}
        ws = WeightSystem(n, values, bit, name=f"calibrated(n={n})")
        return ws.validate()
    raise last_error or Inconsistent("calibration failed")


# -- arrow diagram pairing --------------------------------------------------


@dataclass(frozen=True)
class ArrowDiagramPattern:
    """Up to two signed, directed arrows on n ordered strands.

    Arrows run from the under branch to the over branch; ``sign`` of None
    matches either crossing sign.  The coefficient weights every match.
    """

    n: int
    arrows: tuple      # ((tail, head, sign), ...) with endpoints (strand, rank)
    coefficient: int = 1

    @classmethod
    def from_raw(cls, n, arrows, coefficient=1):
        per_strand: dict = {}
        for tail, head, _ in arrows:
            for strand, key in (tail, head):
                per_strand.setdefault(strand, []).append(key)
        rank = {}
        for strand, keys in per_strand.items():
            for r, key in enumerate(sorted(keys), start=1):
                rank[(strand, key)] = r
        canon = tuple(sorted(
            ((t[0], rank[t]), (h[0], rank[h]), s) for t, h, s in arrows))
        return cls(n, canon, coefficient)


def _diagram_arrows(sigma: TangleWord):
    """Crossing arrows of a word: (tail endpoint, head endpoint, epsilon),
    tail on the under branch."""
    from .gauss import _visit_sequence
    trace = validate(sigma)
    seq = _visit_sequence(trace)
    arrows = []
    for idx in sigma.crossing_indices():
        info = trace.crossings[idx]
        over = info.over_branch
        slash_ep, back_ep = seq[(idx, "slash")], seq[(idx, "back")]
        if over == "slash":
            arrows.append((back_ep, slash_ep, info.epsilon))
        else:
            arrows.append((slash_ep, back_ep, info.epsilon))
    return arrows


def _match(pattern_arrows, chosen, n):
    """Whether the chosen diagram arrows realize the pattern in some
    assignment order, respecting sign filters."""
    for perm in itertools.permutations(range(len(chosen))):
        assigned = [chosen[p] for p in perm]
        if any(p[2] is not None and p[2] != a[2]
               for p, a in zip(pattern_arrows, assigned)):
            continue
        shape = ArrowDiagramPattern.from_raw(
            n, [(t, h, p[2]) for (t, h, _), p in zip(assigned, pattern_arrows)])
        if shape.arrows == pattern_arrows:
            return True
    return False


def gauss_pairing(patterns, sigma: TangleWord) -> int:
    """Signed count of pattern matches in the Gauss diagram of sigma.

    Each matching subdiagram contributes the pattern coefficient times the
    product of its crossing signs.
    """
    if sigma.n != 2 or sigma.closed or sigma.singular:
        raise ArityMismatch("gauss_pairing needs an open non-singular 2-string word")
    arrows = _diagram_arrows(sigma)
    total = 0
    for pattern in patterns:
        k = len(pattern.arrows)
        for combo in itertools.combinations(arrows, k):
            if _match(pattern.arrows, combo, sigma.n):
                eps = 1
                for a in combo:
                    eps *= a[2]
                total += pattern.coefficient * eps
    return total


def enumerate_arrow_patterns(n: int = 2, signed: bool = False) -> tuple:
    """All 2-arrow patterns on n strands, optionally with sign filters."""
    patterns = set()
    sign_choices = (1, -1) if signed else (None,)
    pairs = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    for (t1, h1), (t2, h2) in itertools.product(pairs, repeat=2):
        endpoints = [t1, h1, t2, h2]
        by_strand: dict = {}
        for slot, strand in enumerate(endpoints):
            by_strand.setdefault(strand, []).append(slot)
        orders = [itertools.permutations(slots) for slots in by_strand.values()]
        for choice in itertools.product(*orders):
            pos = {}
            for slots in choice:
                for r, slot in enumerate(slots):
                    pos[slot] = r
            for s1, s2 in itertools.product(sign_choices, repeat=2):
                patterns.add(ArrowDiagramPattern.from_raw(
                    n, [((t1, pos[0]), (h1, pos[1]), s1),
                        ((t2, pos[2]), (h2, pos[3]), s2)]))
    return tuple(sorted(patterns, key=lambda p: (p.arrows,)))
