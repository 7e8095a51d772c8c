"""Transversal lines of three pairwise disjoint planes of Q(6,q)."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from ..polar import PolarSpace, cached, members


class ThreeLinesError(RuntimeError):
    pass


@dataclass
class ThreeLinesReport:
    q: int
    mode: str
    triples_checked: int
    transversal_counts: dict = field(default_factory=dict)
    span_point_counts: dict = field(default_factory=dict)
    ruling_line_counts: dict = field(default_factory=dict)
    ok: bool = True

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "mode": self.mode,
            "triples_checked": self.triples_checked,
            "transversal_counts": {str(k): v for k, v in sorted(self.transversal_counts.items())},
            "span_point_counts": {str(k): v for k, v in sorted(self.span_point_counts.items())},
            "ruling_line_counts": {str(k): v for k, v in sorted(self.ruling_line_counts.items())},
            "ok": self.ok,
        }


def transversals(space: PolarSpace, p1: int, p2: int, p3: int) -> list[int]:
    """Lines (as point masks) meeting each of three planes in a point."""
    if p1 & p2 or p1 & p3 or p2 & p3:
        raise ThreeLinesError("planes are not pairwise disjoint")
    found = set()
    for a in members(p1):
        for b in members(p2 & space.adj[a]):
            lm = space.line_mask(a, b)
            if lm & p3:
                found.add(lm)
    return sorted(found)


def inspect_triple(space: PolarSpace, planes) -> tuple[int, int, int]:
    """(number of transversals, singular points of their span, lines inside the span).

    A Q+(3,q) has (q+1)^2 points on 2(q+1) lines, q+1 in each ruling."""
    lines = transversals(space, *planes)
    for lm in lines:
        if any((lm & p).bit_count() != 1 for p in planes):
            raise ThreeLinesError("transversal meets a plane in more than a point")
    pts = sorted({x for lm in lines for x in members(lm)})
    span = space.span(pts)
    if span.dim != 4:
        return len(lines), -1, -1
    mask = space.mask_of_subspace(span)
    inner = {space.line_mask(a, b) for a, b in itertools.combinations(members(mask), 2) if space.collinear(a, b)}
    inner = {lm for lm in inner if lm & mask == lm}
    return len(lines), mask.bit_count(), len(inner)


def disjoint_triples(planes: list[int]):
    n = len(planes)
    for i in range(n):
        for j in range(i + 1, n):
            if planes[i] & planes[j]:
                continue
            for k in range(j + 1, n):
                if planes[k] & (planes[i] | planes[j]) == 0:
                    yield planes[i], planes[j], planes[k]


def random_disjoint_triple(planes: list[int], rng: random.Random):
    while True:
        a, b, c = rng.sample(planes, 3)
        if not (a & b or a & c or b & c):
            return a, b, c


def verify_threelines(q: int, samples: int = 1000, seed: int = 0, full: bool | None = None) -> ThreeLinesReport:
    """Full sweep at q=2 (or when ``full``), otherwise ``samples`` random triples."""
    if q not in (2, 3):
        raise ThreeLinesError("q must be 2 or 3")
    space = cached("parabolic", 7, q)
    planes = space.generators
    full = (q == 2) if full is None else full
    if full:
        it = disjoint_triples(planes)
        mode = "full"
    else:
        rng = random.Random(seed)
        it = (random_disjoint_triple(planes, rng) for _ in range(samples))
        mode = f"sampled({samples}, seed={seed})"
    rep = ThreeLinesReport(q, mode, 0)
    for triple in it:
        t, s, r = inspect_triple(space, triple)
        rep.triples_checked += 1
        rep.transversal_counts[t] = rep.transversal_counts.get(t, 0) + 1
        rep.span_point_counts[s] = rep.span_point_counts.get(s, 0) + 1
        rep.ruling_line_counts[r] = rep.ruling_line_counts.get(r, 0) + 1
        if (t, s, r) != (q + 1, (q + 1) ** 2, 2 * (q + 1)):
            rep.ok = False
            raise ThreeLinesError(
                f"counterexample: planes {[members(p) for p in triple]} give {t} transversals, span {s} points"
            )
    return rep
