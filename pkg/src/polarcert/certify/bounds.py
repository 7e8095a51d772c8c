"""Exact threshold calculators for ovoid non-existence in the Hermitian,
hyperbolic and parabolic families."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ..field import FieldError, prime_power

FAMILIES = ("hermitian", "hyperbolic", "parabolic")


def hermitian_threshold(q: int) -> int:
    """H(2d-1, q^2) has no ovoid once d exceeds this."""
    return q**3 - q**2 + 2


def klein_threshold(q: int) -> int:
    return q**3 + 1


def hyperbolic_threshold(q: int) -> int:
    """Q+(2d-1, q) has no ovoid once d exceeds this."""
    return q**2 - q + 3


def parabolic_threshold(q: int) -> Fraction:
    """Q(2d, q) has no ovoid once d exceeds this."""
    return Fraction(q**2 + 3, 2)


def moorhouse_hyperbolic(p: int, r: int) -> tuple[int, int, bool]:
    """(lhs, rhs, lhs > rhs) for Q+(2r+1, p^h)."""
    lhs = p**r
    rhs = comb(2 * r + p, 2 * r + 1) - comb(2 * r + p - 2, 2 * r + 1)
    return lhs, rhs, lhs > rhs


def moorhouse_hermitian(p: int, r: int) -> tuple[int, int, bool]:
    """(lhs, rhs, lhs > rhs) for H(2r-1, p^(2h))."""
    lhs = p ** (2 * r - 1)
    rhs = comb(p + 2 * r - 2, 2 * r - 1) ** 2 - comb(p + 2 * r - 3, 2 * r - 1) ** 2
    return lhs, rhs, lhs > rhs


def threshold(family: str, q: int):
    if family == "hermitian":
        return hermitian_threshold(q)
    if family == "hyperbolic":
        return hyperbolic_threshold(q)
    if family == "parabolic":
        return parabolic_threshold(q)
    raise ValueError(f"unknown family {family!r}")


def space_name(family: str, d: int, q: int) -> str:
    if family == "hermitian":
        return f"H({2 * d - 1},{q * q})"
    if family == "hyperbolic":
        return f"Q+({2 * d - 1},{q})"
    return f"Q({2 * d},{q})"


def _fmt(t):
    return f"{t.numerator}/{t.denominator}" if isinstance(t, Fraction) else t


@dataclass
class BoundRow:
    family: str
    q: int
    d: int
    space: str
    threshold: object
    combinatorial: bool
    klein: bool | None = None
    moorhouse: tuple | None = None

    @property
    def verdict(self) -> str:
        reasons = []
        if self.combinatorial:
            reasons.append("tight-set bound")
        if self.klein:
            reasons.append("Klein")
        if self.moorhouse and self.moorhouse[2]:
            reasons.append("p-rank bound")
        return "no ovoid (" + ", ".join(reasons) + ")" if reasons else "not decided here"

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "q": self.q,
            "d": self.d,
            "space": self.space,
            "threshold": _fmt(self.threshold),
            "combinatorial": self.combinatorial,
            "klein": self.klein,
            "moorhouse": list(self.moorhouse) if self.moorhouse else None,
            "verdict": self.verdict,
        }


@dataclass
class BoundReport:
    family: str
    qs: list
    ds: list
    rows: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "q": self.qs,
            "d": self.ds,
            "thresholds": {str(q): _fmt(threshold(self.family, q)) for q in self.qs},
            "rows": [r.to_dict() for r in self.rows],
        }


def prime_powers(qmax: int) -> list[int]:
    out = []
    for q in range(2, qmax + 1):
        try:
            prime_power(q)
        except FieldError:
            continue
        out.append(q)
    return out


def bounds(family: str, qmax: int = 5, dmax: int | None = None) -> BoundReport:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    qs = prime_powers(qmax)
    dmax = dmax if dmax is not None else int(max(threshold(family, q) for q in qs)) + 2
    ds = list(range(2, dmax + 1))
    rep = BoundReport(family, qs, ds)
    for q in qs:
        p, _ = prime_power(q)
        t = threshold(family, q)
        for d in ds:
            row = BoundRow(family, q, d, space_name(family, d, q), t, d > t)
            if family == "hermitian":
                row.klein = d > klein_threshold(q)
                row.moorhouse = moorhouse_hermitian(p, d)
            elif family == "hyperbolic" and d >= 2:
                row.moorhouse = moorhouse_hyperbolic(p, d - 1)
            rep.rows.append(row)
    return rep


def monotone(family: str, qmax: int = 9) -> bool:
    vals = [threshold(family, q) for q in prime_powers(qmax)]
    return all(a < b for a, b in zip(vals, vals[1:]))
