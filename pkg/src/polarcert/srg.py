"""Strongly regular graph parameters of collinearity graphs, in exact arithmetic."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .geometry import family_info
from .polar import PolarSpace, qpow


class SrgError(ValueError):
    pass


@dataclass(frozen=True)
class SrgParams:
    n: int
    k: int
    lam: int
    mu: int
    posev: int
    negev: int
    m_r: int | None = None
    m_s: int | None = None

    def identities(self) -> dict[str, bool]:
        n, k, lam, mu, r, s = self.n, self.k, self.lam, self.mu, self.posev, self.negev
        out = {
            "n_mu": n * mu == (k - r) * (k - s),
            "product": r * s == mu - k,
            "k_lambda": k * (k - lam - 1) == (n - k - 1) * mu,
        }
        if self.m_r is not None:
            out["multiplicities"] = self.m_r + self.m_s + 1 == n
            out["trace"] = k + self.m_r * r + self.m_s * s == 0
        return out

    def as_dict(self) -> dict:
        d = asdict(self)
        d["identities"] = self.identities()
        return d

    def core(self) -> tuple:
        return (self.n, self.k, self.lam, self.mu, self.posev, self.negev)


def eigenvalues(k: int, lam: int, mu: int) -> tuple[int, int]:
    """(posev, negev) from the quadratic formula; requires a square discriminant."""
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    root = math.isqrt(disc)
    if root * root != disc:
        raise SrgError(f"discriminant {disc} is not a perfect square")
    if (lam - mu + root) % 2:
        raise SrgError("eigenvalues are not integers")
    return (lam - mu + root) // 2, (lam - mu - root) // 2


def _qf(q: int, two_x: int) -> Fraction:
    if two_x >= 0:
        return Fraction(qpow(q, two_x))
    return 1 / Fraction(qpow(q, -two_x))


def _integral(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise SrgError(f"{what} = {x} is not an integer")
    return int(x)


def params_from_table(q: int, rank: int, two_e: int) -> SrgParams:
    """Evaluate the closed-form SRG table for a polar space of the given rank and
    type (two_e = 2e) over a field with q elements."""
    if rank < 2:
        raise SrgError("rank-1 polar spaces have an edgeless collinearity graph")
    d = rank
    Q = Fraction(q)
    A = _qf(q, 2 * (d - 2) + two_e) + 1  # q^(d-2+e) + 1
    n = (_qf(q, 2 * (d - 1) + two_e) + 1) * (Q**d - 1) / (Q - 1)
    k = Q * A * (Q ** (d - 1) - 1) / (Q - 1)
    lam = Q ** (d - 1) - 1 + Q * A * (Q ** (d - 2) - 1) / (Q - 1)
    mu = A * (Q ** (d - 1) - 1) / (Q - 1)
    r = Q ** (d - 1) - 1
    s = -1 - _qf(q, 2 * (d - 2) + two_e)
    den = (Q - 1) * (_qf(q, two_e - 2) + 1)
    m_r = _qf(q, two_e) * (Q**d - 1) * A / den
    m_s = Q * (Q ** (d - 1) - 1) * (_qf(q, 2 * (d - 1) + two_e) + 1) / den
    vals = {
        "n": n,
        "k": k,
        "lambda": lam,
        "mu": mu,
        "posev": r,
        "negev": s,
        "m_r": m_r,
        "m_s": m_s,
    }
    ints = {key: _integral(v, key) for key, v in vals.items()}
    p = SrgParams(
        ints["n"],
        ints["k"],
        ints["lambda"],
        ints["mu"],
        ints["posev"],
        ints["negev"],
        ints["m_r"],
        ints["m_s"],
    )
    bad = [key for key, ok in p.identities().items() if not ok]
    if bad:
        raise SrgError(f"identities fail for table values: {bad}")
    if (p.posev, p.negev) != eigenvalues(p.k, p.lam, p.mu):
        raise SrgError("table eigenvalues disagree with the quadratic formula")
    return p


def params_for_family(family: str, d: int, q: int) -> SrgParams:
    """Table parameters for a family (d = vector dimension, q as in the family name)."""
    info = family_info(family, d, q)
    return params_from_table(info.field_order, info.rank, info.two_e)


def params_for_space(space: PolarSpace) -> SrgParams:
    return params_from_table(space.q, space.rank, space.two_e)


def params_from_graph(space: PolarSpace) -> SrgParams:
    """Measure (n, k, lambda, mu) by exhaustive pair counts."""
    n = space.n
    adj = space.adj
    degrees = {a.bit_count() for a in adj}
    if len(degrees) != 1:
        raise SrgError("graph is not regular")
    k = degrees.pop()
    if not 0 < k < n - 1:
        raise SrgError("graph is empty or complete")
    lam_vals, mu_vals = set(), set()
    for i in range(n):
        ai = adj[i]
        for j in range(i + 1, n):
            c = (ai & adj[j]).bit_count()
            if ai >> j & 1:
                lam_vals.add(c)
            else:
                mu_vals.add(c)
    if len(lam_vals) != 1 or len(mu_vals) != 1:
        raise SrgError(f"not strongly regular: lambda {lam_vals}, mu {mu_vals}")
    lam, mu = lam_vals.pop(), mu_vals.pop()
    r, s = eigenvalues(k, lam, mu)
    table = params_for_space(space)
    return SrgParams(n, k, lam, mu, r, s, table.m_r, table.m_s)


def adjacency_times(space: PolarSpace, z) -> list[int]:
    """A z for an integer vector z (exact)."""
    if max((abs(x) for x in z), default=0) * space.n < 2**62:
        v = np.asarray(z, dtype=np.int64)
        return (space.adj_int @ v).tolist()
    return [sum(z[j] for j in np.flatnonzero(row)) for row in space.adj_matrix]


def eigencheck(space: PolarSpace, v, which: str) -> bool:
    """True iff v - (sum v / n) j is an eigenvector of A for posev or negev."""
    from .intriguing import WeightVector

    wv = v if isinstance(v, WeightVector) else WeightVector(space, v)
    params = params_for_space(space)
    theta = params.posev if which in ("posev", "+", "plus") else params.negev
    return wv.centred_eigen(theta, params.k)
