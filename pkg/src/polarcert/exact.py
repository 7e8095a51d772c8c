"""Small exact linear algebra over the rationals."""

from __future__ import annotations

from fractions import Fraction


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = M[r][c]
        M[r] = [x / s for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    R, piv = rref(rows) if rows else ([], [])
    out = []
    for f in (c for c in range(ncols) if c not in piv):
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, piv):
            x[p] = -row[f]
        out.append(x)
    return out


def solve_affine(A, b) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """Particular solution and kernel basis of A x = b, or None if inconsistent."""
    ncols = len(A[0])
    R, piv = rref([list(r) + [bi] for r, bi in zip(A, b)])
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, piv):
        x[p] = row[ncols]
    return x, nullspace([r[:ncols] for r in R], ncols)


def in_row_space(rows, v) -> bool:
    return rank(list(rows) + [list(v)]) == rank(rows)


def fm_range(constraints, objective, const=Fraction(0)):
    """Exact [min, max] of const + objective.t subject to rows (a, b) meaning
    a.t <= b, by Fourier-Motzkin elimination.  Returns None if infeasible;
    an unbounded side is reported as None inside the pair."""
    k = len(objective)
    # variables t_0..t_{k-1}, s ; s - objective.t = const
    rows = [([Fraction(x) for x in a] + [Fraction(0)], Fraction(b)) for a, b in constraints]
    obj = [Fraction(x) for x in objective]
    rows.append(([-x for x in obj] + [Fraction(1)], Fraction(const)))
    rows.append(([x for x in obj] + [Fraction(-1)], -Fraction(const)))
    for v in range(k):
        pos, neg, keep = [], [], []
        for a, b in rows:
            (pos if a[v] > 0 else neg if a[v] < 0 else keep).append((a, b))
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = ap[v], -an[v]
                a = [cn * x + cp * y for x, y in zip(ap, an)]
                keep.append((a, cn * bp + cp * bn))
        rows = _dedupe(keep)
    lo, hi = None, None
    for a, b in rows:
        c = a[k]
        if c == 0:
            if b < 0:
                return None
        elif c > 0:
            hi = b / c if hi is None else min(hi, b / c)
        else:
            lo = b / c if lo is None else max(lo, b / c)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _dedupe(rows):
    """Drop dominated duplicates (same direction, larger bound) and trivial rows."""
    best: dict = {}
    worst_zero = None
    for a, b in rows:
        lead = next((abs(x) for x in a if x != 0), None)
        if lead is None:
            worst_zero = b if worst_zero is None else min(worst_zero, b)
            continue
        key = tuple(x / lead for x in a)
        if key not in best or b / lead < best[key]:
            best[key] = b / lead
    out = [(list(k), b) for k, b in best.items()]
    if worst_zero is not None and worst_zero < 0:
        out.append(([Fraction(0)] * len(rows[0][0]), worst_zero))
    return out
