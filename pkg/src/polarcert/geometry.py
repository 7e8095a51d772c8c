"""Projective spaces over GF(q), subspaces and reflexive forms.

Vectors are tuples of field-element indices.  Projective points are
normalised so that the first nonzero coordinate is 1, which makes the
coordinates printed in the H(5,4) literature literal representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .field import GF, Field, FieldError, prime_power

Vector = tuple


class FormError(ValueError):
    pass


# ---------------------------------------------------------------------------
# vectors and row reduction


def normalize(F: Field, v: Sequence[int]) -> Vector:
    """Scale v so its first nonzero coordinate is 1."""
    for x in v:
        if x:
            s = F.inv(x)
            return tuple(F.mul(s, y) for y in v)
    raise FormError("zero vector is not a projective point")


def vec_add(F: Field, u, v) -> Vector:
    a = F._add
    return tuple(a[x][y] for x, y in zip(u, v))


def vec_scale(F: Field, c: int, v) -> Vector:
    m = F._mul[c]
    return tuple(m[x] for x in v)


def vec_axpy(F: Field, c: int, x, y) -> Vector:
    """c*x + y."""
    a, m = F._add, F._mul[c]
    return tuple(a[m[s]][t] for s, t in zip(x, y))


def vec_frobenius(F: Field, v, k: int) -> Vector:
    if k == 0:
        return tuple(v)
    return tuple(F.frobenius(x, k) for x in v)


def rref(F: Field, rows: Iterable[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    add, mul, neg, inv = F._add, F._mul, F._neg, F._inv
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = inv[M[r][c]]
        M[r] = [mul[s][x] for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = neg[M[i][c]]
                mf = mul[f]
                M[i] = [add[x][mf[y]] for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(F: Field, rows) -> int:
    return len(rref(F, rows)[0])


def nullspace(F: Field, rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of {x : row . x = 0 for every row}."""
    R, piv = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, p in zip(R, piv):
            x[p] = F.neg(row[f])
        basis.append(tuple(x))
    return basis


def solve(F: Field, A: Sequence[Sequence[int]], b: Sequence[int]) -> Vector | None:
    """One solution x of A x = b, or None."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(F, aug)
    if n in piv:
        return None
    x = [0] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    return tuple(x)


def mat_vec(F: Field, M, v) -> Vector:
    add, mul = F._add, F._mul
    out = []
    for row in M:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s = add[s][mul[a][b]]
        out.append(s)
    return tuple(out)


def mat_mul(F: Field, A, B):
    Bt = list(zip(*B))
    return tuple(tuple(mat_vec(F, Bt, row)) for row in A)


def transpose(M):
    return tuple(tuple(c) for c in zip(*M))


def mat_inverse(F: Field, M):
    n = len(M)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise FormError("singular matrix")
    return tuple(tuple(r[n:]) for r in R)


# ---------------------------------------------------------------------------
# projective points and subspaces


@dataclass(frozen=True)
class ProjPoint:
    coords: Vector

    @classmethod
    def of(cls, F: Field, v) -> "ProjPoint":
        return cls(normalize(F, v))


def all_points(F: Field, d: int) -> list[Vector]:
    """All normalised points of PG(d-1, F) in lexicographic order."""
    out = []
    for lead in range(d):
        for tail in itertools.product(range(F.Q), repeat=d - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    out.sort()
    return out


def point_code(F: Field, v) -> int:
    c = 0
    for x in v:
        c = c * F.Q + x
    return c


@dataclass(frozen=True)
class Subspace:
    """A vector subspace, stored by its canonical RREF basis."""

    field: Field = field(compare=False, repr=False)
    basis: tuple

    @classmethod
    def span(cls, F: Field, vectors) -> "Subspace":
        R, _ = rref(F, vectors)
        return cls(F, tuple(tuple(r) for r in R))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def proj_dim(self) -> int:
        return len(self.basis) - 1

    @property
    def ambient(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def contains(self, v) -> bool:
        return rank(self.field, list(self.basis) + [list(v)]) == self.dim

    def join(self, other) -> "Subspace":
        vecs = other.basis if isinstance(other, Subspace) else [other]
        return Subspace.span(self.field, list(self.basis) + list(vecs))

    def meet(self, other: "Subspace") -> "Subspace":
        F = self.field
        if not self.basis or not other.basis:
            return Subspace(F, ())
        rows = list(self.basis) + list(other.basis)
        # left kernel: combinations a.U + b.W = 0
        cols = transpose(rows)
        ker = nullspace(F, cols, len(rows))
        vecs = []
        k = self.dim
        for a in ker:
            v = (0,) * self.ambient
            for c, u in zip(a[:k], self.basis):
                if c:
                    v = vec_axpy(F, c, u, v)
            vecs.append(v)
        return Subspace.span(F, vecs)

    def points(self) -> list[Vector]:
        """All projective points, normalised."""
        F = self.field
        out = set()
        for coeffs in itertools.product(range(F.Q), repeat=self.dim):
            if any(coeffs):
                v = (0,) * self.ambient
                for c, b in zip(coeffs, self.basis):
                    if c:
                        v = vec_axpy(F, c, b, v)
                out.add(normalize(F, v))
        return sorted(out)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


# ---------------------------------------------------------------------------
# forms

FAMILIES = ("symplectic", "hermitian", "elliptic", "parabolic", "hyperbolic")
FAMILY_ALIASES = {
    "W": "symplectic",
    "symplectic": "symplectic",
    "H": "hermitian",
    "hermitian": "hermitian",
    "Qminus": "elliptic",
    "Q-": "elliptic",
    "elliptic": "elliptic",
    "Q": "parabolic",
    "parabolic": "parabolic",
    "Qplus": "hyperbolic",
    "Q+": "hyperbolic",
    "hyperbolic": "hyperbolic",
}


def family_of(name: str) -> str:
    try:
        return FAMILY_ALIASES[name]
    except KeyError:
        raise FormError(f"unknown polar space family {name!r}") from None


@dataclass(frozen=True, eq=False)
class FormSpec:
    """A reflexive sesquilinear or quadratic form on V(dim, field).

    ``matrix`` is the Gram matrix for symplectic and Hermitian forms and the
    upper-triangular coefficient matrix for quadratic forms.  ``family`` is one
    of FAMILIES; for quadratic forms it doubles as the subtype.
    """

    family: str
    dim: int
    field: Field
    matrix: tuple
    gram: tuple = field(init=False)

    def __post_init__(self):
        F, d, M = self.field, self.dim, self.matrix
        if self.family not in FAMILIES:
            raise FormError(f"unknown family {self.family!r}")
        if len(M) != d or any(len(r) != d for r in M):
            raise FormError("matrix shape does not match dimension")
        if self.kind == "quadratic":
            if any(M[i][j] for i in range(d) for j in range(i)):
                raise FormError("quadratic coefficient matrix must be upper triangular")
            G = tuple(
                tuple(F.add(M[i][j], M[j][i]) for j in range(d)) for i in range(d)
            )
        else:
            G = M
            if self.kind == "symplectic":
                if d % 2:
                    raise FormError("symplectic forms need even dimension")
                for i in range(d):
                    if G[i][i]:
                        raise FormError("Gram matrix is not alternating")
                    for j in range(d):
                        if G[j][i] != F.neg(G[i][j]):
                            raise FormError("Gram matrix is not alternating")
            else:
                if not F.is_square_order:
                    raise FormError("Hermitian forms need a field of square order")
                for i in range(d):
                    for j in range(d):
                        if G[j][i] != F.conj(G[i][j]):
                            raise FormError("Gram matrix is not Hermitian")
        object.__setattr__(self, "gram", G)

    @property
    def kind(self) -> str:
        if self.family in ("symplectic", "hermitian"):
            return self.family
        return "quadratic"

    @property
    def conj_exponent(self) -> int:
        return self.field.h // 2 if self.kind == "hermitian" else 0

    def _check(self, v):
        if len(v) != self.dim:
            raise FormError(f"vector of length {len(v)} for a form of dimension {self.dim}")

    def _conj(self, v) -> Vector:
        if self.kind == "hermitian":
            F = self.field
            return tuple(F.conj(x) for x in v)
        return tuple(v)

    def bilinear(self, u, v) -> int:
        """Value of the (polarised) reflexive form."""
        self._check(u)
        self._check(v)
        F = self.field
        w = mat_vec(F, self.gram, self._conj(v))
        s = 0
        for a, b in zip(u, w):
            s = F.add(s, F.mul(a, b))
        return s

    def evaluate(self, v) -> int:
        """Quadratic form value, or the (Hermitian) norm form for sesquilinear kinds."""
        self._check(v)
        F = self.field
        if self.kind == "quadratic":
            s = 0
            for i in range(self.dim):
                if v[i]:
                    for j in range(i, self.dim):
                        c = self.matrix[i][j]
                        if c and v[j]:
                            s = F.add(s, F.mul(c, F.mul(v[i], v[j])))
            return s
        return self.bilinear(v, v)

    def is_singular(self, v) -> bool:
        return self.evaluate(v) == 0

    def perp_rows(self, vectors) -> list[Vector]:
        """Rows r with r.x = 0 iff x is orthogonal to the given vector(s)."""
        F = self.field
        out = []
        for s in vectors:
            row = mat_vec(F, transpose(self.gram), s)  # (s^T G)_j
            if self.kind == "hermitian":
                row = tuple(F.conj(x) for x in row)
            out.append(row)
        return out

    def perp(self, S) -> Subspace:
        vecs = S.basis if isinstance(S, Subspace) else [S]
        return Subspace.span(self.field, nullspace(self.field, self.perp_rows(vecs), self.dim))

    def radical(self) -> Subspace:
        """Radical of the polarised form (all vectors orthogonal to everything)."""
        rows = [tuple(r) for r in self.gram]
        if self.kind == "hermitian":
            rows = [tuple(self.field.conj(x) for x in r) for r in rows]
        return Subspace.span(self.field, nullspace(self.field, transpose(rows), self.dim))

    def is_nondegenerate(self) -> bool:
        rad = self.radical()
        if self.kind != "quadratic":
            return rad.dim == 0
        # quadratic: no singular vector in the radical of the polarisation
        return all(self.evaluate(v) != 0 for v in rad.points()) if rad.dim else True

    # -- vectorised evaluation on many points ---------------------------------
    def values_on(self, P: np.ndarray) -> np.ndarray:
        """evaluate() on each row of the integer array P (shape n x dim)."""
        F = self.field
        A, Mt = F.add_table, F.mul_table
        n = P.shape[0]
        out = np.zeros(n, dtype=np.int64)
        if self.kind == "quadratic":
            for i in range(self.dim):
                for j in range(i, self.dim):
                    c = self.matrix[i][j]
                    if c:
                        out = A[out, Mt[c, Mt[P[:, i], P[:, j]]]]
            return out
        W = self._gram_image(P)
        for i in range(self.dim):
            out = A[out, Mt[P[:, i], W[:, i]]]
        return out

    def _gram_image(self, P: np.ndarray) -> np.ndarray:
        # W[:, i] = sum_j G_ij conj(P[:, j])
        F = self.field
        A, Mt = F.add_table, F.mul_table
        C = P
        if self.kind == "hermitian":
            conj = np.array([F.conj(x) for x in range(F.Q)], dtype=np.int64)
            C = conj[P]
        W = np.zeros_like(P)
        for i in range(self.dim):
            col = np.zeros(P.shape[0], dtype=np.int64)
            for j in range(self.dim):
                g = self.gram[i][j]
                if g:
                    col = A[col, Mt[g, C[:, j]]]
            W[:, i] = col
        return W

    def bilinear_matrix(self, P: np.ndarray, R: np.ndarray | None = None) -> np.ndarray:
        """Matrix of bilinear(P[x], R[y]) values."""
        F = self.field
        A, Mt = F.add_table, F.mul_table
        R = P if R is None else R
        W = self._gram_image(R)
        out = np.zeros((P.shape[0], R.shape[0]), dtype=np.int64)
        for i in range(self.dim):
            out = A[out, Mt[P[:, i][:, None], W[:, i][None, :]]]
        return out

    def describe(self) -> str:
        return f"{self.family} form on V({self.dim}) over {self.field.describe()}"


# ---------------------------------------------------------------------------
# family data


@dataclass(frozen=True)
class FamilyInfo:
    family: str
    d: int  # vector dimension
    q: int  # q of the family name (base field order for Hermitian spaces)
    field_order: int
    rank: int
    two_e: int
    ovoid_number: int

    @property
    def name(self) -> str:
        sym = {
            "symplectic": "W",
            "hermitian": "H",
            "elliptic": "Q-",
            "parabolic": "Q",
            "hyperbolic": "Q+",
        }[self.family]
        return f"{sym}({self.d - 1},{self.field_order})"


def family_info(family: str, d: int, q: int) -> FamilyInfo:
    """Family data for (family, vector dimension d, q); validates legality."""
    family = family_of(family)
    try:
        prime_power(q)
    except FieldError as exc:
        raise FormError(str(exc)) from None
    if family == "symplectic":
        if d % 2 or d < 2:
            raise FormError("symplectic spaces need d even (d >= 2)")
        return FamilyInfo(family, d, q, q, d // 2, 2, q ** (d // 2) + 1)
    if family == "hermitian":
        if d < 2:
            raise FormError("Hermitian spaces need d >= 2")
        if d % 2:
            return FamilyInfo(family, d, q, q * q, (d - 1) // 2, 3, q**d + 1)
        return FamilyInfo(family, d, q, q * q, d // 2, 1, q ** (d - 1) + 1)
    if family == "elliptic":
        if d % 2 or d < 4:
            raise FormError("elliptic quadrics need d even (d >= 4)")
        return FamilyInfo(family, d, q, q, d // 2 - 1, 4, q ** (d // 2) + 1)
    if family == "parabolic":
        if d % 2 == 0 or d < 3:
            raise FormError("parabolic quadrics need d odd (d >= 3)")
        return FamilyInfo(family, d, q, q, (d - 1) // 2, 2, q ** ((d - 1) // 2) + 1)
    if d % 2 or d < 2:
        raise FormError("hyperbolic quadrics need d even (d >= 2)")
    return FamilyInfo(family, d, q, q, d // 2, 0, q ** (d // 2 - 1) + 1)


def _irreducible_quadratic_constant(F: Field) -> int:
    """Least c (by index) with t^2 + t + c irreducible over F."""
    for c in range(1, F.Q):
        if all(F.add(F.add(F.mul(t, t), t), c) for t in range(F.Q)):
            return c
    raise FormError("no irreducible t^2+t+c")


def standard_form(family: str, d: int, q: int) -> FormSpec:
    """The default form of each family.

    Hermitian spaces use the identity Gram matrix over GF(q^2), i.e. the form
    sum x_i^(q+1); for H(5,4) this is x_1^3 + ... + x_6^3.
    """
    info = family_info(family, d, q)
    fam = info.family
    F = GF(info.field_order)
    one, zero = 1, 0
    M = [[zero] * d for _ in range(d)]
    if fam == "symplectic":
        for i in range(0, d, 2):
            M[i][i + 1] = one
            M[i + 1][i] = F.neg(one)
    elif fam == "hermitian":
        for i in range(d):
            M[i][i] = one
    elif fam == "hyperbolic":
        for i in range(0, d, 2):
            M[i][i + 1] = one
    elif fam == "parabolic":
        M[0][0] = one
        for i in range(1, d, 2):
            M[i][i + 1] = one
    else:  # elliptic: hyperbolic pairs then an anisotropic binary form
        for i in range(0, d - 2, 2):
            M[i][i + 1] = one
        c = _irreducible_quadratic_constant(F)
        M[d - 2][d - 2] = one
        M[d - 2][d - 1] = one
        M[d - 1][d - 1] = c
    return FormSpec(fam, d, F, tuple(tuple(r) for r in M))


def singular_points(form: FormSpec) -> list[Vector]:
    pts = all_points(form.field, form.dim)
    P = np.array(pts, dtype=np.int64)
    vals = form.values_on(P)
    return [p for p, v in zip(pts, vals) if v == 0]


def witt_index(form: FormSpec) -> int:
    """Maximal dimension of a totally singular subspace.

    A greedy chain gives a lower bound; exhaustive backtracking then tries to
    beat it, bounded above by dim/2.
    """
    if not form.is_nondegenerate():
        raise FormError("form is degenerate")
    pts = singular_points(form)
    if not pts:
        return 0
    P = np.array(pts, dtype=np.int64)
    B = form.bilinear_matrix(P) == 0
    n = len(pts)
    adj = [0] * n
    for i in range(n):
        row = np.flatnonzero(B[i])
        m = 0
        for j in row:
            if j != i:
                m |= 1 << int(j)
        adj[i] = m
    F = form.field
    index = {p: i for i, p in enumerate(pts)}

    def closure(chosen):
        return {index[p] for p in Subspace.span(F, [pts[c] for c in chosen]).points()}

    # greedy
    chosen, cand = [], (1 << n) - 1
    while cand:
        x = (cand & -cand).bit_length() - 1
        chosen.append(x)
        cand &= adj[x]
        for y in closure(chosen):
            cand &= ~(1 << y)
    best = len(chosen)
    limit = form.dim // 2
    if best == limit:
        return best

    # exhaustive: canonical chains with increasing point indices
    def extend(chosen, cand, span_pts):
        nonlocal best
        if len(chosen) > best:
            best = len(chosen)
        if best == limit:
            return
        c = cand
        while c:
            x = (c & -c).bit_length() - 1
            c &= c - 1
            new = closure(chosen + [x])
            if min(new - span_pts) < x:
                continue
            m = cand & adj[x] & ~((1 << (x + 1)) - 1)
            for y in new:
                m &= ~(1 << y)
            extend(chosen + [x], m, new)
            if best == limit:
                return

    extend([], (1 << n) - 1, set())
    return best
