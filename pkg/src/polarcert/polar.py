"""Finite classical polar spaces: points, collinearity, generators, quotients
and the embedded subgeometries used by the certificates."""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .field import Field
from .geometry import (
    FamilyInfo,
    FormError,
    FormSpec,
    Subspace,
    all_points,
    family_info,
    normalize,
    solve,
    standard_form,
    vec_axpy,
    vec_scale,
)


class PolarError(ValueError):
    pass


def bits(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _row_bitsets(B: np.ndarray) -> list[int]:
    packed = np.packbits(B, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def normalize_rows(F: Field, V: np.ndarray) -> np.ndarray:
    """Row-wise projective normalisation (first nonzero entry 1); rows nonzero."""
    lead = np.argmax(V != 0, axis=1)
    s = F.inv_table[V[np.arange(len(V)), lead]]
    return F.mul_table[s[:, None], V]


def table_n(q: int, rank: int, two_e: int) -> int:
    """Point count (q^(d-1+e)+1)(q^d-1)/(q-1) with d = rank, q = field order."""
    return (qpow(q, 2 * (rank - 1) + two_e) + 1) * (q**rank - 1) // (q - 1)


def qpow(q: int, two_x: int) -> int:
    """q ** (two_x / 2) for a field order q; half exponents need q square."""
    if two_x % 2 == 0:
        return q ** (two_x // 2)
    b = int(round(q**0.5))
    if b * b != q:
        raise PolarError(f"q^({two_x}/2) is not integral for q={q}")
    return b**two_x


@dataclass(frozen=True)
class PointSet:
    space: "PolarSpace" = field(repr=False, compare=False)
    mask: int

    @classmethod
    def of(cls, space, indices) -> "PointSet":
        idx = list(indices)
        if any(not 0 <= i < space.n for i in idx):
            raise PolarError("point index out of range")
        return cls(space, bits(idx))

    def indices(self) -> list[int]:
        return members(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __iter__(self):
        return iter(self.indices())


class PolarSpace:
    """The singular points of a nondegenerate form together with collinearity.

    Points are stored in lexicographic order of their normalised coordinates.
    """

    def __init__(self, form: FormSpec, info: FamilyInfo | None = None):
        if not form.is_nondegenerate():
            raise PolarError("form is degenerate")
        self.form = form
        self.field: Field = form.field
        self.d = form.dim
        if info is None:
            info = _info_from_form(form)
        self.info = info
        self.rank = info.rank
        self.two_e = info.two_e
        self.q = info.field_order
        self.ovoid_number = info.ovoid_number
        pts = all_points(self.field, self.d)
        P = np.array(pts, dtype=np.int64)
        sing = form.values_on(P) == 0
        self.coords = P[sing]
        self.points = [tuple(int(x) for x in r) for r in self.coords]
        self.n = len(self.points)
        if self.n == 0:
            raise PolarError("form has no singular points")
        self.index = {p: i for i, p in enumerate(self.points)}
        # dense code -> index table for vectorised lookups
        self._code_table = np.full(self.field.Q**self.d, -1, dtype=np.int64)
        weights = self.field.Q ** np.arange(self.d - 1, -1, -1, dtype=np.int64)
        self._code_weights = weights
        self._code_table[self.coords @ weights] = np.arange(self.n)
        ortho = form.bilinear_matrix(self.coords) == 0
        np.fill_diagonal(ortho, False)
        self.adj_matrix = ortho
        self.adj = _row_bitsets(ortho)
        self._generators = None

    @cached_property
    def adj_int(self) -> np.ndarray:
        return self.adj_matrix.astype(np.int64)

    # -- basic queries ----------------------------------------------------------
    @property
    def name(self) -> str:
        return self.info.name

    @property
    def family(self) -> str:
        return self.info.family

    @property
    def points_per_generator(self) -> int:
        return (self.q**self.rank - 1) // (self.q - 1)

    def index_of(self, v) -> int:
        try:
            return self.index[normalize(self.field, v)]
        except KeyError:
            raise PolarError(f"{v} is not a point of {self.name}") from None

    def indices_of_array(self, V: np.ndarray) -> np.ndarray:
        """Indices of already-normalised coordinate rows (-1 if not singular)."""
        return self._code_table[V @ self._code_weights]

    def collinear(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def perp_mask(self, i: int) -> int:
        """Points of the space in the tangent hyperplane at point i (including i)."""
        return self.adj[i] | (1 << i)

    def perp_of_vector(self, v) -> int:
        """Mask of points orthogonal to an arbitrary vector v."""
        w = np.array([v], dtype=np.int64)
        vals = self.form.bilinear_matrix(self.coords, w)[:, 0]
        return bits(np.flatnonzero(vals == 0).tolist())

    def mask_of_subspace(self, S: Subspace) -> int:
        """Singular points lying in the subspace S."""
        if S.dim == 0:
            return 0
        F = self.field
        idx = []
        for p in S.points():
            i = self.index.get(p)
            if i is not None:
                idx.append(i)
        return bits(idx)

    def span(self, indices) -> Subspace:
        return Subspace.span(self.field, [self.points[i] for i in indices])

    def label(self, i: int) -> str:
        F = self.field
        return "(" + ",".join(F.label(x) for x in self.points[i]) + ")"

    def parse_point(self, text: str) -> int:
        F = self.field
        body = text.strip().strip("()")
        return self.index_of(tuple(F.parse(t) for t in body.split(",")))

    def table_point_count(self) -> int:
        return table_n(self.q, self.rank, self.two_e)

    # -- generators ---------------------------------------------------------------
    def _build_lines(self) -> list[dict]:
        """For every collinear pair i < j, the bitmask of the points on line ij."""
        F = self.field
        A, M = F.add_table, F.mul_table
        lines = [dict() for _ in range(self.n)]
        for i in range(self.n):
            nbrs = np.array([j for j in members(self.adj[i]) if j > i], dtype=np.int64)
            if not len(nbrs):
                continue
            masks = [(1 << i) | (1 << int(j)) for j in nbrs]
            Vj = self.coords[nbrs]
            vi = self.coords[i]
            for c in range(1, F.Q):
                W = A[vi[None, :], M[c, Vj]]
                idx = self.indices_of_array(normalize_rows(F, W))
                for k, t in enumerate(idx.tolist()):
                    masks[k] |= 1 << t
            for j, m in zip(nbrs.tolist(), masks):
                lines[i][j] = m
        return lines

    @cached_property
    def lines(self) -> list[dict]:
        return self._build_lines()

    def line_mask(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.lines[i][j]

    @property
    def generators(self) -> list[int]:
        """Generators as point masks, in canonical lexicographic order."""
        if self._generators is None:
            path = self._cache_path()
            if path and os.path.exists(path):
                with open(path) as fh:
                    self._generators = [int(g, 16) for g in json.load(fh)["generators"]]
            else:
                self._generators = self._enumerate_generators()
                if path:
                    os.makedirs(os.path.dirname(path), exist_ok=True)
                    tmp = path + ".tmp"
                    with open(tmp, "w") as fh:
                        json.dump({"space": self.name, "generators": [format(g, "x") for g in self._generators]}, fh)
                    os.replace(tmp, path)
        return self._generators

    def _cache_path(self) -> str | None:
        """Generator lists are cached on disk when POLARCERT_CACHE names a directory."""
        root = os.environ.get("POLARCERT_CACHE")
        if not root:
            return None
        h = hashlib.sha256(repr((self.points, self.adj)).encode()).hexdigest()[:16]
        safe = "".join(c if c.isalnum() else "_" for c in self.name)
        return os.path.join(root, f"generators_{safe}_{h}.json")

    def _enumerate_generators(self) -> list[int]:
        # Canonical chains: each generator T is reached only through
        # x_k = min(T \ span(x_0..x_{k-1})), so every new span point exceeds x_k.
        r = self.rank
        out = []
        lines = self.lines
        adj = self.adj

        def extend(span_pts, span_mask, cand, depth):
            if depth == r:
                out.append(span_mask)
                return
            c = cand
            while c:
                low = c & -c
                x = low.bit_length() - 1
                c ^= low
                new = low
                for s in span_pts:
                    new |= lines[s][x] if s < x else lines[x][s]
                new &= ~span_mask
                if new & (low - 1):
                    continue
                rest = cand & adj[x] & ~new & ~(low - 1)
                extend(span_pts + members(new), span_mask | new, rest, depth + 1)

        extend([], 0, (1 << self.n) - 1, 0)
        expected = self.points_per_generator
        for g in out:
            if g.bit_count() != expected:
                raise PolarError("generator with wrong point count")
        return sorted(out, key=members)

    def generator_subspace(self, mask: int) -> Subspace:
        return self.span(members(mask))

    def generators_through(self, mask: int) -> list[int]:
        return [g for g in self.generators if g & mask == mask]

    # -- quotients ------------------------------------------------------------------
    def quotient(self, x: int) -> tuple["PolarSpace", dict[int, int]]:
        """The quotient X^perp/X realised on X^perp ∩ Y^perp for a point Y not
        orthogonal to X, with the projection of the points of X^perp \\ {X}."""
        if self.rank < 2:
            raise PolarError("quotient needs rank >= 2")
        F = self.field
        form = self.form
        X = self.points[x]
        y = next(j for j in range(self.n) if j != x and not (self.perp_mask(x) >> j & 1))
        Y = self.points[y]
        comp = form.perp(Subspace.span(F, [X, Y]))
        basis = [tuple(b) for b in comp.basis]
        k = len(basis)
        if form.kind == "quadratic":
            M = [[0] * k for _ in range(k)]
            for i in range(k):
                M[i][i] = form.evaluate(basis[i])
                for j in range(i + 1, k):
                    M[i][j] = form.bilinear(basis[i], basis[j])
        else:
            M = [[form.bilinear(basis[i], basis[j]) for j in range(k)] for i in range(k)]
        qform = FormSpec(form.family, k, F, tuple(tuple(r) for r in M))
        qinfo = family_info(self.family, k, self.info.q)
        Q = PolarSpace(qform, qinfo)
        bXY = form.bilinear(X, Y)
        A = [list(r) for r in zip(*basis)]  # columns are the basis vectors
        proj = {}
        for z in members(self.adj[x]):
            Z = self.points[z]
            alpha = F.div(form.bilinear(Z, Y), bXY)
            w = vec_axpy(F, F.neg(alpha), X, Z)
            coeffs = solve(F, A, w)
            if coeffs is None:
                raise PolarError("projection left the complement")
            proj[z] = Q.index_of(coeffs)
        return Q, proj

    def is_ovoid(self, mask: int) -> bool:
        return all((g & mask).bit_count() == 1 for g in self.generators)

    def project_ovoid(self, ovoid: int, x: int) -> tuple["PolarSpace", int]:
        """Image of an ovoid in the quotient at a point x outside it."""
        if self.rank < 3:
            raise PolarError("projecting an ovoid needs rank >= 3")
        if ovoid >> x & 1:
            raise PolarError("the projection point lies on the ovoid")
        if not self.is_ovoid(ovoid):
            raise PolarError("input is not an ovoid")
        Q, proj = self.quotient(x)
        image = bits(proj[z] for z in members(ovoid & self.adj[x]))
        if not Q.is_ovoid(image):
            raise PolarError("projection is not an ovoid of the quotient")
        return Q, image

    # -- misc ---------------------------------------------------------------------
    def degree(self) -> int:
        return self.adj[0].bit_count()

    def __repr__(self):
        return f"PolarSpace({self.name}, n={self.n})"


def _info_from_form(form: FormSpec) -> FamilyInfo:
    F = form.field
    q = F.sqrt_order if form.kind == "hermitian" else F.Q
    return family_info(form.family, form.dim, q)


def build(family: str, d: int, q: int) -> PolarSpace:
    """Polar space of the standard form for a classical family."""
    form = standard_form(family, d, q)
    return PolarSpace(form, family_info(family, d, q))


_CACHE: dict = {}


def cached(family: str, d: int, q: int) -> PolarSpace:
    key = (family, d, q)
    if key not in _CACHE:
        _CACHE[key] = build(family, d, q)
    return _CACHE[key]


# ---------------------------------------------------------------------------
# subgeometries


def _trace_zero_unit(F: Field) -> int:
    """A nonzero e with e^q = -e in GF(q^2) (e = 1 in characteristic 2)."""
    for e in range(1, F.Q):
        if F.conj(e) == F.neg(e):
            return e
    raise PolarError("no trace-zero unit")


def hyperbolic_basis(space: PolarSpace, start=()) -> list[tuple]:
    """Vectors e1, f1, e2, f2, ... spanning V with B(e_i, f_i) = eps and all
    other pairings zero (eps a trace-zero unit for Hermitian forms, 1 else).

    ``start`` optionally fixes the first e-vectors (pairwise orthogonal singular).
    """
    F = space.field
    form = space.form
    if form.kind == "quadratic" and space.d % 2:
        raise PolarError("no full hyperbolic basis in odd dimension")
    eps = _trace_zero_unit(F) if form.kind == "hermitian" else 1
    basis = []
    avail = (1 << space.n) - 1
    start = list(start)
    for _ in range(space.rank):
        if start:
            e = tuple(start.pop(0))
        else:
            if not avail:
                break
            e = space.points[(avail & -avail).bit_length() - 1]
        cands = avail & ~space.perp_of_vector(e)
        if start:
            # keep later prescribed vectors orthogonal to this f
            for s in start:
                cands &= space.perp_of_vector(s)
        if not cands:
            raise PolarError("cannot complete hyperbolic pair")
        f = space.points[(cands & -cands).bit_length() - 1]
        t = form.bilinear(e, f)
        c = F.div(eps, t)
        if form.kind == "hermitian":
            c = F.conj(c)
        f = vec_scale(F, c, f)
        basis += [e, f]
        avail &= space.perp_of_vector(e) & space.perp_of_vector(f)
    return basis


def baer_symplectic(space: PolarSpace, basis=None) -> tuple[PointSet, list[tuple]]:
    """W(2r-1, q) inside H(2r-1, q^2): GF(q)-span of a hyperbolic basis."""
    if space.family != "hermitian" or space.d % 2:
        raise PolarError("Baer symplectic subgeometry needs H(2r-1, q^2)")
    F = space.field
    if basis is None:
        basis = hyperbolic_basis(space)
    sub = F.subfield(F.sqrt_order)
    idx = set()
    for coeffs in itertools.product(sub, repeat=len(basis)):
        if any(coeffs):
            v = (0,) * space.d
            for c, b in zip(coeffs, basis):
                if c:
                    v = vec_axpy(F, c, b, v)
            idx.add(space.index_of(v))
    return PointSet.of(space, idx), basis


def orthogonal_basis(space: PolarSpace, count: int) -> list[tuple]:
    """``count`` pairwise orthogonal non-isotropic vectors (Hermitian forms)."""
    F = space.field
    form = space.form
    out = []
    for v in all_points(F, space.d):
        if len(out) == count:
            break
        if form.evaluate(v) and all(form.bilinear(v, u) == 0 for u in out):
            out.append(v)
    if len(out) < count:
        raise PolarError("not enough orthogonal non-isotropic vectors")
    return out


def sub_hermitian(space: PolarSpace, s: int) -> tuple[PointSet, PointSet, Subspace]:
    """A nondegenerate section H_s = H(s, q^2) and its perp section."""
    if space.family != "hermitian":
        raise PolarError("sub-Hermitian sections need a Hermitian space")
    if not 0 < s < space.d - 1:
        raise PolarError(f"s={s} out of range for {space.name}")
    vecs = orthogonal_basis(space, s + 1)
    Pi = Subspace.span(space.field, vecs)
    Hs = space.mask_of_subspace(Pi)
    Hp = space.mask_of_subspace(space.form.perp(Pi))
    return PointSet(space, Hs), PointSet(space, Hp), Pi


def elliptic_in_solid(space: PolarSpace, solid: Subspace) -> tuple[list[tuple], FormSpec, list]:
    """An elliptic quadric Q^-(3,q) drawn in the projective solid ``solid``.

    Returns (points as ambient vectors, the elliptic form on solid coordinates,
    the solid basis used as coordinate frame)."""
    if solid.dim != 4:
        raise PolarError("elliptic quadric needs a solid")
    F = space.field
    eform = standard_form("elliptic", 4, F.Q)
    basis = [tuple(b) for b in solid.basis]
    pts = []
    for c in all_points(F, 4):
        if eform.evaluate(c) == 0:
            v = (0,) * space.d
            for x, b in zip(c, basis):
                if x:
                    v = vec_axpy(F, x, b, v)
            pts.append(normalize(F, v))
    return pts, eform, basis


def classify_plane(space: PolarSpace, plane: Subspace) -> dict:
    """Type of the section of a Hermitian space by a plane of the ambient space."""
    if plane.dim != 3:
        raise PolarError("not a plane")
    form = space.form
    B = [tuple(b) for b in plane.basis]
    G = [[form.bilinear(u, v) for v in B] for u in B]
    from .geometry import rank as _rank

    r = _rank(space.field, G)
    mask = space.mask_of_subspace(plane)
    label = {3: "H(2,q^2)", 2: "pH(1,q^2)", 1: "line-cone", 0: "totally singular"}[r]
    vertex = None
    if r == 2:
        rad = [i for i in members(mask) if (space.perp_mask(i) & mask) == mask]
        vertex = rad[0] if len(rad) == 1 else None
    return {"type": label, "form_rank": r, "points": mask, "vertex": vertex}
