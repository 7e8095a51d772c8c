"""Form-preserving semilinear collineations, frame-mapping stabilisers and orbits.

A collineation is stored as (M, k) acting on column vectors by v -> M v^(p^k).
Groups here are small (hundreds of elements), so they are kept as explicit
element lists together with their permutations of the polar-space points.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .field import Field
from .geometry import (
    FormSpec,
    all_points,
    mat_inverse,
    mat_mul,
    normalize,
    rank,
    solve,
    transpose,
    vec_axpy,
    vec_scale,
)
from .polar import PolarError, PolarSpace, bits, members


class GroupError(ValueError):
    pass


def _frob_table(F: Field, k: int) -> np.ndarray:
    return np.array([F.frobenius(x, k) if k else x for x in range(F.Q)], dtype=np.int64)


def _frob_matrix(F: Field, M, k: int):
    if k == 0:
        return [list(r) for r in M]
    return [[F.frobenius(x, k) for x in r] for r in M]


def apply_rows(F: Field, M, V: np.ndarray) -> np.ndarray:
    """Rows of V mapped by the matrix M (row v -> (M v^T)^T), no normalisation."""
    A, Mt = F.add_table, F.mul_table
    d = len(M)
    W = np.zeros((V.shape[0], d), dtype=np.int64)
    for r in range(d):
        col = np.zeros(V.shape[0], dtype=np.int64)
        for c in range(d):
            m = M[r][c]
            if m:
                col = A[col, Mt[m, V[:, c]]]
        W[:, r] = col
    return W


def normalize_array(F: Field, V: np.ndarray) -> np.ndarray:
    lead = np.argmax(V != 0, axis=1)
    s = F.inv_table[V[np.arange(len(V)), lead]]
    return F.mul_table[s[:, None], V]


@dataclass(frozen=True, eq=False)
class Collineation:
    field: Field
    matrix: tuple
    aut: int = 0

    def __post_init__(self):
        F = self.field
        M = [list(r) for r in self.matrix]
        flat = [x for r in M for x in r]
        lead = next((x for x in flat if x), None)
        if lead is None:
            raise GroupError("zero matrix")
        inv = F.inv(lead)
        M = tuple(tuple(F.mul(inv, x) for x in r) for r in M)
        if rank(F, M) != len(M):
            raise GroupError("singular matrix")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "aut", self.aut % F.h)

    @classmethod
    def identity(cls, F: Field, d: int) -> "Collineation":
        return cls(F, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def key(self) -> tuple:
        return (self.aut, self.matrix)

    def __eq__(self, other):
        return isinstance(other, Collineation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def apply(self, v) -> tuple:
        F = self.field
        w = [F.frobenius(x, self.aut) if self.aut else x for x in v]
        out = []
        for row in self.matrix:
            s = 0
            for a, b in zip(row, w):
                if a and b:
                    s = F.add(s, F.mul(a, b))
            out.append(s)
        return normalize(F, out)

    def apply_array(self, V: np.ndarray) -> np.ndarray:
        F = self.field
        if self.aut:
            V = _frob_table(F, self.aut)[V]
        return normalize_array(F, apply_rows(F, self.matrix, V))

    def perm(self, space: PolarSpace) -> np.ndarray:
        img = space.indices_of_array(self.apply_array(space.coords))
        if (img < 0).any():
            raise GroupError("collineation does not preserve the point set")
        return img

    def __mul__(self, other: "Collineation") -> "Collineation":
        """self after other."""
        F = self.field
        B = _frob_matrix(F, other.matrix, self.aut)
        return Collineation(F, tuple(map(tuple, mat_mul(F, self.matrix, B))), self.aut + other.aut)

    def inverse(self) -> "Collineation":
        F = self.field
        k = (-self.aut) % F.h
        Minv = mat_inverse(F, self.matrix)
        return Collineation(F, tuple(map(tuple, _frob_matrix(F, Minv, k))), k)

    def similitude_factor(self, form: FormSpec) -> int | None:
        """lambda with f(Mv^s) = lambda f(v)^s for all v, or None."""
        F = self.field
        d = self.dim
        M = self.matrix
        cols = [tuple(M[r][c] for r in range(d)) for c in range(d)]
        lam = None

        def check(val, ref):
            nonlocal lam
            ref = F.frobenius(ref, self.aut) if self.aut else ref
            if ref == 0:
                return val == 0
            if val == 0:
                return False
            r = F.div(val, ref)
            if lam is None:
                lam = r
            return lam == r

        for i in range(d):
            if form.kind == "quadratic" and not check(form.evaluate(cols[i]), form.matrix[i][i]):
                return None
            for j in range(d):
                if form.kind == "quadratic" and j <= i:
                    continue
                if not check(form.bilinear(cols[i], cols[j]), form.gram[i][j]):
                    return None
        return lam

    def preserves(self, form: FormSpec) -> bool:
        return self.similitude_factor(form) is not None

    def to_dict(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "aut": self.aut}


# ---------------------------------------------------------------------------
# frame mapping


@dataclass
class StabilizerStats:
    candidates: int = 0
    solved: int = 0
    accepted: int = 0


def _coords(F: Field, B, v):
    return solve(F, B, v)


def _frame(F: Field, d: int, vecs: Sequence[tuple], order: Sequence[int]):
    """(basis, extras): d independent vectors scanned in the given order, then
    further vectors whose coordinate supports connect all basis positions.
    With a projective frame available, extras is a single full-support vector."""
    basis = []
    for i in order:
        if rank(F, [vecs[j] for j in basis] + [vecs[i]]) == len(basis) + 1:
            basis.append(i)
            if len(basis) == d:
                break
    if len(basis) < d:
        return None
    B = [list(r) for r in zip(*[vecs[j] for j in basis])]
    supports = {}
    for i in order:
        if i not in basis:
            c = solve(F, B, vecs[i])
            supports[i] = frozenset(t for t in range(d) if c[t])
    for i, sup in supports.items():
        if len(sup) == d:
            return basis, [i]
    comp = list(range(d))

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    extras = []
    for i in order:
        if i not in supports:
            continue
        roots = {find(t) for t in supports[i]}
        if len(roots) > 1:
            extras.append(i)
            r0 = min(roots)
            for r in roots:
                comp[r] = r0
        if len({find(t) for t in range(d)}) == 1:
            break
    return basis, extras


def frame_stabilizer(
    F: Field,
    d: int,
    domain: Sequence[tuple],
    invariants: Sequence[Iterable[int]] = (),
    form: FormSpec | None = None,
    linear_only: bool = True,
    extra: Callable[[Collineation], bool] | None = None,
    cap: int = 5_000_000,
    stats: StabilizerStats | None = None,
) -> list[Collineation]:
    """All collineations mapping the point set ``domain`` onto itself and each
    index set in ``invariants`` onto itself; with ``form`` only similitudes of
    the form (up to the automorphism twist) are kept.

    Frame points are taken from the rarest colour classes (a point's colour is
    the tuple of invariant sets containing it).  Their images range over points
    of the same colour, pruned by the zero pattern of the form when given.
    """
    vecs = [normalize(F, v) for v in domain]
    pos = {v: i for i, v in enumerate(vecs)}
    if len(pos) != len(vecs):
        raise GroupError("repeated points in domain")
    inv_sets = [set(s) for s in invariants]
    color = [tuple(i in s for s in inv_sets) for i in range(len(vecs))]
    by_color: dict = {}
    for i, c in enumerate(color):
        by_color.setdefault(c, []).append(i)
    order = sorted(range(len(vecs)), key=lambda i: (len(by_color[color[i]]), i))
    fr = _frame(F, d, vecs, order)
    if fr is None:
        raise GroupError("domain does not span the ambient space")
    basis_idx, extras_idx = fr
    frame = basis_idx + extras_idx
    stats = stats if stats is not None else StabilizerStats()

    gram = None
    if form is not None:
        arr = np.array(vecs, dtype=np.int64)
        gram = form.bilinear_matrix(arr) == 0
        if form.kind == "quadratic":
            sing = form.values_on(arr) == 0
            np.fill_diagonal(gram, sing)

    dom_arr = np.array(vecs, dtype=np.int64)
    weights = F.Q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    code_to_pos = {int(c): i for i, c in enumerate(dom_arr @ weights)}
    color_code = {c: k for k, c in enumerate(by_color)}
    color_arr = np.array([color_code[c] for c in color], dtype=np.int64)
    auts = [0] if linear_only else list(range(F.h))

    def targets(step, chosen):
        x = frame[step]
        for y in by_color[color[x]]:
            if y in chosen:
                continue
            if gram is not None:
                if gram[y, y] != gram[x, x]:
                    continue
                if any(gram[x, frame[t]] != gram[y, chosen[t]] for t in range(step)):
                    continue
            yield y

    out: list[Collineation] = []
    found = set()

    def scalings(Bs, Bt, images, k):
        """Diagonal scalings lambda consistent with the extra frame points."""
        parent = list(range(d))
        rel = [1] * d  # lambda_t = rel[t] * lambda_parent[t]

        def find(t):
            r, acc = t, 1
            while parent[r] != r:
                acc = F.mul(acc, rel[r])
                r = parent[r]
            return r, acc

        for e, y in zip(extras_idx, images[d:]):
            u = [F.frobenius(x, k) if k else x for x in vecs[e]]
            c = solve(F, Bs, u)
            c2 = solve(F, Bt, vecs[y])
            if c2 is None or [bool(x) for x in c] != [bool(x) for x in c2]:
                return []
            sup = [t for t in range(d) if c[t]]
            ratio = {t: F.div(c2[t], c[t]) for t in sup}
            t0 = sup[0]
            for t in sup[1:]:
                # lambda_t / lambda_t0 = ratio[t] / ratio[t0]
                want = F.div(ratio[t], ratio[t0])
                r0, a0 = find(t0)
                r1, a1 = find(t)
                if r0 == r1:
                    if F.div(a1, a0) != want:
                        return []
                else:
                    # lambda_r1 = lambda_t / a1 = want * a0 * lambda_r0 / a1
                    parent[r1] = r0
                    rel[r1] = F.div(F.mul(want, a0), a1)
        roots = sorted({find(t)[0] for t in range(d)})
        out = []
        for free in itertools.product(range(1, F.Q), repeat=len(roots) - 1):
            val = dict(zip(roots, (1, *free)))
            lam = []
            for t in range(d):
                r, acc = find(t)
                lam.append(F.mul(acc, val[r]))
            out.append(lam)
        return out

    def finish(images, k):
        stats.solved += 1
        src = [list(_frob_matrix(F, [vecs[i]], k)[0]) for i in basis_idx]
        Bs = [list(r) for r in zip(*src)]
        Bt = [list(r) for r in zip(*[vecs[i] for i in images[:d]])]
        Bs_inv = mat_inverse(F, Bs)
        for lam in scalings(Bs, Bt, images, k):
            BL = [[F.mul(Bt[r][c], lam[c]) for c in range(d)] for r in range(d)]
            M = mat_mul(F, BL, Bs_inv)
            g = Collineation(F, tuple(map(tuple, M)), k)
            img = g.apply_array(dom_arr)
            codes = (img @ weights).tolist()
            perm = [code_to_pos.get(c) for c in codes]
            if any(p is None for p in perm):
                continue
            if any(color_arr[p] != color_arr[i] for i, p in enumerate(perm)):
                continue
            if form is not None and not g.preserves(form):
                continue
            if extra is not None and not extra(g):
                continue
            if g not in found:
                found.add(g)
                out.append(g)
                stats.accepted += 1

    def dfs(step, chosen):
        if step == len(frame):
            for k in auts:
                finish(chosen, k)
            return
        for y in targets(step, chosen):
            stats.candidates += 1
            if stats.candidates > cap:
                raise GroupError(f"candidate explosion above cap {cap}")
            if step < d:
                # images of basis points must stay independent
                if rank(F, [vecs[c] for c in chosen] + [vecs[y]]) < step + 1:
                    continue
            dfs(step + 1, chosen + [y])

    dfs(0, [])
    return out


# ---------------------------------------------------------------------------
# groups acting on polar spaces


@dataclass
class GroupHandle:
    space: PolarSpace
    elements: list
    perms: np.ndarray = field(repr=False)

    @classmethod
    def from_elements(cls, space: PolarSpace, elements: Sequence[Collineation]) -> "GroupHandle":
        elems = list(elements)
        perms = np.array([g.perm(space) for g in elems], dtype=np.int64).reshape(len(elems), space.n)
        return cls(space, elems, perms)

    @property
    def order(self) -> int:
        return len(self.elements)

    def verify_closure(self) -> bool:
        """Product and inverse closed (checked on the point permutations and
        on the canonical matrices)."""
        keys = {g.key() for g in self.elements}
        if len(keys) != len(self.elements):
            return False
        pset = {p.tobytes() for p in self.perms}
        for p in self.perms:
            inv = np.empty_like(p)
            inv[p] = np.arange(len(p))
            if inv.tobytes() not in pset:
                return False
            for r in self.perms:
                if p[r].tobytes() not in pset:
                    return False
        for g in self.generators:
            if g.inverse().key() not in keys:
                return False
            for h in self.generators:
                if (g * h).key() not in keys:
                    return False
        return True

    def preserves_form(self) -> bool:
        return all(g.preserves(self.space.form) for g in self.elements)

    @cached_property
    def generators(self) -> list:
        """A small generating set, chosen greedily."""
        gens = []
        reached = {np.arange(self.space.n).tobytes()}
        for g, p in zip(self.elements, self.perms):
            if p.tobytes() in reached:
                continue
            gens.append(g)
            reached = _closure({np.arange(self.space.n).tobytes()}, [q for q in self._gen_perms(gens)])
            if len(reached) == self.order:
                break
        return gens

    def _gen_perms(self, gens):
        idx = {g.key(): i for i, g in enumerate(self.elements)}
        return [self.perms[idx[g.key()]] for g in gens]

    @cached_property
    def orbits(self) -> list[list[int]]:
        """Point orbits ordered by their least (lexicographically least) point."""
        n = self.space.n
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p in self.perms:
            for x, y in enumerate(p.tolist()):
                a, b = find(x), find(y)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict = {}
        for x in range(n):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values(), key=lambda o: o[0])

    def orbit_of(self, x: int) -> int:
        for k, o in enumerate(self.orbits):
            if x in o:
                return k
        raise GroupError("point not found")

    def orbit_index(self) -> list[int]:
        where = [0] * self.space.n
        for k, o in enumerate(self.orbits):
            for x in o:
                where[x] = k
        return where

    def align(self, reps: Sequence[int]) -> list[int]:
        """For externally listed representatives, the internal orbit index of each;
        raises unless this is a bijection."""
        where = self.orbit_index()
        out = [where[r] for r in reps]
        if sorted(out) != list(range(len(self.orbits))):
            raise GroupError(f"representatives do not hit every orbit once: {out}")
        return out

    def is_partition_invariant(self) -> bool:
        where = self.orbit_index()
        return all(where[y] == where[x] for p in self.perms for x, y in enumerate(p.tolist()))

    def stabilises(self, mask: int) -> bool:
        idx = np.array(members(mask), dtype=np.int64)
        return all(bits(p[idx].tolist()) == mask for p in self.perms)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "generators": [g.to_dict() for g in self.generators],
            "orbits": [
                {"index": k + 1, "size": len(o), "representative": self.space.label(o[0])}
                for k, o in enumerate(self.orbits)
            ],
        }

    def orbit_lines(self) -> list[str]:
        return [f"{k + 1}: {len(o)}: {self.space.label(o[0])}" for k, o in enumerate(self.orbits)]


def _closure(start: set, gens: Sequence[np.ndarray]) -> set:
    seen = set(start)
    frontier = [np.frombuffer(s, dtype=np.int64) for s in start]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                r = g[p]
                key = r.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(r)
        frontier = nxt
    return seen


def generate(space: PolarSpace, gens: Sequence[Collineation], cap: int = 100_000) -> GroupHandle:
    """Closure of a set of collineations."""
    ident = Collineation.identity(space.field, space.d)
    seen = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g * a
                if b.key() not in seen:
                    seen[b.key()] = b
                    nxt.append(b)
                    if len(seen) > cap:
                        raise GroupError(f"group larger than cap {cap}")
        frontier = nxt
    return GroupHandle.from_elements(space, list(seen.values()))


def setwise_stabilizer(
    space: PolarSpace,
    points: Sequence[int],
    linear_only: bool = True,
    form_preserving: bool = True,
    invariants: Sequence[int] = (),
    extra=None,
    cap: int = 5_000_000,
    stats: StabilizerStats | None = None,
) -> GroupHandle:
    """Stabiliser of a spanning point set (indices into the space); ``invariants``
    are further point masks to be stabilised setwise, each contained in ``points``."""
    dom = list(points)
    pos = {x: i for i, x in enumerate(dom)}
    inv_idx = []
    for m in invariants:
        sub = members(m)
        if any(x not in pos for x in sub):
            raise GroupError("invariant set not contained in the domain")
        inv_idx.append([pos[x] for x in sub])
    elems = frame_stabilizer(
        space.field,
        space.d,
        [space.points[x] for x in dom],
        inv_idx,
        form=space.form if form_preserving else None,
        linear_only=linear_only,
        extra=extra,
        cap=cap,
        stats=stats,
    )
    return GroupHandle.from_elements(space, elems)


# ---------------------------------------------------------------------------
# random isometries


def _trace_zero_unit(F: Field) -> int:
    for e in range(1, F.Q):
        if F.conj(e) == F.neg(e):
            return e
    raise GroupError("no trace-zero unit")


def random_hyperbolic_basis(space: PolarSpace, rng: random.Random, first=None) -> list[tuple]:
    """A random basis e1, f1, ..., with B(e_i, f_i) = eps and all other pairs
    orthogonal; needs a space with a full hyperbolic basis."""
    F = space.field
    form = space.form
    if space.rank * 2 != space.d:
        raise GroupError(f"{space.name} has no hyperbolic basis")
    eps = _trace_zero_unit(F) if form.kind == "hermitian" else 1
    avail = (1 << space.n) - 1
    basis = []
    for step in range(space.rank):
        pts = members(avail)
        if step == 0 and first is not None:
            e = space.points[first]
        else:
            e = space.points[rng.choice(pts)]
        e = vec_scale(F, rng.randrange(1, F.Q), e)
        cands = members(avail & ~space.perp_of_vector(e))
        f = space.points[rng.choice(cands)]
        t = form.bilinear(e, f)
        c = F.div(eps, t)
        if form.kind == "hermitian":
            c = F.conj(c)
        f = vec_scale(F, c, f)
        basis += [e, f]
        avail &= space.perp_of_vector(e) & space.perp_of_vector(f)
    return basis


def random_isometry(space: PolarSpace, rng: random.Random, fix: int | None = None) -> Collineation:
    """Maps a fixed reference hyperbolic basis to a random one; with ``fix``
    the image of the first reference vector is that point."""
    ref = _reference_basis(space, fix)
    tgt = random_hyperbolic_basis(space, rng, first=fix)
    F = space.field
    R = [list(r) for r in zip(*ref)]
    T = [list(r) for r in zip(*tgt)]
    M = mat_mul(F, T, mat_inverse(F, R))
    g = Collineation(F, tuple(map(tuple, M)))
    if not g.preserves(space.form):
        raise GroupError("constructed map is not an isometry")
    return g


_REF: dict = {}


def _reference_basis(space: PolarSpace, fix):
    key = (id(space), fix)
    if key not in _REF:
        _REF[key] = random_hyperbolic_basis(space, random.Random(0), first=fix)
    return _REF[key]


def orbits_of_generated(space: PolarSpace, perms: Sequence[np.ndarray], start: int) -> set[int]:
    """Orbit of a point under the group generated by the given permutations."""
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for p in perms:
            y = int(p[x])
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def point_stabiliser_transitivity(space: PolarSpace, x: int, samples: int = 20, seed: int = 1) -> set[int]:
    """Orbit of a neighbour of x under random isometries fixing x; equals x~
    when the stabiliser is transitive there."""
    rng = random.Random(seed)
    perms = []
    for _ in range(samples):
        g = random_isometry(space, rng, fix=x)
        p = g.perm(space)
        if p[x] != x:
            raise GroupError("isometry does not fix the point")
        perms.append(p)
    y = members(space.adj[x])[0]
    return orbits_of_generated(space, perms, y)


# ---------------------------------------------------------------------------
# brute-force oracle for tiny cases


def brute_force_stabilizer_order(F: Field, d: int, S: Sequence[tuple]) -> int:
    """Number of elements of PGL(d, F) stabilising S setwise, by enumerating
    all invertible matrices (only for tiny d and F)."""
    target = {normalize(F, v) for v in S}
    seen = set()
    for entries in itertools.product(range(F.Q), repeat=d * d):
        M = tuple(tuple(entries[r * d : (r + 1) * d]) for r in range(d))
        if rank(F, M) < d:
            continue
        g = Collineation(F, M)
        if g.key() in seen:
            continue
        if {g.apply(v) for v in target} == target:
            seen.add(g.key())
    return len(seen)
