"""Weighted intriguing sets: classification, Delsarte bounds and constructions.

A weighted ovoid lives in <j> + V_- and a weighted tight set in <j> + V_+,
where V_+ and V_- are the non-principal eigenspaces of the collinearity graph.
Everything here is exact: weights are Fractions and eigen-tests are integer
identities after clearing denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .polar import PolarError, PolarSpace, bits, members, qpow, sub_hermitian, baer_symplectic
from .srg import SrgParams, adjacency_times, params_for_space


class IntriguingError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, eq=False)
class WeightVector:
    space: PolarSpace
    weights: tuple

    def __post_init__(self):
        w = tuple(_frac(x) for x in self.weights)
        if len(w) != self.space.n:
            raise IntriguingError(f"expected {self.space.n} weights, got {len(w)}")
        object.__setattr__(self, "weights", w)

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, space) -> "WeightVector":
        return cls(space, (Fraction(0),) * space.n)

    @classmethod
    def ones(cls, space) -> "WeightVector":
        return cls(space, (Fraction(1),) * space.n)

    @classmethod
    def indicator(cls, space, mask: int, weight=1) -> "WeightVector":
        w = [Fraction(0)] * space.n
        for i in members(mask):
            w[i] = _frac(weight)
        return cls(space, w)

    @classmethod
    def combine(cls, space, terms: Iterable[tuple[object, int]]) -> "WeightVector":
        """sum of weight * chi_mask over (weight, mask) pairs."""
        w = [Fraction(0)] * space.n
        for c, mask in terms:
            c = _frac(c)
            for i in members(mask):
                w[i] += c
        return cls(space, w)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: "WeightVector") -> "WeightVector":
        return WeightVector(self.space, [a + b for a, b in zip(self.weights, other.weights)])

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        return WeightVector(self.space, [a - b for a, b in zip(self.weights, other.weights)])

    def __mul__(self, c) -> "WeightVector":
        c = _frac(c)
        return WeightVector(self.space, [c * a for a in self.weights])

    __rmul__ = __mul__

    def __neg__(self) -> "WeightVector":
        return self * -1

    def __eq__(self, other):
        return isinstance(other, WeightVector) and self.weights == other.weights

    def __getitem__(self, i):
        return self.weights[i]

    def dot(self, other: "WeightVector") -> Fraction:
        return sum((a * b for a, b in zip(self.weights, other.weights) if a and b), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def support(self) -> int:
        return bits(i for i, w in enumerate(self.weights) if w)

    def integer_form(self) -> tuple[list[int], int]:
        """(z, D) with self = z / D and z integral."""
        D = 1
        for w in self.weights:
            D = D * w.denominator // math.gcd(D, w.denominator)
        return [int(w * D) for w in self.weights], D

    def is_trivial(self) -> bool:
        return len(set(self.weights)) <= 1

    def centred_eigen(self, theta: int, k: int) -> bool:
        """Whether A v' = theta v' for v' = v - (sum v / n) j."""
        z, _ = self.integer_form()
        n = self.space.n
        S = sum(z)
        Az = adjacency_times(self.space, z)
        # n (A z)_x - S k == theta (n z_x - S)
        return all(n * a - S * k == theta * (n * x - S) for a, x in zip(Az, z))

    def quad_adjacency(self) -> Fraction:
        """chi A chi^T."""
        z, D = self.integer_form()
        Az = adjacency_times(self.space, z)
        return Fraction(sum(a * b for a, b in zip(z, Az)), D * D)

    # -- serialisation -------------------------------------------------------
    def to_lines(self, skip_zero: bool = True) -> list[str]:
        return [
            f"{i} {w.numerator}/{w.denominator}"
            for i, w in enumerate(self.weights)
            if w or not skip_zero
        ]

    @classmethod
    def from_lines(cls, space, lines: Iterable[str]) -> "WeightVector":
        w = [Fraction(0)] * space.n
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            idx, val = line.split()
            w[int(idx)] = Fraction(val)
        return cls(space, w)


@dataclass(frozen=True)
class Classification:
    kind: str  # weighted-ovoid | weighted-tight | trivial | neither
    value: Fraction | None = None

    @property
    def is_ovoid(self) -> bool:
        return self.kind == "weighted-ovoid"

    @property
    def is_tight(self) -> bool:
        return self.kind == "weighted-tight"

    def __str__(self):
        if self.value is None:
            return self.kind
        return f"{self.kind}({self.value})"


def ovoid_unit(p: SrgParams) -> Fraction:
    """j chi^T of a weighted 1-ovoid: n negev / (negev - k)."""
    return Fraction(p.n * p.negev, p.negev - p.k)


def tight_unit(p: SrgParams) -> Fraction:
    """j psi^T of a weighted 1-tight set: 1 - k / negev."""
    return 1 - Fraction(p.k, p.negev)


def classify(chi: WeightVector) -> Classification:
    p = params_for_space(chi.space)
    if chi.is_trivial():
        return Classification("trivial")
    if chi.centred_eigen(p.negev, p.k):
        return Classification("weighted-ovoid", chi.total() / ovoid_unit(p))
    if chi.centred_eigen(p.posev, p.k):
        return Classification("weighted-tight", chi.total() / tight_unit(p))
    return Classification("neither")


@dataclass(frozen=True)
class DelsarteBounds:
    lower: Fraction
    middle: Fraction
    upper: Fraction

    @property
    def left_equal(self) -> bool:
        return self.lower == self.middle

    @property
    def right_equal(self) -> bool:
        return self.middle == self.upper

    @property
    def holds(self) -> bool:
        return self.lower <= self.middle <= self.upper


def delsarte_bounds(chi: WeightVector) -> DelsarteBounds:
    p = params_for_space(chi.space)
    n, k = p.n, p.k
    s = chi.total()
    sq = chi.dot(chi)
    mid = n * chi.quad_adjacency()
    lower = s * s * k + p.negev * (n * sq - s * s)
    upper = s * s * k + p.posev * (n * sq - s * s)
    return DelsarteBounds(lower, mid, upper)


def intersect(chi: WeightVector, psi: WeightVector) -> Fraction:
    """chi psi^T for a weighted m-ovoid chi and weighted i-tight set psi; checks = m i."""
    c1, c2 = classify(chi), classify(psi)
    if not c1.is_ovoid:
        raise IntriguingError(f"first argument is {c1}, not a weighted ovoid")
    if not c2.is_tight:
        raise IntriguingError(f"second argument is {c2}, not a weighted tight set")
    val = chi.dot(psi)
    if val != c1.value * c2.value:
        raise IntriguingError(f"chi psi^T = {val} differs from m i = {c1.value * c2.value}")
    return val


# ---------------------------------------------------------------------------
# constructions


def std_ovoid_weight(space: PolarSpace) -> int:
    return -(space.q ** (space.rank - 1) - 1)


def std_ovoid_m(space: PolarSpace) -> Fraction:
    return Fraction(space.q ** (space.rank - 1) - 1, space.q - 1)


def std_tight_i(space: PolarSpace) -> int:
    return qpow(space.q, 2 * (space.rank - 2) + space.two_e) + 1


def std_ovoid(space: PolarSpace, x: int) -> WeightVector:
    """-(q^(d-1)-1) chi_P + chi_{P~}."""
    return WeightVector.combine(space, [(std_ovoid_weight(space), 1 << x), (1, space.adj[x])])


def std_tightset(space: PolarSpace, x: int) -> WeightVector:
    """(q^(d-2+e)+1) chi_P + chi_{P~}."""
    return WeightVector.combine(space, [(std_tight_i(space), 1 << x), (1, space.adj[x])])


def example_alpha(p: SrgParams, which: str) -> Fraction:
    """The generic SRG weight alpha for the point-neighbourhood intriguing sets."""
    t = p.negev if which == "ovoid" else p.posev
    return Fraction(p.k * (p.n - p.k + t), p.n * t + p.k - t)


def is_totally_singular(space: PolarSpace, mask: int) -> bool:
    pts = members(mask)
    return all((space.perp_mask(x) & mask) == mask for x in pts)


def subspace_weight(space: PolarSpace, s: int) -> int:
    return qpow(space.q, 2 * (space.rank - 2 - s) + space.two_e) + 1


def subspace_tight(space: PolarSpace, S: int, s: int | None = None) -> WeightVector:
    """(q^(d+e-2-s)+1) chi_S + chi_{S~} for a totally singular subspace S of
    projective dimension s (S given by its point mask)."""
    size = S.bit_count()
    if s is None:
        s = round(math.log(size * (space.q - 1) + 1, space.q)) - 1
    if (space.q ** (s + 1) - 1) // (space.q - 1) != size:
        raise IntriguingError(f"{size} points do not form a subspace of dimension {s}")
    if not 0 <= s < space.rank - 1:
        raise IntriguingError(f"s={s} outside [0, {space.rank - 1})")
    if not is_totally_singular(space, S):
        raise IntriguingError("subspace is not totally singular")
    perp = (1 << space.n) - 1
    for x in members(S):
        perp &= space.perp_mask(x)
    return WeightVector.combine(space, [(subspace_weight(space, s), S), (1, perp & ~S)])


def generator_vector(space: PolarSpace, mask: int) -> WeightVector:
    return WeightVector.indicator(space, mask)


def baer_symplectic_tight(space: PolarSpace, basis=None) -> tuple[WeightVector, int]:
    """Characteristic vector of an embedded W(2r-1, q) and the expected i = q+1."""
    W, _ = baer_symplectic(space, basis)
    return WeightVector.indicator(space, W.mask), space.field.sqrt_order + 1


# ---------------------------------------------------------------------------
# the sub-Hermitian pair tight set


def hermitian_size(m: int, q: int) -> int:
    """|H(m, q^2)|."""
    if m < 0:
        return 0
    sgn = -1 if m % 2 else 1
    return (q ** (m + 1) + sgn) * (q**m - sgn) // (q * q - 1)


def cone_set(space: PolarSpace, A: int, B: int) -> int:
    """Points on lines joining a point of A to a point of B (all such pairs
    collinear), endpoints excluded."""
    out = 0
    for x in members(A):
        for y in members(B):
            if not space.collinear(x, y):
                raise IntriguingError("cone construction needs every pair collinear")
            out |= space.line_mask(x, y)
    return out & ~A & ~B


@dataclass
class HermitianPairReport:
    d: int
    s: int
    q: int
    vector: WeightVector
    classification: Classification
    expected_i: int
    class_sizes: dict
    brute_counts: dict
    reference_counts: dict
    corrected_counts: dict
    identity_value: dict
    identity_expected: Fraction

    @property
    def counts_match_reference(self) -> dict:
        return {
            cls: {k: self.brute_counts[cls][k] == self.reference_counts[cls][k] for k in self.brute_counts[cls]}
            for cls in self.brute_counts
        }

    @property
    def counts_match_corrected(self) -> bool:
        return self.brute_counts == self.corrected_counts

    @property
    def identity_holds(self) -> bool:
        return all(v == self.identity_expected for v in self.identity_value.values())

    @property
    def ok(self) -> bool:
        return (
            self.classification.is_tight
            and self.classification.value == self.expected_i
            and self.identity_holds
        )


def _pair_formulas(d: int, s: int, q: int) -> tuple[dict, dict]:
    H = lambda m: hermitian_size(m, q)  # noqa: E731
    Q2 = q * q
    t = 2 * d - 2 - s
    a1, b1 = Q2 * H(s - 2), H(t)
    a2, b2 = H(s), Q2 * H(t - 2)
    ac, bc = 1 + Q2 * H(s - 2), 1 + Q2 * H(t - 2)
    ao, bo = H(s - 1), H(t - 1)
    printed = {
        "H_s": {"H_s": a1, "H_s_perp": b1, "C": (Q2 - 1) * b1 * (1 + a1)},
        "H_s_perp": {"H_s": a2, "H_s_perp": b2, "C": (Q2 - 1) * a2 * (1 + b2)},
        "C": {"H_s": ac, "H_s_perp": bc, "C": (ac * bc - 1) + (H(s) - ac) * (H(t) - bc)},
        "other": {"H_s": ao, "H_s_perp": bo, "C": ao * bo},
    }
    corrected = {
        "H_s": dict(printed["H_s"]),
        "H_s_perp": dict(printed["H_s_perp"]),
        "C": {
            "H_s": ac,
            "H_s_perp": bc,
            "C": (Q2 - 1) * ac * bc - 1 + (H(s) - ac) * (H(t) - bc),
        },
        "other": {"H_s": ao, "H_s_perp": bo, "C": (Q2 - 1) * ao * bo + (H(s) - ao) * (H(t) - bo)},
    }
    return printed, corrected


def hermitian_pair_tight(space: PolarSpace, s: int) -> HermitianPairReport:
    """(1-q^(2d-2-s)) chi_{H_s} + (1-q^s) chi_{H_s^perp} + chi_{C(H_s)} on H(2d-1, q^2).

    C(H_s) is taken to be the points of the totally singular lines joining
    H_s to H_s^perp, endpoints excluded.
    """
    if space.family != "hermitian" or space.d % 2:
        raise IntriguingError("needs a Hermitian space H(2d-1, q^2)")
    d = space.rank
    q = space.field.sqrt_order
    if not (d > 2 and 1 < s < 2 * d - 2 and s % 2 == 0):
        raise IntriguingError(f"need d > 2, 1 < s < 2d-2, s even (d={d}, s={s})")
    Hs, Hp, _ = sub_hermitian(space, s)
    C = cone_set(space, Hs.mask, Hp.mask)
    if C.bit_count() != len(Hs) * len(Hp) * (q * q - 1):
        raise IntriguingError("C(H_s) has unexpected size")
    t = 2 * d - 2 - s
    vec = WeightVector.combine(space, [(1 - q**t, Hs.mask), (1 - q**s, Hp.mask), (1, C)])
    cls = classify(vec)
    expected_i = (q**s - 1) * (q**t - 1)
    classes = {
        "H_s": Hs.mask,
        "H_s_perp": Hp.mask,
        "C": C,
        "other": ((1 << space.n) - 1) & ~(Hs.mask | Hp.mask | C),
    }
    brute, ident = {}, {}
    m_std = Fraction(q ** (2 * d - 2) - 1, q * q - 1)
    for name, mask in classes.items():
        counts_seen = set()
        values = set()
        for x in members(mask):
            nb = space.adj[x]
            counts_seen.add(
                (
                    (nb & Hs.mask).bit_count(),
                    (nb & Hp.mask).bit_count(),
                    (nb & C).bit_count(),
                )
            )
            values.add(std_ovoid(space, x).dot(vec))
        if len(counts_seen) != 1 or len(values) != 1:
            raise IntriguingError(f"point class {name} is not homogeneous: {counts_seen}")
        a, b, c = counts_seen.pop()
        brute[name] = {"H_s": a, "H_s_perp": b, "C": c}
        ident[name] = values.pop()
    printed, corrected = _pair_formulas(d, s, q)
    return HermitianPairReport(
        d=d,
        s=s,
        q=q,
        vector=vec,
        classification=cls,
        expected_i=expected_i,
        class_sizes={k: v.bit_count() for k, v in classes.items()},
        brute_counts=brute,
        reference_counts=printed,
        corrected_counts=corrected,
        identity_value=ident,
        identity_expected=m_std * expected_i,
    )


@dataclass(frozen=True)
class SectionBound:
    stated: Fraction
    floor: int
    from_expansion: Fraction


def hermitian_section_bound(d: int, s: int, q: int) -> SectionBound:
    """Upper bound on |H_s ∩ O| for an ovoid O of H(2d-1, q^2).

    ``stated`` is q^(s+1) - q^s + q^(2s-2d+2) + 1; ``from_expansion`` solves
    the three-term intersection identity with |O| = q^(2d-1) + 1 and the
    nonnegative H_s^perp term dropped.
    """
    two = Fraction(q) ** (2 * s - 2 * d + 2)
    stated = Fraction(q ** (s + 1) - q**s + 1) + two
    i = (q**s - 1) * (q ** (2 * d - 2 - s) - 1)
    ovoid = q ** (2 * d - 1) + 1
    expansion = Fraction(ovoid - i, q ** (2 * d - 2 - s))
    return SectionBound(stated, math.floor(stated), expansion)


# ---------------------------------------------------------------------------
# group averaging


def group_average(chi: WeightVector, perms: Sequence[Sequence[int]]) -> WeightVector:
    """sum over u in U of chi^u, where chi^u(x) = chi(x^(u^-1))."""
    w = [Fraction(0)] * chi.space.n
    for perm in perms:
        for x, y in enumerate(perm):
            if chi.weights[y]:
                w[x] += chi.weights[y]
    return WeightVector(chi.space, w)


def orbit_coordinates(vec: WeightVector, orbits: Sequence[Sequence[int]]) -> list[Fraction]:
    """Values of an orbit-constant vector on each orbit (raises if not constant)."""
    out = []
    for orb in orbits:
        vals = {vec.weights[x] for x in orb}
        if len(vals) != 1:
            raise IntriguingError("vector is not constant on an orbit")
        out.append(vals.pop())
    return out


def from_orbit_coordinates(space: PolarSpace, orbits, values) -> WeightVector:
    w = [Fraction(0)] * space.n
    for orb, v in zip(orbits, values):
        for x in orb:
            w[x] = _frac(v)
    return WeightVector(space, w)


def averaged_generator_family(space: PolarSpace, orbits) -> list[list[Fraction]]:
    """Orbit coordinates of sum_u chi_{T^u} / |U| for every generator T.

    The average of chi_T over U takes the value |T ∩ O| / |O| on orbit O, so
    no group elements are needed once the orbits are known.
    """
    where = {}
    for k, orb in enumerate(orbits):
        for x in orb:
            where[x] = k
    sizes = [len(o) for o in orbits]
    fam = []
    for g in space.generators:
        counts = [0] * len(orbits)
        for x in members(g):
            counts[where[x]] += 1
        fam.append([Fraction(c, s) for c, s in zip(counts, sizes)])
    return fam


def quotient_matrix(space: PolarSpace, orbits) -> list[list[int]]:
    """B[i][j] = number of neighbours in orbit j of a point of orbit i."""
    masks = [bits(o) for o in orbits]
    B = []
    for orb in orbits:
        rowsets = {tuple((space.adj[x] & m).bit_count() for m in masks) for x in orb}
        if len(rowsets) != 1:
            raise IntriguingError("partition is not equitable")
        B.append(list(rowsets.pop()))
    return B


def invariant_dimension(space: PolarSpace, orbits, which: str = "tight") -> int:
    """Dimension of the orbit-constant part of <j> + V_+ (tight) or <j> + V_- (ovoid)."""
    from . import exact

    p = params_for_space(space)
    theta = p.posev if which == "tight" else p.negev
    B = quotient_matrix(space, orbits)
    m = len(orbits)
    C = [[Fraction(B[i][j]) - (theta if i == j else 0) for j in range(m)] for i in range(m)]
    ker = len(exact.nullspace(C, m))
    ones = [[Fraction(1)] for _ in range(m)]
    cols = [list(r) for r in zip(*C)]
    one_in_col = exact.in_row_space(cols, [Fraction(1)] * m)
    return ker + (1 if one_in_col else 0)
