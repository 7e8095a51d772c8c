from hypothesis import given, settings
from hypothesis import strategies as st

from polarcert.geometry import Subspace, normalize, rank
from polarcert.polar import cached, members

FORMS = [("W", 4, 2), ("H", 4, 2), ("Qminus", 6, 2), ("Q", 5, 3), ("Qplus", 6, 2)]


def vectors(F, d):
    return st.lists(st.integers(0, F.Q - 1), min_size=d, max_size=d).filter(any)


@st.composite
def subspaces(draw):
    fam, d, q = draw(st.sampled_from(FORMS))
    S = cached(fam, d, q)
    vecs = draw(st.lists(vectors(S.field, d), min_size=1, max_size=d))
    return S, Subspace.span(S.field, vecs)


@settings(max_examples=60, deadline=None)
@given(subspaces())
def test_perp_is_an_involution(arg):
    S, U = arg
    P = S.form.perp(U)
    assert P.dim + U.dim == S.d
    assert S.form.perp(P) == U


@settings(max_examples=60, deadline=None)
@given(subspaces())
def test_perp_reverses_inclusion(arg):
    S, U = arg
    P = S.form.perp(U)
    for b in P.basis:
        assert all(S.form.bilinear(u, b) == 0 for u in U.basis)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FORMS), st.data())
def test_point_perp_mask_matches_form(spec, data):
    S = cached(*spec)
    x = data.draw(st.integers(0, S.n - 1))
    mask = S.perp_mask(x)
    for y in range(S.n):
        assert bool(mask >> y & 1) == (S.form.bilinear(S.points[x], S.points[y]) == 0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FORMS), st.data())
def test_tangent_section_is_a_cone(spec, data):
    """x^perp is the cone with vertex x over the quotient space."""
    S = cached(*spec)
    x = data.draw(st.integers(0, S.n - 1))
    Q, proj = S.quotient(x)
    nbrs = members(S.adj[x])
    # every quotient point has the same number of preimages (one per point of the line minus x)
    fibres = {}
    for z in nbrs:
        fibres.setdefault(proj[z], []).append(z)
    assert set(fibres) == set(range(Q.n))
    assert {len(v) for v in fibres.values()} == {S.field.Q}
    # collinearity descends: z ~ w in S iff their images coincide or are collinear in Q
    for z in nbrs[:8]:
        for w in nbrs:
            if z != w:
                expect = proj[z] == proj[w] or Q.collinear(proj[z], proj[w])
                assert S.collinear(z, w) == expect


def test_normalize_first_nonzero_is_one():
    S = cached("H", 4, 2)
    F = S.field
    for v in S.points:
        first = next(c for c in v if c)
        assert first == 1 and normalize(F, v) == v
    assert rank(F, [list(v) for v in S.points]) == S.d
