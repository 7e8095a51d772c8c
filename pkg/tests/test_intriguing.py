import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarcert.group import random_isometry
from polarcert.intriguing import (
    IntriguingError,
    WeightVector,
    classify,
    delsarte_bounds,
    generator_vector,
    group_average,
    hermitian_section_bound,
    intersect,
    std_ovoid,
    std_ovoid_m,
    std_tight_i,
    std_tightset,
    subspace_tight,
)
from polarcert.polar import cached, members
from polarcert.search import find_ovoid

SPACES = [("W", 4, 2), ("W", 6, 2), ("Q", 5, 2), ("Qplus", 6, 2), ("Qminus", 6, 2), ("H", 4, 2), ("H", 6, 2)]


@pytest.mark.parametrize("spec", SPACES)
def test_standard_vectors(spec):
    S = cached(*spec)
    q, r, e2 = S.q, S.rank, S.two_e
    # m = (q^(d-1) - 1)/(q - 1) and i = q^(d-2+e) + 1 with d the rank
    assert std_ovoid_m(S) == Fraction(q ** (r - 1) - 1, q - 1)
    c = classify(std_ovoid(S, 0))
    assert c.is_ovoid and c.value == std_ovoid_m(S)
    c = classify(std_tightset(S, 0))
    assert c.is_tight and c.value == std_tight_i(S)
    c = classify(generator_vector(S, S.generators[0]))
    assert c.is_tight and c.value == 1


@pytest.mark.parametrize("spec", [("W", 6, 2), ("H", 6, 2), ("Qplus", 8, 2)])
def test_subspace_tight_sets(spec):
    S = cached(*spec)
    g = S.generators[0]
    pts = members(g)
    for s, mask in [(0, 1 << pts[0]), (1, S.line_mask(pts[0], pts[1]))]:
        c = classify(subspace_tight(S, mask, s))
        assert c.is_tight


def test_intersection_products():
    S = cached("W", 4, 2)
    chi = std_ovoid(S, 0)
    for y in range(S.n):
        psi = std_tightset(S, y)
        assert intersect(chi, psi) == std_ovoid_m(S) * std_tight_i(S)
    with pytest.raises(IntriguingError):
        intersect(std_tightset(S, 0), std_tightset(S, 1))


def _image(vec, perm):
    w = [Fraction(0)] * len(perm)
    for x, y in enumerate(perm):
        w[y] = vec.weights[x]
    return WeightVector(vec.space, w)


def test_constant_inner_products_detect_ovoids():
    """An ovoid has the same product with every image of a tight set; a random
    set of the same size does not."""
    S = cached("H", 4, 2)
    res = find_ovoid(S)
    chi = WeightVector.indicator(S, sum(1 << x for x in res.witness))
    psi = std_tightset(S, 0)
    rng = random.Random(7)
    images = [_image(psi, random_isometry(S, rng).perm(S)) for _ in range(200)]
    assert {chi.dot(im) for im in images} == {std_tight_i(S)}
    assert classify(chi).is_ovoid
    for trial in range(20):
        pts = rng.sample(range(S.n), len(res.witness))
        other = WeightVector.indicator(S, sum(1 << x for x in pts))
        if classify(other).is_ovoid:
            continue
        assert len({other.dot(im) for im in images}) > 1


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=15, max_size=15))
def test_delsarte_inequality(ws):
    S = cached("W", 4, 2)
    chi = WeightVector(S, ws)
    b = delsarte_bounds(chi)
    assert b.holds
    c = classify(chi)
    if c.is_ovoid:
        assert b.left_equal
    if c.is_tight:
        assert b.right_equal
    if b.left_equal and not chi.is_trivial():
        assert c.is_ovoid
    if b.right_equal and not chi.is_trivial():
        assert c.is_tight


def test_group_average_keeps_type():
    from polarcert.certify.h54 import appendix_group, appendix_space

    S = appendix_space()
    U = appendix_group(S)
    psi = std_tightset(S, 0)
    avg = group_average(psi, U.perms)
    c = classify(avg)
    assert c.is_tight and c.value == U.order * std_tight_i(S)
    chi = std_ovoid(S, 5)
    c = classify(group_average(chi, U.perms))
    assert c.is_ovoid and c.value == U.order * std_ovoid_m(S)


def test_section_bound():
    b = hermitian_section_bound(3, 2, 2)
    assert b.floor == 6
