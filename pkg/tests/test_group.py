import random

import pytest

from polarcert.field import GF
from polarcert.geometry import all_points
from polarcert.group import brute_force_stabilizer_order, frame_stabilizer, point_stabiliser_transitivity, random_isometry
from polarcert.polar import cached

PG22 = all_points(GF(2), 3)


@pytest.mark.parametrize(
    "S",
    [
        PG22,
        PG22[:4],
        PG22[:5],
        [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
        [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)],
        [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)],
    ],
)
def test_pg22_stabilizer_matches_brute_force(S):
    F = GF(2)
    assert len(frame_stabilizer(F, 3, S, [])) == brute_force_stabilizer_order(F, 3, S)


@pytest.mark.parametrize("spec,k", [(("W", 4, 2), 6), (("H", 4, 2), 12), (("H", 6, 2), 180)])
def test_point_stabiliser_transitive_on_neighbours(spec, k):
    S = cached(*spec)
    assert S.adj[0].bit_count() == k
    assert len(point_stabiliser_transitivity(S, 0)) == k


def test_random_isometries_preserve_collinearity():
    S = cached("H", 4, 2)
    rng = random.Random(2)
    for _ in range(10):
        p = random_isometry(S, rng).perm(S)
        assert sorted(p) == list(range(S.n))
        for x in range(S.n):
            for y in range(x + 1, S.n):
                assert S.collinear(x, y) == S.collinear(int(p[x]), int(p[y]))


def test_appendix_group():
    from polarcert.certify.h54 import appendix_group, appendix_space, aligned_orbits

    S = appendix_space()
    U = appendix_group(S)
    assert U.order == 144
    assert U.verify_closure()
    orbits = aligned_orbits(S, U)
    assert len(orbits) == 34
    assert sum(len(o) for o in orbits) == S.n
