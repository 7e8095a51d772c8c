import pytest

from polarcert.srg import SrgError, eigenvalues, params_for_family, params_for_space, params_from_graph, params_from_table
from polarcert.polar import cached

SMALL = [("W", 4, 2), ("W", 6, 2), ("Q", 5, 2), ("Qplus", 6, 2), ("Qminus", 6, 2), ("Qplus", 8, 2),
         ("H", 4, 2), ("H", 5, 2), ("H", 4, 3), ("W", 4, 3), ("Q", 5, 3), ("Qminus", 6, 3)]


@pytest.mark.parametrize("spec", SMALL)
def test_graph_matches_table(spec):
    S = cached(*spec)
    assert params_from_graph(S).core() == params_for_space(S).core()


@pytest.mark.parametrize("spec", SMALL)
def test_identities(spec):
    p = params_for_space(cached(*spec))
    assert all(p.identities().values())


def test_h54_values():
    p = params_for_family("H", 6, 2)
    assert (p.n, p.k, p.lam, p.mu) == (693, 180, 51, 45)
    assert (p.posev, p.negev) == (15, -9)


def test_eigenvalues_petersen_complement():
    # the collinearity graph of W(3,2) is the complement of the Petersen line graph: srg(15,6,1,3)
    assert eigenvalues(6, 1, 3) == (1, -3)


def test_rank_one_rejected():
    with pytest.raises(SrgError):
        params_from_table(2, 1, 2)
