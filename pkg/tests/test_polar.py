import pytest

from polarcert.polar import PolarError, cached, members, qpow

SPACES = [
    ("W", 4, 2), ("W", 6, 2), ("Q", 5, 2), ("Qplus", 6, 2), ("Qminus", 6, 2),
    ("Qplus", 8, 2), ("H", 4, 2), ("H", 5, 2), ("H", 4, 3), ("Q", 5, 3),
]


def generator_count(S):
    out = 1
    for i in range(S.rank):
        out *= qpow(S.q, 2 * i + S.two_e) + 1
    return out


@pytest.mark.parametrize("spec", SPACES)
def test_point_and_generator_counts(spec):
    S = cached(*spec)
    assert S.n == S.table_point_count()
    assert len(S.generators) == generator_count(S)
    assert len(set(S.generators)) == len(S.generators)
    for g in S.generators[:50]:
        pts = members(g)
        assert len(pts) == S.points_per_generator
        assert all(S.collinear(a, b) for a in pts for b in pts if a != b)


@pytest.mark.parametrize("spec", SPACES)
def test_ovoid_number(spec):
    S = cached(*spec)
    # an ovoid meets every generator once, so |O| times generators-per-point = generators
    per_point = len(S.generators_through(1))
    assert S.ovoid_number * per_point == len(S.generators)


@pytest.mark.parametrize("spec", [s for s in SPACES if cached(*s).rank >= 2])
def test_quotient_same_family_lower_rank(spec):
    S = cached(*spec)
    Q, proj = S.quotient(0)
    assert Q.family == S.family
    assert Q.rank == S.rank - 1
    assert Q.d == S.d - 2
    assert set(proj) == set(members(S.adj[0]))


@pytest.mark.parametrize("name", ["W(3,2)", "H(3,4)", "Q-(5,2)", "Q+(7,2)", "Q(6,3)"])
def test_names(name):
    table = {"W(3,2)": ("W", 4, 2), "H(3,4)": ("H", 4, 2), "Q-(5,2)": ("Qminus", 6, 2),
             "Q+(7,2)": ("Qplus", 8, 2), "Q(6,3)": ("Q", 7, 3)}
    assert cached(*table[name]).name == name


def test_label_parse_roundtrip():
    S = cached("H", 4, 2)
    assert all(S.parse_point(S.label(i)) == i for i in range(S.n))


def test_lines_have_q_plus_one_points():
    S = cached("Q", 5, 3)
    for b in members(S.adj[0]):
        assert S.line_mask(0, b).bit_count() == S.field.Q + 1


def test_quotient_of_rank_one_rejected():
    S = cached("Qminus", 4, 2)
    with pytest.raises(PolarError):
        S.quotient(0)


def test_generator_cache(tmp_path, monkeypatch):
    from polarcert.polar import build

    monkeypatch.setenv("POLARCERT_CACHE", str(tmp_path))
    a = build("W", 4, 3).generators
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    b = build("W", 4, 3).generators
    assert a == b
