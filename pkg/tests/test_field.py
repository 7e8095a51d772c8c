import itertools

import pytest

from polarcert.field import GF, FieldError, prime_power


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9])
def test_field_axioms_exhaustive(q):
    F = GF(q)
    E = list(F.elements())
    assert len(E) == q
    for a, b in itertools.product(E, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    for a, b, c in itertools.product(E, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    for a in E:
        assert F.add(a, F.neg(a)) == F.zero
        if a:
            assert F.mul(a, F.inv(a)) == F.one


@pytest.mark.parametrize("q", [4, 8, 9])
def test_frobenius_is_automorphism(q):
    F = GF(q)
    p, h = prime_power(q)
    for a, b in itertools.product(F.elements(), repeat=2):
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    for a in F.elements():
        assert F.frobenius(F.frobenius(a, h - 1)) == a
        assert F.frobenius(a) == F.pow(a, p)


@pytest.mark.parametrize("q", [4, 9])
def test_conjugation(q):
    F = GF(q)
    r = F.sqrt_order
    fixed = [a for a in F.elements() if F.conj(a) == a]
    assert sorted(fixed) == sorted(F.subfield(r))
    for a in F.elements():
        assert F.conj(F.conj(a)) == a
        # the norm lands in the subfield
        assert F.mul(a, F.conj(a)) in fixed


def test_gf4_labels_roundtrip():
    F = GF(4)
    labels = [F.label(a) for a in F.elements()]
    assert labels[:2] == ["0", "1"]
    assert all(F.parse(s) == a for a, s in zip(F.elements(), labels))
    a = F.parse("a")
    assert F.mul(a, a) == F.parse("a^2")
    assert F.add(F.add(a, F.mul(a, a)), F.one) == F.zero


@pytest.mark.parametrize("q", [1, 6, 10, 12])
def test_non_prime_powers_rejected(q):
    with pytest.raises(FieldError):
        GF(q)


def test_frobenius_exponent_range():
    with pytest.raises(FieldError):
        GF(4).frobenius(1, 2)
