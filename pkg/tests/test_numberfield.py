import random
from fractions import Fraction

import pytest

from oracles import random_quadratic_surd
from rmlat.errors import CompositumTooLarge
from rmlat.numberfield import (
    AlgebraicReal,
    RealNumberField,
    common_field,
    compositum,
    parse_canonical,
    rationals_field,
)
from rmlat.polynomials import IntPolynomial


@pytest.fixture(scope="module")
def sqrt2():
    return RealNumberField(IntPolynomial([-2, 0, 1]), (1, 2)).generator()


@pytest.fixture(scope="module")
def phi():
    return RealNumberField(IntPolynomial([-1, -1, 1]), (1, 2)).generator()


def test_reducible_polynomial_rejected():
    with pytest.raises(ValueError):
        RealNumberField(IntPolynomial([-1, 0, 1]), (0, 2))


def test_floor_examples(sqrt2, phi):
    assert sqrt2.floor() == 1
    assert phi.floor() == 1
    assert (-sqrt2).floor() == -2


def test_compare_examples(sqrt2, phi):
    assert sqrt2.compare(Fraction(141, 100)) > 0
    assert phi.compare(phi) == 0
    assert (-sqrt2).compare(0) < 0


def test_minimal_polynomial_examples(phi):
    x = phi.field.from_rational(Fraction(3, 2))
    assert x.minimal_polynomial() == IntPolynomial([-3, 2])
    s5 = phi * 2 - 1
    assert s5.minimal_polynomial() == IntPolynomial([-5, 0, 1])
    assert phi.minimal_polynomial() == IntPolynomial([-1, -1, 1])
    assert phi.minimal_polynomial().degree == 2


def test_equality_is_structural_and_compare_semantic(phi):
    other = RealNumberField(IntPolynomial([-1, -1, 1]), (Fraction(3, 2), 2)).generator()
    assert phi == other  # same canonical field and coordinates
    s5a = phi * 2 - 1
    s5b = RealNumberField(IntPolynomial([-5, 0, 1]), (2, 3)).generator()
    assert s5a != s5b  # different fields structurally
    assert s5a.compare(s5b) == 0  # same real number


def test_floor_frac_reconstruction_thousand_random_surds():
    rng = random.Random(20250810)
    for _ in range(1000):
        x = random_quadratic_surd(rng, coeff_bound=50)
        fl = x.floor()
        frac = x - fl
        assert frac.sign() >= 0
        assert (frac - 1).sign() < 0
        assert ((frac + fl) - x).is_zero()


def test_compare_antisymmetric_transitive_random():
    rng = random.Random(99)
    xs = [random_quadratic_surd(rng, coeff_bound=12) for _ in range(12)]
    xs.append(AlgebraicReal.from_rational(Fraction(3, 7)))
    for a in xs:
        for b in xs:
            assert a.compare(b) == -b.compare(a)
    for a, b, c in zip(xs, xs[1:], xs[2:]):
        if a.compare(b) <= 0 and b.compare(c) <= 0:
            assert a.compare(c) <= 0


def test_arithmetic_closure(phi, sqrt2):
    assert ((phi * phi) - phi - 1).is_zero()
    inv = phi.inverse()
    assert (inv - (phi - 1)).is_zero()  # 1/phi = phi - 1
    assert ((sqrt2**3) - sqrt2 * 2).is_zero()
    with pytest.raises(ZeroDivisionError):
        phi.field.zero().inverse()


def test_cubic_field_arithmetic():
    t = RealNumberField(IntPolynomial([-1, -1, -1, 1]), (1, 2)).generator()
    assert t.floor() == 1
    assert (t.inverse() * t - 1).is_zero()
    assert t.minimal_polynomial() == IntPolynomial([-1, -1, -1, 1])
    assert (t ** 3 - (t * t + t + 1)).is_zero()


def test_compositum_and_common_field(sqrt2):
    f3 = RealNumberField(IntPolynomial([-3, 0, 1]), (1, 2))
    x, y = common_field(sqrt2, f3.generator())
    assert x.field == y.field
    assert (x * x - 2).is_zero() and (y * y - 3).is_zero()
    assert (x * y).minimal_polynomial() == IntPolynomial([-6, 0, 1])
    assert x.compare(y) < 0


def test_compositum_respects_embeddings(phi):
    conj_field = phi.field.sibling(0)
    comp = compositum(phi.field, conj_field)
    s = comp.lift_left(phi) + comp.lift_right(phi.conjugate_in(conj_field))
    assert s.is_rational() and s.as_fraction() == 1


def test_compositum_degree_cap():
    f5 = RealNumberField(IntPolynomial([2, 0, 0, 0, 0, 1]), (-2, 0))
    f6 = RealNumberField(IntPolynomial([-2, 0, 0, 0, 0, 0, 1]), (1, 2))
    with pytest.raises(CompositumTooLarge):
        compositum(f5, f6)


def test_rationals_field_roundtrip():
    q = rationals_field().from_rational(Fraction(-7, 3))
    assert q.floor() == -3
    assert q.sign() == -1
    assert q.as_fraction() == Fraction(-7, 3)


def test_canonical_text_roundtrip(phi, sqrt2):
    for x in (phi, sqrt2, phi * 2 - 1, sqrt2.inverse() * 3):
        back = parse_canonical(x.to_canonical())
        assert back.compare(x) == 0
    spec_form = parse_canonical("poly=-1,-1,1;root=1/1,2/1;coords=0,1")
    assert spec_form.compare(phi) == 0


def test_canonical_text_rejects_garbage():
    with pytest.raises(ValueError):
        parse_canonical("poly=1,2")
    with pytest.raises(ValueError):
        parse_canonical("nonsense")


def test_value_mp_precision(phi):
    import mpmath

    with mpmath.workdps(40):
        v = phi.value_mp(40)
        want = (1 + mpmath.sqrt(5)) / 2
        assert abs(v - want) < mpmath.mpf(10) ** -35
