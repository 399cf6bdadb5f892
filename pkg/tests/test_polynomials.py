import random
from fractions import Fraction

import pytest

from rmlat.errors import ZeroPolynomial
from rmlat.polynomials import (
    IntPolynomial,
    factor_over_rationals,
    is_irreducible,
    isolate_real_roots,
    poly_eval_interval,
    refine_to_width,
    sign_variations,
    squarefree_part,
    sturm_chain,
)


def test_isolate_sqrt2():
    ivs = isolate_real_roots(IntPolynomial([-2, 0, 1]))
    assert len(ivs) == 2
    assert ivs[0][1] <= 0 <= ivs[1][0]


def test_isolate_no_real_roots():
    assert isolate_real_roots(IntPolynomial([1, 0, 1])) == []


def test_isolate_three_integer_roots():
    p = IntPolynomial([-6, 11, -6, 1])  # (x-1)(x-2)(x-3)
    ivs = isolate_real_roots(p)
    assert len(ivs) == 3
    for (lo, hi), root in zip(ivs, (1, 2, 3)):
        assert lo < root < hi


def test_isolate_rejects_zero():
    with pytest.raises(ZeroPolynomial):
        isolate_real_roots(IntPolynomial([]))


def test_isolating_intervals_are_disjoint_and_refinable():
    p = IntPolynomial([-1, -4, 0, 1, 1])
    ivs = isolate_real_roots(p)
    for i in range(len(ivs) - 1):
        assert ivs[i][1] <= ivs[i + 1][0]
    for iv in ivs:
        lo, hi = refine_to_width(squarefree_part(p), iv, Fraction(1, 1024))
        assert hi - lo <= Fraction(1, 1024)


def test_sturm_count_matches_variation_difference():
    rng = random.Random(7)
    for _ in range(25):
        coeffs = [rng.randint(-8, 8) for _ in range(rng.randint(2, 6))] + [
            rng.randint(1, 8)
        ]
        p = IntPolynomial(coeffs)
        if p.degree < 1:
            continue
        chain = sturm_chain(p)
        from rmlat.polynomials import root_bound

        B = root_bound(p)
        count = sign_variations(chain, -B) - sign_variations(chain, B)
        assert count == len(isolate_real_roots(p))


@pytest.mark.parametrize(
    "coeffs,expect",
    [
        ([-1, 0, 1], [((-1, 1), 1), ((1, 1), 1)]),
        ([-1, 1, 1], [((-1, 1, 1), 1)]),
        ([-1, 0, 0, 0, 1], [((-1, 1), 1), ((1, 1), 1), ((1, 0, 1), 1)]),
    ],
)
def test_factor_examples(coeffs, expect):
    content, factors = factor_over_rationals(IntPolynomial(coeffs))
    assert content == 1
    got = [(f.coeffs, m) for f, m in factors]
    assert got == [(tuple(c), m) for c, m in expect]


def test_factor_remultiplies_exactly():
    rng = random.Random(11)
    for _ in range(30):
        coeffs = [rng.randint(-9, 9) for _ in range(rng.randint(1, 7))] + [
            rng.randint(1, 9)
        ]
        p = IntPolynomial(coeffs)
        content, factors = factor_over_rationals(p)
        check = IntPolynomial([content])
        for f, mult in factors:
            for _ in range(mult):
                check = check * f
        assert check == p


def test_factor_with_multiplicities():
    p = IntPolynomial([-1, 0, 1])
    sq = p * p * IntPolynomial([1, 1])
    _, factors = factor_over_rationals(sq)
    facs = {f.coeffs: m for f, m in factors}
    assert facs == {(-1, 1): 2, (1, 1): 3}


def test_irreducibility():
    assert is_irreducible(IntPolynomial([-1, 1, 1]))
    assert is_irreducible(IntPolynomial([-1, -1, -1, 1]))
    assert not is_irreducible(IntPolynomial([-1, 0, 1]))
    assert is_irreducible(IntPolynomial([5, 0, -5, 0, 1]))


def test_interval_evaluation_encloses():
    p = IntPolynomial([1, -3, 0, 2])
    iv = (Fraction(1, 3), Fraction(1, 2))
    lo, hi = poly_eval_interval(p.to_rational(), iv)
    for x in (Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)):
        assert lo <= p(x) <= hi


def test_shift_and_reciprocal():
    p = IntPolynomial([-2, 0, 1])
    q = p.shift(1)  # (x+1)^2 - 2
    assert q.coeffs == (-1, 2, 1)
    assert p.reciprocal().coeffs == (1, 0, -2)
