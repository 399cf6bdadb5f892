import random
from fractions import Fraction

import mpmath
import pytest

from oracles import charpoly_cofactor, numeric_cf_digits, random_quadratic_surd
from rmlat.contfrac import (
    JPState,
    cf_expand,
    cf_reconstruct,
    digit_matrix,
    hecke_unit,
    jp_convergent,
    jp_expand,
    jp_step,
    verify_perron_eigenvector,
)
from rmlat.errors import DegenerateRational, NotPeriodic, WrongDegree
from rmlat.linalg import charpoly_int, det_int, mat_mul
from rmlat.numberfield import AlgebraicReal, RealNumberField
from rmlat.polynomials import IntPolynomial


def field(coeffs, lo, hi):
    return RealNumberField(IntPolynomial(coeffs), (lo, hi))


@pytest.fixture(scope="module")
def phi():
    return field([-1, -1, 1], 1, 2).generator()


@pytest.fixture(scope="module")
def sqrt2():
    return field([-2, 0, 1], 1, 2).generator()


@pytest.fixture(scope="module")
def sqrt3():
    return field([-3, 0, 1], 1, 2).generator()


def test_cf_expand_golden(phi):
    assert cf_expand(phi) == ([], [1])


def test_cf_expand_sqrt2_against_numeric_oracle(sqrt2):
    pre, per = cf_expand(sqrt2)
    assert (pre, per) == ([1], [2])
    with mpmath.workdps(60):
        oracle = numeric_cf_digits(mpmath.sqrt(2), 20)
    stream = pre + per * ((20 - len(pre)) // len(per) + 1)
    assert stream[:20] == oracle
    assert cf_reconstruct(pre, per).compare(sqrt2) == 0


def test_cf_expand_sqrt3_against_numeric_oracle(sqrt3):
    pre, per = cf_expand(sqrt3)
    assert (pre, per) == ([1], [1, 2])
    with mpmath.workdps(60):
        oracle = numeric_cf_digits(mpmath.sqrt(3), 20)
    stream = pre + per * 10
    assert stream[:20] == oracle
    assert cf_reconstruct(pre, per).compare(sqrt3) == 0


def test_cf_expand_rejects_rational():
    x = AlgebraicReal.from_rational(Fraction(7, 3))
    with pytest.raises(DegenerateRational):
        cf_expand(x)


def test_cf_expand_rejects_cubic():
    t = field([-1, -1, -1, 1], 1, 2).generator()
    with pytest.raises(WrongDegree):
        cf_expand(t)


def test_jp_step_golden_fixed_point(phi):
    st = JPState([phi])
    b, nxt = jp_step(st)
    assert b == (1,) and nxt == st


def test_jp_step_sqrt2(sqrt2):
    b, nxt = jp_step(JPState([sqrt2]))
    assert b == (1,)
    assert nxt.thetas[0].compare(sqrt2 + 1) == 0


def test_jp_step_recovery_equations():
    rng = random.Random(5)
    for _ in range(10):
        theta = random_quadratic_surd(rng, 20, min_value=1)
        st = JPState([theta])
        b, nxt = jp_step(st)
        # theta = b + 1/theta'
        back = nxt.thetas[-1].inverse() + b[0]
        assert back.compare(theta) == 0


def test_jp_step_tribonacci_fixed_point():
    t = field([-1, -1, -1, 1], 1, 2).generator()
    th1 = (1 + t) / t
    st = JPState([th1, t])
    b, nxt = jp_step(st)
    assert b == (1, 1) and nxt == st


def test_jp_expand_golden_matrix(phi):
    e = jp_expand(JPState([phi]), 50)
    assert e.status == "periodic"
    assert e.preperiod_digits == [] and e.period_digits == [(1,)]
    assert e.period_matrix == [[0, 1], [1, 1]]
    assert cf_expand(phi) == ([], [1])


def test_jp_expand_sqrt2_matrix(sqrt2):
    e = jp_expand(JPState([sqrt2]), 50)
    assert e.status == "periodic"
    assert len(e.preperiod_digits) == 1 and len(e.period_digits) == 1
    assert e.period_matrix == [[0, 1], [1, 2]]


def test_jp_expand_tribonacci_matrix():
    t = field([-1, -1, -1, 1], 1, 2).generator()
    st = JPState([(1 + t) / t, t])
    e = jp_expand(st, 50)
    assert e.status == "periodic"
    assert e.preperiod_digits == []
    assert e.period_matrix == [[0, 0, 1], [1, 0, 1], [0, 1, 1]]


def test_jp_expand_bound_exhaustion(phi):
    # maximum of 0 periods detectable in one step for a 2-step cycle
    x = field([-3, 0, 1], 1, 2).generator()
    e = jp_expand(JPState([x]), 1)
    assert e.status == "not_periodic_within_bound"
    assert e.period_matrix is None


def test_jp_expand_degenerate_on_rational_tail():
    x = AlgebraicReal.from_rational(Fraction(7, 2))
    e = jp_expand(JPState([x]), 10)
    assert e.status == "degenerate"


def test_digit_matrix_shape_and_det():
    rng = random.Random(3)
    for n in (2, 3, 4):
        b = tuple(rng.randint(0, 9) for _ in range(n - 1))
        B = digit_matrix(b)
        assert B[0] == [0] * (n - 1) + [1]
        for i in range(1, n):
            assert B[i][i - 1] == 1 and B[i][n - 1] == b[i - 1]
        assert abs(det_int(B)) == 1


def test_hecke_unit_examples(phi, sqrt2):
    e = jp_expand(JPState([phi]), 50)
    u = hecke_unit(e)
    assert u.char_poly == IntPolynomial([-1, -1, 1])
    assert u.value.compare(phi) == 0
    e2 = jp_expand(JPState([sqrt2]), 50)
    u2 = hecke_unit(e2)
    assert u2.char_poly == IntPolynomial([-1, -2, 1])
    assert u2.value.compare(sqrt2 + 1) == 0


def test_hecke_unit_tribonacci_charpoly_vs_cofactor_oracle():
    t = field([-1, -1, -1, 1], 1, 2).generator()
    e = jp_expand(JPState([(1 + t) / t, t]), 50)
    u = hecke_unit(e)
    assert list(u.char_poly.coeffs) == charpoly_cofactor(e.period_matrix)
    assert u.char_poly == IntPolynomial([-1, -1, -1, 1])
    assert u.value.compare(t) == 0
    lo, hi = u.value.interval_of_width(Fraction(1, 10**8))
    assert Fraction(18392867, 10**7) < lo and hi < Fraction(18392868, 10**7)


def test_hecke_unit_requires_periodic(phi):
    e = jp_expand(JPState([phi]), 50)
    e.status = "not_periodic_within_bound"
    with pytest.raises(NotPeriodic):
        hecke_unit(e)


def test_verify_perron_eigenvector_examples(phi, sqrt2):
    e = jp_expand(JPState([phi]), 50)
    assert verify_perron_eigenvector(e.period_matrix, e.periodic_state, hecke_unit(e))
    e2 = jp_expand(JPState([sqrt2]), 50)
    assert verify_perron_eigenvector(e2.period_matrix, e2.periodic_state, hecke_unit(e2))
    t = field([-1, -1, -1, 1], 1, 2).generator()
    e3 = jp_expand(JPState([(1 + t) / t, t]), 50)
    assert verify_perron_eigenvector(e3.period_matrix, e3.periodic_state, hecke_unit(e3))
    # a wrong matrix must fail
    assert not verify_perron_eigenvector([[1, 0], [0, 1]], e2.periodic_state, hecke_unit(e2))


def test_jp_matches_cf_on_random_surds():
    rng = random.Random(414)
    for _ in range(50):
        theta = random_quadratic_surd(rng, 50, min_value=1)
        pre, per = cf_expand(theta)
        e = jp_expand(JPState([theta]), 2000)
        assert e.status == "periodic"
        assert [b[0] for b in e.preperiod_digits] == pre
        assert [b[0] for b in e.period_digits] == per


def test_unimodular_invariance_of_unit_lemma():
    # lambda_A is an invariant of the Z-module: positive unimodular basis
    # changes of (lambda_1, lambda_2) leave it exactly fixed
    rng = random.Random(77)
    mats = [((1, 1), (1, 2)), ((2, 1), (1, 1)), ((3, 2), (1, 1)), ((1, 0), (1, 1))]
    done = 0
    while done < 8:
        theta = random_quadratic_surd(rng, 15, min_value=1)
        e1 = jp_expand(JPState([theta]), 2000)
        if e1.status != "periodic":
            continue
        u1 = hecke_unit(e1)
        (a, b), (c, d) = mats[done % len(mats)]
        lam1 = theta.field.one()
        lam2 = theta
        l1 = lam1 * a + lam2 * b
        l2 = lam1 * c + lam2 * d
        if l1.sign() <= 0 or l2.sign() <= 0:
            continue
        theta2 = l2 / l1
        if theta2.is_rational():
            continue
        e2 = jp_expand(JPState([theta2]), 2000)
        if e2.status != "periodic":
            continue
        u2 = hecke_unit(e2)
        assert u1.value.compare(u2.value) == 0
        done += 1


def test_period_rotation_preserves_charpoly(sqrt3):
    e = jp_expand(JPState([sqrt3]), 100)
    per = e.period_digits
    assert len(per) == 2
    A1 = mat_mul(digit_matrix(per[0]), digit_matrix(per[1]))
    A2 = mat_mul(digit_matrix(per[1]), digit_matrix(per[0]))
    assert charpoly_int(A1) == charpoly_int(A2)


def test_convergents_approach_state_direction():
    t = field([-1, -1, -1, 1], 1, 2).generator()
    st = JPState([(1 + t) / t, t])
    e = jp_expand(st, 50)
    period = len(e.period_digits)
    prev_err = None
    for k in range(1, 6):
        v = jp_convergent(e, period * k)
        assert v[0] > 0
        errs = []
        for comp, target in zip(v[1:], st.thetas):
            diff = target - Fraction(comp, v[0])
            errs.append(diff if diff.sign() >= 0 else -diff)
        err = errs[0]
        for e2 in errs[1:]:
            if e2.compare(err) > 0:
                err = e2
        if prev_err is not None:
            assert err.compare(prev_err) < 0
        prev_err = err


def test_digit_stream_unrolls(sqrt3):
    e = jp_expand(JPState([sqrt3]), 100)
    stream = e.digit_stream(9)
    assert [b[0] for b in stream] == [1, 1, 2, 1, 2, 1, 2, 1, 2]


def test_jpstate_validation(phi):
    with pytest.raises(ValueError):
        JPState([phi - 2])  # negative
    with pytest.raises(ValueError):
        JPState([])
    st = JPState.build([phi, RealNumberField(IntPolynomial([-2, 0, 1]), (1, 2)).generator()])
    assert st.dimension == 3
    assert st.independent_with_one()
    dep = JPState([phi, phi + 1])
    assert not dep.independent_with_one()
