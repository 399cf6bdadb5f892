import random
from fractions import Fraction

import pytest

from oracles import random_quadratic_surd
from rmlat.errors import EmptyModule, RationalSlope
from rmlat.numberfield import AlgebraicReal, RealNumberField
from rmlat.polynomials import IntPolynomial
from rmlat.pseudolattice import (
    PseudoLattice,
    RMCertificate,
    TrivialEndomorphisms,
    cover_degree,
    endomorphism_ring,
    equals,
    from_periods,
    hecke_project,
    is_proportional,
    rm_quadratic_check,
    tau_truncate,
)


def field(coeffs, lo, hi):
    return RealNumberField(IntPolynomial(coeffs), (lo, hi))


@pytest.fixture(scope="module")
def f2():
    return field([-2, 0, 1], 1, 2)


@pytest.fixture(scope="module")
def fphi():
    return field([-1, -1, 1], 1, 2)


def test_from_periods_examples(f2):
    one, r2 = f2.one(), f2.generator()
    assert from_periods([one, r2]).rank == 2
    assert from_periods([one * 2, r2 * 2]).rank == 2
    m = from_periods([one, f2.from_rational(Fraction(1, 2))])
    assert m.rank == 1
    assert m.basis[0].as_fraction() == Fraction(1, 2)
    with pytest.raises(EmptyModule):
        from_periods([f2.zero()])


def test_equals_examples(f2):
    one, r2 = f2.one(), f2.generator()
    m = from_periods([one, r2])
    transformed = from_periods([one * 2 + r2, one + r2])  # [[2,1],[1,1]]
    assert equals(m, transformed)
    assert not equals(m, from_periods([one, r2 * 2]))
    assert not equals(m, m.scale(r2))  # sqrt2*(Z+Zsqrt2) = 2Z+Zsqrt2


def test_lemma1_random_unimodular_invariance():
    rng = random.Random(1234)
    count = 0
    while count < 100:
        theta = random_quadratic_surd(rng, 10)
        one = theta.field.one()
        m = from_periods([one, theta])
        if m.rank != 2:
            continue
        a, b, c = rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5)
        # complete to determinant +-1
        found = None
        for d in range(-6, 7):
            if a * d - b * c in (1, -1):
                found = d
                break
        if found is None:
            continue
        g1 = one * a + theta * b
        g2 = one * c + theta * found
        assert equals(m, from_periods([g1, g2]))
        count += 1


def test_proportionality_examples(f2, fphi):
    one, r2 = f2.one(), f2.generator()
    m = from_periods([one, r2])
    mu = is_proportional(m, m.scale(r2))
    assert mu is not None and mu.compare(r2) == 0
    phi = fphi.generator()
    mphi = from_periods([fphi.one(), phi])
    mu2 = is_proportional(mphi, mphi.scale(phi))
    assert mu2 is not None and mu2.is_rational() and mu2.as_fraction() == 1
    f3 = field([-3, 0, 1], 1, 2)
    m3 = from_periods([f3.one(), f3.generator()])
    assert is_proportional(m, m3) is None


def test_proportionality_is_equivalence(fphi):
    rng = random.Random(5)
    phi = fphi.generator()
    base = from_periods([fphi.one(), phi])
    scalars = [phi, phi + 1, phi * 2 + 1]
    mods = [base.scale(s) for s in scalars]
    # reflexive
    for m in mods:
        mu = is_proportional(m, m)
        assert mu is not None and mu.as_fraction() == 1
    # symmetric with inverse witness
    mu_ab = is_proportional(mods[0], mods[1])
    mu_ba = is_proportional(mods[1], mods[0])
    assert (mu_ab * mu_ba - 1).is_zero()
    # transitive with product witness
    mu_bc = is_proportional(mods[1], mods[2])
    mu_ac = is_proportional(mods[0], mods[2])
    assert equals(mods[0].scale(mu_ab * mu_bc), mods[2])
    assert equals(mods[0].scale(mu_ac), mods[2])


def test_endomorphism_ring_examples(f2, fphi):
    one, r2 = f2.one(), f2.generator()
    cert = endomorphism_ring(from_periods([one, r2]))
    assert (cert.D, cert.d_K, cert.f) == (8, 8, 1)
    assert cert.min_poly == IntPolynomial([-2, 0, 1])
    phi = fphi.generator()
    cert2 = endomorphism_ring(from_periods([fphi.one(), phi]))
    assert (cert2.D, cert2.d_K, cert2.f) == (5, 5, 1)
    cert3 = endomorphism_ring(from_periods([one, r2 * 2]))
    assert (cert3.D, cert3.d_K, cert3.f) == (32, 8, 2)
    assert cert3.min_poly == IntPolynomial([-8, 0, 1])


def test_endomorphism_ring_trivial_marker():
    t = field([-1, -1, -1, 1], 1, 2).generator()
    out = endomorphism_ring(from_periods([t.field.one(), t]))
    assert isinstance(out, TrivialEndomorphisms) and out.degree == 3


def test_endomorphism_invariance_under_moebius():
    rng = random.Random(31)
    checked = 0
    while checked < 20:
        theta = random_quadratic_surd(rng, 12)
        a, b, c, d = rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(-4, 4)
        if a * d - b * c not in (1, -1):
            continue
        den = theta * c + d
        if den.is_zero():
            continue
        theta2 = (theta * a + b) / den
        if theta2.is_rational():
            continue
        c1 = endomorphism_ring(from_periods([theta.field.one(), theta]))
        c2 = endomorphism_ring(from_periods([theta2.field.one(), theta2]))
        assert isinstance(c1, RMCertificate) and isinstance(c2, RMCertificate)
        assert c1.D == c2.D
        checked += 1


def test_canonical_scaling_idempotent(fphi):
    phi = fphi.generator()
    m = from_periods([phi * 3, phi * phi])
    scaled = m.canonical_scaled()
    assert scaled.basis[0].is_rational() and scaled.basis[0].as_fraction() == 1
    again = scaled.canonical_scaled()
    assert equals(scaled, again)


def test_hecke_project_examples(f2, fphi):
    phi = fphi.generator()
    pj = hecke_project(from_periods([fphi.one(), phi]))
    assert equals(pj, from_periods([fphi.one(), phi]))
    one, r2 = f2.one(), f2.generator()
    pj2 = hecke_project(from_periods([one * 2, r2 * 2, r2 + 1]))
    assert equals(pj2, from_periods([one, r2]))
    with pytest.raises(RationalSlope):
        hecke_project(from_periods([one, f2.from_rational(Fraction(3, 2))]))


def test_tau_truncate_examples():
    tb = tau_truncate([[1, 2], [2, 3]])
    assert tb.tau == ((1, 2), (2, 3)) and not tb.asymmetry_flag
    tb2 = tau_truncate([[1, 2, 9], [2, 3, 9], [9, 9, 9]])
    assert tb2.tau == ((1, 2), (2, 3))
    tb3 = tau_truncate([[1, 2], [4, 3]])
    assert tb3.tau == ((1, 3), (3, 3))
    assert tb3.asymmetry_flag and tb3.symmetrized
    tb4 = tau_truncate([[1, 2], [3, 3]])  # 2+3 odd: raw block kept
    assert tb4.tau == ((1, 2), (3, 3)) and tb4.asymmetry_flag and not tb4.symmetrized


def test_rm_quadratic_check_examples(f2, fphi):
    phi = fphi.generator()
    theta = phi - 1  # (-1+sqrt5)/2
    d1 = rm_quadratic_check(theta, ((2, 1), (1, 1)))
    assert d1.holds and d1.residual_poly == IntPolynomial([-1, 1, 1])
    d2 = rm_quadratic_check(theta, ((0, 1), (1, 0)))
    assert not d2.holds and d2.residual_poly == IntPolynomial([-1, 0, 1])
    d3 = rm_quadratic_check(f2.generator(), ((0, 1), (1, 0)))
    assert not d3.holds


def test_cover_degree():
    assert cover_degree(2) == 3
    assert cover_degree(1) == 1
    assert cover_degree(5) == 9
    with pytest.raises(ValueError):
        cover_degree(0)


def test_cross_field_membership(f2):
    r2 = f2.generator()
    m = from_periods([f2.one(), r2])
    s8 = field([-8, 0, 1], 2, 3).generator()  # sqrt8 = 2 sqrt2
    assert m.contains(s8)
    f3 = field([-3, 0, 1], 1, 2)
    assert not m.contains(f3.generator())
