"""Independent desk-scale oracles used by the test suite.

Nothing here shares code paths with the package: class numbers come from
brute-force form enumeration, Hecke traces from the Eichler-Selberg trace
formula, continued-fraction digits from floating-point iteration, and
characteristic polynomials from cofactor expansion.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath

from rmlat.intutil import divisors, euler_phi, is_square
from rmlat.numberfield import RealNumberField
from rmlat.polynomials import IntPolynomial, isolate_real_roots


# --- Hurwitz-style class numbers of imaginary quadratic orders ------------------

def imaginary_class_number(D: int) -> int:
    """Number of primitive reduced positive definite forms of discriminant D < 0."""
    assert D < 0 and D % 4 in (0, 1)
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 != 0:
                continue
            if (b * b - D) % (4 * a) != 0:
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            count += 1
        a += 1
    return count


def weighted_class_number(D: int) -> Fraction:
    if D == -3:
        return Fraction(1, 3)
    if D == -4:
        return Fraction(1, 2)
    return Fraction(imaginary_class_number(D))


# --- Eichler-Selberg trace formula (weight 2, trivial character) ----------------

def psi_index(N: int) -> int:
    out = N
    for p in set(_prime_list(N)):
        out = out // p * (p + 1)
    return out


def _prime_list(N: int):
    out = []
    n = N
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def trace_formula_weight2(n: int, N: int) -> int:
    """Tr T_n on S_2(Gamma_0(N)) for gcd(n, N) = 1.

    Requires every conductor f with f^2 | (4n - t^2) to be coprime to N,
    which holds whenever 4n < N^2; violations raise.
    """
    assert n >= 1 and N >= 1 and math.gcd(n, N) == 1
    total = Fraction(0)
    if is_square(n):
        total += Fraction(psi_index(N), 12)
    # elliptic terms
    t = -math.isqrt(4 * n - 1)
    elliptic = Fraction(0)
    while t * t < 4 * n:
        disc = t * t - 4 * n
        f = 1
        while f * f <= -disc:
            if disc % (f * f) == 0:
                D0 = disc // (f * f)
                if D0 % 4 in (0, 1):
                    if math.gcd(f, N) != 1:
                        raise ValueError(
                            f"trace oracle needs gcd(f, N) = 1; got f={f}, N={N}"
                        )
                    roots = sum(
                        1 for x in range(N) if (x * x - t * x + n) % N == 0
                    )
                    elliptic += weighted_class_number(D0) * roots
            f += 1
        t += 1
    total -= elliptic / 2
    # hyperbolic/divisor terms
    hyper = Fraction(0)
    for d in divisors(n):
        dp = n // d
        c = sum(
            euler_phi(math.gcd(e, N // e))
            for e in divisors(N)
            if (d - dp) % math.gcd(e, N // e) == 0
        )
        hyper += Fraction(min(d, dp) * c)
    total -= hyper / 2
    total += sum(divisors(n))  # weight-2 correction
    assert total.denominator == 1
    return int(total)


# --- continued fraction digit oracle --------------------------------------------

def numeric_cf_digits(value_mp, count: int) -> list[int]:
    """Floating-point continued-fraction digits at high precision."""
    digits = []
    x = mpmath.mpf(value_mp)
    for _ in range(count):
        a = int(mpmath.floor(x))
        digits.append(a)
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return digits


# --- characteristic polynomial by cofactor expansion ----------------------------

def charpoly_cofactor(A) -> list[int]:
    """det(xI - A) via Laplace expansion over Z[x]; ascending coefficients."""
    n = len(A)

    def poly_add(p, q):
        out = [0] * max(len(p), len(q))
        for i, v in enumerate(p):
            out[i] += v
        for i, v in enumerate(q):
            out[i] += v
        while out and out[-1] == 0:
            out.pop()
        return out

    def poly_mul(p, q):
        if not p or not q:
            return []
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return out

    def det(rows, cols):
        if not rows:
            return [1]
        i = rows[0]
        acc = []
        for pos, j in enumerate(cols):
            entry = [-A[i][j], 1] if i == j else [-A[i][j]]
            sub = det(rows[1:], cols[:pos] + cols[pos + 1 :])
            term = poly_mul(entry, sub)
            if pos % 2:
                term = [-x for x in term]
            acc = poly_add(acc, term)
        return acc

    return det(list(range(n)), list(range(n)))


# --- brute-force Pell search -----------------------------------------------------

def brute_force_pell(D: int, u_limit: int = 200000):
    """Smallest (t, u), u >= 1, with t^2 - D u^2 = +-4; None past the limit."""
    for u in range(1, u_limit + 1):
        for target in (4 * (-1), 4):
            t2 = D * u * u + target
            if t2 > 0 and is_square(t2):
                return math.isqrt(t2), u
    return None


# --- brute-force narrow class count ----------------------------------------------

def brute_force_narrow_h(D: int) -> int:
    """Union-find over reduced forms, joining forms connected by reduction
    cycles; the class count is the number of components."""
    from rmlat.quadorder import reduced_forms

    forms = reduced_forms(D)
    index = {f: i for i, f in enumerate(forms)}
    parent = list(range(len(forms)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for f in forms:
        cur = f.rho()
        steps = 0
        while cur != f:
            union(index[f], index[cur])
            cur = cur.rho()
            steps += 1
            assert steps < 10000
    return len({find(i) for i in range(len(forms))})


# --- random quadratic surds --------------------------------------------------------

def random_quadratic_surd(rng: random.Random, coeff_bound: int = 50, min_value=None):
    """A random quadratic irrational with |coefficients| <= coeff_bound."""
    while True:
        a = rng.randint(1, coeff_bound)
        b = rng.randint(-coeff_bound, coeff_bound)
        c = rng.randint(-coeff_bound, coeff_bound)
        if b == 0 or c == 0:
            continue
        disc = b * b - 4 * a * c
        if disc <= 0 or is_square(disc):
            continue
        g = math.gcd(math.gcd(a, abs(b)), abs(c))
        poly = IntPolynomial([c // g, b // g, a // g])
        for iv in isolate_real_roots(poly):
            theta = RealNumberField(poly, iv).generator()
            if min_value is None or theta.compare(min_value) > 0:
                return theta
