"""Small exact integer utilities used across modules."""

from __future__ import annotations

import math
from fractions import Fraction


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


def prime_factors(n: int) -> dict[int, int]:
    """Factor |n| by trial division; adequate at desk scale."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    facs = prime_factors(n)
    out = [1]
    for p, e in facs.items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    if n == 1:
        return 1
    result = n
    for p in prime_factors(n):
        result = result // p * (p - 1)
    return result


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Write n = s^2 * m with m squarefree; returns (s, m).  Sign goes to m."""
    if n == 0:
        return 1, 0
    sign = 1 if n > 0 else -1
    s, m = 1, 1
    for p, e in prime_factors(n).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, sign * m


def split_discriminant(D: int) -> tuple[int, int]:
    """Split a discriminant as D = f^2 * d_K with d_K fundamental.

    Works for positive and negative D with D = 0,1 (mod 4), D not a square.
    Returns (d_K, f).
    """
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    s, m = squarefree_decomposition(D)
    if m % 4 == 1:
        return m, s
    # m = 2,3 mod 4: fundamental discriminant is 4m and s must be even
    if s % 2 != 0:
        raise ValueError(f"{D} is not a discriminant")
    return 4 * m, s // 2


def floor_quadratic(p: int, r: int, m: int, delta: int) -> int:
    """Exact floor((p + r*sqrt(delta)) / m) for integers, m > 0, delta > 0
    not a perfect square (so the value is irrational unless r = 0)."""
    if m <= 0:
        raise ValueError("m must be positive")
    if r == 0:
        return p // m
    w = math.isqrt(r * r * delta)
    # r*sqrt(delta) lies strictly between w and w+1 when r > 0,
    # and strictly between -(w+1) and -w when r < 0.
    if r > 0:
        return (p + w) // m
    return (p - w - 1) // m


def frac_as_pair(x: Fraction) -> tuple[int, int]:
    return x.numerator, x.denominator
