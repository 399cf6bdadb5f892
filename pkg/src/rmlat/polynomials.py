"""Exact univariate polynomials over Z and Q.

Coefficients are stored in ascending degree order.  Integer polynomials are
the primary citizens (they carry defining polynomials, characteristic
polynomials and minimal polynomials); rational-coefficient helpers exist for
Euclidean arithmetic.  Real roots are isolated with Sturm sequences and
refined by bisection with exact rational endpoints.  Factorization over the
rationals reconstructs integer factors from high-precision numerical root
clusters and validates every candidate by exact division, with a degree cap
suited to desk-scale inputs.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath

from .errors import ZeroPolynomial
from .intutil import gcd_list

FACTOR_DEGREE_CAP = 24

Interval = tuple[Fraction, Fraction]


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class IntPolynomial:
    """Immutable integer polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in _strip(coeffs)))

    def __setattr__(self, *a):
        raise AttributeError("IntPolynomial is immutable")

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def content(self) -> int:
        if self.is_zero():
            return 0
        return gcd_list(self.coeffs)

    def primitive(self) -> "IntPolynomial":
        """Primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading < 0:
            c = -c
        return IntPolynomial(a // c for a in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                x = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    parts.append(x)
                elif c == -1:
                    parts.append(f"-{x}")
                else:
                    parts.append(f"{c}*{x}")
        return " + ".join(parts).replace("+ -", "- ")

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(other * c for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __call__(self, x):
        """Evaluate by Horner; exact for int/Fraction arguments."""
        acc = 0 if not self.coeffs else self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def shift(self, k: int) -> "IntPolynomial":
        """p(x + k) by repeated synthetic division."""
        coeffs = list(self.coeffs)
        n = len(coeffs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                coeffs[j] += k * coeffs[j + 1]
        return IntPolynomial(coeffs)

    def reciprocal(self) -> "IntPolynomial":
        return IntPolynomial(reversed(self.coeffs))

    def to_rational(self) -> list[Fraction]:
        return [Fraction(c) for c in self.coeffs]

    def monic_rational(self) -> list[Fraction]:
        lc = Fraction(self.leading)
        return [Fraction(c) / lc for c in self.coeffs]


# --- rational-coefficient helpers ------------------------------------------

def q_strip(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def q_add(a, b):
    n = max(len(a), len(b))
    return q_strip(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    )


def q_scale(a, s):
    return q_strip([c * s for c in a])


def q_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return q_strip(out)


def q_divmod(a, b):
    """Exact division with remainder in Q[x]."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = Fraction(1) / b[-1]
    while len(a) >= len(b) and q_strip(a):
        a = q_strip(a)
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        f = a[-1] * inv
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a.pop()
    return q_strip(q), q_strip(a)


def q_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def q_gcd_monic(a, b):
    """Monic gcd in Q[x]."""
    a, b = q_strip(a), q_strip(b)
    while b:
        _, r = q_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return q_scale(a, Fraction(1) / a[-1])


def q_to_int(p: list[Fraction]) -> IntPolynomial:
    """Clear denominators, returning the primitive integer polynomial."""
    if not p:
        return IntPolynomial([])
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return IntPolynomial(int(c * den) for c in p).primitive()


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    """Primitive squarefree part p / gcd(p, p')."""
    if p.is_zero():
        raise ZeroPolynomial("squarefree part of zero polynomial")
    if p.degree == 0:
        return IntPolynomial([1])
    g = q_gcd_monic(p.to_rational(), p.derivative().to_rational())
    q, r = q_divmod(p.to_rational(), g)
    assert not r
    return q_to_int(q)


# --- Sturm sequences and real root isolation --------------------------------

def sturm_chain(p: IntPolynomial) -> list[list[Fraction]]:
    """Sturm sequence of the squarefree part of p, over Q."""
    sf = squarefree_part(p)
    chain = [sf.to_rational(), sf.derivative().to_rational()]
    while chain[-1]:
        _, r = q_divmod(chain[-2], chain[-1])
        chain.append(q_scale(r, -1))
    chain.pop()
    return chain


def sign_variations(chain, x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = q_eval(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(p: IntPolynomial) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lc = abs(p.leading)
    m = max(abs(c) for c in p.coeffs)
    return Fraction(1) + Fraction(m, lc)


def _nonroot_midpoint(p, lo: Fraction, hi: Fraction) -> Fraction:
    mid = (lo + hi) / 2
    if p(mid) != 0:
        return mid
    # Finitely many roots; a denominator-3 offset always escapes one of them.
    step = (hi - lo) / 3
    for k in (1, 2):
        m = lo + k * step
        if p(m) != 0:
            return m
    # Degenerate only for very short intervals; widen the search.
    for j in range(5, 100, 2):
        m = lo + (hi - lo) / j
        if p(m) != 0:
            return m
    raise AssertionError("could not find non-root midpoint")


def isolate_real_roots(p: IntPolynomial) -> list[Interval]:
    """Disjoint open rational intervals, one per distinct real root of p.

    Intervals (lo, hi) satisfy p(lo) != 0 != p(hi) and contain exactly one
    real root each, ordered increasingly.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    if p.degree == 0:
        return []
    sf = squarefree_part(p)
    if sf.degree == 0:
        return []
    chain = sturm_chain(sf)
    bound = root_bound(sf)
    lo, hi = -bound, bound

    out: list[Interval] = []

    def recurse(a: Fraction, b: Fraction, va: int, vb: int):
        count = va - vb
        if count == 0:
            return
        if count == 1:
            out.append((a, b))
            return
        m = _nonroot_midpoint(sf, a, b)
        vm = sign_variations(chain, m)
        recurse(a, m, va, vm)
        recurse(m, b, vm, vb)

    recurse(lo, hi, sign_variations(chain, lo), sign_variations(chain, hi))
    return sorted(out)


def count_real_roots(p: IntPolynomial) -> int:
    return len(isolate_real_roots(p))


def refine_root(p: IntPolynomial, interval: Interval) -> Interval:
    """Halve an isolating interval of a root of p (p must change sign on it)."""
    lo, hi = interval
    mid = _nonroot_midpoint(p, lo, hi)
    plo = p(lo)
    pmid = p(mid)
    if (plo > 0) != (pmid > 0):
        return (lo, mid)
    return (mid, hi)


def refine_to_width(p: IntPolynomial, interval: Interval, width: Fraction) -> Interval:
    lo, hi = interval
    while hi - lo > width:
        lo, hi = refine_root(p, (lo, hi))
    return (lo, hi)


# --- interval arithmetic (rational endpoints) -------------------------------

def ivl_add(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def ivl_mul(a: Interval, b: Interval) -> Interval:
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(prods), max(prods))


def ivl_scale(a: Interval, s: Fraction) -> Interval:
    if s >= 0:
        return (a[0] * s, a[1] * s)
    return (a[1] * s, a[0] * s)


def poly_eval_interval(coeffs, x: Interval) -> Interval:
    """Interval enclosure of p(x) by Horner over rational intervals."""
    acc: Interval = (Fraction(0), Fraction(0))
    for c in reversed(list(coeffs)):
        acc = ivl_mul(acc, x)
        acc = (acc[0] + c, acc[1] + c)
    return acc


# --- factorization over the rationals ---------------------------------------

def _rational_roots(p: IntPolynomial) -> list[Fraction]:
    """All rational roots, found by the rational root theorem."""
    if p.coeffs[0] == 0:
        roots = [Fraction(0)]
        coeffs = list(p.coeffs)
        while coeffs[0] == 0:
            coeffs.pop(0)
        rest = IntPolynomial(coeffs)
        return roots + ([] if rest.degree == 0 else _rational_roots(rest))
    roots = []
    from .intutil import divisors

    for num in divisors(p.coeffs[0]):
        for den in divisors(p.leading):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if p(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def _try_divide(p: IntPolynomial, f: IntPolynomial):
    q, r = q_divmod(p.to_rational(), f.to_rational())
    if r:
        return None
    if any(c.denominator != 1 for c in q):
        # quotient of primitive polynomials is integral by Gauss's lemma when
        # it exists at all; a fractional quotient means f is not a true factor
        return None
    return IntPolynomial(int(c) for c in q)


def _cluster_factor_squarefree(p: IntPolynomial) -> list[IntPolynomial]:
    """Factor a primitive squarefree polynomial into irreducibles.

    Roots are computed to high precision, then factors are reconstructed
    from root subsets and certified by exact division.  Escalates precision
    until the factorization is complete.
    """
    n = p.degree
    if n <= 1:
        return [p]
    if n > FACTOR_DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds factorization cap {FACTOR_DEGREE_CAP}")

    factors: list[IntPolynomial] = []
    # strip rational roots first: they are cheap and exact
    work = p
    for r in _rational_roots(p):
        lin = IntPolynomial([-r.numerator, r.denominator]).primitive()
        while True:
            q = _try_divide(work, lin)
            if q is None:
                break
            factors.append(lin)
            work = q
    if work.degree <= 0:
        return factors
    if work.degree <= 3:
        # no rational root and degree <= 3: irreducible, exactly
        factors.append(work.primitive())
        return factors

    for dps in (60, 120, 240, 480):
        found = _reconstruct_factors(work, dps)
        if found is not None:
            return factors + found
    raise ArithmeticError(f"factor reconstruction failed for {work}")


def _reconstruct_factors(p: IntPolynomial, dps: int):
    n = p.degree
    lc = p.leading
    with mpmath.workdps(dps):
        try:
            roots = mpmath.polyroots(
                [mpmath.mpf(c) for c in reversed(p.coeffs)], maxsteps=200, extraprec=dps * 2
            )
        except mpmath.libmp.libhyper.NoConvergence:
            return None
        tol = mpmath.mpf(10) ** (-dps // 2)
        remaining = list(range(n))
        out: list[IntPolynomial] = []
        work = p
        size = 1
        while remaining and size <= len(remaining) // 2:
            progressed = False
            for subset in itertools.combinations(remaining, size):
                cand = _subset_to_poly([roots[i] for i in subset], work.leading, tol)
                if cand is None:
                    continue
                q = _try_divide(work, cand)
                if q is None:
                    continue
                out.append(cand)
                work = q
                remaining = [i for i in remaining if i not in subset]
                progressed = True
                break
            if not progressed:
                size += 1
        if work.degree > 0:
            if len(remaining) != work.degree:
                return None
            # declare the remainder irreducible only if its roots round-trip
            # exactly at this precision (guards against missed factors)
            full = _subset_to_poly([roots[i] for i in remaining], work.leading, tol)
            if full is None or _try_divide(work, full) is None:
                return None
            out.append(work.primitive())
        return out


def _subset_to_poly(roots, lc, tol):
    """Expand lc * prod (x - r) and round to integers if within tolerance."""
    coeffs = [mpmath.mpc(1)]
    for r in roots:
        nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= c * r
        coeffs = nxt
    ints = []
    for c in coeffs:
        v = c * lc
        if abs(mpmath.im(v)) > tol:
            return None
        re = mpmath.re(v)
        nearest = mpmath.nint(re)
        if abs(re - nearest) > tol:
            return None
        ints.append(int(nearest))
    cand = IntPolynomial(ints)
    if cand.degree != len(roots):
        return None
    return cand.primitive()


def factor_over_rationals(p: IntPolynomial) -> tuple[int, list[tuple[IntPolynomial, int]]]:
    """Factor p = content * prod(f_i^e_i) with each f_i primitive irreducible.

    Returns (content, [(factor, multiplicity), ...]), factors sorted by
    (degree, coefficients) for determinism.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    content = p.content() * (1 if p.leading > 0 else -1)
    prim = p.primitive()
    if prim.degree == 0:
        return content, []

    # squarefree decomposition by repeated gcd with the derivative
    pieces: list[tuple[IntPolynomial, int]] = []
    work = prim
    mult = 1
    while work.degree > 0:
        sf = squarefree_part(work)
        pieces.append((sf, mult))
        q, r = q_divmod(work.to_rational(), sf.to_rational())
        assert not r
        work = q_to_int(q)
        mult += 1
    # a factor of multiplicity e appears in the first e squarefree layers,
    # so its multiplicity is the number of layers containing it
    factors: dict[IntPolynomial, int] = {}
    layer_factors = [
        _cluster_factor_squarefree(sf) if sf.degree > 0 else [] for sf, _ in pieces
    ]
    for fs in layer_factors:
        for f in fs:
            factors[f] = factors.get(f, 0) + 1
    items = sorted(factors.items(), key=lambda kv: (kv[0].degree, kv[0].coeffs))
    # validate exactly: content * prod f^e == p
    check = IntPolynomial([content])
    for f, e in items:
        for _ in range(e):
            check = check * f
    if check != p:
        raise ArithmeticError("factorization self-check failed")
    return content, items


def is_irreducible(p: IntPolynomial) -> bool:
    if p.degree <= 0:
        return False
    if p.degree == 1:
        return True
    _, factors = factor_over_rationals(p)
    return len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree == p.degree
