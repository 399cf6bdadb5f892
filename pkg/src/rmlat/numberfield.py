"""Real number fields with a distinguished real embedding, and exact
arithmetic on their elements.

A RealNumberField is Q[x]/(p) for a primitive irreducible integer polynomial
p together with the choice of one real root (an index into the sorted list of
isolating intervals).  An AlgebraicReal is a rational coordinate vector in
the power basis of its field.  Signs, floors and comparisons are decided
exactly: coordinates decide zeroness symbolically, interval bisection with
rational endpoints decides everything else, and degree <= 2 elements take an
integer square-root fast path.

Common fields for elements of different fields are built on demand as a
compositum via the characteristic polynomial of multiplication by a + k*b on
the tensor algebra (a resultant computation), capped at degree 24.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .errors import CompositumTooLarge, ZeroPolynomial
from .intutil import floor_quadratic
from .polynomials import (
    IntPolynomial,
    factor_over_rationals,
    isolate_real_roots,
    ivl_add,
    ivl_scale,
    poly_eval_interval,
    q_divmod,
    q_mul,
    q_strip,
    q_to_int,
    refine_root,
)

COMPOSITUM_DEGREE_CAP = 24

_irreducible_cache: dict[tuple, bool] = {}
_interval_cache: dict[tuple, tuple[Fraction, Fraction]] = {}
_compositum_cache: dict[tuple, "Compositum"] = {}


def _check_irreducible(poly: IntPolynomial) -> bool:
    key = poly.coeffs
    if key not in _irreducible_cache:
        _, factors = factor_over_rationals(poly)
        _irreducible_cache[key] = (
            len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree == poly.degree
        )
    return _irreducible_cache[key]


class RealNumberField:
    """Q[x]/(p) with a distinguished real root of p."""

    __slots__ = ("poly", "root_index", "isolating", "degree", "_power_table", "_quad")

    def __init__(self, poly: IntPolynomial, root_interval):
        poly = poly.primitive()
        if poly.degree < 1:
            raise ValueError("defining polynomial must have positive degree")
        if not _check_irreducible(poly):
            raise ValueError(f"defining polynomial {poly} is reducible")
        roots = isolate_real_roots(poly)
        if not roots:
            raise ValueError("defining polynomial has no real root")
        lo, hi = Fraction(root_interval[0]), Fraction(root_interval[1])
        idx = _locate_root(poly, roots, (lo, hi))
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "root_index", idx)
        object.__setattr__(self, "isolating", roots[idx])
        object.__setattr__(self, "degree", poly.degree)
        object.__setattr__(self, "_power_table", None)
        object.__setattr__(self, "_quad", None)

    def __setattr__(self, *a):
        raise AttributeError("RealNumberField is immutable")

    @classmethod
    def from_root_index(cls, poly: IntPolynomial, index: int) -> "RealNumberField":
        roots = isolate_real_roots(poly)
        return cls(poly, roots[index])

    @classmethod
    def rationals(cls) -> "RealNumberField":
        return cls(IntPolynomial([0, 1]), (Fraction(-1), Fraction(1)))

    def key(self):
        return (self.poly.coeffs, self.root_index)

    def __eq__(self, other):
        return isinstance(other, RealNumberField) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        lo, hi = self.isolating
        return f"RealNumberField({self.poly}, root in [{lo}, {hi}])"

    def real_embedding_count(self) -> int:
        return len(isolate_real_roots(self.poly))

    def sibling(self, root_index: int) -> "RealNumberField":
        """Same field abstractly, different real embedding."""
        return RealNumberField.from_root_index(self.poly, root_index)

    # -- embedding interval, shared and shrinking ----------------------------

    def interval(self) -> tuple[Fraction, Fraction]:
        return _interval_cache.get(self.key(), self.isolating)

    def refine(self) -> tuple[Fraction, Fraction]:
        cur = self.interval()
        nxt = refine_root(self.poly, cur)
        _interval_cache[self.key()] = nxt
        return nxt

    def refine_to_width(self, width: Fraction) -> tuple[Fraction, Fraction]:
        cur = self.interval()
        while cur[1] - cur[0] > width:
            cur = self.refine()
        return cur

    # -- power basis reduction ------------------------------------------------

    def power_table(self):
        """alpha^k as coordinate vectors for k = 0 .. 2(d-1)."""
        tbl = self._power_table
        if tbl is None:
            d = self.degree
            monic = self.poly.monic_rational()
            tbl = []
            cur = [Fraction(0)] * d
            cur[0] = Fraction(1)
            for k in range(2 * d - 1):
                tbl.append(tuple(cur))
                # multiply by alpha: shift, reduce by monic defining poly
                shifted = [Fraction(0)] + list(cur)
                if len(shifted) > d:
                    top = shifted.pop()
                    for i in range(d):
                        shifted[i] -= top * monic[i]
                cur = shifted + [Fraction(0)] * (d - len(shifted))
            object.__setattr__(self, "_power_table", tbl)
        return tbl

    def quad_data(self):
        """(delta, s) with the field generator equal to (-c1 + s*sqrt(delta)) / (2*c2)."""
        if self.degree != 2:
            raise ValueError("quad_data requires a quadratic field")
        qd = self._quad
        if qd is None:
            c0, c1, c2 = self.poly.coeffs
            delta = c1 * c1 - 4 * c0 * c2
            s = -1 if self.root_index == 0 else 1  # c2 > 0 after primitivize
            qd = (delta, s)
            object.__setattr__(self, "_quad", qd)
        return qd

    def element(self, coords) -> "AlgebraicReal":
        return AlgebraicReal(self, coords)

    def generator(self) -> "AlgebraicReal":
        coords = [Fraction(0)] * self.degree
        if self.degree == 1:
            # the root itself is rational: -c0/c1
            c0, c1 = self.poly.coeffs
            coords[0] = Fraction(-c0, c1)
        else:
            coords[1] = Fraction(1)
        return AlgebraicReal(self, coords)

    def zero(self) -> "AlgebraicReal":
        return AlgebraicReal(self, [Fraction(0)] * self.degree)

    def one(self) -> "AlgebraicReal":
        return self.from_rational(1)

    def from_rational(self, q) -> "AlgebraicReal":
        coords = [Fraction(0)] * self.degree
        coords[0] = Fraction(q)
        return AlgebraicReal(self, coords)


def _locate_root(poly, roots, interval) -> int:
    """Index of the isolating interval whose root the given interval contains."""
    lo, hi = interval
    if poly(lo) == 0 or poly(hi) == 0:
        # nudge endpoints off roots (can only happen for degree-1 input)
        raise ValueError("interval endpoints must not be roots")
    while True:
        for idx, (a, b) in enumerate(roots):
            if a <= lo and hi <= b:
                return idx
        candidates = [
            idx for idx, (a, b) in enumerate(roots) if not (hi <= a or b <= lo)
        ]
        if not candidates:
            raise ValueError("interval contains no root of the defining polynomial")
        if (poly(lo) > 0) == (poly(hi) > 0):
            raise ValueError("interval does not isolate a root (no sign change)")
        lo, hi = refine_root(poly, (lo, hi))


_QQ = None


def rationals_field() -> RealNumberField:
    global _QQ
    if _QQ is None:
        _QQ = RealNumberField.rationals()
    return _QQ


class AlgebraicReal:
    """Element of a RealNumberField: rational coordinates in the power basis.

    Structural equality and hashing (same field, same coordinates) make these
    usable as dict keys; use compare() for semantic order/equality across
    fields.
    """

    __slots__ = ("field", "coords", "_minpoly")

    def __init__(self, field: RealNumberField, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) != field.degree:
            raise ValueError("coordinate length must equal the field degree")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", tuple(coords))
        object.__setattr__(self, "_minpoly", None)

    def __setattr__(self, *a):
        raise AttributeError("AlgebraicReal is immutable")

    @classmethod
    def from_rational(cls, q) -> "AlgebraicReal":
        return rationals_field().from_rational(q)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraicReal)
            and self.field == other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.field.key(), self.coords))

    def __repr__(self):
        return f"AlgebraicReal({self.to_canonical()!r})"

    # -- basic predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coords[0]

    # -- arithmetic (same field; int/Fraction scalars allowed) ----------------

    def _coerce(self, other):
        if isinstance(other, AlgebraicReal):
            if other.field != self.field:
                raise ValueError("elements live in different fields; lift first")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgebraicReal(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgebraicReal(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicReal(self.field, [a * other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.field.degree
        if d == 1:
            return AlgebraicReal(self.field, [self.coords[0] * other.coords[0]])
        table = self.field.power_table()
        out = [Fraction(0)] * d
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b == 0:
                    continue
                ab = a * b
                row = table[i + j]
                for k in range(d):
                    if row[k]:
                        out[k] += ab * row[k]
        return AlgebraicReal(self.field, out)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicReal":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        d = self.field.degree
        if d == 1 or self.is_rational():
            inv = 1 / self.coords[0]
            out = [Fraction(0)] * d
            out[0] = inv
            return AlgebraicReal(self.field, out)
        if d == 2:
            # conjugate / norm closed form
            c0, c1, c2 = self.field.poly.coeffs
            u, v = self.coords
            tr = Fraction(-c1, c2)   # alpha + alpha'
            nm = Fraction(c0, c2)    # alpha * alpha'
            norm = u * u + u * v * tr + v * v * nm
            # conj = (u + v*tr) - v*alpha
            return AlgebraicReal(self.field, [(u + v * tr) / norm, -v / norm])
        # extended Euclid in Q[x] against the monic defining polynomial
        monic = self.field.poly.monic_rational()
        a = q_strip(list(self.coords))
        r0, r1 = monic, a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = q_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _q_sub(s0, q_mul(q, s1))
        # r0 = gcd = constant (irreducible modulus); s0 * a = r0 mod p
        c = r0[0]
        inv_coeffs = [x / c for x in s0]
        _, rem = q_divmod(inv_coeffs, monic)
        rem = rem + [Fraction(0)] * (d - len(rem))
        return AlgebraicReal(self.field, rem)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return AlgebraicReal(self.field, [a / f for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- exact decisions -------------------------------------------------------

    def _quad_form(self):
        """(a, b, delta): value = a + b*sqrt(delta), for degree-2 fields."""
        delta, s = self.field.quad_data()
        _, c1, c2 = self.field.poly.coeffs
        u, v = self.coords
        a = u - v * Fraction(c1, 2 * c2)
        b = Fraction(s, 1) * v / (2 * c2)
        return a, b, delta

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.coords[0] > 0 else -1
        if self.field.degree == 2:
            a, b, delta = self._quad_form()
            return _sign_quad(a, b, delta)
        lo, hi = self.value_interval()
        while lo <= 0 <= hi:
            self.field.refine()
            lo, hi = self.value_interval()
        return 1 if lo > 0 else -1

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.coords[0])
        if self.field.degree == 2:
            a, b, delta = self._quad_form()
            m = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
            return floor_quadratic(int(a * m), int(b * m), m, delta)
        lo, hi = self.value_interval()
        while math.floor(lo) != math.floor(hi):
            self.field.refine()
            lo, hi = self.value_interval()
        return math.floor(lo)

    def frac(self) -> "AlgebraicReal":
        return self - self.floor()

    def value_interval(self) -> tuple[Fraction, Fraction]:
        return poly_eval_interval(self.coords, self.field.interval())

    def interval_of_width(self, width: Fraction) -> tuple[Fraction, Fraction]:
        lo, hi = self.value_interval()
        while hi - lo > width:
            self.field.refine()
            lo, hi = self.value_interval()
        return lo, hi

    def minimal_polynomial(self) -> IntPolynomial:
        cached = self._minpoly
        if cached is None:
            cached = _minimal_polynomial(self)
            object.__setattr__(self, "_minpoly", cached)
        return cached

    def degree(self) -> int:
        if self.is_rational():
            return 1
        return self.minimal_polynomial().degree

    def compare(self, other) -> int:
        """-1, 0, or 1; exact, works across fields."""
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if self.field == other.field:
            return (self - other).sign()
        if self.is_rational() or other.is_rational():
            if self.is_rational() and other.is_rational():
                a, b = self.coords[0], other.coords[0]
                return (a > b) - (a < b)
            if self.is_rational():
                return -other.compare(self.coords[0])
            return (self - other.coords[0]).sign()
        # semantic equality: same minimal polynomial and same root of it
        p, q = self.minimal_polynomial(), other.minimal_polynomial()
        if p == q:
            if self._root_index_of(p) == other._root_index_of(p):
                return 0
        # distinct numbers: shrink intervals until they separate
        while True:
            a = self.value_interval()
            b = other.value_interval()
            if a[1] < b[0]:
                return -1
            if b[1] < a[0]:
                return 1
            self.field.refine()
            other.field.refine()

    def _root_index_of(self, p: IntPolynomial) -> int:
        roots = isolate_real_roots(p)
        lo, hi = self.value_interval()
        while True:
            for idx, (a, b) in enumerate(roots):
                if a <= lo and hi <= b:
                    return idx
            self.field.refine()
            lo, hi = self.value_interval()

    def equals(self, other) -> bool:
        return self.compare(other) == 0

    def __float__(self):
        lo, hi = self.interval_of_width(Fraction(1, 10**17))
        return float((lo + hi) / 2)

    def value_mp(self, dps: int = 50):
        """High-precision mpmath value of this element."""
        with mpmath.workdps(dps + 10):
            root = _field_root_mp(self.field, dps + 10)
            acc = mpmath.mpf(0)
            for c in reversed(self.coords):
                acc = acc * root + mpmath.mpf(c.numerator) / c.denominator
            return +acc

    def conjugate_in(self, sibling: RealNumberField) -> "AlgebraicReal":
        """Same coordinates read in another real embedding of the same field."""
        if sibling.poly != self.field.poly:
            raise ValueError("not a sibling embedding")
        return AlgebraicReal(sibling, self.coords)

    # -- canonical text form ---------------------------------------------------

    def to_canonical(self) -> str:
        lo, hi = self.field.isolating
        poly = ",".join(str(c) for c in self.field.poly.coeffs)
        root = f"{lo.numerator}/{lo.denominator},{hi.numerator}/{hi.denominator}"
        coords = ",".join(_frac_str(c) for c in self.coords)
        return f"poly={poly};root={root};coords={coords}"


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_canonical(text: str) -> AlgebraicReal:
    """Inverse of AlgebraicReal.to_canonical."""
    parts = dict(
        kv.split("=", 1) for kv in text.strip().split(";") if kv
    )
    for key in ("poly", "root", "coords"):
        if key not in parts:
            raise ValueError(f"canonical form missing '{key}': {text!r}")
    poly = IntPolynomial(int(c) for c in parts["poly"].split(","))
    lo_s, hi_s = parts["root"].split(",")
    field = RealNumberField(poly, (Fraction(lo_s), Fraction(hi_s)))
    coords = [Fraction(c) for c in parts["coords"].split(",")]
    return AlgebraicReal(field, coords)


def _q_sub(a, b):
    n = max(len(a), len(b))
    return q_strip(
        [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    )


def _sign_quad(a: Fraction, b: Fraction, delta: int) -> int:
    if b == 0:
        return 0 if a == 0 else (1 if a > 0 else -1)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    t = a * a - b * b * delta
    if a > 0:  # b < 0
        return 1 if t > 0 else -1
    return -1 if t > 0 else 1  # a < 0, b > 0; t != 0 since delta non-square


def _minimal_polynomial(x: AlgebraicReal) -> IntPolynomial:
    if x.is_rational():
        c = x.coords[0]
        return IntPolynomial([-c.numerator, c.denominator]).primitive()
    d = x.field.degree
    # coordinates of successive powers of x; stop at the first dependence
    power = x.field.one()
    basis = []  # (reduced coordinate row, expression in powers of x, pivot)
    for k in range(d + 1):
        vec = list(power.coords)
        combo = [Fraction(0)] * (d + 1)
        combo[k] = Fraction(1)
        for rvec, rcombo, piv in basis:
            f = vec[piv]
            if f:
                vec = [a - f * b for a, b in zip(vec, rvec)]
                combo = [a - f * b for a, b in zip(combo, rcombo)]
        piv = next((i for i, v in enumerate(vec) if v != 0), None)
        if piv is None:
            out = q_to_int(q_strip(combo))
            assert _annihilates(out, x)
            return out
        inv = 1 / vec[piv]
        basis.append(([v * inv for v in vec], [c * inv for c in combo], piv))
        power = power * x
    raise AssertionError("no dependence found within field degree")


def _annihilates(p: IntPolynomial, x: AlgebraicReal) -> bool:
    acc = x.field.zero()
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc.is_zero()


def minimal_polynomial(x: AlgebraicReal) -> IntPolynomial:
    """Primitive irreducible integer polynomial annihilating x (positive lc)."""
    return x.minimal_polynomial()


def compare(x: AlgebraicReal, y) -> int:
    return x.compare(y)


def floor(x: AlgebraicReal) -> int:
    return x.floor()


_root_mp_cache: dict[tuple, tuple[int, object]] = {}


def _field_root_mp(field: RealNumberField, dps: int):
    key = field.key()
    cached = _root_mp_cache.get(key)
    if cached and cached[0] >= dps:
        return +cached[1]
    lo, hi = field.refine_to_width(Fraction(1, 2**40))
    with mpmath.workdps(dps + 20):
        coeffs = [mpmath.mpf(c) for c in reversed(field.poly.coeffs)]
        mid = (
            mpmath.mpf(lo.numerator) / lo.denominator
            + mpmath.mpf(hi.numerator) / hi.denominator
        ) / 2
        root = mpmath.re(mpmath.findroot(lambda t: mpmath.polyval(coeffs, t), mid))
        width = mpmath.mpf(hi.numerator) / hi.denominator - mpmath.mpf(
            lo.numerator
        ) / lo.denominator
        assert abs(root - mid) <= 4 * width + mpmath.mpf(10) ** (-dps)
    _root_mp_cache[key] = (dps, root)
    return root


# --- compositum --------------------------------------------------------------

class Compositum:
    """Common field H for two fields F, G, with exact lifting maps."""

    def __init__(self, field, alpha, beta, k):
        self.field = field            # H
        self.alpha = alpha            # image of F's generator in H
        self.beta = beta              # image of G's generator in H
        self.k = k

    def lift_left(self, x: AlgebraicReal) -> AlgebraicReal:
        return _eval_coords(x.coords, self.alpha)

    def lift_right(self, x: AlgebraicReal) -> AlgebraicReal:
        return _eval_coords(x.coords, self.beta)


def _eval_coords(coords, gen: AlgebraicReal) -> AlgebraicReal:
    acc = gen.field.zero()
    for c in reversed(coords):
        acc = acc * gen + c
    return acc


def compositum(F: RealNumberField, G: RealNumberField) -> Compositum:
    """Field containing copies of F and G, respecting the real embeddings."""
    if F == G:
        gen = F.generator()
        return Compositum(F, gen, gen, 0)
    key = (F.key(), G.key())
    if key in _compositum_cache:
        return _compositum_cache[key]
    if F.degree == 1:
        comp = Compositum(G, G.from_rational(F.generator().as_fraction()), G.generator(), 0)
        _compositum_cache[key] = comp
        return comp
    if G.degree == 1:
        comp = Compositum(F, F.generator(), F.from_rational(G.generator().as_fraction()), 0)
        _compositum_cache[key] = comp
        return comp
    if F.degree * G.degree > COMPOSITUM_DEGREE_CAP:
        raise CompositumTooLarge(
            f"compositum degree bound {COMPOSITUM_DEGREE_CAP} exceeded: "
            f"{F.degree} * {G.degree}"
        )
    for k in _shift_sequence():
        comp = _try_compositum(F, G, k)
        if comp is not None:
            _compositum_cache[key] = comp
            return comp
    raise AssertionError("no valid primitive-element shift found")


def _shift_sequence():
    k = 1
    while k <= 50:
        yield k
        yield -k
        k += 1


def _try_compositum(F, G, k):
    from .linalg import charpoly_fraction

    dF, dG = F.degree, G.degree
    n = dF * dG
    pF = F.poly.monic_rational()
    pG = G.poly.monic_rational()

    # multiplication matrix of gamma = a + k*b on basis a^i b^j
    def idx(i, j):
        return i * dG + j

    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(dF):
        for j in range(dG):
            col = idx(i, j)
            # a * a^i b^j
            if i + 1 < dF:
                M[idx(i + 1, j)][col] += 1
            else:
                for t in range(dF):
                    M[idx(t, j)][col] -= pF[t]
            # k * b * a^i b^j
            if j + 1 < dG:
                M[idx(i, j + 1)][col] += k
            else:
                for t in range(dG):
                    M[idx(i, t)][col] -= k * pG[t]

    char = charpoly_fraction(M)  # resultant of the two defining polynomials
    char_int = q_to_int(char)
    _, factors = factor_over_rationals(char_int)

    # which irreducible factor vanishes at the real number alpha + k*beta?
    target = _select_vanishing_factor([f for f, _ in factors], F, G, k)
    if target is None:
        return None

    H = RealNumberField(target, _gamma_interval(F, G, k))
    gamma = H.generator()

    # beta is the unique common root of pG(y) and pF(gamma - k y) in H
    lift_q = [H.from_rational(c) for c in pG]
    shifted = _compose_linear(pF, gamma, -k, H)
    g = _field_poly_gcd(lift_q, shifted)
    if len(g) != 2:
        return None
    beta = -(g[0] / g[1])
    alpha = gamma - beta * k

    # certify embeddings: alpha, beta must denote the chosen real roots
    if _root_index_in(alpha, F.poly) != F.root_index:
        return None
    if _root_index_in(beta, G.poly) != G.root_index:
        return None
    return Compositum(H, alpha, beta, k)


def _gamma_interval(F, G, k):
    a = F.refine_to_width(Fraction(1, 2**24))
    b = G.refine_to_width(Fraction(1, 2**24))
    kb = ivl_scale(b, Fraction(k))
    return ivl_add(a, kb)


def _select_vanishing_factor(candidates, F, G, k):
    """The unique candidate whose interval evaluation pins zero at alpha+k*beta."""
    width = Fraction(1, 2**20)
    for _ in range(60):
        a = F.refine_to_width(width)
        b = G.refine_to_width(width)
        gamma_iv = ivl_add(a, ivl_scale(b, Fraction(k)))
        live = []
        for f in candidates:
            lo, hi = poly_eval_interval(f.to_rational(), gamma_iv)
            if lo <= 0 <= hi:
                live.append(f)
        if len(live) == 1:
            return live[0]
        if not live:
            raise AssertionError("no factor vanishes at the primitive element")
        width /= 2**8
    return live[0] if len(live) == 1 else None


def _compose_linear(p: list, gamma: AlgebraicReal, k: int, H) -> list:
    """p(gamma + k*y) for rational coefficients p, as a polynomial in y over H."""
    acc = [H.from_rational(p[-1])]
    for c in reversed(p[:-1]):
        # acc = acc * (gamma + k*y) + c
        nxt = [H.zero() for _ in range(len(acc) + 1)]
        for i, coeff in enumerate(acc):
            nxt[i] = nxt[i] + coeff * gamma
            nxt[i + 1] = nxt[i + 1] + coeff * k
        nxt[0] = nxt[0] + c
        acc = nxt
    while acc and acc[-1].is_zero():
        acc.pop()
    return acc


def _field_poly_gcd(a: list, b: list) -> list:
    """Monic gcd of polynomials with AlgebraicReal coefficients (one field)."""
    a, b = list(a), list(b)

    def strip(p):
        while p and p[-1].is_zero():
            p.pop()
        return p

    a, b = strip(a), strip(b)
    while b:
        # remainder of a by b
        r = list(a)
        inv = b[-1].inverse()
        while len(r) >= len(b):
            r = strip(r)
            if len(r) < len(b):
                break
            f = r[-1] * inv
            off = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + off] = r[i + off] - f * c
            r.pop()
        a, b = b, strip(r)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _root_index_in(x: AlgebraicReal, p: IntPolynomial) -> int:
    """Which real root of p the element x is; x must satisfy p(x) = 0."""
    assert _annihilates_poly(p, x)
    roots = isolate_real_roots(p)
    lo, hi = x.value_interval()
    while True:
        for idx, (a, b) in enumerate(roots):
            if a <= lo and hi <= b:
                return idx
        x.field.refine()
        lo, hi = x.value_interval()


def _annihilates_poly(p: IntPolynomial, x: AlgebraicReal) -> bool:
    acc = x.field.zero()
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc.is_zero()


def common_field(x: AlgebraicReal, y: AlgebraicReal):
    """Lift two elements into one field; returns (x', y')."""
    if x.field == y.field:
        return x, y
    comp = compositum(x.field, y.field)
    return comp.lift_left(x), comp.lift_right(y)
