"""Real quadratic orders: units, form class groups, ideal classes and
field-theoretic diagnostics.

Class groups are computed through reduction cycles of indefinite binary
quadratic forms (cycles of the reduction operator rho are exactly the proper
equivalence classes, i.e. the narrow class group).  Fundamental units come
from the integer continued fraction of (sigma + sqrt(D))/2, composed around
one minimal period.  Everything is integer- or Fraction-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DiagnosticSkipped, InvalidDiscriminant, WrongOrder
from .intutil import divisors, floor_quadratic, is_square, split_discriminant, squarefree_decomposition
from .numberfield import AlgebraicReal, RealNumberField, compositum
from .polynomials import IntPolynomial, isolate_real_roots
from .pseudolattice import PseudoLattice, RMCertificate, endomorphism_ring


@dataclass(frozen=True)
class QuadOrder:
    """Order of discriminant D = f^2 d_K in the real quadratic field Q(sqrt(d_K))."""

    d_K: int
    f: int
    D: int

    def field(self) -> RealNumberField:
        """Q(sqrt(D)) with the positive embedding of sqrt(D)."""
        return _sqrt_field(self.D)

    def sqrt_D(self) -> AlgebraicReal:
        return self.field().generator()


_sqrt_fields: dict[int, RealNumberField] = {}


def _sqrt_field(D: int) -> RealNumberField:
    if D not in _sqrt_fields:
        r = math.isqrt(D)
        _sqrt_fields[D] = RealNumberField(IntPolynomial([-D, 0, 1]), (r, r + 1))
    return _sqrt_fields[D]


def order_from_disc(D: int) -> QuadOrder:
    if D <= 0 or D % 4 not in (0, 1) or is_square(D):
        raise InvalidDiscriminant(f"{D} is not a positive non-square discriminant")
    d_K, f = split_discriminant(D)
    return QuadOrder(d_K=d_K, f=f, D=D)


# --- indefinite binary quadratic forms ---------------------------------------

@dataclass(frozen=True)
class IndefiniteForm:
    a: int
    b: int
    c: int

    @property
    def D(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        """|sqrt(D) - 2|a|| < b < sqrt(D), decided in integers."""
        D = self.D
        b = self.b
        if b <= 0 or b * b >= D:
            return False
        ta = 2 * abs(self.a)
        if D >= (b + ta) ** 2:
            return False
        return ta <= b or (ta - b) ** 2 < D

    def conjugate(self) -> "IndefiniteForm":
        return IndefiniteForm(self.a, -self.b, self.c)

    def negated(self) -> "IndefiniteForm":
        return IndefiniteForm(-self.a, self.b, -self.c)

    def rho(self) -> "IndefiniteForm":
        """One reduction step (a, b, c) -> (c, r, (r^2 - D)/(4c))."""
        D = self.D
        c = self.c
        tc = 2 * abs(c)
        if c * c > D:
            r = (-self.b) % tc
            if r > abs(c):
                r -= tc
        else:
            w = math.isqrt(D)  # floor(sqrt(D)), D non-square
            r = w - ((w + self.b) % tc)
        cc = (r * r - D) // (4 * c)
        assert (r * r - D) % (4 * c) == 0
        return IndefiniteForm(c, r, cc)

    def reduce(self) -> "IndefiniteForm":
        f = self
        for _ in range(10000):
            if f.is_reduced():
                return f
            f = f.rho()
        raise AssertionError(f"reduction did not terminate for {self}")

    def cycle(self) -> list["IndefiniteForm"]:
        """The rho-cycle through the reduction of this form."""
        start = self.reduce()
        out = [start]
        cur = start.rho()
        while cur != start:
            out.append(cur)
            cur = cur.rho()
        return out


def principal_form(D: int) -> IndefiniteForm:
    s = D % 2
    return IndefiniteForm(1, s, (s * s - D) // 4)


def reduced_forms(D: int) -> list[IndefiniteForm]:
    """All primitive reduced forms of discriminant D > 0."""
    out = []
    b = 2 - (D % 2)
    while b * b < D:
        n = (D - b * b) // 4
        for a in divisors(n):
            c = n // a
            for f in (IndefiniteForm(a, b, -c), IndefiniteForm(-a, b, c)):
                if f.is_primitive() and f.is_reduced():
                    out.append(f)
        b += 2
    return sorted(out, key=lambda f: (f.a, f.b, f.c))


def compose_forms(f1: IndefiniteForm, f2: IndefiniteForm) -> IndefiniteForm:
    """Gauss composition via united forms; result is reduced."""
    D = f1.D
    assert f2.D == D
    g2 = _with_coprime_first(f2, f1.a)
    a1, b1 = f1.a, f1.b
    a2, b2 = g2.a, g2.b
    # b = b1 mod 2a1, b = b2 mod 2a2; moduli share only the factor 2
    B = _crt(b1, 2 * a1, b2, 2 * a2)
    A = a1 * a2
    C = (B * B - D) // (4 * A)
    assert (B * B - D) % (4 * A) == 0
    return IndefiniteForm(A, B, C).reduce()


def _with_coprime_first(f: IndefiniteForm, n: int) -> IndefiniteForm:
    """A properly equivalent form whose first coefficient is coprime to n."""
    if math.gcd(f.a, n) == 1:
        return f
    bound = 1
    while bound < 200:
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if math.gcd(x, y) != 1:
                    continue
                m = f.a * x * x + f.b * x * y + f.c * y * y
                if m != 0 and math.gcd(m, n) == 1:
                    return _transform_to_first(f, x, y, m)
        bound *= 2
    raise AssertionError("no represented value coprime to the target was found")


def _transform_to_first(f: IndefiniteForm, x: int, y: int, m: int) -> IndefiniteForm:
    # complete (x, y) to a unimodular matrix [[x, r], [y, s]]
    g, s, r = _ext_gcd(x, y)
    assert g == 1
    r = -r
    # f(xX + rY, yX + sY): first coefficient m
    b_new = 2 * (f.a * x * r + f.c * y * s) + f.b * (x * s + y * r)
    c_new = f.a * r * r + f.b * r * s + f.c * s * s
    out = IndefiniteForm(m, b_new, c_new)
    assert out.D == f.D
    return out


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    g = math.gcd(m1, m2)
    assert (r2 - r1) % g == 0
    lcm = m1 // g * m2
    _, inv, _ = _ext_gcd(m1 // g, m2 // g)
    t = ((r2 - r1) // g * inv) % (m2 // g)
    return (r1 + m1 * t) % lcm


# --- fundamental units --------------------------------------------------------

@dataclass(frozen=True)
class FundamentalUnit:
    value: AlgebraicReal  # epsilon > 1 in Q(sqrt(D))
    norm: int             # +1 or -1
    period_length: int

    def as_half_integers(self) -> tuple[int, int]:
        """(t, u) with epsilon = (t + u*sqrt(D)) / 2."""
        x, y = self.value.coords
        return (int(2 * x), int(2 * y))


def fundamental_unit(order: QuadOrder) -> FundamentalUnit:
    """Smallest unit > 1 of the order, from one period of the continued
    fraction of (sigma + sqrt(D))/2; certified by its Pell identity."""
    D = order.D
    sigma = D % 2
    P, Q = sigma, 2
    seen: dict[tuple[int, int], int] = {(P, Q): 0}
    states = [(P, Q)]
    digits: list[int] = []
    while True:
        d = floor_quadratic(P, 1, Q, D) if Q > 0 else floor_quadratic(-P, -1, -Q, D)
        digits.append(d)
        P = d * Q - P
        Q = (D - P * P) // Q
        state = (P, Q)
        if state in seen:
            j = seen[state]
            period = digits[j:]
            Pj, Qj = states[j]
            break
        seen[state] = len(digits)
        states.append(state)
    m = ((1, 0), (0, 1))
    for d in period:
        m = ((m[0][0] * d + m[0][1], m[0][0]), (m[1][0] * d + m[1][1], m[1][0]))
    fld = _sqrt_field(D)
    sqrtD = fld.generator()
    omega_j = (sqrtD + Pj) * Fraction(1, Qj)
    eps = omega_j * m[1][0] + m[1][1]
    # Pell certificate: conjugate has the mirrored sqrt(D) coordinate
    x, y = eps.coords
    norm_val = x * x - Fraction(D) * y * y
    assert norm_val.denominator == 1 and abs(norm_val) == 1
    assert eps.compare(1) > 0
    assert (2 * x).denominator == 1 and (2 * y).denominator == 1
    assert (int(2 * x) - int(2 * y) * D) % 2 == 0
    return FundamentalUnit(value=eps, norm=int(norm_val), period_length=len(period))


# --- class groups --------------------------------------------------------------

@dataclass
class ClassGroup:
    """Narrow (form) class group plus the wide class number."""

    order: QuadOrder
    classes: list[IndefiniteForm]          # lexicographic cycle representatives
    cycles: list[list[IndefiniteForm]]
    h: int
    h_plus: int
    identity: int
    table: list[list[int]]                 # composition on class indices
    unit: FundamentalUnit
    _locate: dict = field(default_factory=dict, repr=False)

    def class_of(self, form: IndefiniteForm) -> int:
        red = form.reduce()
        return self._locate[red]

    def compose(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.class_of(self.classes[i].conjugate())


def class_group(order: QuadOrder) -> ClassGroup:
    D = order.D
    forms = reduced_forms(D)
    locate: dict[IndefiniteForm, int] = {}
    cycles: list[list[IndefiniteForm]] = []
    for f in forms:
        if f in locate:
            continue
        cyc = f.cycle()
        idx = len(cycles)
        cycles.append(cyc)
        for g in cyc:
            locate[g] = idx
    reps = [min(cyc, key=lambda f: (f.a, f.b, f.c)) for cyc in cycles]
    h_plus = len(cycles)
    identity = locate[principal_form(D).reduce()]
    table = [
        [locate[compose_forms(reps[i], reps[j])] for j in range(h_plus)]
        for i in range(h_plus)
    ]
    unit = fundamental_unit(order)
    h = h_plus if unit.norm == -1 else h_plus // 2
    if unit.norm == 1:
        assert h_plus % 2 == 0
    cg = ClassGroup(
        order=order,
        classes=reps,
        cycles=cycles,
        h=h,
        h_plus=h_plus,
        identity=identity,
        table=table,
        unit=unit,
        _locate=locate,
    )
    _verify_group_axioms(cg)
    return cg


def _verify_group_axioms(cg: ClassGroup) -> None:
    n = cg.h_plus
    e = cg.identity
    for i in range(n):
        assert cg.table[e][i] == i and cg.table[i][e] == i, "identity fails"
        inv = cg.inverse(i)
        assert cg.table[i][inv] == e, "inverse fails"
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if cg.table[cg.table[i][j]][k] != cg.table[i][cg.table[j][k]]:
                    raise AssertionError("associativity fails")


# --- ideal classes of pseudo-lattices ------------------------------------------

def form_of_lattice(m: PseudoLattice) -> tuple[IndefiniteForm, RMCertificate]:
    """Primitive form attached to a rank-2 module via its canonical basis ratio,
    normalized to theta in (0, 1)."""
    cert = endomorphism_ring(m)
    if not isinstance(cert, RMCertificate):
        raise WrongOrder("module does not have real multiplication")
    theta = cert.theta
    theta = theta - theta.floor()  # in (0,1), module unchanged
    poly = theta.minimal_polynomial()
    c, b, a = poly.coeffs
    return IndefiniteForm(a, b, c), cert


def ideal_class_of(m: PseudoLattice, order: QuadOrder, cg: ClassGroup | None = None) -> int:
    """Index of m's class in the form (narrow) class group of the order."""
    form, cert = form_of_lattice(m)
    if cert.D != order.D:
        raise WrongOrder(f"module order has D = {cert.D}, expected {order.D}")
    if cg is None:
        cg = class_group(order)
    return cg.class_of(form)


# --- unit membership ------------------------------------------------------------

@dataclass(frozen=True)
class UnitMembership:
    is_unit: bool
    note: str | None = None


def is_unit_of(x: AlgebraicReal, order: QuadOrder) -> UnitMembership:
    """Is x an element of the order with |norm| = 1?"""
    if x.is_rational():
        q = x.as_fraction()
        return UnitMembership(q == 1 or q == -1)
    poly = x.minimal_polynomial()
    if poly.degree > 2:
        return UnitMembership(False, f"degree {poly.degree} > 2")
    c, b, a = poly.coeffs
    disc = b * b - 4 * a * c
    s_x, m_x = squarefree_decomposition(disc)
    s_D, m_D = squarefree_decomposition(order.D)
    if m_x != m_D:
        return UnitMembership(False, "generates a different quadratic field")
    # x = t/2 + (u/2) sqrt(D) with t = -b/a, u = +- s_x / (a s_D)
    t = Fraction(-b, a)
    u = Fraction(s_x, a * s_D)
    if x.compare(Fraction(-b, 2 * a)) < 0:
        u = -u
    if t.denominator != 1 or u.denominator != 1:
        return UnitMembership(False, "not integral over the order")
    t_i, u_i = int(t), int(u)
    if (t_i - u_i * order.D) % 2 != 0:
        return UnitMembership(False, "not integral over the order")
    norm4 = t_i * t_i - order.D * u_i * u_i
    if abs(norm4) != 4:
        return UnitMembership(False, "norm is not a unit")
    return UnitMembership(True)


# --- the class-group action table ------------------------------------------------

@dataclass(frozen=True)
class ClassCountMismatch:
    """The lattices do not hit every class exactly once (h_R = g fails here)."""

    lattice_count: int
    distinct_classes: int
    h: int
    h_plus: int
    class_indices: tuple[int, ...]


@dataclass(frozen=True)
class GaloisActionTable:
    """Action of the (narrow) class group on unit labels via the lattices."""

    h: int
    h_plus: int
    class_indices: tuple[int, ...]
    permutations: tuple[tuple[int, ...], ...]  # one per group element
    axioms_verified: bool


def galois_action_table(lattices, units, cg: ClassGroup):
    """Action a * j(m_i) := j(a * [m_i]) when the lattices enumerate the
    classes bijectively; otherwise the count-mismatch diagnostic."""
    if len(lattices) != len(units):
        raise ValueError("need one unit label per lattice")
    indices = tuple(ideal_class_of(m, cg.order, cg) for m in lattices)
    if sorted(indices) != list(range(cg.h_plus)):
        return ClassCountMismatch(
            lattice_count=len(lattices),
            distinct_classes=len(set(indices)),
            h=cg.h,
            h_plus=cg.h_plus,
            class_indices=indices,
        )
    where = {cls: i for i, cls in enumerate(indices)}
    perms = []
    for a in range(cg.h_plus):
        perm = tuple(where[cg.compose(a, indices[i])] for i in range(len(lattices)))
        perms.append(perm)
    ok = perms[cg.identity] == tuple(range(len(lattices)))
    for a in range(cg.h_plus):
        for b in range(cg.h_plus):
            ab = cg.compose(a, b)
            composed = tuple(perms[a][perms[b][i]] for i in range(len(lattices)))
            if composed != perms[ab]:
                ok = False
    return GaloisActionTable(
        h=cg.h,
        h_plus=cg.h_plus,
        class_indices=indices,
        permutations=tuple(perms),
        axioms_verified=ok,
    )


# --- field diagnostics -----------------------------------------------------------

Pair = tuple[Fraction, Fraction]  # u + v*sqrt(D)


def _pair_add(x: Pair, y: Pair) -> Pair:
    return (x[0] + y[0], x[1] + y[1])


def _pair_mul(x: Pair, y: Pair, D: int) -> Pair:
    return (x[0] * y[0] + x[1] * y[1] * D, x[0] * y[1] + x[1] * y[0])


def _pair_conj(x: Pair) -> Pair:
    return (x[0], -x[1])


def _ppoly_mul(a: list[Pair], b: list[Pair], D: int) -> list[Pair]:
    out = [(Fraction(0), Fraction(0))] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = _pair_add(out[i + j], _pair_mul(x, y, D))
    return out


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def factor_over_quadratic(p: IntPolynomial, D: int) -> list[list[Pair]]:
    """Factor a Q-irreducible polynomial of degree <= 4 over Q(sqrt(D)).

    Factors are monic with coefficients u + v*sqrt(D) as (u, v) pairs,
    ascending degree.  Degree 3 inputs stay irreducible over a quadratic
    field; degree 4 inputs can only split as two conjugate quadratics.
    """
    monic = p.monic_rational()
    deg = len(monic) - 1
    pairs = [(c, Fraction(0)) for c in monic]
    if deg == 1:
        return [pairs]
    if deg == 2:
        p1, p0 = monic[1], monic[0]
        disc = p1 * p1 - 4 * p0
        w = _frac_sqrt(disc / D)
        if w is None:
            return [pairs]
        r1 = ((-p1 / 2, w / 2), (Fraction(1), Fraction(0)))
        r2 = ((-p1 / 2, -w / 2), (Fraction(1), Fraction(0)))
        return [
            [(-r1[0][0], -r1[0][1]), r1[1]],
            [(-r2[0][0], -r2[0][1]), r2[1]],
        ]
    if deg == 3:
        return [pairs]
    if deg != 4:
        raise DiagnosticSkipped(f"factorization over k capped at degree 4, got {deg}")
    p3, p2, p1, p0 = monic[3], monic[2], monic[1], monic[0]
    a0 = p3 / 2
    # branch A = a0 rational: (x^2 + a0 x + c0 + c1 sqrt(D))(conjugate)
    c0 = (p2 - a0 * a0) / 2
    if 2 * a0 * c0 == p1:
        c1sq = (c0 * c0 - p0) / D
        c1 = _frac_sqrt(c1sq)
        if c1 is not None:
            cand = _quartic_split(p3, (a0, Fraction(0)), (c0, c1), D, monic)
            if cand is not None:
                return cand
    # branch a1 != 0: u = a1^2 satisfies a rational cubic
    alpha = (p2 - a0 * a0) / 2
    beta = Fraction(D, 2)
    # D*u*(alpha + beta u)^2 - (a0*(alpha + beta u) - p1/2)^2 - p0*D*u = 0
    A3 = D * beta * beta
    A2 = 2 * D * alpha * beta - a0 * a0 * beta * beta
    A1 = D * alpha * alpha - 2 * a0 * beta * (a0 * alpha - p1 / 2) - p0 * D
    A0 = -((a0 * alpha - p1 / 2) ** 2)
    for u in _rational_roots_of_cubic(A3, A2, A1, A0):
        if u <= 0:
            continue
        w = _frac_sqrt(u)
        if w is None:
            continue
        for a1 in (w, -w):
            c0b = alpha + beta * u
            c1b = (a0 * c0b - p1 / 2) / (D * a1)
            cand = _quartic_split(p3, (a0, a1), (c0b, c1b), D, monic)
            if cand is not None:
                return cand
    return [pairs]


def _quartic_split(p3, A: Pair, C: Pair, D: int, monic) -> list[list[Pair]] | None:
    one = (Fraction(1), Fraction(0))
    f1 = [C, A, one]
    f2 = [_pair_conj(C), _pair_conj(A), one]
    prod = _ppoly_mul(f1, f2, D)
    target = [(c, Fraction(0)) for c in monic]
    if prod == target:
        return [f1, f2]
    return None


def _rational_roots_of_cubic(a3, a2, a1, a0) -> list[Fraction]:
    from .polynomials import factor_over_rationals, q_to_int

    poly = q_to_int([a0, a1, a2, a3])
    if poly.is_zero():
        return []
    roots = []
    _, factors = factor_over_rationals(poly)
    for f, _mult in factors:
        if f.degree == 1:
            roots.append(Fraction(-f.coeffs[0], f.coeffs[1]))
    return roots


@dataclass
class FieldDiagnostics:
    """Exact field-theoretic facts about the unit over the order's field."""

    min_poly: IntPolynomial
    degree_over_Q: int
    degree_over_k: int
    totally_real: bool
    factor_degrees_over_k: list[int]
    unit_in_order: UnitMembership
    normal: bool | None
    normal_status: str  # verified | refuted | undetermined-at-bound
    abelian: bool | None
    notes: list[str] = field(default_factory=list)


FIELD_DIAG_DEGREE_CAP = 4


def field_diagnostics(unit, order: QuadOrder) -> FieldDiagnostics:
    """Diagnostics for K = k(lambda_A) over k = Q(sqrt(D)): degree, total
    reality, normality and (when decidable) commutativity of Aut(K|k).

    Degrees over k beyond 4 raise DiagnosticSkipped.
    """
    lam = unit.value
    p = lam.minimal_polynomial()
    n = p.degree
    real_roots = isolate_real_roots(p)
    totally_real = len(real_roots) == n

    factors = factor_over_quadratic(p, order.D) if n <= 4 else None
    if factors is None:
        raise DiagnosticSkipped(f"minimal polynomial degree {n} exceeds cap 4")

    kfield = order.field()
    comp = compositum(kfield, lam.field)
    K = comp.field
    sqrtD = comp.lift_left(kfield.generator())
    lamK = comp.lift_right(lam)

    target_idx = None
    for i, f in enumerate(factors):
        if _pair_poly_vanishes(f, lamK, sqrtD):
            target_idx = i
            break
    assert target_idx is not None, "the unit is a root of its own minimal polynomial"
    g = factors[target_idx]
    d = len(g) - 1
    if d > FIELD_DIAG_DEGREE_CAP:
        raise DiagnosticSkipped(f"[K:k] = {d} exceeds cap {FIELD_DIAG_DEGREE_CAP}")

    membership = is_unit_of(lam, order)
    notes: list[str] = []
    if d == 1:
        normal, status, abelian = True, "verified", True
        notes.append("K = k; the extension is trivial")
    elif d == 2:
        normal, status, abelian = True, "verified", True
        notes.append("quadratic extensions are normal with group C2")
    else:
        normal, status, abelian = _normality_check(
            p, g, d, real_roots, totally_real, K, sqrtD, lamK, order.D, notes
        )
    return FieldDiagnostics(
        min_poly=p,
        degree_over_Q=n,
        degree_over_k=d,
        totally_real=totally_real,
        factor_degrees_over_k=[len(f) - 1 for f in factors],
        unit_in_order=membership,
        normal=normal,
        normal_status=status,
        abelian=abelian,
        notes=notes,
    )


def _pair_poly_vanishes(f: list[Pair], x: AlgebraicReal, sqrtD: AlgebraicReal) -> bool:
    acc = x.field.zero()
    for u, v in reversed(f):
        coeff = x.field.from_rational(u) + sqrtD * v
        acc = acc * x + coeff
    return acc.is_zero()


def _normality_check(p, g, d, real_roots, totally_real, K, sqrtD, lamK, D, notes):
    """Normality of K|k for [K:k] = d >= 3 via exact root reconstruction."""
    n = p.degree
    if not totally_real and d == n:
        notes.append(
            "the minimal polynomial has complex roots but K embeds in R, "
            "so it cannot split in K"
        )
        return False, "refuted", None
    roots_in_K = []
    for iv in real_roots:
        r = _reconstruct_root(K, p, iv)
        if r is None:
            notes.append("a real root resisted exact reconstruction in K")
            return None, "undetermined-at-bound", None
        if r is False:
            continue
        if _pair_poly_vanishes(g, r, sqrtD):
            roots_in_K.append(r)
    if len(roots_in_K) == d:
        abelian = _abelian_check(roots_in_K, lamK, sqrtD, K, d)
        return True, "verified", abelian
    if not totally_real:
        notes.append("not all conjugates over k were located in K")
        return None, "undetermined-at-bound", None
    notes.append(f"only {len(roots_in_K)} of {d} conjugates lie in K")
    return False, "refuted", None


def _reconstruct_root(K, p: IntPolynomial, interval):
    """The root of p in the given interval as an element of K.

    Returns the element, False if it provably is not in K at the working
    precision (no verified relation), or None if undecided.
    """
    m = K.degree
    for dps in (80, 160, 320):
        with mpmath.workdps(dps):
            gamma = K.generator().value_mp(dps)
            width = Fraction(1, 2 ** int(dps * 3))
            lo, hi = interval
            from .polynomials import refine_to_width, squarefree_part

            sf = squarefree_part(p)
            lo, hi = refine_to_width(sf, (lo, hi), width)
            r = (
                mpmath.mpf(lo.numerator) / lo.denominator
                + mpmath.mpf(hi.numerator) / hi.denominator
            ) / 2
            vec = [mpmath.mpf(1)]
            for _ in range(m - 1):
                vec.append(vec[-1] * gamma)
            vec.append(r)
            rel = mpmath.pslq(vec, maxcoeff=10**30, maxsteps=10000)
        if rel is None or rel[-1] == 0:
            continue
        coeffs = [Fraction(-a, rel[-1]) for a in rel[:-1]]
        cand = AlgebraicReal(K, coeffs)
        if not _annihilated_by(p, cand):
            continue
        if _interval_locates(cand, interval, sf):
            return cand
        return False  # a different root of p; keep looking elsewhere
    return False


def _annihilated_by(p: IntPolynomial, x: AlgebraicReal) -> bool:
    acc = x.field.zero()
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc.is_zero()


def _interval_locates(x: AlgebraicReal, interval, sf: IntPolynomial) -> bool:
    from .polynomials import refine_root

    lo, hi = interval
    xlo, xhi = x.value_interval()
    while True:
        if xhi < lo or xlo > hi:
            return False
        if lo <= xlo and xhi <= hi:
            return True
        x.field.refine()
        lo, hi = refine_root(sf, (lo, hi))
        xlo, xhi = x.value_interval()


def _abelian_check(roots, lamK, sqrtD, K, d):
    """Commutativity of the root maps lambda -> r_i, exactly."""
    # express each root over the k-basis {lambda^t}: solve a Q-linear system
    # in coordinates of K for x_st with r = sum x_st sqrtD^s lambda^t
    from .linalg import solve, transpose

    basis_elems = []
    for s in range(2):
        for t in range(d):
            e = (sqrtD**s) * (lamK**t)
            basis_elems.append(e)
    A = transpose([list(e.coords) for e in basis_elems])
    exprs = []
    for r in roots:
        x = solve(A, list(r.coords))
        if x is None:
            return None
        exprs.append(x)

    def apply_expr(expr, at: AlgebraicReal) -> AlgebraicReal:
        acc = K.zero()
        idx = 0
        for s in range(2):
            for t in range(d):
                if expr[idx]:
                    acc = acc + (sqrtD**s) * (at**t) * expr[idx]
                idx += 1
        return acc

    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            ij = apply_expr(exprs[i], roots[j])
            ji = apply_expr(exprs[j], roots[i])
            if not (ij - ji).is_zero():
                return False
    return True
