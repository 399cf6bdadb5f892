"""Classical and Jacobi-Perron continued fractions with exact periodicity.

The classical expansion of a quadratic irrational runs on integer triples
(P, Q, D) with theta = (P + sqrt(D))/Q, so digits and periodicity detection
never leave Z.  The multidimensional expansion iterates the forward map

    b_i = floor(theta_i),
    next = (frac(theta_2)/frac(theta_1), ..., frac(theta_{n-1})/frac(theta_1),
            1/frac(theta_1))

on vectors of AlgebraicReals and detects periodicity by exact repetition of
the state vector.  Digit matrices are unimodular, so the period matrix A has
|det A| = 1 and its dominant root is an algebraic unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateRational, NoPerronRoot, NotPeriodic, WrongDegree
from .intutil import floor_quadratic, is_square
from .linalg import charpoly_int, det_int, mat_mul, identity
from .numberfield import AlgebraicReal, RealNumberField, common_field
from .polynomials import IntPolynomial, isolate_real_roots, refine_root


# --- classical continued fractions ------------------------------------------

def cf_expand(theta: AlgebraicReal) -> tuple[list[int], list[int]]:
    """Digits of a real quadratic irrational: (preperiod, period).

    Runs the integer (P, Q) recursion, so the result is exact and the
    periodicity detection is a strict state repetition.
    """
    if theta.is_rational():
        raise DegenerateRational("rational input has a terminating expansion")
    minpoly = theta.minimal_polynomial()
    if minpoly.degree != 2:
        raise WrongDegree(f"degree {minpoly.degree} input; need a quadratic irrational")
    c, b, a = minpoly.coeffs  # a*theta^2 + b*theta + c = 0, a > 0
    disc = b * b - 4 * a * c
    assert disc > 0 and not is_square(disc)
    # theta = (-b + s*sqrt(disc)) / (2a); fix s by comparing with -b/(2a)
    s = theta.compare(Fraction(-b, 2 * a))
    if s > 0:
        P, Q, D = -b, 2 * a, disc
    else:
        P, Q, D = b, -2 * a, disc
    digits: list[int] = []
    seen: dict[tuple[int, int], int] = {(P, Q): 0}
    while True:
        d = _floor_pq(P, Q, D)
        digits.append(d)
        P = d * Q - P
        assert (D - P * P) % Q == 0
        Q = (D - P * P) // Q
        state = (P, Q)
        if state in seen:
            j = seen[state]
            return digits[:j], digits[j:len(digits)]
        seen[state] = len(digits)


def _floor_pq(P: int, Q: int, D: int) -> int:
    if Q > 0:
        return floor_quadratic(P, 1, Q, D)
    return floor_quadratic(-P, -1, -Q, D)


def cf_reconstruct(preperiod: list[int], period: list[int]) -> AlgebraicReal:
    """Exact value of an eventually periodic continued fraction."""
    if not period:
        raise ValueError("period must be nonempty")
    m = ((1, 0), (0, 1))
    for d in period:
        m = ((m[0][0] * d + m[0][1], m[0][0]), (m[1][0] * d + m[1][1], m[1][0]))
    (p, q), (r, s) = m
    # fixed point of y -> (p*y + q) / (r*y + s), the root > that is positive
    poly = IntPolynomial([-q, s - p, r]).primitive()
    roots = isolate_real_roots(poly)
    pos = [iv for iv in roots if iv[1] > 0]
    # periodic tails with digits >= 1 exceed 1, so pick the largest root
    fld = RealNumberField(poly, pos[-1])
    y = fld.generator()
    for d in reversed(preperiod):
        y = y.inverse() + d
    return y


# --- Jacobi-Perron machinery -------------------------------------------------

class JPState:
    """State vector (theta_1, ..., theta_{n-1}) of positive AlgebraicReals in
    a common field."""

    __slots__ = ("thetas", "field", "dimension")

    def __init__(self, thetas):
        thetas = list(thetas)
        if not thetas:
            raise ValueError("state must have at least one component")
        fld = thetas[0].field
        for t in thetas:
            if t.field != fld:
                raise ValueError("state components must share a field; use JPState.build")
        for t in thetas:
            if t.sign() <= 0:
                raise ValueError("state components must be strictly positive")
        object.__setattr__(self, "thetas", tuple(thetas))
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "dimension", len(thetas) + 1)

    def __setattr__(self, *a):
        raise AttributeError("JPState is immutable")

    @classmethod
    def build(cls, thetas) -> "JPState":
        """Lift components into a common field first (composita as needed)."""
        from .numberfield import compositum

        thetas = list(thetas)
        lifted = [thetas[0]]
        for t in thetas[1:]:
            if t.field == lifted[0].field:
                lifted.append(t)
                continue
            comp = compositum(lifted[0].field, t.field)
            lifted = [comp.lift_left(prev) for prev in lifted]
            lifted.append(comp.lift_right(t))
        return cls(lifted)

    def key(self):
        return (self.field.key(), tuple(t.coords for t in self.thetas))

    def __eq__(self, other):
        return isinstance(other, JPState) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"JPState({[t.to_canonical() for t in self.thetas]})"

    def vector(self) -> list[AlgebraicReal]:
        """(1, theta_1, ..., theta_{n-1}) as field elements."""
        return [self.field.one()] + list(self.thetas)

    def independent_with_one(self) -> bool:
        """Are 1, theta_1, ..., theta_{n-1} linearly independent over Q?"""
        from .linalg import rref

        rows = [[Fraction(1)] + [Fraction(0)] * (self.field.degree - 1)]
        rows += [list(t.coords) for t in self.thetas]
        _, pivots = rref(rows)
        # rank equals number of pivots of the transpose; rref of rows gives
        # row rank which equals what we need
        return len(pivots) == len(rows)


def jp_step(state: JPState) -> tuple[tuple[int, ...], JPState]:
    """One forward step; returns (digit vector, next state)."""
    thetas = state.thetas
    b = tuple(t.floor() for t in thetas)
    f1 = thetas[0] - b[0]
    if f1.is_zero():
        raise DegenerateRational("fractional part of theta_1 vanished")
    inv = f1.inverse()
    nxt = [(thetas[i] - b[i]) * inv for i in range(1, len(thetas))] + [inv]
    return b, JPState(nxt)


def digit_matrix(b: tuple[int, ...]) -> list[list[int]]:
    """B = [[0,1],[I,b]]: first row (0,..,0,1), identity block, last column b."""
    n = len(b) + 1
    M = [[0] * n for _ in range(n)]
    M[0][n - 1] = 1
    for i in range(1, n):
        M[i][i - 1] = 1
        M[i][n - 1] = b[i - 1]
    return M


@dataclass
class JacobiPerronExpansion:
    """Digit data of an expansion, with exact periodicity bookkeeping."""

    dimension: int
    status: str  # "periodic" | "not_periodic_within_bound" | "degenerate"
    preperiod_digits: list[tuple[int, ...]]
    period_digits: list[tuple[int, ...]]
    initial_state: JPState
    periodic_state: JPState | None = None
    digit_matrices: list[list[list[int]]] = field(default_factory=list)
    period_matrix: list[list[int]] | None = None

    @property
    def digits(self) -> list[tuple[int, ...]]:
        return self.preperiod_digits + self.period_digits

    def digit_stream(self, count: int) -> list[tuple[int, ...]]:
        """First `count` digits, unrolling the period as needed."""
        out = list(self.preperiod_digits)
        if len(out) >= count:
            return out[:count]
        if not self.period_digits:
            raise NotPeriodic("cannot unroll a non-periodic expansion")
        i = 0
        while len(out) < count:
            out.append(self.period_digits[i % len(self.period_digits)])
            i += 1
        return out


def jp_expand(state: JPState, max_steps: int = 2000) -> JacobiPerronExpansion:
    """Expand until the state repeats exactly, degenerates, or the bound hits."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    seen: dict[JPState, int] = {state: 0}
    states = [state]
    digits: list[tuple[int, ...]] = []
    matrices: list[list[list[int]]] = []
    cur = state
    for _ in range(max_steps):
        try:
            b, cur = jp_step(cur)
        except DegenerateRational:
            return JacobiPerronExpansion(
                dimension=state.dimension,
                status="degenerate",
                preperiod_digits=digits,
                period_digits=[],
                initial_state=state,
                digit_matrices=matrices,
            )
        digits.append(b)
        matrices.append(digit_matrix(b))
        if cur in seen:
            j = seen[cur]
            period = digits[j:]
            A = identity(state.dimension)
            for m in matrices[j:]:
                A = mat_mul(A, m)
            return JacobiPerronExpansion(
                dimension=state.dimension,
                status="periodic",
                preperiod_digits=digits[:j],
                period_digits=period,
                initial_state=state,
                periodic_state=states[j],
                digit_matrices=matrices,
                period_matrix=A,
            )
        seen[cur] = len(digits)
        states.append(cur)
    return JacobiPerronExpansion(
        dimension=state.dimension,
        status="not_periodic_within_bound",
        preperiod_digits=digits,
        period_digits=[],
        initial_state=state,
        digit_matrices=matrices,
    )


@dataclass
class HeckeUnit:
    """Dominant eigenvalue of the period matrix, certified an algebraic unit."""

    value: AlgebraicReal
    char_poly: IntPolynomial
    conjugates: list[tuple[Fraction, Fraction]]  # isolating intervals, ascending
    det_A: int

    @property
    def min_poly(self) -> IntPolynomial:
        return self.value.minimal_polynomial()


def hecke_unit(expansion: JacobiPerronExpansion) -> HeckeUnit:
    """Extract lambda_A > 1 from a periodic expansion and certify it."""
    if expansion.status != "periodic":
        raise NotPeriodic(f"expansion status is {expansion.status}")
    A = expansion.period_matrix
    P = charpoly_int(A)
    dA = det_int(A)
    if abs(dA) != 1 or abs(P.coeffs[0]) != 1:
        raise AssertionError("period matrix must be unimodular")
    # A (1, theta)^T = lambda (1, theta)^T at the period start, so lambda is
    # the first row of A paired with the state vector
    v = expansion.periodic_state.vector()
    lam = v[0].field.zero()
    for a_ij, comp in zip(A[0], v):
        lam = lam + comp * a_ij
    # certify: P(lam) = 0, lam > 1, |lam| maximal among real roots
    acc = lam.field.zero()
    for c in reversed(P.coeffs):
        acc = acc * lam + c
    if not acc.is_zero():
        raise AssertionError("eigenvalue does not satisfy the characteristic polynomial")
    if lam.compare(1) <= 0:
        raise NoPerronRoot("dominant eigenvalue is not > 1")
    roots = isolate_real_roots(P)
    _check_dominant(lam, P, roots)
    return HeckeUnit(value=lam, char_poly=P, conjugates=roots, det_A=dA)


def _check_dominant(lam: AlgebraicReal, P: IntPolynomial, roots) -> None:
    """|lam| must be >= |r| for every real root r of P."""
    sf = _squarefree(P)
    neg = -lam
    for iv in roots:
        lo, hi = iv
        for _ in range(256):
            lam_abs = _abs_interval(lam.value_interval())
            root_abs = _abs_interval((lo, hi))
            if root_abs[1] < lam_abs[0] or root_abs[0] > lam_abs[1]:
                break
            lo, hi = refine_root(sf, (lo, hi))
            lam.field.refine()
        else:
            # persistent overlap: the root is lam or -lam exactly
            if _contains_value(sf, (lo, hi), lam) or _contains_value(sf, (lo, hi), neg):
                continue
            raise AssertionError("could not separate root magnitudes")
        if root_abs[0] > lam_abs[1]:
            raise NoPerronRoot("a real root exceeds the candidate in absolute value")


def _abs_interval(iv) -> tuple[Fraction, Fraction]:
    lo, hi = iv
    if lo <= 0 <= hi:
        return (Fraction(0), max(-lo, hi))
    return (min(abs(lo), abs(hi)), max(abs(lo), abs(hi)))


def _squarefree(P: IntPolynomial) -> IntPolynomial:
    from .polynomials import squarefree_part

    return squarefree_part(P)


def _contains_value(p: IntPolynomial, interval, x: AlgebraicReal) -> bool:
    """Does the isolating interval of p hold exactly the value x?"""
    acc = x.field.zero()
    for c in reversed(p.coeffs):
        acc = acc * x + c
    if not acc.is_zero():
        return False
    lo, hi = x.value_interval()
    while not (interval[0] <= lo and hi <= interval[1]):
        if hi < interval[0] or lo > interval[1]:
            return False
        x.field.refine()
        lo, hi = x.value_interval()
    return True


def verify_perron_eigenvector(A, state: JPState, unit: HeckeUnit) -> bool:
    """Exact check of A (1, theta)^T = lambda_A (1, theta)^T."""
    v = state.vector()
    lam = unit.value
    if lam.field != state.field:
        from .numberfield import compositum

        comp = compositum(lam.field, state.field)
        lam = comp.lift_left(lam)
        v = [comp.lift_right(x) for x in v]
    for i, row in enumerate(A):
        lhs = v[0].field.zero()
        for a_ij, comp_v in zip(row, v):
            lhs = lhs + comp_v * a_ij
        if not (lhs - lam * v[i]).is_zero():
            return False
    return True


def jp_convergent(expansion: JacobiPerronExpansion, steps: int) -> list[int]:
    """Integer convergent vector B_1 ... B_steps e_n."""
    n = expansion.dimension
    digits = expansion.digit_stream(steps)
    v = [0] * n
    v[n - 1] = 1
    for b in reversed(digits):
        M = digit_matrix(b)
        v = [sum(M[i][j] * v[j] for j in range(n)) for i in range(n)]
    return v
