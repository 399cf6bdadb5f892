"""Pseudo-lattices: finitely generated Z-modules of real algebraic numbers.

A PseudoLattice keeps the ordered generators it was built from (the period
vector) and a canonical Hermite-normal-form basis of the module they span.
Module equality, membership and proportionality are decided exactly; the
endomorphism ring of a rank-2 module is read off the minimal polynomial of
the generator ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyModule, RationalSlope
from .intutil import split_discriminant
from .linalg import hnf_rows, hnf_solve
from .numberfield import AlgebraicReal, RealNumberField, compositum
from .polynomials import IntPolynomial


class PseudoLattice:
    """Z-module spanned by a finite list of AlgebraicReals in one field."""

    __slots__ = ("field", "periods", "den", "hnf", "basis", "rank")

    def __init__(self, periods):
        periods = [p for p in periods if not p.is_zero()]
        if not periods:
            raise EmptyModule("all generators are zero")
        fld = periods[0].field
        lifted = [periods[0]]
        for p in periods[1:]:
            if p.field == fld:
                lifted.append(p)
            else:
                comp = compositum(fld, p.field)
                lifted = [comp.lift_left(x) for x in lifted]
                lifted.append(comp.lift_right(p))
                fld = comp.field
        den = 1
        for p in lifted:
            for c in p.coords:
                den = den * c.denominator // math.gcd(den, c.denominator)
        rows = [[int(c * den) for c in p.coords] for p in lifted]
        hnf = hnf_rows(rows)
        basis = tuple(
            AlgebraicReal(fld, [Fraction(x, den) for x in row]) for row in hnf
        )
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "periods", tuple(lifted))
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "hnf", tuple(tuple(r) for r in hnf))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "rank", len(hnf))

    def __setattr__(self, *a):
        raise AttributeError("PseudoLattice is immutable")

    def __repr__(self):
        gens = ", ".join(b.to_canonical() for b in self.basis)
        return f"PseudoLattice(rank {self.rank}: {gens})"

    def canonical_key(self):
        """Scale-normalized HNF rows; equal modules share this key."""
        return (
            self.field.key(),
            tuple(tuple(Fraction(x, self.den) for x in row) for row in self.hnf),
        )

    def contains(self, x: AlgebraicReal) -> bool:
        if x.field != self.field:
            comp = compositum(self.field, x.field)
            return PseudoLattice([comp.lift_left(b) for b in self.basis]).contains(
                comp.lift_right(x)
            )
        target = [c * self.den for c in x.coords]
        if any(t.denominator != 1 for t in target):
            return False
        return hnf_solve(self.hnf, [int(t) for t in target]) is not None

    def scale(self, mu) -> "PseudoLattice":
        """The module mu * m (mu an AlgebraicReal or rational, nonzero)."""
        if isinstance(mu, (int, Fraction)):
            if mu == 0:
                raise ValueError("scale factor must be nonzero")
            return PseudoLattice([p * mu for p in self.periods])
        if mu.field != self.field:
            comp = compositum(self.field, mu.field)
            return PseudoLattice(
                [comp.lift_left(p) * comp.lift_right(mu) for p in self.periods]
            )
        return PseudoLattice([p * mu for p in self.periods])

    def canonical_scaled(self) -> "PseudoLattice":
        """Scaled so the first canonical basis element is 1."""
        return self.scale(self.basis[0].inverse())


def from_periods(periods) -> PseudoLattice:
    """Z-module generated by the given periods (zeros dropped)."""
    return PseudoLattice(list(periods))


def _common(m: PseudoLattice, mp: PseudoLattice):
    if m.field == mp.field:
        return m, mp
    comp = compositum(m.field, mp.field)
    return (
        PseudoLattice([comp.lift_left(p) for p in m.periods]),
        PseudoLattice([comp.lift_right(p) for p in mp.periods]),
    )


def equals(m: PseudoLattice, mp: PseudoLattice) -> bool:
    """Exact module equality (independent of the generating sets)."""
    a, b = _common(m, mp)
    return a.canonical_key() == b.canonical_key()


def is_proportional(m: PseudoLattice, mp: PseudoLattice, coeff_bound: int = 10):
    """A scalar mu > 0 with mu * m = mp, or None.

    Searches the finite candidate set of basis-element ratios, extended by
    ratios (sum c_i b'_i) / b_j with |c_i| <= coeff_bound.  Equal modules
    return the canonical witness 1.
    """
    if m.rank != mp.rank:
        raise ValueError("proportionality requires equal ranks")
    a, b = _common(m, mp)
    if a.canonical_key() == b.canonical_key():
        return a.field.one()

    tried = set()

    def check(mu):
        if mu in tried:
            return None
        tried.add(mu)
        if mu.sign() <= 0:
            return None
        if a.scale(mu).canonical_key() == b.canonical_key():
            return mu
        return None

    for bi in b.basis:
        for aj in a.basis:
            mu = check(bi / aj)
            if mu is not None:
                return mu
    if coeff_bound > 0 and a.rank <= 3:
        coef_ranges = _coefficient_vectors(a.rank, coeff_bound)
        for coeffs in coef_ranges:
            elem = b.field.zero()
            for c, bi in zip(coeffs, b.basis):
                if c:
                    elem = elem + bi * c
            if elem.is_zero():
                continue
            for aj in a.basis:
                mu = check(elem / aj)
                if mu is not None:
                    return mu
    return None


def _coefficient_vectors(rank: int, bound: int):
    rng = list(range(-bound, bound + 1))
    if rank == 1:
        return [(c,) for c in rng if c]
    if rank == 2:
        return [(c1, c2) for c1 in rng for c2 in rng if c1 or c2]
    return [
        (c1, c2, c3)
        for c1 in rng
        for c2 in rng
        for c3 in rng
        if c1 or c2 or c3
    ]


@dataclass(frozen=True)
class RMCertificate:
    """Witness that a rank-2 module has real multiplication.

    min_poly is the primitive quadratic a*theta^2 + b*theta + c (a > 0) of the
    basis ratio; D = b^2 - 4ac = f^2 * d_K > 0 is the discriminant of the
    endomorphism order.
    """

    theta: AlgebraicReal
    min_poly: IntPolynomial
    D: int
    d_K: int
    f: int

    def form(self) -> tuple[int, int, int]:
        c, b, a = self.min_poly.coeffs
        return (a, b, c)


@dataclass(frozen=True)
class TrivialEndomorphisms:
    """Marker: End(m) = Z because the basis ratio has degree > 2."""

    theta: AlgebraicReal
    degree: int


def endomorphism_ring(m: PseudoLattice):
    """RMCertificate for a rank-2 module, or the trivial-ring marker."""
    if m.rank != 2:
        raise ValueError(f"endomorphism ring computed for rank 2 only, got {m.rank}")
    theta = m.basis[1] / m.basis[0]
    poly = theta.minimal_polynomial()
    if poly.degree > 2:
        return TrivialEndomorphisms(theta=theta, degree=poly.degree)
    assert poly.degree == 2  # rank 2 forces an irrational ratio
    c, b, a = poly.coeffs
    D = b * b - 4 * a * c
    assert D > 0
    d_K, f = split_discriminant(D)
    return RMCertificate(theta=theta, min_poly=poly, D=D, d_K=d_K, f=f)


def hecke_project(jac: PseudoLattice) -> PseudoLattice:
    """Project onto the module generated by the first two periods, scaled so
    that 1 generates: Z + Z(theta) with theta = lambda_2 / lambda_1."""
    if len(jac.periods) < 2:
        raise ValueError("projection needs at least two periods")
    lam1, lam2 = jac.periods[0], jac.periods[1]
    theta = lam2 / lam1
    if theta.is_rational():
        raise RationalSlope(
            f"second period is a rational multiple of the first: {theta.as_fraction()}"
        )
    return PseudoLattice([theta.field.one(), theta])


@dataclass(frozen=True)
class TauBlock:
    """Top-left 2x2 block of a (symmetrized) endomorphism matrix."""

    tau: tuple[tuple[int, int], tuple[int, int]]
    symmetric_input: bool
    symmetrized: bool  # True if the block came from (T + T^t)/2

    @property
    def asymmetry_flag(self) -> bool:
        return not self.symmetric_input


def tau_truncate(T) -> TauBlock:
    """2x2 truncation per the self-adjointness convention.

    Symmetrizes via (T + T^t)/2 when that stays integral, otherwise keeps the
    raw block; either way a flag records any asymmetry of the input.
    """
    g = len(T)
    if g < 2 or any(len(row) != g for row in T):
        raise ValueError("need a square matrix of size >= 2")
    symmetric = all(T[i][j] == T[j][i] for i in range(g) for j in range(g))
    integral = all(
        (T[i][j] + T[j][i]) % 2 == 0 for i in range(g) for j in range(i + 1, g)
    )
    if integral:
        s01 = (T[0][1] + T[1][0]) // 2
        tau = ((T[0][0], s01), (s01, T[1][1]))
        return TauBlock(tau=tau, symmetric_input=symmetric, symmetrized=not symmetric)
    tau = ((T[0][0], T[0][1]), (T[1][0], T[1][1]))
    return TauBlock(tau=tau, symmetric_input=symmetric, symmetrized=False)


@dataclass(frozen=True)
class RMQuadraticDiagnostic:
    """Outcome of the tau-compatibility quadratic at theta."""

    holds: bool
    residual_poly: IntPolynomial
    residual: AlgebraicReal


def rm_quadratic_check(theta: AlgebraicReal, tau) -> RMQuadraticDiagnostic:
    """Check t12 * theta^2 + (t11 - t22) * theta - t12 = 0 exactly."""
    t11, t12 = tau[0][0], tau[0][1]
    t22 = tau[1][1]
    poly = IntPolynomial([-t12, t11 - t22, t12])
    residual = theta.field.zero()
    for c in reversed(poly.coeffs) if not poly.is_zero() else []:
        residual = residual * theta + c
    return RMQuadraticDiagnostic(
        holds=residual.is_zero(), residual_poly=poly, residual=residual
    )


def cover_degree(g: int) -> int:
    """Sheet count of a one-point ramified cover of the torus by a genus-g
    surface: n = 2g - 1."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    return 2 * g - 1
