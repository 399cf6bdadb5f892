"""Weight-2 modular symbols for Gamma_0(N).

The space is presented on Manin symbols indexed by P^1(Z/N): the two-term
relation x + x|sigma = 0 is folded away by pairing, the three-term relation
x + x|tau + x|tau^2 = 0 is eliminated exactly over Q.  Hecke operators act
through determinant-n matrix families (Merel's set), the star involution
through (c:d) -> (-c:d), and the boundary map through cusp classes.  The
cuspidal plus-subspace carries a canonical integral lattice (the Z-span of
the Manin-symbol images intersected with the subspace) on which every Hecke
operator is an integer matrix.

See Stein, "Modular Forms: A Computational Approach", ch. 8 for the
presentation and the P^1 normal-form algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonSeparating, NotAnosov, PositivityNotAchieved
from .intutil import divisors, euler_phi, prime_factors
from .linalg import (
    charpoly_int,
    hnf_rows,
    integer_kernel,
    mat_mul,
    mat_vec,
    nullspace,
    rref,
    solve,
    transpose,
)
from .numberfield import AlgebraicReal, RealNumberField
from .polynomials import (
    IntPolynomial,
    factor_over_rationals,
    isolate_real_roots,
    q_gcd_monic,
)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b)."""
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _lift_unit(n: int, d: int, a: int) -> int:
    """Lift a unit a mod d (d | n) to a unit mod n."""
    u, v = 1, n
    g = math.gcd(v, d)
    while g > 1:
        u *= g
        v //= g
        g = math.gcd(v, g)
    _, x, y = _ext_gcd(u, v)
    return (u * x + a * y * v) % n


class P1:
    """P^1(Z/N): canonical representatives with fast lookup."""

    def __init__(self, N: int):
        self.N = N
        if N == 1:
            self._list = [(0, 0)]
        else:
            reps = set()
            for u in range(N):
                for v in range(N):
                    r = self.normalize(u, v)
                    if r is not None:
                        reps.add(r)
            self._list = sorted(reps)
        self._index = {p: i for i, p in enumerate(self._list)}

    def __len__(self):
        return len(self._list)

    def __getitem__(self, i):
        return self._list[i]

    def normalize(self, u: int, v: int):
        """Canonical form of (u : v), or None if gcd(u, v, N) > 1."""
        N = self.N
        if N == 1:
            return (0, 0)
        u %= N
        v %= N
        if u == 0:
            return (0, 1) if math.gcd(v, N) == 1 else None
        g, s, _ = _ext_gcd(u, N)
        if math.gcd(g, v) > 1:
            return None
        # s*u = g (mod N); make s a unit mod N
        s = _lift_unit(N, N // g, s % N if s % N else s)
        u, v = g, (s * v) % N
        if g == 1:
            return (1, v)
        v = min(
            (v * t) % N for t in range(1, N, N // g) if math.gcd(N, t) == 1
        )
        return (g, v)

    def index(self, u: int, v: int):
        r = self.normalize(u, v)
        return None if r is None else self._index[r]


def _lift_to_sl2(c: int, d: int, N: int) -> tuple[int, int, int, int]:
    """Matrix [[a, b], [c0, d0]] in SL2(Z) with (c0 : d0) = (c : d) mod N."""
    c %= N
    d %= N
    if N == 1:
        return (1, 0, 0, 1)
    if c == 0:
        # (0 : d) with d a unit is the class of (0 : 1)
        return (1, 0, 0, 1)
    d0 = d
    while math.gcd(c, d0) != 1:
        d0 += N
    g, x, y = _ext_gcd(d0, c)
    assert g == 1
    # a*d0 - b*c = 1 with a = x, b = -y
    return (x, -y, c, d0)


def _normalize_cusp(p: int, q: int) -> tuple[int, int]:
    if q == 0:
        return (1, 0)
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if q < 0:
        p, q = -p, -q
    return (p, q)


def _cusps_equivalent(c1, c2, N: int) -> bool:
    """Gamma_0(N) equivalence of normalized cusps (Cremona, prop. 2.2.3)."""
    u1, v1 = c1
    u2, v2 = c2
    _, s1, _ = _ext_gcd(u1, v1)
    _, s2, _ = _ext_gcd(u2, v2)
    g = math.gcd(N, v1 * v2)
    return (s1 * v2 - s2 * v1) % g == 0 if g else (s1 * v2 - s2 * v1) == 0


def genus_formula(N: int) -> int:
    """Genus of X_0(N) from the index and elliptic/cusp counts."""
    facs = prime_factors(N) if N > 1 else {}
    mu = N
    for p in facs:
        mu = mu // p * (p + 1)
    if N % 4 == 0:
        nu2 = 0
    else:
        nu2 = 1
        for p in facs:
            if p == 2:
                continue
            nu2 *= 2 if p % 4 == 1 else 0
    if N % 9 == 0:
        nu3 = 0
    else:
        nu3 = 1
        for p in facs:
            if p == 3:
                continue
            nu3 *= 2 if p % 3 == 1 else 0
    nu_inf = sum(euler_phi(math.gcd(d, N // d)) for d in divisors(N)) if N > 1 else 1
    g12 = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nu_inf
    assert g12 % 12 == 0
    return g12 // 12


def merel_matrices(n: int):
    """Merel's determinant-n family acting on Manin symbols."""
    for a in range(1, n + 1):
        for d in range((n + a - 1) // a, n + 2 - a):
            bc = a * d - n
            if bc == 0:
                for b in range(a):
                    yield (a, b, 0, d)
                for c in range(1, d):
                    yield (a, 0, c, d)
            elif d > 1:
                for b in range((bc - 1) // (d - 1) + 1, a):
                    if bc % b == 0:
                        yield (a, b, bc // b, d)


class ModularSymbolSpace:
    """Weight-2 modular symbols for Gamma_0(N) with exact linear algebra."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("level must be >= 1")
        self.N = N
        self.p1 = P1(N)
        self._build_quotient()
        self._build_boundary()
        self._build_star()
        self._build_cuspidal_plus()
        self._hecke_full: dict[int, list[list[Fraction]]] = {}
        self._hecke_plus: dict[int, list[list[int]]] = {}
        assert self.genus == genus_formula(N), "genus mismatch against the closed form"

    # -- presentation ----------------------------------------------------------

    def _sigma(self, i: int):
        c, d = self.p1[i]
        return self.p1.index(d, -c)

    def _tau(self, i: int):
        c, d = self.p1[i]
        return self.p1.index(d, -c - d)

    def _build_quotient(self):
        n = len(self.p1)
        rep: list[tuple[int, int] | None] = [None] * n
        gens: list[int] = []
        for i in range(n):
            if rep[i] is not None:
                continue
            j = self._sigma(i)
            if j == i:
                rep[i] = (0, 0)  # self-paired symbol dies over Q (2x = 0)
            else:
                col = len(gens)
                gens.append(i)
                rep[i] = (col, 1)
                rep[j] = (col, -1)
        self._fold = rep
        self._fold_gens = gens

        # three-term relations on folded generators
        rows = []
        seen = set()
        for i in range(n):
            orbit = (i, self._tau(i), self._tau(self._tau(i)))
            key = min(orbit)
            if key in seen:
                continue
            seen.add(key)
            row = [Fraction(0)] * len(gens)
            for o in orbit:
                col, sign = rep[o]
                if sign:
                    row[col] += sign
            if any(row):
                rows.append(row)
        if rows:
            R, pivots = rref(rows)
        else:
            R, pivots = [], []
        free_cols = [c for c in range(len(gens)) if c not in pivots]
        self.dim = len(free_cols)
        expr = {}
        for k, fc in enumerate(free_cols):
            v = [Fraction(0)] * self.dim
            v[k] = Fraction(1)
            expr[fc] = v
        for r, pc in enumerate(pivots):
            v = [Fraction(0)] * self.dim
            for k, fc in enumerate(free_cols):
                if R[r][fc]:
                    v[k] = -R[r][fc]
            expr[pc] = v
        zero = [Fraction(0)] * self.dim
        self._symvec: list[list[Fraction]] = []
        for i in range(n):
            col, sign = rep[i]
            if sign == 0:
                self._symvec.append(zero)
            elif sign == 1:
                self._symvec.append(expr[col])
            else:
                self._symvec.append([-x for x in expr[col]])
        self.free_symbols = [self._fold_gens[fc] for fc in free_cols]

    def symbol_vector(self, c: int, d: int) -> list[Fraction] | None:
        idx = self.p1.index(c, d)
        if idx is None:
            return None
        return self._symvec[idx]

    @property
    def manin_symbols(self):
        return list(self.p1._list)

    def _build_boundary(self):
        cusps: list[tuple[int, int]] = []

        def cusp_index(p, q):
            c = _normalize_cusp(p, q)
            for k, known in enumerate(cusps):
                if _cusps_equivalent(c, known, self.N):
                    return k
            cusps.append(c)
            return len(cusps) - 1

        cols = []
        for sym in self.free_symbols:
            c, d = self.p1[sym]
            a, b, c0, d0 = _lift_to_sl2(c, d, self.N)
            col: dict[int, int] = {}
            i1 = cusp_index(a, c0)
            col[i1] = col.get(i1, 0) + 1
            i2 = cusp_index(b, d0)
            col[i2] = col.get(i2, 0) - 1
            cols.append(col)
        self.cusps = cusps
        B = [[Fraction(0)] * self.dim for _ in range(len(cusps))]
        for j, col in enumerate(cols):
            for i, val in col.items():
                B[i][j] = Fraction(val)
        self.boundary_matrix = B

    def _build_star(self):
        cols = []
        for sym in self.free_symbols:
            c, d = self.p1[sym]
            v = self.symbol_vector(-c % self.N, d)
            assert v is not None
            cols.append(v)
        self.star_matrix = transpose(cols)

    def _build_cuspidal_plus(self):
        self.cuspidal_basis = nullspace(self.boundary_matrix) if self.dim else []
        stacked = [row[:] for row in self.boundary_matrix]
        for i in range(self.dim):
            row = [
                self.star_matrix[i][j] - (1 if i == j else 0) for j in range(self.dim)
            ]
            stacked.append(row)
        plus_q = nullspace(stacked) if self.dim else []
        self.genus = len(plus_q)
        # integral structure: Z-span of the Manin-symbol images
        den = 1
        for v in self._symvec:
            for x in v:
                den = den * x.denominator // math.gcd(den, x.denominator)
        lattice_rows = hnf_rows(
            [[int(x * den) for x in v] for v in self._symvec]
        )
        assert len(lattice_rows) == self.dim or self.dim == 0
        self._lattice_den = den
        self._lattice_rows = lattice_rows
        if self.dim == 0:
            self.plus_lattice = []
            return
        # conditions restricted to lattice coordinates
        cond_cols = []
        for row_vec in lattice_rows:
            vec = [Fraction(x, den) for x in row_vec]
            cond_cols.append(mat_vec(stacked, vec))
        cond = transpose(cond_cols)
        introws = []
        for row in cond:
            rden = 1
            for x in row:
                rden = rden * x.denominator // math.gcd(rden, x.denominator)
            introws.append([int(x * rden) for x in row])
        kern = integer_kernel(introws) if introws else []
        assert len(kern) == self.genus
        basis = []
        for y in kern:
            vec = [Fraction(0)] * self.dim
            for t, row_vec in zip(y, lattice_rows):
                if t:
                    for j in range(self.dim):
                        vec[j] += Fraction(t * row_vec[j], den)
            basis.append(vec)
        self.plus_lattice = basis  # rows, Q^dim coordinates

    # -- operators ---------------------------------------------------------------

    def hecke_full(self, n: int) -> list[list[Fraction]]:
        """T_n on the full quotient space (columns over free generators)."""
        if n not in self._hecke_full:
            cols = []
            for sym in self.free_symbols:
                c, d = self.p1[sym]
                acc = [Fraction(0)] * self.dim
                for (p, q, r, s) in merel_matrices(n):
                    v = self.symbol_vector(p * c + r * d, q * c + s * d)
                    if v is None:
                        continue
                    for i in range(self.dim):
                        if v[i]:
                            acc[i] += v[i]
                cols.append(acc)
            self._hecke_full[n] = transpose(cols)
        return self._hecke_full[n]

    def hecke_plus(self, n: int) -> list[list[int]]:
        """T_n as an integer matrix on the cuspidal plus-lattice."""
        if n not in self._hecke_plus:
            T = self.hecke_full(n)
            cols = []
            Bt = transpose(self.plus_lattice)
            for vec in self.plus_lattice:
                img = mat_vec(T, vec)
                x = solve(Bt, img)
                assert x is not None, "Hecke image left the plus-subspace"
                assert all(c.denominator == 1 for c in x), "non-integral Hecke action"
                cols.append([int(c) for c in x])
            self._hecke_plus[n] = transpose(cols)
        return self._hecke_plus[n]


_space_cache: dict[int, ModularSymbolSpace] = {}


def build_space(N: int) -> ModularSymbolSpace:
    if N not in _space_cache:
        _space_cache[N] = ModularSymbolSpace(N)
    return _space_cache[N]


def hecke_operator(space: ModularSymbolSpace, n: int) -> list[list[int]]:
    """Integer matrix of T_n on the cuspidal plus-subspace lattice."""
    if n < 1:
        raise ValueError("Hecke index must be >= 1")
    return space.hecke_plus(n)


def star_commutes(space: ModularSymbolSpace, n: int) -> bool:
    S, T = space.star_matrix, space.hecke_full(n)
    return mat_mul(S, T) == mat_mul(T, S)


# -- eigen-orbits ----------------------------------------------------------------

@dataclass
class EigenOrbit:
    """Galois orbit of eigenforms: one irreducible factor of a separating
    Hecke operator's characteristic polynomial.

    Oldform pairs mixed by a U_p acquire complex eigenvalue fields; such
    factors are recorded with field None and never count as full-degree.
    """

    level: int
    genus: int
    factor: IntPolynomial
    field: RealNumberField | None     # first real embedding of K_f, if any
    degree: int
    totally_real: bool
    is_anosov: bool                   # degree == genus and K_f totally real
    separating: str
    eigenvalues: dict[int, AlgebraicReal]  # n -> a_n in `field` (empty if no field)
    eigenvector: tuple[AlgebraicReal, ...] | None
    from_lower_level: bool = False

    @property
    def embeddings(self) -> list[int]:
        return list(range(self.degree if self.totally_real else 0))


def _separating_candidates(space: ModularSymbolSpace):
    yield "T2", space.hecke_plus(2)
    yield "T3", space.hecke_plus(3)
    for c2 in range(-3, 4):
        for c3 in range(-3, 4):
            if c2 == 0 or c3 == 0:
                continue
            M2, M3 = space.hecke_plus(2), space.hecke_plus(3)
            M = [
                [c2 * M2[i][j] + c3 * M3[i][j] for j in range(space.genus)]
                for i in range(space.genus)
            ]
            yield f"{c2}*T2+{c3}*T3", M


def _is_squarefree(p: IntPolynomial) -> bool:
    g = q_gcd_monic(p.to_rational(), p.derivative().to_rational())
    return len(g) == 1


def eigen_orbits(space: ModularSymbolSpace, hecke_bound: int = 20) -> list[EigenOrbit]:
    """Split the cuspidal plus-subspace into Galois orbits of eigenforms."""
    g = space.genus
    if g == 0:
        return []
    sep_name, M = None, None
    for name, cand in _separating_candidates(space):
        if _is_squarefree(charpoly_int(cand)):
            sep_name, M = name, cand
            break
    if M is None:
        raise NonSeparating(
            f"no squarefree characteristic polynomial among T2, T3 and small "
            f"combinations at level {space.N}"
        )
    char = charpoly_int(M)
    _, factors = factor_over_rationals(char)
    orbits = []
    for fac, mult in factors:
        assert mult == 1
        roots = isolate_real_roots(fac)
        totally_real = len(roots) == fac.degree
        if roots:
            fld = RealNumberField(fac, roots[0])
            v = _eigenvector(M, fld)
            eigenvalues = {
                n: _eigenvalue_from_vector(space.hecke_plus(n), v, fld)
                for n in range(1, hecke_bound + 1)
            }
            vec = tuple(v)
        else:
            fld, vec, eigenvalues = None, None, {}
        orbit = EigenOrbit(
            level=space.N,
            genus=g,
            factor=fac,
            field=fld,
            degree=fac.degree,
            totally_real=totally_real,
            is_anosov=(fac.degree == g and totally_real),
            separating=sep_name,
            eigenvalues=eigenvalues,
            eigenvector=vec,
        )
        orbit.from_lower_level = _matches_lower_level(space, M, fac)
        orbits.append(orbit)
    return orbits


def _eigenvector(M, fld: RealNumberField) -> list[AlgebraicReal]:
    """Kernel vector of (M - alpha I) over K_f, first nonzero coordinate 1."""
    g = len(M)
    alpha = fld.generator()
    rows = [
        [fld.from_rational(M[i][j]) - (alpha if i == j else 0) for j in range(g)]
        for i in range(g)
    ]
    # field-valued Gaussian elimination
    piv_cols = []
    r = 0
    for c in range(g):
        pivot = next((i for i in range(r, g) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(g):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(g) if c not in piv_cols]
    assert len(free) == 1, "eigenspace must be one-dimensional"
    fc = free[0]
    v = [fld.zero()] * g
    v[fc] = fld.one()
    for rr, pc in enumerate(piv_cols):
        v[pc] = -rows[rr][fc]
    # normalize at the first nonzero coordinate (for a full-degree orbit the
    # coordinates are Q-independent, so this is the first coordinate)
    lead = next(x for x in v if not x.is_zero())
    inv0 = lead.inverse()
    return [x * inv0 for x in v]


def _eigenvalue_from_vector(Tn, v, fld) -> AlgebraicReal:
    lead = next(i for i in range(len(v)) if not v[i].is_zero())
    img0 = fld.zero()
    for j, comp in enumerate(v):
        if Tn[lead][j]:
            img0 = img0 + comp * Tn[lead][j]
    a_n = img0 * v[lead].inverse()
    # verify the full eigen equation exactly
    for i in range(len(v)):
        acc = fld.zero()
        for j, comp in enumerate(v):
            if Tn[i][j]:
                acc = acc + comp * Tn[i][j]
        if not (acc - a_n * v[i]).is_zero():
            raise AssertionError("vector is not an exact eigenvector of T_n")
    return a_n


def _matches_lower_level(space: ModularSymbolSpace, sep_matrix, fac) -> bool:
    """Does the orbit's prime-to-N eigenvalue system occur at a divisor level?

    Works rationally on the orbit subspace (the kernel of fac(S)), so orbits
    without a real embedding are handled too.
    """
    N = space.N
    lower = [M for M in divisors(N) if M != N and genus_formula(M) > 0]
    if not lower:
        return False
    probes = [p for p in (2, 3, 5, 7) if N % p != 0][:2]
    if not probes:
        return False
    # orbit subspace: kernel of fac(S) over Q
    g = len(sep_matrix)
    facS = _int_poly_at_matrix(fac, sep_matrix)
    V = nullspace([[Fraction(x) for x in row] for row in facS])
    restricted = {}
    for p in probes:
        Tp = space.hecke_plus(p)
        cols = []
        Bt = transpose(V)
        for vec in V:
            img = mat_vec([[Fraction(x) for x in row] for row in Tp], vec)
            x = solve(Bt, img)
            assert x is not None
            cols.append(x)
        cp = _charpoly_rational(transpose(cols))
        restricted[p] = cp
    for M in lower:
        for other in eigen_orbits(build_space(M), hecke_bound=max(probes)):
            if not other.eigenvalues:
                continue
            ok = True
            for p in probes:
                mp = other.eigenvalues[p].minimal_polynomial()
                if not _poly_divides(mp, restricted[p]):
                    ok = False
                    break
            if ok:
                return True
    return False


def _int_poly_at_matrix(p: IntPolynomial, M):
    g = len(M)
    acc = [[0] * g for _ in range(g)]
    for c in reversed(p.coeffs):
        acc = mat_mul(acc, M)
        for i in range(g):
            acc[i][i] += c
    return acc


def _charpoly_rational(M) -> IntPolynomial:
    from .linalg import charpoly_fraction
    from .polynomials import q_to_int

    return q_to_int(charpoly_fraction(M))


def _poly_divides(d: IntPolynomial, p: IntPolynomial) -> bool:
    from .polynomials import q_divmod

    _, r = q_divmod(p.to_rational(), d.to_rational())
    return not r


@dataclass
class EigenvectorLattice:
    """Positive exact eigenvector with the Hecke matrices in its basis."""

    vector: tuple[AlgebraicReal, ...]
    matrices: dict[int, list[list[int]]]
    basis_change: list[list[int]]
    embedding: int
    orbit: EigenOrbit


def eigenvector_lattice(
    space: ModularSymbolSpace, orbit: EigenOrbit, embedding: int = 0
) -> EigenvectorLattice:
    """Exact positive eigenvector (lambda_1 = 1) in the chosen real embedding,
    together with the conjugated integer Hecke matrices."""
    if not orbit.is_anosov:
        raise NotAnosov(
            f"orbit degree {orbit.degree} < genus {orbit.genus}; the eigenvector "
            "module is not full rank over this orbit"
        )
    fld = orbit.field if embedding == 0 else orbit.field.sibling(embedding)
    v = [
        AlgebraicReal(fld, comp.coords) if embedding else comp
        for comp in orbit.eigenvector
    ]
    g = len(v)
    assert not v[0].is_zero(), "full-degree orbits have Q-independent coordinates"
    U = [[1 if i == j else 0 for j in range(g)] for i in range(g)]
    lam = list(v)
    budget = 64 * g
    while budget:
        budget -= 1
        bad = next((i for i in range(g) if lam[i].sign() <= 0), None)
        if bad is None:
            break
        # add enough of the positive first coordinate (an elementary move)
        k = (-lam[bad]).floor() + 1
        cand = lam[bad] + lam[0] * k
        if cand.sign() <= 0:
            k += 1
            cand = lam[bad] + lam[0] * k
        lam[bad] = cand
        for j in range(g):
            U[bad][j] += k * U[0][j]
    else:
        raise PositivityNotAchieved(f"no positive basis found for level {space.N}")
    assert not lam[0].is_zero() and lam[0].sign() > 0
    inv0 = lam[0].inverse()
    lam = [x * inv0 for x in lam]
    Uinv = _int_inverse(U)
    matrices = {}
    for n in sorted(orbit.eigenvalues):
        Tn = space.hecke_plus(n)
        Mn = mat_mul(mat_mul(U, Tn), Uinv)
        matrices[n] = [[int(x) for x in row] for row in Mn]
        a_n = (
            orbit.eigenvalues[n]
            if embedding == 0
            else AlgebraicReal(fld, orbit.eigenvalues[n].coords)
        )
        for i in range(g):
            acc = fld.zero()
            for j in range(g):
                if matrices[n][i][j]:
                    acc = acc + lam[j] * matrices[n][i][j]
            assert (acc - a_n * lam[i]).is_zero(), "eigen equation broke under U"
    return EigenvectorLattice(
        vector=tuple(lam),
        matrices=matrices,
        basis_change=U,
        embedding=embedding,
        orbit=orbit,
    )


def _int_inverse(U):
    g = len(U)
    cols = []
    for j in range(g):
        e = [Fraction(1 if i == j else 0) for i in range(g)]
        x = solve(U, e)
        assert x is not None and all(c.denominator == 1 for c in x)
        cols.append([int(c) for c in x])
    return transpose(cols)
