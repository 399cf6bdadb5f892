"""Exact linear algebra over Q, Z, and number fields.

Everything here is dense and naive on purpose: the matrices in this package
are small (modular-symbol spaces cap out around dimension 30) and exactness
beats asymptotics at that scale.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .polynomials import IntPolynomial


# --- rational matrices -------------------------------------------------------

def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [
        [sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)
    ]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def identity(n, one=1):
    return [[one if i == j else one * 0 for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def rref(A):
    """Reduced row echelon form over Fraction; returns (R, pivot_columns)."""
    R = [[Fraction(x) for x in row] for row in A]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def nullspace(A):
    """Basis of the right kernel over Q, one vector per free column."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows == 0:
        return [[Fraction(1) if i == j else Fraction(0) for i in range(cols)] for j in range(cols)]
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def solve(A, b):
    """One exact solution of A x = b over Q, or None if inconsistent."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(bb)] for row, bb in zip(A, b)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return x


def charpoly_fraction(A) -> list[Fraction]:
    """Characteristic polynomial det(xI - A) by Faddeev-LeVerrier,
    ascending coefficients."""
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = identity(n, Fraction(1))
    Af = [[Fraction(x) for x in row] for row in A]
    for k in range(1, n + 1):
        M = mat_mul(Af, M)
        c = -sum(M[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        for i in range(n):
            M[i][i] += c
    return coeffs


def charpoly_int(A) -> IntPolynomial:
    coeffs = charpoly_fraction(A)
    assert all(c.denominator == 1 for c in coeffs)
    return IntPolynomial(int(c) for c in coeffs)


def det_int(A) -> int:
    p = charpoly_int(A)
    n = len(A)
    return (-1) ** n * p.coeffs[0] if n else 1


# --- integer matrices --------------------------------------------------------

def hnf_rows(rows):
    """Row-style Hermite normal form of the lattice spanned by integer rows.

    Returns the list of nonzero HNF basis rows: pivot entries positive,
    entries above each pivot reduced into [0, pivot).
    """
    M = [list(map(int, r)) for r in rows if any(r)]
    if not M:
        return []
    cols = len(M[0])
    out = []
    col = 0
    while M and col < cols:
        # reduce column col by gcd steps
        live = [r for r in M if r[col] != 0]
        if not live:
            col += 1
            continue
        while True:
            live = sorted((r for r in M if r[col] != 0), key=lambda r: abs(r[col]))
            if len(live) <= 1:
                break
            pivot = live[0]
            for r in live[1:]:
                q = r[col] // pivot[col]
                for j in range(cols):
                    r[j] -= q * pivot[j]
        pivot = next((r for r in M if r[col] != 0), None)
        if pivot is not None:
            M.remove(pivot)
            if pivot[col] < 0:
                pivot = [-x for x in pivot]
            out.append(pivot)
        M = [r for r in M if any(r)]
        col += 1
    # reduce entries above pivots
    for i in reversed(range(len(out))):
        piv_col = next(j for j, x in enumerate(out[i]) if x != 0)
        piv = out[i][piv_col]
        for k in range(i):
            q = out[k][piv_col] // piv
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def hnf_solve(hnf, target):
    """Integer coordinates of target in the HNF row basis, or None."""
    t = list(map(int, target))
    coeffs = []
    for row in hnf:
        piv_col = next(j for j, x in enumerate(row) if x != 0)
        if t[piv_col] % row[piv_col] != 0:
            return None
        q = t[piv_col] // row[piv_col]
        coeffs.append(q)
        t = [a - q * b for a, b in zip(t, row)]
    if any(t):
        return None
    return coeffs


def integer_kernel(A):
    """Basis of {x in Z^n : A x = 0} (saturated) for an integer matrix A."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    # column operations on A, mirrored on an identity matrix
    M = [list(map(int, row)) for row in A]
    U = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_op(j, k, q):
        # col_j -= q * col_k
        for i in range(rows):
            M[i][j] -= q * M[i][k]
        for i in range(cols):
            U[i][j] -= q * U[i][k]

    def col_swap(j, k):
        for i in range(rows):
            M[i][j], M[i][k] = M[i][k], M[i][j]
        for i in range(cols):
            U[i][j], U[i][k] = U[i][k], U[i][j]

    r = 0
    for i in range(rows):
        # find nonzero entry in row i at column >= r, reduce row to single pivot
        while True:
            nz = [j for j in range(r, cols) if M[i][j] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(M[i][j]))
            j0 = nz[0]
            for j in nz[1:]:
                q = M[i][j] // M[i][j0]
                col_op(j, j0, q)
        nz = [j for j in range(r, cols) if M[i][j] != 0]
        if nz:
            col_swap(r, nz[0])
            r += 1
        if r == cols:
            break
    # columns r..cols-1 of U span the kernel
    kernel = [[U[i][j] for i in range(cols)] for j in range(r, cols)]
    return kernel


def rational_kernel_saturated(A):
    """Integer basis of ker(A) ∩ Z^n for a matrix with Fraction entries.

    Clears denominators row by row, then takes the integer kernel, which is
    automatically saturated.
    """
    introws = []
    for row in A:
        den = 1
        for x in row:
            f = Fraction(x)
            den = den * f.denominator // math.gcd(den, f.denominator)
        introws.append([int(Fraction(x) * den) for x in row])
    return integer_kernel(introws)


def solve_integer(hnf_basis, vec):
    return hnf_solve(hnf_basis, vec)


def matrix_in_basis(op_columns, basis_rows):
    """Matrix of a linear map restricted to a sublattice.

    op_columns[j] is the image (as a rational vector) of basis_rows[j]; the
    result expresses each image in terms of basis_rows, failing if the map
    does not preserve the lattice's rational span.
    """
    B = transpose([list(map(Fraction, r)) for r in basis_rows])
    out_cols = []
    for img in op_columns:
        x = solve(B, [Fraction(v) for v in img])
        if x is None:
            raise ArithmeticError("image not in the span of the basis")
        out_cols.append(x)
    return transpose(out_cols)
