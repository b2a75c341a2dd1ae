"""Exact linear algebra over the integers and rationals.

Everything here is deterministic and exact: integer vectors are tuples of
Python ints, rational data uses ``fractions.Fraction``, and no floating
point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

IntVec = tuple[int, ...]
IntMatrix = tuple[IntVec, ...]
RatVec = tuple[Fraction, ...]


class LatticeError(ValueError):
    """Raised for invalid lattice-algebra inputs (non-primitive vectors etc.)."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def vec_gcd(v) -> int:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g


def is_primitive(v) -> bool:
    """True iff the coordinates of v are coprime (gcd exactly 1)."""
    return vec_gcd(v) == 1


def make_primitive(v) -> IntVec:
    """Divide an integer vector by the gcd of its coordinates."""
    g = vec_gcd(v)
    if g == 0:
        raise LatticeError("zero vector has no primitive representative")
    return tuple(c // g for c in v)


def dot(a, b) -> int | Fraction:
    return sum(x * y for x, y in zip(a, b, strict=True))


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(a, b) -> IntMatrix:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def transpose(m):
    return tuple(zip(*m))


def det(m) -> Fraction:
    """Exact determinant via fraction-free-ish Gaussian elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    rows = [[Fraction(x) for x in r] for r in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        pval = rows[c][c]
        result *= pval
        for r in range(c + 1, n):
            factor = rows[r][c] / pval
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[c])]
    return sign * result


def rat_solve(rows, rhs) -> RatVec | None:
    """Solve the square system rows * x = rhs exactly; None when singular."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(rows, rhs, strict=True)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        pval = a[c][c]
        a[c] = [x / pval for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(a[r][n] for r in range(n))


def rat_rank(rows) -> int:
    if not rows:
        return 0
    a = [[Fraction(x) for x in r] for r in rows]
    ncols = len(a[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pval = a[rank][c]
        a[rank] = [x / pval for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == len(a):
            break
    return rank


def rat_nullspace(rows, ncols: int) -> list[RatVec]:
    """Basis of {x : rows * x = 0}, via reduced row echelon form."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pval = a[rank][c]
        a[rank] = [x / pval for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(tuple(v))
    return basis


def rat_solve_general(rows, rhs) -> RatVec | None:
    """One exact solution of a (possibly non-square) consistent system, else None."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    a = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(rows, rhs, strict=True)]
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pval = a[rank][c]
        a[rank] = [x / pval for x in a[rank]]
        for r in range(nrows):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        pivots.append(c)
        rank += 1
    for r in range(rank, nrows):
        if a[r][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = a[r][ncols]
    return tuple(x)


def mat_inverse(m) -> tuple[RatVec, ...]:
    """Exact inverse of a square rational matrix."""
    n = len(m)
    cols = []
    for j in range(n):
        rhs = [Fraction(int(i == j)) for i in range(n)]
        col = rat_solve(m, rhs)
        if col is None:
            raise LatticeError("matrix is singular")
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def mat_inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Inverse of an integer matrix with determinant +-1, returned over Z."""
    inv = mat_inverse(m)
    out = []
    for row in inv:
        int_row = []
        for x in row:
            if x.denominator != 1:
                raise LatticeError("matrix is not unimodular")
            int_row.append(x.numerator)
        out.append(tuple(int_row))
    return tuple(out)


def hermite_normal_form(m) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (h, u) with u*m == h, u unimodular (|det u| = 1), h in row
    echelon form with positive pivots and entries above each pivot reduced
    into [0, pivot).
    """
    rows = [list(r) for r in m]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, nr):
            if rows[i][c] == 0:
                continue
            a, b = rows[r][c], rows[i][c]
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            # 2x2 unimodular combination: [[x, y], [-bg, ag]] has det 1
            new_r = [x * p + y * q for p, q in zip(rows[r], rows[i])]
            new_i = [-bg * p + ag * q for p, q in zip(rows[r], rows[i])]
            rows[r], rows[i] = new_r, new_i
            new_ur = [x * p + y * q for p, q in zip(u[r], u[i])]
            new_ui = [-bg * p + ag * q for p, q in zip(u[r], u[i])]
            u[r], u[i] = new_ur, new_ui
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
            u[r] = [-x for x in u[r]]
        p = rows[r][c]
        for i in range(r):
            q = rows[i][c] // p
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return tuple(tuple(x) for x in rows), tuple(tuple(x) for x in u)


def kernel_decomposition(phi: IntVec) -> tuple[IntVec, tuple[IntVec, ...]]:
    """Split Z^d along a primitive functional phi.

    Returns (preimage, kernel_basis): ``preimage`` has phi-value 1 and
    ``kernel_basis`` is the canonical (HNF-reduced) basis of the saturated
    sublattice {x : <phi, x> = 0}.  Appending the preimage to the kernel
    basis always yields a basis of Z^d.
    """
    if not is_primitive(phi):
        raise LatticeError(f"functional {phi} is not primitive")
    d = len(phi)
    column = tuple((c,) for c in phi)
    h, u = hermite_normal_form(column)
    assert h[0][0] == 1
    pre = list(u[0])
    kernel_rows = [u[i] for i in range(1, d)]
    if kernel_rows:
        ker_h, _ = hermite_normal_form(kernel_rows)
        kernel = [list(r) for r in ker_h]
    else:
        kernel = []
    # reduce the preimage modulo the kernel lattice for a canonical choice
    for row in kernel:
        lead = next(j for j, x in enumerate(row) if x != 0)
        q = pre[lead] // row[lead]
        if q:
            pre = [x - q * y for x, y in zip(pre, row)]
    assert dot(phi, pre) == 1
    return tuple(pre), tuple(tuple(r) for r in kernel)


def kernel_lattice_basis(phi: IntVec) -> tuple[IntVec, ...]:
    """Canonical basis of the saturated kernel lattice of a primitive functional."""
    if len(phi) < 2:
        raise LatticeError("kernel basis requires ambient rank at least 2")
    return kernel_decomposition(phi)[1]


def complete_to_basis(phi: IntVec) -> IntMatrix:
    """Basis of Z^d (rows, determinant +-1) whose first row is the primitive phi."""
    pre, kernel = kernel_decomposition(phi)
    d = len(phi)
    # columns [preimage | kernel basis] form a unimodular matrix; its inverse
    # has first row phi because both agree on that column basis
    b_cols = tuple(tuple(col[i] for col in (pre, *kernel)) for i in range(d))
    v = mat_inverse_unimodular(b_cols)
    assert v[0] == tuple(phi)
    return v
