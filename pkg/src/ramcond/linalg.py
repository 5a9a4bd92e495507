"""Exact linear algebra over the rationals plus integer-lattice routines.

Matrices are tuples of row tuples.  Everything here is dense and meant for
small dimensions (module ranks and group orders of a few dozen); no attempt
is made to be clever, only to be exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import CheckFailure, InputError


def as_matrix(rows):
    """Coerce nested iterables of ints/Fractions into a canonical matrix."""
    mat = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if mat and any(len(row) != len(mat[0]) for row in mat):
        raise InputError("ragged matrix")
    return mat


def identity_matrix(n):
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def zero_matrix(n, m):
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def mat_mul(a, b):
    """Matrix product; works for any entries supporting + and * (e.g. CycloNum)."""
    if a and b and len(a[0]) != len(b):
        raise InputError("matrix dimension mismatch")
    bt = tuple(zip(*b)) if b else ()
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_vec(a, v):
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def mat_sub(a, b):
    return mat_add(a, mat_scale(b, Fraction(-1)))


def transpose(a):
    return tuple(zip(*a)) if a else ()


def mat_trace(a):
    t = a[0][0]
    for i in range(1, len(a)):
        t = t + a[i][i]
    return t


def rref(a):
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return tuple(tuple(row) for row in m), tuple(pivots)


def det(a):
    """Determinant by fraction-free-ish Gaussian elimination (exact)."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [list(map(Fraction, row)) for row in a]
    sign = 1
    d = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        d *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * d


def solve(a, b):
    """Solve A x = b exactly; A must have full column rank."""
    a = as_matrix(a)
    b = tuple(Fraction(x) for x in b)
    if len(a) != len(b):
        raise InputError("solve: shape mismatch")
    cols = len(a[0]) if a else 0
    aug = tuple(row + (bv,) for row, bv in zip(a, b))
    red, pivots = rref(aug)
    if cols in pivots:
        raise CheckFailure("solve: inconsistent linear system")
    if len(pivots) != cols:
        raise CheckFailure("solve: matrix does not have full column rank")
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return tuple(x)


def mat_inv(a):
    n = len(a)
    aug = tuple(tuple(row) + irow for row, irow in zip(as_matrix(a), identity_matrix(n)))
    red, pivots = rref(aug)
    if pivots != tuple(range(n)):
        raise CheckFailure("matrix not invertible")
    return tuple(row[n:] for row in red)


def nullspace(a):
    """Basis of the rational kernel of A (free variables set to 1)."""
    a = as_matrix(a)
    cols = len(a[0]) if a else 0
    red, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return tuple(basis)


def _int_rows(a):
    """Scale each row to integers (kernel and row span are unchanged)."""
    out = []
    for row in as_matrix(a):
        scale = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def integer_kernel(a):
    """Basis of {x in Z^d : A x = 0} for a rational matrix A.

    Unimodular column reduction; the resulting basis spans the full
    (saturated) integer kernel, not merely a finite-index sublattice.
    """
    m = _int_rows(a)
    nrows = len(m)
    d = len(m[0]) if nrows else 0
    if d == 0:
        return ()
    # columns of A paired with columns of the unimodular transform
    acols = [[m[r][c] for r in range(nrows)] for c in range(d)]
    ucols = [[1 if i == c else 0 for i in range(d)] for c in range(d)]
    active = list(range(d))
    for r in range(nrows):
        live = [j for j in active if acols[j][r] != 0]
        while len(live) > 1:
            live.sort(key=lambda j: abs(acols[j][r]))
            piv = live[0]
            pv = acols[piv][r]
            for j in live[1:]:
                q = acols[j][r] // pv
                if q:
                    acols[j] = [x - q * y for x, y in zip(acols[j], acols[piv])]
                    ucols[j] = [x - q * y for x, y in zip(ucols[j], ucols[piv])]
            live = [j for j in live if acols[j][r] != 0]
        if live:
            active.remove(live[0])
    return tuple(tuple(ucols[j]) for j in active)


def hnf_rows(vectors):
    """Hermite-style basis (as rows) of the lattice spanned by integer rows."""
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return ()
    d = len(rows[0])
    r = 0
    for c in range(d):
        live = [i for i in range(r, len(rows)) if rows[i][c] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda i: abs(rows[i][c]))
            piv = live[0]
            pv = rows[piv][c]
            for i in live[1:]:
                q = rows[i][c] // pv
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[piv])]
            live = [i for i in live if rows[i][c] != 0]
        i = live[0]
        rows[r], rows[i] = rows[i], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        pv = rows[r][c]
        for i in range(r):
            q = rows[i][c] // pv
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r])


def lattice_contains(basis_rows, v):
    """Is v in the integer row span of basis_rows?  Exact rational solve."""
    if not any(v):
        return True
    if not basis_rows:
        return False
    try:
        x = solve(transpose(as_matrix(basis_rows)), v)
    except CheckFailure:
        return False
    return all(c.denominator == 1 for c in x)
