"""Exact linear algebra over Q and Z used by the rational-structure layer.

Row convention throughout: vectors are rows, subspaces are row spans.
Rational work uses Fractions; lattice work uses a row Hermite normal
form with a tracked unimodular transform, which also yields saturated
integer kernels.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(mat):
    """Reduced row echelon form in place; returns (rank, pivot_columns)."""
    if not mat:
        return 0, []
    nrows, ncols = len(mat), len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return r, pivots


def rank(rows) -> int:
    return rref(frac_matrix(rows))[0]


def right_kernel(rows):
    """Primitive integer columns spanning {v : rows . v = 0} over Q.

    Returned as a list of integer column vectors (each a list).
    """
    mat = frac_matrix(rows)
    ncols = len(mat[0]) if mat else 0
    r, pivots = rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mat[i][fc]
        basis.append(_primitive(v))
    return basis


def left_kernel(rows):
    """Primitive integer rows spanning {x : x . rows = 0} over Q."""
    t = [list(col) for col in zip(*rows)] if rows else []
    return [list(v) for v in right_kernel(t)]


def _primitive(fracs):
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 1)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def solve(rows, rhs):
    """One rational solution x of x-free system rows . x = rhs (columns),
    i.e. solves M x = b with M given by rows.  Returns None if inconsistent."""
    mat = frac_matrix(rows)
    b = [Fraction(v) for v in rhs]
    aug = [row + [bv] for row, bv in zip(mat, b)]
    r, pivots = rref(aug)
    ncols = len(rows[0])
    for row in aug:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    pivrow = 0
    for c in pivots:
        if c == ncols:
            return None
        x[c] = aug[pivrow][ncols]
        pivrow += 1
    return x


def in_row_span(rows, vec) -> bool:
    base = rank(rows)
    return rank(list(rows) + [list(vec)]) == base


def hnf_with_transform(rows):
    """Row Hermite normal form: returns (H, U) with U unimodular, U M = H.

    H has its nonzero rows first, pivots positive, entries above a pivot
    reduced into [0, pivot).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    H = [[int(x) for x in row] for row in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        # gcd-eliminate column c below row r
        piv = None
        for i in range(r, m):
            if H[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            while H[i][c] != 0:
                q = H[r][c] // H[i][c]
                H[r] = [a - q * b for a, b in zip(H[r], H[i])]
                U[r] = [a - q * b for a, b in zip(U[r], U[i])]
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return H, U


def integer_left_kernel(mat):
    """Saturated basis of {x in Z^m : x . mat = 0} (mat is m x n integer).

    The bottom rows of the HNF transform, i.e. those sent to zero rows,
    form a basis of the kernel lattice; saturation is automatic because
    the transform is unimodular.
    """
    H, U = hnf_with_transform(mat)
    out = [U[i] for i in range(len(H)) if all(x == 0 for x in H[i])]
    if not out:
        return []
    K, _ = hnf_with_transform(out)
    return [row for row in K if any(row)]


def saturate_rowspace(rows):
    """Basis (HNF rows) of rowspan_Q(rows) intersected with Z^n."""
    if not rows:
        return []
    cols = right_kernel(rows)
    if not cols:
        n = len(rows[0])
        ident = [[int(i == j) for j in range(n)] for i in range(n)]
        return ident
    mat = [list(r) for r in zip(*cols)]  # n x (number of kernel vectors)
    return integer_left_kernel([list(row) for row in _transpose_to_rows(cols, len(rows[0]))])


def _transpose_to_rows(cols, n):
    # cols: list of length-n column vectors -> n x len(cols) matrix rows
    return [[col[i] for col in cols] for i in range(n)]


def matvec_int(rows, v):
    return [sum(r[i] * v[i] for i in range(len(v))) for r in rows]


def vecmat_int(v, rows):
    n = len(rows[0])
    return [sum(v[i] * rows[i][j] for i in range(len(v))) for j in range(n)]


def matmul_int(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def identity_int(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]
