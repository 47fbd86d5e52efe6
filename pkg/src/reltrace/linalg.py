"""Exact integer and rational linear algebra on list-of-rows matrices."""
from fractions import Fraction

from reltrace import kernels


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def matmul(A, B, ncols=None):
    """A times B; pass ``ncols`` when B may have no rows."""
    if not A:
        return []
    inner = len(B)
    if ncols is None:
        ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * ncols
        for k in range(inner):
            a = row[k]
            if a:
                Bk = B[k]
                for j in range(ncols):
                    if Bk[j]:
                        acc[j] += a * Bk[j]
        out.append(acc)
    return out


def vecmat(x, A):
    """Row vector times matrix."""
    ncols = len(A[0]) if A else 0
    out = [0] * ncols
    for xi, row in zip(x, A):
        if xi:
            for j in range(ncols):
                out[j] += xi * row[j]
    return out


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*A)]


def trace(A):
    return sum(A[i][i] for i in range(len(A)))


def determinant(A):
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(M):
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular and the nonzero diagonal of ``D`` is a
    positive divisibility chain. Accepts any integer matrix, including ones
    with a zero dimension.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    return kernels.smith([[int(v) for v in r] for r in M], m, n)


def smith_invariants(M, ncols=None):
    """(free rank, torsion list) of ``Z^ncols / rowspace(M)``."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return ncols, []
    _, D, _ = smith_normal_form(M)
    diag = [D[i][i] for i in range(min(len(D), ncols))]
    nonzero = [d for d in diag if d != 0]
    torsion = [d for d in nonzero if d != 1]
    return ncols - len(nonzero), torsion


def hermite_normal_form(rows, ncols):
    return kernels.hermite_rows([[int(v) for v in r] for r in rows], ncols)


def reduce_mod(x, hnf):
    return kernels.reduce_vector(x, hnf)


def hnf_pivots(hnf):
    piv = []
    for row in hnf:
        c = 0
        while row[c] == 0:
            c += 1
        piv.append(c)
    return piv


# rational elimination ------------------------------------------------------

def rref(A, ncols=None):
    """Reduced row echelon form over Q. Returns (R, pivot columns)."""
    R = [[Fraction(v) for v in row] for row in A]
    m = len(R)
    n = ncols if ncols is not None else (len(R[0]) if R else 0)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        pv = R[r][c]
        if pv != 1:
            R[r] = [v / pv for v in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                R[i] = [a - f * b for a, b in zip(Ri, Rr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(A, ncols=None):
    return len(rref(A, ncols)[1])


def nullspace(A, ncols):
    """Basis (list of column vectors as lists) of {x : A x = 0} over Q."""
    R, piv = rref(A, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def column_space(A, ncols):
    """Independent columns of A spanning its column space."""
    _, piv = rref(A, ncols)
    return [[Fraction(A[i][c]) for i in range(len(A))] for c in piv]


def solve(A, b, ncols):
    """One rational solution of A x = b, or None when inconsistent."""
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(piv):
        x[p] = R[i][ncols]
    return x


def restricted_trace(F, W):
    """Trace of F on the F-invariant subspace spanned by the columns in W.

    ``W`` is a list of independent column vectors; F is square.
    """
    if not W:
        return Fraction(0)
    n = len(W[0])
    k = len(W)
    Wm = [[W[j][i] for j in range(k)] for i in range(n)]
    total = Fraction(0)
    for j in range(k):
        img = [sum(Fraction(F[i][l]) * W[j][l] for l in range(n) if F[i][l]) for i in range(n)]
        x = solve(Wm, img, k)
        if x is None:
            raise ValueError("subspace is not invariant under the map")
        total += x[j]
    return total


def sparse_solve(columns, rhs, ncols):
    """Solve A x = b over Q for sparse A given by columns.

    ``columns[j]`` maps row keys to integers, ``rhs`` maps row keys to
    integers. Returns ``(x, injective)``; ``x`` is None when the system is
    inconsistent. Free variables (if any) are set to zero.
    """
    rows = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            if v:
                rows.setdefault(r, {})[j] = Fraction(v)
    for r, v in rhs.items():
        if v:
            rows.setdefault(r, {})[ncols] = Fraction(v)
    pivots = {}
    consistent = True
    for r in sorted(rows, key=repr):
        row = rows[r]
        while row:
            lead = min(row)
            if lead == ncols:
                consistent = False
                break
            prow = pivots.get(lead)
            if prow is None:
                pv = row[lead]
                pivots[lead] = {c: v / pv for c, v in row.items()}
                break
            f = row[lead]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    injective = len(pivots) == ncols
    if not consistent:
        return None, injective
    x = [Fraction(0)] * ncols
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        val = prow.get(ncols, Fraction(0))
        for c2, v in prow.items():
            if c2 != c and c2 != ncols:
                val -= v * x[c2]
        x[c] = val
    return x, injective
