"""Pure-Python integer normal forms.

These are the reference implementations; ``_ckernels`` mirrors them on
int64 and raises ``OverflowError`` when an intermediate leaves that range.
All matrices are lists of row lists of Python ints.
"""


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def hermite_rows(rows, ncols):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows only. Pivots are positive and strictly increase
    in column; entries above a pivot lie in ``[0, pivot)``.
    """
    A = [list(r) for r in rows if any(r)]
    m = len(A)
    top = 0
    for c in range(ncols):
        if top >= m:
            break
        while True:
            best = -1
            for i in range(top, m):
                if A[i][c] != 0 and (best < 0 or abs(A[i][c]) < abs(A[best][c])):
                    best = i
            if best < 0:
                break
            if best != top:
                A[top], A[best] = A[best], A[top]
            p = A[top][c]
            clean = True
            for i in range(top + 1, m):
                if A[i][c] != 0:
                    q = A[i][c] // p
                    if q:
                        Ai, At = A[i], A[top]
                        for j in range(c, ncols):
                            Ai[j] -= q * At[j]
                    if A[i][c] != 0:
                        clean = False
            if clean:
                break
        if top < m and A[top][c] != 0:
            if A[top][c] < 0:
                A[top] = [-x for x in A[top]]
            p = A[top][c]
            for i in range(top):
                q = A[i][c] // p
                if q:
                    Ai, At = A[i], A[top]
                    for j in range(c, ncols):
                        Ai[j] -= q * At[j]
            top += 1
    return A[:top]


def reduce_vector(x, hnf):
    """Canonical representative of ``x`` modulo the lattice with basis ``hnf``."""
    x = list(x)
    for row in hnf:
        c = 0
        while row[c] == 0:
            c += 1
        q = x[c] // row[c]
        if q:
            for j in range(c, len(x)):
                x[j] -= q * row[j]
    return x


def smith(M, nrows, ncols):
    """Smith normal form ``U * M * V = D``.

    Returns ``(U, D, V)``. The pivot rule is fixed (smallest absolute value,
    first in row-major order), so output is deterministic.
    """
    A = [list(r) for r in M]
    U = _identity(nrows)
    V = _identity(ncols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        Ad, As = A[dst], A[src]
        for j in range(ncols):
            Ad[j] -= q * As[j]
        Ud, Us = U[dst], U[src]
        for j in range(nrows):
            Ud[j] -= q * Us[j]

    def add_col(dst, src, q):
        for r in A:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = A[i][j]
                if v != 0 and (best is None or abs(v) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    if A[t][j]:
                        dirty = True
            if dirty:
                bi, bj, bv = t, t, abs(p)
                for i in range(t + 1, nrows):
                    if A[i][t] and abs(A[i][t]) < bv:
                        bi, bj, bv = i, t, abs(A[i][t])
                for j in range(t + 1, ncols):
                    if A[t][j] and abs(A[t][j]) < bv:
                        bi, bj, bv = t, j, abs(A[t][j])
                swap_rows(t, bi)
                swap_cols(t, bj)
                continue
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # pull the offending row up so its entries reach the pivot row
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V
