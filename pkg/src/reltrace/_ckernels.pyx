# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""int64 versions of the normal-form kernels in ``_pykernels``.

Same pivot rules, so results are identical whenever no intermediate
overflows. On overflow an ``OverflowError`` is raised and the dispatcher in
``reltrace.kernels`` reruns the pure-Python version on arbitrary-precision
ints.
"""
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline int ck_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int ck_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int ck_mul(long long a, long long b, long long *r) nogil
    int ck_sub(long long a, long long b, long long *r) nogil


cdef inline long long floordiv(long long a, long long b):
    # cdivision is off, so // already rounds toward minus infinity
    return a // b


cdef inline long long absll(long long a) nogil:
    return -a if a < 0 else a


cdef int axpy(long long *dst, long long *src, long long q, Py_ssize_t start,
              Py_ssize_t n) nogil:
    # dst[j] -= q * src[j]; returns 1 on overflow
    cdef Py_ssize_t j
    cdef long long t
    for j in range(start, n):
        if src[j] != 0:
            if ck_mul(q, src[j], &t):
                return 1
            if ck_sub(dst[j], t, &dst[j]):
                return 1
    return 0


cdef long long* to_buffer(list M, Py_ssize_t m, Py_ssize_t n) except NULL:
    cdef long long *buf = <long long*> malloc(max(m * n, 1) * sizeof(long long))
    cdef Py_ssize_t i, j
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            row = M[i]
            for j in range(n):
                buf[i * n + j] = row[j]
    except OverflowError:
        free(buf)
        raise
    return buf


cdef list from_buffer(long long *buf, Py_ssize_t m, Py_ssize_t n):
    return [[buf[i * n + j] for j in range(n)] for i in range(m)]


cdef void swap_row(long long *A, Py_ssize_t n, Py_ssize_t i, Py_ssize_t k) nogil:
    cdef Py_ssize_t j
    cdef long long t
    for j in range(n):
        t = A[i * n + j]
        A[i * n + j] = A[k * n + j]
        A[k * n + j] = t


def hermite_rows(rows, Py_ssize_t ncols):
    cdef list nz = [list(r) for r in rows if any(r)]
    cdef Py_ssize_t m = len(nz)
    cdef long long *A = to_buffer(nz, m, ncols)
    cdef Py_ssize_t top = 0, c, i, j, best
    cdef long long p, q
    cdef bint clean
    try:
        for c in range(ncols):
            if top >= m:
                break
            while True:
                best = -1
                for i in range(top, m):
                    if A[i * ncols + c] != 0 and (
                            best < 0 or absll(A[i * ncols + c]) < absll(A[best * ncols + c])):
                        best = i
                if best < 0:
                    break
                if best != top:
                    swap_row(A, ncols, top, best)
                p = A[top * ncols + c]
                clean = True
                for i in range(top + 1, m):
                    if A[i * ncols + c] != 0:
                        q = floordiv(A[i * ncols + c], p)
                        if q and axpy(&A[i * ncols], &A[top * ncols], q, c, ncols):
                            raise OverflowError("hermite_rows: int64 overflow")
                        if A[i * ncols + c] != 0:
                            clean = False
                if clean:
                    break
            if top < m and A[top * ncols + c] != 0:
                if A[top * ncols + c] < 0:
                    for j in range(ncols):
                        if A[top * ncols + j] == -9223372036854775807 - 1:
                            raise OverflowError("hermite_rows: int64 overflow")
                        A[top * ncols + j] = -A[top * ncols + j]
                p = A[top * ncols + c]
                for i in range(top):
                    q = floordiv(A[i * ncols + c], p)
                    if q and axpy(&A[i * ncols], &A[top * ncols], q, c, ncols):
                        raise OverflowError("hermite_rows: int64 overflow")
                top += 1
        return from_buffer(A, top, ncols)
    finally:
        free(A)


def reduce_vector(x, hnf):
    cdef Py_ssize_t n = len(x), c, j
    cdef long long q, t
    cdef long long *out = <long long*> malloc(max(n, 1) * sizeof(long long))
    cdef long long *row = <long long*> malloc(max(n, 1) * sizeof(long long))
    if out == NULL or row == NULL:
        free(out)
        free(row)
        raise MemoryError()
    try:
        for j in range(n):
            out[j] = x[j]
        for r in hnf:
            for j in range(n):
                row[j] = r[j]
            c = 0
            while row[c] == 0:
                c += 1
            q = floordiv(out[c], row[c])
            if q and axpy(out, row, q, c, n):
                raise OverflowError("reduce_vector: int64 overflow")
        return [out[j] for j in range(n)]
    finally:
        free(out)
        free(row)


def smith(M, Py_ssize_t nrows, Py_ssize_t ncols):
    cdef list Ml = [list(r) for r in M]
    cdef long long *A = to_buffer(Ml, nrows, ncols)
    cdef long long *U = NULL
    cdef long long *V = NULL
    cdef Py_ssize_t i, j, t, bi, bj, bad, k
    cdef long long p, q, bv, tmp
    cdef bint dirty
    try:
        U = <long long*> malloc(max(nrows * nrows, 1) * sizeof(long long))
        V = <long long*> malloc(max(ncols * ncols, 1) * sizeof(long long))
        if U == NULL or V == NULL:
            raise MemoryError()
        for i in range(nrows):
            for j in range(nrows):
                U[i * nrows + j] = 1 if i == j else 0
        for i in range(ncols):
            for j in range(ncols):
                V[i * ncols + j] = 1 if i == j else 0
        t = 0
        while t < min(nrows, ncols):
            bi = -1
            bj = -1
            for i in range(t, nrows):
                for j in range(t, ncols):
                    if A[i * ncols + j] != 0 and (
                            bi < 0 or absll(A[i * ncols + j]) < absll(A[bi * ncols + bj])):
                        bi = i
                        bj = j
            if bi < 0:
                break
            swap_row(A, ncols, t, bi)
            swap_row(U, nrows, t, bi)
            _swap_col(A, nrows, ncols, t, bj)
            _swap_col(V, ncols, ncols, t, bj)
            while True:
                p = A[t * ncols + t]
                dirty = False
                for i in range(t + 1, nrows):
                    if A[i * ncols + t]:
                        q = floordiv(A[i * ncols + t], p)
                        if q and (axpy(&A[i * ncols], &A[t * ncols], q, 0, ncols)
                                  or axpy(&U[i * nrows], &U[t * nrows], q, 0, nrows)):
                            raise OverflowError("smith: int64 overflow")
                        if A[i * ncols + t]:
                            dirty = True
                for j in range(t + 1, ncols):
                    if A[t * ncols + j]:
                        q = floordiv(A[t * ncols + j], p)
                        if q and (_col_axpy(A, nrows, ncols, j, t, q)
                                  or _col_axpy(V, ncols, ncols, j, t, q)):
                            raise OverflowError("smith: int64 overflow")
                        if A[t * ncols + j]:
                            dirty = True
                if dirty:
                    bi = t
                    bj = t
                    bv = absll(p)
                    for i in range(t + 1, nrows):
                        if A[i * ncols + t] and absll(A[i * ncols + t]) < bv:
                            bi = i
                            bj = t
                            bv = absll(A[i * ncols + t])
                    for j in range(t + 1, ncols):
                        if A[t * ncols + j] and absll(A[t * ncols + j]) < bv:
                            bi = t
                            bj = j
                            bv = absll(A[t * ncols + j])
                    swap_row(A, ncols, t, bi)
                    swap_row(U, nrows, t, bi)
                    _swap_col(A, nrows, ncols, t, bj)
                    _swap_col(V, ncols, ncols, t, bj)
                    continue
                bad = -1
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if A[i * ncols + j] % p:
                            bad = i
                            break
                    if bad >= 0:
                        break
                if bad < 0:
                    break
                if (axpy(&A[t * ncols], &A[bad * ncols], -1, 0, ncols)
                        or axpy(&U[t * nrows], &U[bad * nrows], -1, 0, nrows)):
                    raise OverflowError("smith: int64 overflow")
            if A[t * ncols + t] < 0:
                for j in range(ncols):
                    A[t * ncols + j] = -A[t * ncols + j]
                for j in range(nrows):
                    U[t * nrows + j] = -U[t * nrows + j]
            t += 1
        return (from_buffer(U, nrows, nrows), from_buffer(A, nrows, ncols),
                from_buffer(V, ncols, ncols))
    finally:
        free(A)
        if U != NULL:
            free(U)
        if V != NULL:
            free(V)


cdef void _swap_col(long long *A, Py_ssize_t m, Py_ssize_t n, Py_ssize_t a,
                    Py_ssize_t b) nogil:
    cdef Py_ssize_t i
    cdef long long t
    if a == b:
        return
    for i in range(m):
        t = A[i * n + a]
        A[i * n + a] = A[i * n + b]
        A[i * n + b] = t


cdef int _col_axpy(long long *A, Py_ssize_t m, Py_ssize_t n, Py_ssize_t dst,
                   Py_ssize_t src, long long q) nogil:
    cdef Py_ssize_t i
    cdef long long t
    for i in range(m):
        if A[i * n + src] != 0:
            if ck_mul(q, A[i * n + src], &t):
                return 1
            if ck_sub(A[i * n + dst], t, &A[i * n + dst]):
                return 1
    return 0
