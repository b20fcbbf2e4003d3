# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled constant-term kernel (dense pruned box, int64 with overflow traps)."""

from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, calloc, free

cdef extern from *:
    """
    static inline int qp_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int qp_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int qp_mul_ovf(long long a, long long b, long long *r) nogil
    int qp_add_ovf(long long a, long long b, long long *r) nogil

cdef long long MAX_CELLS = 200000000


cdef int _box(int n, int j, int d, long long *mins, long long *maxs,
              long long *lo, long long *hi, long long *width, long long *stride,
              long long *cells) noexcept nogil:
    cdef int i
    cdef long long a, b, total = 1
    for i in range(n):
        a = j * mins[i]
        b = -(d - j) * maxs[i]
        lo[i] = a if a > b else b
        a = j * maxs[i]
        b = -(d - j) * mins[i]
        hi[i] = a if a < b else b
        if hi[i] < lo[i]:
            return 0
        width[i] = hi[i] - lo[i] + 1
    for i in range(n - 1, -1, -1):
        stride[i] = total
        total *= width[i]
        if total > MAX_CELLS:
            return -1
    cells[0] = total
    return 1


def constant_term_power(long long[:, ::1] exps, long long[::1] coeffs, int d):
    """Constant coefficient of ``W**d``; raises OverflowError past int64."""
    cdef Py_ssize_t k = exps.shape[0]
    cdef int n = <int>exps.shape[1]
    if d == 0:
        return 1
    if k == 0:
        return 0
    cdef long long *mins = <long long *>malloc(n * sizeof(long long))
    cdef long long *maxs = <long long *>malloc(n * sizeof(long long))
    cdef long long *lo = <long long *>malloc(2 * n * sizeof(long long))
    cdef long long *hi = <long long *>malloc(2 * n * sizeof(long long))
    cdef long long *width = <long long *>malloc(2 * n * sizeof(long long))
    cdef long long *stride = <long long *>malloc(2 * n * sizeof(long long))
    cdef long long *idx = <long long *>malloc(n * sizeof(long long))
    cdef long long *cur = NULL
    cdef long long *nxt = NULL
    cdef long long cur_cells = 1, nxt_cells = 0, cell, off, val, prod, f
    cdef Py_ssize_t t
    cdef int i, j, status, ok, overflow = 0, empty = 0, too_big = 0
    cdef long long result = 0
    try:
        for i in range(n):
            mins[i] = exps[0, i]
            maxs[i] = exps[0, i]
            for t in range(1, k):
                if exps[t, i] < mins[i]:
                    mins[i] = exps[t, i]
                if exps[t, i] > maxs[i]:
                    maxs[i] = exps[t, i]
        # slot 0 holds the current box, slot n the next one
        status = _box(n, 0, d, mins, maxs, lo, hi, width, stride, &cur_cells)
        if status == 0:
            return 0
        cur = <long long *>calloc(1, sizeof(long long))
        cur[0] = 1
        with nogil:
            for j in range(1, d + 1):
                status = _box(n, j, d, mins, maxs, lo + n, hi + n, width + n,
                              stride + n, &nxt_cells)
                if status == 0:
                    empty = 1
                    break
                if status < 0:
                    too_big = 1
                    break
                nxt = <long long *>calloc(nxt_cells, sizeof(long long))
                if nxt == NULL:
                    too_big = 1
                    break
                for i in range(n):
                    idx[i] = 0
                for cell in range(cur_cells):
                    val = cur[cell]
                    if val != 0:
                        for t in range(k):
                            off = 0
                            ok = 1
                            for i in range(n):
                                f = lo[i] + idx[i] + exps[t, i]
                                if f < lo[n + i] or f > hi[n + i]:
                                    ok = 0
                                    break
                                off += (f - lo[n + i]) * stride[n + i]
                            if ok:
                                if qp_mul_ovf(val, coeffs[t], &prod) or \
                                        qp_add_ovf(nxt[off], prod, &nxt[off]):
                                    overflow = 1
                                    break
                        if overflow:
                            break
                    # odometer over the current box, last coordinate fastest
                    i = n - 1
                    while i >= 0:
                        idx[i] += 1
                        if idx[i] < width[i]:
                            break
                        idx[i] = 0
                        i -= 1
                if overflow:
                    break
                free(cur)
                cur = nxt
                nxt = NULL
                cur_cells = nxt_cells
                for i in range(n):
                    lo[i] = lo[n + i]
                    hi[i] = hi[n + i]
                    width[i] = width[n + i]
                    stride[i] = stride[n + i]
            if not (overflow or empty or too_big):
                result = cur[0]
        if overflow:
            raise OverflowError("coefficient exceeds int64 range")
        if too_big:
            raise MemoryError("pruned exponent box too large for the dense kernel")
        if empty:
            return 0
        return result
    finally:
        free(mins); free(maxs); free(lo); free(hi); free(width); free(stride); free(idx)
        if cur != NULL:
            free(cur)
        if nxt != NULL:
            free(nxt)
