# cython: boundscheck=False, wraparound=False, cdivision=True
"""Contingency-count and Shannon-measure kernels over 0/1 columns.

Single C pass per call. Cell indices pack the column values
most-significant-first, e.g. for ``counts3`` the cell for
(x=1, y=0, z=1) is ``c[0b101]``. The ``*_bits`` functions fuse the
counting with the default Shannon arithmetic; generalized generator
functions stay on the Python side.
"""

from libc.math cimport log2


cdef inline double _h_term(long long c, long long n) noexcept:
    cdef double p
    if c == 0:
        return 0.0
    p = <double> c / <double> n
    return -p * log2(p)


cdef inline double _h2(long long a, long long b) noexcept:
    return _h_term(a, a + b) + _h_term(b, a + b)


def counts1(const unsigned char[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long long c0 = 0, c1 = 0
    for i in range(n):
        if x[i]:
            c1 += 1
        else:
            c0 += 1
    return (c0, c1)


def counts2(const unsigned char[::1] x, const unsigned char[::1] y):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long long c[4]
    if y.shape[0] != n:
        raise ValueError("column length mismatch")
    c[0] = c[1] = c[2] = c[3] = 0
    for i in range(n):
        c[(x[i] << 1) | y[i]] += 1
    return (c[0], c[1], c[2], c[3])


def counts3(const unsigned char[::1] x, const unsigned char[::1] y,
            const unsigned char[::1] z):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long long c[8]
    if y.shape[0] != n or z.shape[0] != n:
        raise ValueError("column length mismatch")
    for i in range(8):
        c[i] = 0
    for i in range(n):
        c[(x[i] << 2) | (y[i] << 1) | z[i]] += 1
    return (c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7])


def h_bits(const unsigned char[::1] x):
    """Shannon entropy of one column, in bits."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long long c1 = 0
    for i in range(n):
        if x[i]:
            c1 += 1
    return _h_term(n - c1, n) + _h_term(c1, n)


def mi_bits(const unsigned char[::1] x, const unsigned char[::1] y):
    """Shannon I(X;Y) in bits: H(X) minus the Y-weighted conditional
    entropies of X."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long long c[4]
    cdef long long n_y
    cdef double total
    cdef int y_val
    if y.shape[0] != n:
        raise ValueError("column length mismatch")
    c[0] = c[1] = c[2] = c[3] = 0
    for i in range(n):
        c[(x[i] << 1) | y[i]] += 1
    total = _h2(c[0] + c[1], c[2] + c[3])
    for y_val in range(2):
        n_y = c[y_val] + c[2 + y_val]
        if n_y:
            total -= (<double> n_y / <double> n) * _h2(c[y_val], c[2 + y_val])
    return total


def cmi_bits(const unsigned char[::1] x, const unsigned char[::1] y,
             const unsigned char[::1] z):
    """Shannon I(X;Y|Z) in bits, stratified over Z."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef long long c[8]
    cdef long long n_z, n_yz
    cdef double total, inner
    cdef int z_val, y_val
    if y.shape[0] != n or z.shape[0] != n:
        raise ValueError("column length mismatch")
    for i in range(8):
        c[i] = 0
    for i in range(n):
        c[(x[i] << 2) | (y[i] << 1) | z[i]] += 1
    total = 0.0
    for z_val in range(2):
        n_z = (c[z_val] + c[2 + z_val] + c[4 + z_val] + c[6 + z_val])
        if n_z == 0:
            continue
        inner = _h2(c[z_val] + c[2 + z_val], c[4 + z_val] + c[6 + z_val])
        for y_val in range(2):
            n_yz = c[(y_val << 1) | z_val] + c[4 + ((y_val << 1) | z_val)]
            if n_yz:
                inner -= (<double> n_yz / <double> n_z) * _h2(
                    c[(y_val << 1) | z_val], c[4 + ((y_val << 1) | z_val)])
        total += (<double> n_z / <double> n) * inner
    return total
