"""NumPy fallback for the contingency-count and Shannon kernels.

Same contracts as the compiled module: columns are C-contiguous uint8
arrays of 0/1, counts are tuples of plain ints with cells packed
most-significant-first, and the ``*_bits`` functions use the same
summation order so both backends agree bit-for-bit in practice.
"""

import math

import numpy as np


def counts1(x):
    n1 = int(np.count_nonzero(x))
    return (len(x) - n1, n1)


def counts2(x, y):
    if len(y) != len(x):
        raise ValueError("column length mismatch")
    cells = np.bincount((x.astype(np.intp) << 1) | y, minlength=4)
    return tuple(int(v) for v in cells)


def counts3(x, y, z):
    if len(y) != len(x) or len(z) != len(x):
        raise ValueError("column length mismatch")
    cells = np.bincount((x.astype(np.intp) << 2) | (y.astype(np.intp) << 1) | z,
                        minlength=8)
    return tuple(int(v) for v in cells)


def _h_term(c, n):
    if c == 0:
        return 0.0
    p = c / n
    return -p * math.log2(p)


def _h2(a, b):
    return _h_term(a, a + b) + _h_term(b, a + b)


def h_bits(x):
    """Shannon entropy of one column, in bits."""
    c0, c1 = counts1(x)
    return _h_term(c0, len(x)) + _h_term(c1, len(x))


def mi_bits(x, y):
    """Shannon I(X;Y) in bits: H(X) minus the Y-weighted conditional
    entropies of X."""
    n = len(x)
    c = counts2(x, y)
    total = _h2(c[0] + c[1], c[2] + c[3])
    for y_val in (0, 1):
        n_y = c[y_val] + c[2 + y_val]
        if n_y:
            total -= (n_y / n) * _h2(c[y_val], c[2 + y_val])
    return total


def cmi_bits(x, y, z):
    """Shannon I(X;Y|Z) in bits, stratified over Z."""
    n = len(x)
    c = counts3(x, y, z)
    total = 0.0
    for z_val in (0, 1):
        n_z = c[z_val] + c[2 + z_val] + c[4 + z_val] + c[6 + z_val]
        if n_z == 0:
            continue
        inner = _h2(c[z_val] + c[2 + z_val], c[4 + z_val] + c[6 + z_val])
        for y_val in (0, 1):
            idx = (y_val << 1) | z_val
            n_yz = c[idx] + c[4 + idx]
            if n_yz:
                inner -= (n_yz / n_z) * _h2(c[idx], c[4 + idx])
        total += (n_z / n) * inner
    return total
