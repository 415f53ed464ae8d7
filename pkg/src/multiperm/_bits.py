"""Vectorised kernels over arrays of bit-packed relation codes.

A code packs row ``i`` into bits ``[n*i, n*(i+1))``.  Arrays are uint32, so
these helpers serve n <= 5.
"""
import numpy as np

DTYPE = np.uint32


def unpack(codes, n):
    """Rows of every code: array of shape (n, len(codes))."""
    codes = np.asarray(codes, dtype=DTYPE)
    top = DTYPE((1 << n) - 1)
    return np.stack([(codes >> DTYPE(n * i)) & top for i in range(n)])


def pack(rows, n):
    out = np.zeros(rows.shape[1], dtype=DTYPE)
    for i in range(n):
        out |= rows[i].astype(DTYPE) << DTYPE(n * i)
    return out


def combine_table(rows_of_b, n):
    """For a fixed relation b: entry v is the OR of b's rows selected by mask v."""
    table = np.zeros(1 << n, dtype=DTYPE)
    for v in range(1 << n):
        acc = 0
        for j in range(n):
            if v >> j & 1:
                acc |= rows_of_b[j]
        table[v] = acc
    return table


def right_mul(codes, b_rows, n):
    """x . b for every x in ``codes`` (b fixed, given as a row tuple)."""
    table = combine_table(b_rows, n)
    return pack(table[unpack(codes, n)], n)


def left_mul(a_rows, codes, n):
    """a . x for every x in ``codes`` (a fixed)."""
    xr = unpack(codes, n)
    out = np.zeros_like(xr)
    for i, r in enumerate(a_rows):
        for j in range(n):
            if r >> j & 1:
                out[i] |= xr[j]
    return pack(out, n)


def mul(a_codes, b_codes, n):
    """Elementwise products a[k] . b[k]."""
    ar, br = unpack(a_codes, n), unpack(b_codes, n)
    out = np.zeros_like(ar)
    for i in range(n):
        for j in range(n):
            sel = (ar[i] >> DTYPE(j)) & DTYPE(1)
            out[i] |= np.where(sel.astype(bool), br[j], DTYPE(0))
    return pack(out, n)


def is_multiperm(codes, n):
    rows = unpack(codes, n)
    top = DTYPE((1 << n) - 1)
    cols = np.bitwise_or.reduce(rows, axis=0)
    return np.all(rows != 0, axis=0) & (cols == top)


def is_perm(codes, n):
    rows = unpack(codes, n)
    single = np.all((rows != 0) & ((rows & (rows - DTYPE(1))) == 0), axis=0)
    cols = np.bitwise_or.reduce(rows, axis=0)
    return single & (cols == DTYPE((1 << n) - 1))


def sort_keys(codes, n):
    """Row-major binary reading of each matrix, as used for canonical order."""
    codes = np.asarray(codes, dtype=np.uint64)
    key = np.zeros_like(codes)
    for i in range(n):
        for j in range(n):
            bit = (codes >> np.uint64(n * i + j)) & np.uint64(1)
            key |= bit << np.uint64(n * n - 1 - (n * i + j))
    return key
