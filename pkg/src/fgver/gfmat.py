"""Vectorized matrix arithmetic over a FieldTable.

Element codes decompose into base-p digits; a product of matrices over GF(p^k)
then becomes k^2 integer matrix products over GF(p), which run through BLAS as
exact float64 multiplies (all intermediate values stay far below 2^53).
This is the workhorse behind every pairwise form-evaluation loop.
"""

from __future__ import annotations

import numpy as np


def to_digits(F, arr):
    """Base-p digit decomposition: shape (k,) + arr.shape, dtype int64."""
    arr = np.asarray(arr, dtype=np.int64)
    out = np.empty((F.k,) + arr.shape, dtype=np.int64)
    rem = arr
    for s in range(F.k):
        out[s] = rem % F.p
        rem = rem // F.p
    return out

def from_digits(F, dig):
    out = np.zeros(dig.shape[1:], dtype=np.int64)
    for s in range(F.k - 1, -1, -1):
        out = out * F.p + dig[s]
    return out


def _struct_tensor(F):
    # E[s, t, c] = c-th digit of e_s * e_t, where e_s has code p^s
    E = np.empty((F.k, F.k, F.k), dtype=np.int64)
    for s in range(F.k):
        for t in range(F.k):
            prod = int(F.mul[F.p ** s, F.p ** t])
            for c in range(F.k):
                E[s, t, c] = prod % F.p
                prod //= F.p
    return E


def gf_matmul(F, A, B):
    """A @ B over GF(q) for 2-d code arrays A (m x n) and B (n x l)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.k == 1:
        prod = A.astype(np.float64) @ B.astype(np.float64)
        return (prod % F.p).astype(np.int64)
    Ad = to_digits(F, A).astype(np.float64)
    Bd = to_digits(F, B).astype(np.float64)
    E = _struct_tensor(F)
    k = F.k
    parts = [[(Ad[s] @ Bd[t]) % F.p for t in range(k)] for s in range(k)]
    digits = np.zeros((k,) + parts[0][0].shape, dtype=np.int64)
    for s in range(k):
        for t in range(k):
            pst = parts[s][t].astype(np.int64)
            for c in range(k):
                if E[s, t, c]:
                    digits[c] += E[s, t, c] * pst
    digits %= F.p
    return from_digits(F, digits)


def gf_mul(F, a, b):
    return F.mul[np.asarray(a), np.asarray(b)]

def gf_add(F, a, b):
    return F.add[np.asarray(a), np.asarray(b)]


def gf_add_reduce(F, arr, axis):
    """Sum of codes along an axis, via digitwise mod-p addition."""
    dig = to_digits(F, arr)
    dig = dig.sum(axis=axis + 1) % F.p
    return from_digits(F, dig)


def frob_codes(pair, arr):
    return pair.frob[np.asarray(arr)]


def scale_rows(F, mat, scalars):
    """Row-wise scalar multiplication of a code matrix."""
    return F.mul[np.asarray(mat), np.asarray(scalars)[:, None]]
