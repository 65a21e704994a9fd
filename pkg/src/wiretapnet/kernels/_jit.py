"""Scalar-loop kernels compiled with numba.

Field elements are integer codes: the base-p digits of a code are the
polynomial coefficients, low degree first. ``exp``/``log`` are the
discrete exponent/logarithm tables of the field's primitive element.
"""
import numpy as np
from numba import njit

_OPTS = dict(cache=True, nogil=True)


@njit(**_OPTS)
def add(a, b, p, m):
    if m == 1:
        s = a + b
        return s - p if s >= p else s
    if p == 2:
        return a ^ b
    r = 0
    w = 1
    for _ in range(m):
        r += ((a % p + b % p) % p) * w
        a //= p
        b //= p
        w *= p
    return r


@njit(**_OPTS)
def neg(a, p, m):
    if m == 1:
        return 0 if a == 0 else p - a
    if p == 2:
        return a
    r = 0
    w = 1
    for _ in range(m):
        d = a % p
        if d:
            r += (p - d) * w
        a //= p
        w *= p
    return r


@njit(**_OPTS)
def mul(a, b, p, m, exp, log):
    if a == 0 or b == 0:
        return 0
    if m == 1:
        return (a * b) % p
    return exp[(log[a] + log[b]) % exp.shape[0]]


@njit(**_OPTS)
def inv(a, exp, log):
    n = exp.shape[0]
    return exp[(n - log[a]) % n]


@njit(**_OPTS)
def matmul(a, b, p, m, exp, log):
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            if m == 1:
                acc = 0
                for t in range(inner):
                    acc += a[i, t] * b[t, j]
                out[i, j] = acc % p
            else:
                acc = 0
                for t in range(inner):
                    acc = add(acc, mul(a[i, t], b[t, j], p, m, exp, log), p, m)
                out[i, j] = acc
    return out


@njit(**_OPTS)
def rref(a, p, m, exp, log):
    """Reduced row echelon form; returns (R, rank, pivot columns)."""
    r = a.copy()
    rows, cols = r.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if r[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(cols):
                tmp = r[rank, j]
                r[rank, j] = r[piv, j]
                r[piv, j] = tmp
        s = inv(r[rank, c], exp, log)
        for j in range(c, cols):
            r[rank, j] = mul(r[rank, j], s, p, m, exp, log)
        for i in range(rows):
            f = r[i, c]
            if i == rank or f == 0:
                continue
            nf = neg(f, p, m)
            for j in range(c, cols):
                if r[rank, j] != 0:
                    r[i, j] = add(r[i, j], mul(nf, r[rank, j], p, m, exp, log), p, m)
        pivots[rank] = c
        rank += 1
    return r, rank, pivots[:rank].copy()


@njit(**_OPTS)
def rank(a, p, m, exp, log):
    # forward elimination only
    r = a.copy()
    rows, cols = r.shape
    rk = 0
    for c in range(cols):
        if rk == rows:
            break
        piv = -1
        for i in range(rk, rows):
            if r[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rk:
            for j in range(cols):
                tmp = r[rk, j]
                r[rk, j] = r[piv, j]
                r[piv, j] = tmp
        s = inv(r[rk, c], exp, log)
        for i in range(rk + 1, rows):
            f = r[i, c]
            if f == 0:
                continue
            nf = neg(mul(f, s, p, m, exp, log), p, m)
            for j in range(c, cols):
                if r[rk, j] != 0:
                    r[i, j] = add(r[i, j], mul(nf, r[rk, j], p, m, exp, log), p, m)
        rk += 1
    return rk
