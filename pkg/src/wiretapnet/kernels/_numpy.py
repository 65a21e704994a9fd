"""Vectorized numpy kernels; same contracts as the numba ones."""
import numpy as np


def add(a, b, p, m):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if m == 1:
        return (a + b) % p
    if p == 2:
        return a ^ b
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    w = 1
    for _ in range(m):
        out += ((a // w % p + b // w % p) % p) * w
        w *= p
    return out


def neg(a, p, m):
    a = np.asarray(a, dtype=np.int64)
    if m == 1:
        return (-a) % p
    if p == 2:
        return a.copy()
    out = np.zeros_like(a)
    w = 1
    for _ in range(m):
        out += ((-(a // w % p)) % p) * w
        w *= p
    return out


def mul(a, b, p, m, exp, log):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if m == 1:
        return (a * b) % p
    a, b = np.broadcast_arrays(a, b)
    out = exp[(log[a] + log[b]) % exp.shape[0]]
    out[(a == 0) | (b == 0)] = 0
    return out


def inv(a, exp, log):
    n = exp.shape[0]
    return exp[(n - log[np.asarray(a, dtype=np.int64)]) % n]


def matmul(a, b, p, m, exp, log):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if m == 1:
        # entries < 2**20 and inner dims stay small, so int64 cannot overflow
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for t in range(a.shape[1]):
        out = add(out, mul(a[:, t : t + 1], b[t : t + 1, :], p, m, exp, log), p, m)
    return out


def rref(a, p, m, exp, log):
    r = np.array(a, dtype=np.int64, copy=True)
    rows, cols = r.shape
    pivots = []
    rk = 0
    for c in range(cols):
        if rk == rows:
            break
        nz = np.nonzero(r[rk:, c])[0]
        if nz.size == 0:
            continue
        piv = rk + int(nz[0])
        if piv != rk:
            r[[rk, piv]] = r[[piv, rk]]
        r[rk] = mul(r[rk], inv(r[rk, c], exp, log), p, m, exp, log)
        f = r[:, c].copy()
        f[rk] = 0
        if f.any():
            r = add(r, neg(mul(f[:, None], r[rk][None, :], p, m, exp, log), p, m), p, m)
        pivots.append(c)
        rk += 1
    return r, rk, np.array(pivots, dtype=np.int64)


def rank(a, p, m, exp, log):
    return rref(a, p, m, exp, log)[1]
