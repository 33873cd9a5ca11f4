"""Numba-jitted implementations of the hot kernels.

Same signatures and semantics as _kernels_numpy; plain loops, compiled on
first use (cache=True persists compilation across runs).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._kernels_numpy import digits_per_chunk, pack_rows


@njit(cache=True)
def _rref_core(a, p, inv):
    n_rows, n_cols = a.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = -1
        for i in range(r, n_rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n_cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        s = inv[a[r, c]]
        if s != 1:
            for j in range(n_cols):
                a[r, j] = (a[r, j] * s) % p
        for i in range(n_rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(n_cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
    return r


def rref_mod(mat, p: int):
    a = np.asarray(mat, dtype=np.int64) % p
    a = np.ascontiguousarray(a).copy()
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a, 0
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, -1, p)
    rank = _rref_core(a, p, inv)
    return a, int(rank)


@njit(cache=True)
def _membership_core(W, rows, cols, is_unit, p, out):
    p2 = p * p
    n, m = W.shape
    k = cols.shape[0]
    buf = np.empty(m, dtype=np.int64)
    for i in range(n):
        for j in range(m):
            buf[j] = W[i, j] % p2
        good = True
        for t in range(k):
            c = cols[t]
            v = buf[c]
            if v == 0:
                continue
            if is_unit[t]:
                coef = v
            else:
                if v % p != 0:
                    good = False
                    break
                coef = v // p
            for j in range(m):
                buf[j] = (buf[j] - coef * rows[t, j]) % p2
        if good:
            for j in range(m):
                if buf[j] != 0:
                    good = False
                    break
        out[i] = good
    return out


def membership_mask(W, rows, cols, is_unit, p: int):
    W = np.ascontiguousarray(np.asarray(W, dtype=np.int64))
    rows = np.ascontiguousarray(np.asarray(rows, dtype=np.int64))
    cols = np.ascontiguousarray(np.asarray(cols, dtype=np.int64))
    is_unit = np.ascontiguousarray(np.asarray(is_unit, dtype=np.bool_))
    out = np.zeros(W.shape[0], dtype=np.bool_)
    if W.shape[0] == 0:
        return out
    return _membership_core(W, rows, cols, is_unit, p, out)


@njit(cache=True)
def _carry_scan_core(Y0, alpha, length, rows, cols, is_unit, p):
    n, beta = Y0.shape
    k = cols.shape[0]
    p2 = p * p
    out = np.zeros(n, dtype=np.bool_)
    buf = np.empty(length, dtype=np.int64)
    for iu in range(n):
        good = True
        for iv in range(n):
            for j in range(alpha):
                buf[j] = 0
            for j in range(beta):
                if Y0[iu, j] + Y0[iv, j] >= p:
                    buf[alpha + j] = p
                else:
                    buf[alpha + j] = 0
            member = True
            for t in range(k):
                c = cols[t]
                v = buf[c]
                if v == 0:
                    continue
                if is_unit[t]:
                    coef = v
                else:
                    if v % p != 0:
                        member = False
                        break
                    coef = v // p
                for j in range(length):
                    buf[j] = (buf[j] - coef * rows[t, j]) % p2
            if member:
                for j in range(length):
                    if buf[j] != 0:
                        member = False
                        break
            if not member:
                good = False
                break
        out[iu] = good
    return out


def carry_kernel_mask(Y0, alpha: int, length: int, rows, cols, is_unit, p: int, chunk: int = 512):
    Y0 = np.ascontiguousarray(np.asarray(Y0, dtype=np.int64))
    rows = np.ascontiguousarray(np.asarray(rows, dtype=np.int64))
    cols = np.ascontiguousarray(np.asarray(cols, dtype=np.int64))
    is_unit = np.ascontiguousarray(np.asarray(is_unit, dtype=np.bool_))
    return _carry_scan_core(Y0, alpha, length, rows, cols, is_unit, p)


@njit(cache=True)
def _row_less(A, i, key):
    for j in range(A.shape[1]):
        if A[i, j] < key[j]:
            return True
        if A[i, j] > key[j]:
            return False
    return False


@njit(cache=True)
def _row_found(A, key):
    lo = 0
    hi = A.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if _row_less(A, mid, key):
            lo = mid + 1
        else:
            hi = mid
    if lo >= A.shape[0]:
        return False
    for j in range(A.shape[1]):
        if A[lo, j] != key[j]:
            return False
    return True


@njit(cache=True)
def _translate_scan_core(G, ref, p, k):
    n, n_cols = G.shape
    n_chunks = ref.shape[1]
    out = np.zeros(n, dtype=np.bool_)
    key = np.empty(n_chunks, dtype=np.int64)
    for iu in range(n):
        good = True
        for iv in range(n):
            idx = 0
            for w in range(n_chunks):
                acc = np.int64(0)
                mult = np.int64(1)
                for _ in range(k):
                    if idx < n_cols:
                        acc += ((G[iu, idx] + G[iv, idx]) % p) * mult
                        mult *= p
                        idx += 1
                key[w] = acc
            if not _row_found(ref, key):
                good = False
                break
        out[iu] = good
    return out


def translate_kernel_mask(G, p: int):
    G = np.ascontiguousarray(np.asarray(G, dtype=np.int64))
    packed = pack_rows(G, p)
    order = np.lexsort(packed.T[::-1])
    ref = np.ascontiguousarray(packed[order])
    return _translate_scan_core(G, ref, p, digits_per_chunk(p))
