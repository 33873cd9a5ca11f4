"""Pure-numpy implementations of the hot kernels.

Reference semantics for the numba versions; selected via ZPZP2_JIT=numpy.
All functions take and return plain int64 / bool arrays.
"""

from __future__ import annotations

import numpy as np


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def rref_mod(mat, p: int):
    """Reduced row echelon form over GF(p).

    Pivot rule: leftmost column, topmost row.  Returns (rref, rank); rows
    below the rank are zero.
    """
    a = np.asarray(mat, dtype=np.int64) % p
    a = np.ascontiguousarray(a).copy()
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    n_rows, n_cols = a.shape
    inv = _inverse_table(p)
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - col[hit, None] * a[r][None, :]) % p
        r += 1
    return a, r


def membership_mask(W, rows, cols, is_unit, p: int):
    """Reduce lifted words against a forced-coefficient basis.

    W: (N, m) words mod p^2 (Z_p block already scaled by p).  rows/cols/
    is_unit describe the pivots: a unit pivot absorbs the full residue, a
    p-pivot requires divisibility by p.  True where the word is in the span.
    """
    p2 = p * p
    W = np.asarray(W, dtype=np.int64) % p2
    W = W.copy()
    n = W.shape[0]
    ok = np.ones(n, dtype=bool)
    for t in range(len(cols)):
        c = int(cols[t])
        v = W[:, c]
        if is_unit[t]:
            coef = v
        else:
            ok &= v % p == 0
            coef = v // p
        hit = np.nonzero(coef)[0]
        if hit.size:
            W[hit] = (W[hit] - coef[hit, None] * rows[t][None, :]) % p2
    ok &= ~W.any(axis=1)
    return ok


def carry_kernel_mask(Y0, alpha: int, length: int, rows, cols, is_unit, p: int, chunk: int = 512):
    """For each codeword u: do all pairwise carry words stay inside the code?

    Y0 is the (N, beta) matrix of low base-p digits of the Z_{p^2} blocks.
    The carry word of (u, v) is zero on the Z_p block and p * overflow flag
    elsewhere; membership is tested with the reduction pivots.  Chunked so
    failing candidates exit early.
    """
    Y0 = np.asarray(Y0, dtype=np.int64)
    n = Y0.shape[0]
    out = np.zeros(n, dtype=bool)
    for iu in range(n):
        u0 = Y0[iu]
        good = True
        for start in range(0, n, chunk):
            block = Y0[start : start + chunk]
            carries = np.zeros((block.shape[0], length), dtype=np.int64)
            carries[:, alpha:] = p * ((u0[None, :] + block) >= p)
            if not membership_mask(carries, rows, cols, is_unit, p).all():
                good = False
                break
        out[iu] = good
    return out


def digits_per_chunk(p: int) -> int:
    k = 1
    while p ** (k + 1) < 2**62:
        k += 1
    return k


def pack_rows(G, p: int) -> np.ndarray:
    """Pack base-p digit rows into a few int64 columns (lexicographic order)."""
    G = np.asarray(G, dtype=np.int64)
    n_rows, n_cols = G.shape
    k = digits_per_chunk(p)
    n_chunks = max(1, -(-n_cols // k))
    padded = np.zeros((n_rows, n_chunks * k), dtype=np.int64)
    padded[:, :n_cols] = G
    weights = p ** np.arange(k, dtype=np.int64)
    return padded.reshape(n_rows, n_chunks, k) @ weights


def _lex_sorted(packed: np.ndarray) -> np.ndarray:
    order = np.lexsort(packed.T[::-1])
    return packed[order]


def translate_kernel_mask(G, p: int):
    """For each Gray codeword g: does G + g permute the rows of G?

    Set equality is tested by packing rows to int64 chunks and comparing
    lexicographically sorted copies.
    """
    G = np.asarray(G, dtype=np.int64)
    n = G.shape[0]
    ref = _lex_sorted(pack_rows(G, p))
    out = np.zeros(n, dtype=bool)
    for iu in range(n):
        shifted = (G + G[iu][None, :]) % p
        out[iu] = np.array_equal(_lex_sorted(pack_rows(shifted, p)), ref)
    return out
