"""Generalized Gray map and its carry structure.

``phi`` sends one residue mod p^2 to a length-p word over Z_p; extended to
mixed words it fixes the Z_p block and expands each Z_{p^2} coordinate.
The map is not additive: the defect is the image of an order-p carry word,
and that carry has a closed polynomial form whose coefficients come from a
double power sum.  Everything needed to evaluate, tabulate and cross-check
that structure lives here.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .ring import MixedSpace, check_prime, pary_expand


def _pow_mod(base, e: int, mod: int):
    """Elementwise base**e mod ``mod`` without int64 overflow."""
    out = np.ones_like(np.asarray(base, dtype=np.int64))
    b = np.asarray(base, dtype=np.int64) % mod
    for _ in range(e):
        out = (out * b) % mod
    return out


class GrayMap:
    """Tabulated Gray map for one prime.

    ``table[u]`` is the image of the residue u mod p^2: with u = u0 + p*u1,
    the image is (u1, u1, ..., u1) + u0 * (0, 1, ..., p-1) mod p, columns in
    ascending multiplier order.
    """

    def __init__(self, p: int):
        self.p = check_prime(p)
        self.row = np.arange(self.p, dtype=np.int64)
        u = np.arange(self.p * self.p, dtype=np.int64)
        u0, u1 = pary_expand(u, self.p)
        self.table = (u1[:, None] + u0[:, None] * self.row[None, :]) % self.p

    def phi(self, u) -> np.ndarray:
        """Image of a single residue mod p^2 (length-p word over Z_p)."""
        u = int(u)
        if not 0 <= u < self.p * self.p:
            raise ValueError(f"residue out of range [0, {self.p * self.p})")
        return self.table[u].copy()

    def image(self, space: MixedSpace, w) -> np.ndarray:
        """Image of a mixed word: Z_p block kept, each Z_{p^2} entry expanded."""
        return self.image_rows(space, np.asarray(w, dtype=np.int64)[None, :])[0]

    def image_rows(self, space: MixedSpace, rows) -> np.ndarray:
        """Vectorized image of a stack of mixed words, shape (N, alpha + p*beta)."""
        if space.p != self.p:
            raise ValueError("space and Gray map disagree on p")
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] != space.length:
            raise ValueError(f"expected shape (N, {space.length})")
        x = rows[:, : space.alpha]
        y = rows[:, space.alpha :]
        expanded = self.table[y].reshape(rows.shape[0], space.beta * self.p)
        return np.concatenate([x, expanded], axis=1)


def carry_direct(u, v, p: int):
    """Carry of one coordinate pair: p when the low base-p digits overflow.

    Scalar in, int out; arrays broadcast elementwise.
    """
    p = check_prime(p)
    u0 = np.asarray(u, dtype=np.int64) % p
    v0 = np.asarray(v, dtype=np.int64) % p
    out = np.where(u0 + v0 >= p, p, 0)
    if np.ndim(u) == 0 and np.ndim(v) == 0:
        return int(out)
    return out


def carry_word(space: MixedSpace, u, v) -> np.ndarray:
    """Carry word of two mixed words: zero on the Z_p block, 0/p on the rest.

    The returned word has order dividing p, and Gray additivity reads
    image(u + v) = image(u) + image(v) + image(carry_word(u, v)) mod p.
    """
    u = space.reduce(u)
    v = space.reduce(v)
    out = space.zeros()
    out[space.alpha :] = carry_direct(space.y_part(u), space.y_part(v), space.p)
    return out


def span_power_degrees(p: int) -> tuple:
    """Star-power degrees whose order-p products generate the linear span.

    Sorted tuple: the odd degrees 3, 5, ..., p together with p - 1.
    """
    p = check_prime(p)
    return tuple(sorted(set(1 + 2 * m for m in range(1, (p - 1) // 2 + 1)) | {p - 1}))


def sigma_hat(i: int, k: int, p: int) -> int:
    """Elementary symmetric polynomial of degree i in {0, ..., p-1} \\ {k}, mod p."""
    p = check_prime(p)
    if not 0 <= k < p:
        raise ValueError(f"excluded point {k} out of range [0, {p})")
    if i < 0:
        raise ValueError("degree must be >= 0")
    xs = [x for x in range(p) if x != k]
    if i > len(xs):
        return 0
    # coefficient extraction from prod (1 + x*z)
    coeffs = [1] + [0] * i
    for x in xs:
        for d in range(min(i, len(coeffs) - 1), 0, -1):
            coeffs[d] = (coeffs[d] + x * coeffs[d - 1]) % p
    return coeffs[i] % p


def power_sum_coeff(i: int, j: int, p: int) -> int:
    """Double power sum over digit pairs that overflow: sum k^i l^j mod p.

    Runs over 1 <= k <= p-1 and p-k <= l <= p-1; these are exactly the
    coefficients of the closed carry polynomial.
    """
    p = check_prime(p)
    if i < 0 or j < 0:
        raise ValueError("exponents must be >= 0")
    total = 0
    for k in range(1, p):
        for l in range(p - k, p):
            total += pow(k, i, p) * pow(l, j, p)
    return total % p


def power_sum_coeff_sym(i: int, j: int, p: int) -> int:
    """Same coefficient via products of elementary symmetric polynomials.

    Independent evaluation path used for cross-checking power_sum_coeff; it
    relies on sigma_j with one point removed equalling (-point)^j mod p.
    """
    p = check_prime(p)
    total = 0
    sign = (-1) ** (i + j)
    for k in range(1, p):
        sk = sigma_hat(i, k, p)
        for l in range(p - k, p):
            total += sign * sk * sigma_hat(j, l, p)
    return total % p


def coeff_support(p: int) -> frozenset:
    """Exponent pairs (i, j) where the double power sum is nonzero.

    Two families: the antidiagonal i + j = p - 1 with 1 <= i <= p - 2, and
    for each 0 <= m <= (p-3)/2 the diagonal i + j = p + 2(m - 1) restricted
    to 2m <= i <= p - 2 (with j in range).  Checked numerically per prime by
    the test suite and the verification campaign.
    """
    p = check_prime(p)
    support = set()
    for i in range(1, p - 1):
        support.add((i, p - 1 - i))
    for m in range(0, (p - 3) // 2 + 1):
        for i in range(2 * m, p - 1):
            j = p + 2 * (m - 1) - i
            if 0 <= j <= p - 2:
                support.add((i, j))
    return frozenset(support)


class CarryPolynomial:
    """Closed form of the carry of one coordinate pair.

    p * P(u, v) = sum over terms of c_(a,b) * u^a * v^b mod p^2, with the
    coefficients c_(a,b) = p * (double power sum).  Terms come in three
    groups by total degree: a + b = p, a + b = p - 1, and a + b = p - 2m
    for 1 <= m <= (p-3)/2.  Zero coefficients are never stored.
    """

    def __init__(self, p: int):
        self.p = check_prime(p)
        self.p2 = self.p * self.p
        p = self.p
        terms = {}

        def put(a, b, i, j):
            c = (p * power_sum_coeff(i, j, p)) % self.p2
            if c:
                terms[(a, b)] = c

        for i in range(0, p - 1):
            put(p - 1 - i, i + 1, i, p - 2 - i)
        for i in range(1, p - 1):
            put(p - 1 - i, i, i, p - 1 - i)
        for m in range(1, (p - 3) // 2 + 1):
            for i in range(2 * m, p - 1):
                put(p - 1 - i, i - 2 * m + 1, i, p + 2 * m - i - 2)
        self.terms = terms
        self.power_degrees = span_power_degrees(p)
        self.support = coeff_support(p)

    def evaluate(self, u, v):
        """Evaluate the polynomial mod p^2; must equal carry_direct(u, v, p).

        Scalars or broadcastable arrays.
        """
        scalar = np.ndim(u) == 0 and np.ndim(v) == 0
        u = np.asarray(u, dtype=np.int64) % self.p2
        v = np.asarray(v, dtype=np.int64) % self.p2
        out = np.zeros(np.broadcast(u, v).shape, dtype=np.int64)
        for (a, b), c in self.terms.items():
            out = (out + c * _pow_mod(u, a, self.p2) * _pow_mod(v, b, self.p2)) % self.p2
        if scalar:
            return int(out)
        return out

    def term_string(self) -> str:
        """Human-readable sum, highest total degree first."""
        keys = sorted(self.terms, key=lambda ab: (-(ab[0] + ab[1]), -ab[0]))

        def mono(a, b):
            ustr = "u" if a == 1 else f"u^{a}"
            vstr = "v" if b == 1 else f"v^{b}"
            return f"{ustr}*{vstr}"

        return " + ".join(f"{self.terms[k]}*{mono(*k)}" for k in keys)


def multiset_star_products(space: MixedSpace, rows, degrees=None):
    """Order-p star products p * (v_i1 * ... * v_il) over index multisets.

    ``rows`` are the order-p^2 generators; for every degree l in
    ``degrees`` (default: span_power_degrees(p)) and every multiset
    1 <= i1 <= ... <= il <= len(rows), in lexicographic order, yields
    (l, multiset, product word).
    """
    rows = np.asarray(rows, dtype=np.int64)
    if degrees is None:
        degrees = span_power_degrees(space.p)
    for l in degrees:
        for combo in itertools.combinations_with_replacement(range(len(rows)), l):
            prod = rows[combo[0]].copy()
            for idx in combo[1:]:
                prod = space.star(prod, rows[idx])
            yield l, combo, space.scale(space.p, prod)


def span_generator_count(p: int, gamma: int, delta: int) -> int:
    """Row count of the span generating family: gamma + delta + products."""
    return gamma + delta + sum(
        math.comb(delta + l - 1, l) for l in span_power_degrees(p)
    )
