"""Arithmetic over the mixed alphabet Z_p^alpha x Z_{p^2}^beta.

Words are dense int64 numpy arrays of length alpha + beta, always stored
fully reduced: entries in [0, p) on the first alpha coordinates and in
[0, p^2) on the remaining beta coordinates.  The prime p is a runtime
parameter; only small odd primes are supported, which keeps every
exhaustive cross-check cheap and all int64 arithmetic overflow-free.
"""

from __future__ import annotations

import numpy as np

SUPPORTED_PRIMES = (3, 5, 7, 11, 13)


def check_prime(p) -> int:
    """Validate the alphabet prime: odd, 3 <= p <= 13."""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise TypeError(f"p must be an integer, got {type(p).__name__}")
    p = int(p)
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"p must be an odd prime in [3, 13], got {p}")
    return p


def pary_expand(u, p):
    """Base-p digits of a residue mod p^2: u = u0 + p*u1 with 0 <= u0, u1 < p.

    Accepts a scalar or an ndarray; returns (u0, u1) of the same shape.
    """
    p = check_prime(p)
    arr = np.asarray(u)
    if arr.size and (arr.min() < 0 or arr.max() >= p * p):
        raise ValueError(f"residue out of range [0, {p * p})")
    if np.ndim(u) == 0:
        return int(arr) % p, int(arr) // p
    arr = arr.astype(np.int64)
    return arr % p, arr // p


class MixedSpace:
    """The ambient group Z_p^alpha x Z_{p^2}^beta for a fixed prime p.

    Provides the componentwise operations on plain int64 arrays; the first
    ``alpha`` coordinates are reduced mod p, the rest mod p^2.
    """

    def __init__(self, p: int, alpha: int, beta: int):
        self.p = check_prime(p)
        if not (isinstance(alpha, (int, np.integer)) and isinstance(beta, (int, np.integer))):
            raise TypeError("alpha and beta must be integers")
        alpha, beta = int(alpha), int(beta)
        if alpha < 0 or beta < 0 or alpha + beta == 0:
            raise ValueError("need alpha >= 0, beta >= 0 and alpha + beta > 0")
        self.alpha = alpha
        self.beta = beta
        self.p2 = self.p * self.p
        self.length = alpha + beta
        self.moduli = np.concatenate(
            [np.full(alpha, self.p, dtype=np.int64), np.full(beta, self.p2, dtype=np.int64)]
        )

    # Gray images of words from this space have this length.
    @property
    def gray_length(self) -> int:
        return self.alpha + self.p * self.beta

    def __eq__(self, other):
        return (
            isinstance(other, MixedSpace)
            and (self.p, self.alpha, self.beta) == (other.p, other.alpha, other.beta)
        )

    def __hash__(self):
        return hash((self.p, self.alpha, self.beta))

    def __repr__(self):
        return f"MixedSpace(p={self.p}, alpha={self.alpha}, beta={self.beta})"

    # -- word construction ------------------------------------------------

    def word(self, x=(), y=()) -> np.ndarray:
        """Build a word from its Z_p part ``x`` and Z_{p^2} part ``y``."""
        x = np.asarray(x, dtype=np.int64).reshape(-1)
        y = np.asarray(y, dtype=np.int64).reshape(-1)
        if x.size != self.alpha or y.size != self.beta:
            raise ValueError(
                f"expected {self.alpha} + {self.beta} entries, got {x.size} + {y.size}"
            )
        return self.reduce(np.concatenate([x, y]))

    def zeros(self) -> np.ndarray:
        return np.zeros(self.length, dtype=np.int64)

    def ones(self) -> np.ndarray:
        return np.ones(self.length, dtype=np.int64)

    def reduce(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=np.int64)
        if w.shape[-1] != self.length:
            raise ValueError(f"word length {w.shape[-1]} != {self.length}")
        return w % self.moduli

    # -- views -------------------------------------------------------------

    def x_part(self, w) -> np.ndarray:
        return np.asarray(w)[..., : self.alpha]

    def y_part(self, w) -> np.ndarray:
        return np.asarray(w)[..., self.alpha :]

    def lift(self, w) -> np.ndarray:
        """Embed into Z_{p^2}^(alpha+beta): scale the Z_p block by p.

        The embedding is an injective group homomorphism, so membership and
        elimination questions can be answered entirely mod p^2.
        """
        out = np.array(w, dtype=np.int64, copy=True)
        out[..., : self.alpha] = (out[..., : self.alpha] * self.p) % self.p2
        return out

    def unlift(self, w) -> np.ndarray:
        out = np.array(w, dtype=np.int64, copy=True)
        x = out[..., : self.alpha]
        if np.any(x % self.p):
            raise ValueError("not in the image of the lift: Z_p block not divisible by p")
        out[..., : self.alpha] = x // self.p
        return out

    # -- group operations ---------------------------------------------------

    def add(self, u, v) -> np.ndarray:
        return (np.asarray(u, dtype=np.int64) + np.asarray(v, dtype=np.int64)) % self.moduli

    def neg(self, u) -> np.ndarray:
        return (-np.asarray(u, dtype=np.int64)) % self.moduli

    def sub(self, u, v) -> np.ndarray:
        return (np.asarray(u, dtype=np.int64) - np.asarray(v, dtype=np.int64)) % self.moduli

    def scale(self, a, u) -> np.ndarray:
        return (int(a) * np.asarray(u, dtype=np.int64)) % self.moduli

    def star(self, u, v) -> np.ndarray:
        """Componentwise product, mod p on the Z_p block and mod p^2 on the rest."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
        return (u * v) % self.moduli

    def star_power(self, u, m: int) -> np.ndarray:
        """m-fold componentwise power, m >= 1."""
        if not isinstance(m, (int, np.integer)) or m < 1:
            raise ValueError(f"power must be a positive integer, got {m}")
        out = np.array(u, dtype=np.int64, copy=True) % self.moduli
        for _ in range(int(m) - 1):
            out = (out * u) % self.moduli
        return out

    def order_of(self, c) -> int:
        """Additive order of a word: 1, p or p^2."""
        c = self.reduce(c)
        if not c.any():
            return 1
        if not (self.y_part(c) % self.p).any():
            return self.p
        return self.p2

    def random_word(self, rng) -> np.ndarray:
        return rng.integers(0, self.moduli)
