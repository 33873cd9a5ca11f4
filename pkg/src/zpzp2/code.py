"""Additive codes over Z_p^alpha x Z_{p^2}^beta.

A code is a subgroup given by generator rows of order p and order p^2.
Its type (alpha, beta; gamma, delta; kappa) records the block lengths, the
number of order-p and order-p^2 generators in a minimal generating set, and
the dimension of the Z_p-block restriction of the order-p subcode.

Membership, type inference and the standard generator form all share one
routine: eliminate over the p-lifted copy of the group (Z_p entries scaled
by p, everything mod p^2), taking unit pivots first and p-valuation pivots
second.  The resulting basis has forced coefficients, so reducing any word
against it decides membership without enumeration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import backend
from .ring import MixedSpace, check_prime

DEFAULT_CAP = 10**6


class SizeCapError(Exception):
    """Requested enumeration exceeds the size cap."""

    def __init__(self, size, cap):
        super().__init__(f"code has {size} words, above the cap {cap}")
        self.size = size
        self.cap = cap


class InconsistentTypeError(Exception):
    """Declared generator counts disagree with the computed invariants."""

    def __init__(self, declared, computed):
        super().__init__(f"declared type {declared} but computed {computed}")
        self.declared = declared
        self.computed = computed


@dataclass(frozen=True)
class CodeType:
    """Type (alpha, beta; gamma, delta; kappa) of an additive code, for fixed p."""

    p: int
    alpha: int
    beta: int
    gamma: int
    delta: int
    kappa: int

    def __post_init__(self):
        check_prime(self.p)
        for name in ("alpha", "beta", "gamma", "delta", "kappa"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise TypeError(f"{name} must be an integer")
            object.__setattr__(self, name, int(v))
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.alpha + self.beta == 0:
            raise ValueError("alpha + beta must be positive")
        if self.gamma + self.delta == 0:
            raise ValueError("gamma + delta must be positive")
        if self.gamma + self.delta > self.beta + self.kappa:
            raise ValueError(
                f"gamma + delta = {self.gamma + self.delta} exceeds "
                f"beta + kappa = {self.beta + self.kappa}"
            )
        if self.kappa > min(self.alpha, self.gamma):
            raise ValueError(f"kappa = {self.kappa} exceeds min(alpha, gamma)")

    @property
    def size(self) -> int:
        return self.p ** (self.gamma + 2 * self.delta)

    @property
    def space(self) -> MixedSpace:
        return MixedSpace(self.p, self.alpha, self.beta)

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta, self.kappa)

    def short(self) -> str:
        a, b, g, d, k = self.as_tuple()
        return f"({a},{b};{g},{d};{k})"


class _Reduction:
    """Forced-coefficient basis of a generating set, over the lifted module.

    rows are mod p^2 with the Z_p block scaled by p; each pivot is either a
    unit (coefficient read off mod p^2) or the value p (coefficient read off
    after a divisibility check).  Unit pivots are recorded first, then
    p-pivots on the Z_p block, then p-pivots on the Z_{p^2} block, which
    makes greedy reduction sound and complete.
    """

    def __init__(self, rows, cols, is_unit, p, alpha):
        self.rows = rows
        self.cols = cols
        self.is_unit = is_unit
        self.p = p
        self.alpha = alpha
        self.delta = int(is_unit.sum())
        self.kappa = int(((~is_unit) & (cols < alpha)).sum())
        self.gamma = int((~is_unit).sum())

    def unit_rows(self):
        return self.rows[self.is_unit]

    def p_rows(self):
        return self.rows[~self.is_unit]


def _reduce_lifted(lifted, p: int, alpha: int) -> _Reduction:
    p2 = p * p
    R = np.asarray(lifted, dtype=np.int64) % p2
    R = R.copy()
    n_rows, m = R.shape
    used = np.zeros(n_rows, dtype=bool)
    pivots = []

    def eliminate(idx, c, unit):
        for i in range(n_rows):
            if i == idx or R[i, c] == 0:
                continue
            coef = R[i, c] if unit else R[i, c] // p
            if coef:
                R[i] = (R[i] - coef * R[idx]) % p2

    # unit pivots: only possible on the Z_{p^2} block after lifting
    for c in range(alpha, m):
        idx = next((i for i in range(n_rows) if not used[i] and R[i, c] % p != 0), None)
        if idx is None:
            continue
        R[idx] = (R[idx] * pow(int(R[idx, c]), -1, p2)) % p2
        eliminate(idx, c, unit=True)
        used[idx] = True
        pivots.append((c, True, idx))

    # p-pivots on the lifted Z_p block
    for c in range(alpha):
        idx = next((i for i in range(n_rows) if not used[i] and R[i, c] != 0), None)
        if idx is None:
            continue
        R[idx] = (R[idx] * pow(int(R[idx, c]) // p, -1, p)) % p2
        eliminate(idx, c, unit=False)
        used[idx] = True
        pivots.append((c, False, idx))

    # p-pivots on the Z_{p^2} block
    for c in range(alpha, m):
        idx = next((i for i in range(n_rows) if not used[i] and R[i, c] != 0), None)
        if idx is None:
            continue
        R[idx] = (R[idx] * pow(int(R[idx, c]) // p, -1, p)) % p2
        eliminate(idx, c, unit=False)
        used[idx] = True
        pivots.append((c, False, idx))

    leftover = [i for i in range(n_rows) if not used[i] and R[i].any()]
    if leftover:
        raise AssertionError("elimination left an unreduced row")

    # stable order: unit pivots, then Z_p-block p-pivots, then the rest
    pivots.sort(key=lambda t: (not t[1], t[0] >= alpha if not t[1] else 0))
    rows = np.array([R[idx] for _, _, idx in pivots], dtype=np.int64).reshape(len(pivots), m)
    cols = np.array([c for c, _, _ in pivots], dtype=np.int64)
    unit = np.array([u for _, u, _ in pivots], dtype=bool)
    return _Reduction(rows, cols, unit, p, alpha)


def _coefficient_grid(radix: int, count: int) -> np.ndarray:
    """All coefficient tuples, first coordinate varying slowest."""
    if count == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((radix,) * count, dtype=np.int64)
    return grid.reshape(count, -1).T


class AdditiveCode:
    """Subgroup of Z_p^alpha x Z_{p^2}^beta with a chosen generating set."""

    def __init__(self, space: MixedSpace, rows_p, rows_p2, check: bool = True):
        self.space = space
        m = space.length
        self.rows_p = np.asarray(rows_p, dtype=np.int64).reshape(-1, m) % space.moduli
        self.rows_p2 = np.asarray(rows_p2, dtype=np.int64).reshape(-1, m) % space.moduli
        for row in self.rows_p:
            if space.order_of(row) != space.p:
                raise ValueError(f"order-p generator has order {space.order_of(row)}")
        for row in self.rows_p2:
            if space.order_of(row) != space.p2:
                raise ValueError(f"order-p^2 generator has order {space.order_of(row)}")
        if len(self.rows_p) + len(self.rows_p2) == 0:
            raise ValueError("need at least one generator row")
        stacked = np.vstack([self.rows_p, self.rows_p2])
        self._reduction = _reduce_lifted(space.lift(stacked), space.p, space.alpha)
        red = self._reduction
        declared = (len(self.rows_p), len(self.rows_p2))
        computed = (red.gamma, red.delta)
        if check and declared != computed:
            raise InconsistentTypeError(
                f"(gamma, delta) = {declared}",
                CodeType(space.p, space.alpha, space.beta, red.gamma, red.delta, red.kappa),
            )
        self.code_type = CodeType(
            space.p, space.alpha, space.beta, declared[0], declared[1], red.kappa
        )

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, space: MixedSpace, rows) -> "AdditiveCode":
        """Canonical minimal generators for the group spanned by ``rows``."""
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise ValueError("need a nonempty generator matrix")
        if rows.shape[1] != space.length:
            raise ValueError(f"rows must have length {space.length}")
        red = _reduce_lifted(space.lift(rows % space.moduli), space.p, space.alpha)
        gens_p2 = space.unlift(red.unit_rows()) if red.delta else np.zeros((0, space.length), np.int64)
        gens_p = space.unlift(red.p_rows()) if red.gamma else np.zeros((0, space.length), np.int64)
        return cls(space, gens_p, gens_p2, check=True)

    # -- basic data ----------------------------------------------------------

    @property
    def generator_matrix(self) -> np.ndarray:
        return np.vstack([self.rows_p, self.rows_p2])

    @property
    def size(self) -> int:
        return self.code_type.size

    def __repr__(self):
        return f"AdditiveCode{self.code_type.short()} over p={self.space.p}"

    # -- enumeration ----------------------------------------------------------

    def codeword_matrix(self, cap: int = DEFAULT_CAP) -> np.ndarray:
        """All codewords, one per row, each exactly once.

        Row order follows coefficient tuples (lambda, nu) with the last
        coordinate varying fastest; lambda runs over Z_p^gamma for the
        order-p rows and nu over Z_{p^2}^delta for the rest.
        """
        n = self.size
        if n > cap:
            raise SizeCapError(n, cap)
        p, p2 = self.space.p, self.space.p2
        lam = _coefficient_grid(p, len(self.rows_p))
        nu = _coefficient_grid(p2, len(self.rows_p2))
        coeffs = np.hstack(
            [np.repeat(lam, len(nu), axis=0), np.tile(nu, (len(lam), 1))]
        )
        return (coeffs @ self.generator_matrix) % self.space.moduli

    def iter_codewords(self, cap: int = DEFAULT_CAP):
        yield from self.codeword_matrix(cap)

    # -- membership ------------------------------------------------------------

    def contains_rows(self, W) -> np.ndarray:
        W = np.asarray(W, dtype=np.int64).reshape(-1, self.space.length)
        red = self._reduction
        k = backend.kernels()
        return k.membership_mask(
            self.space.lift(W % self.space.moduli), red.rows, red.cols, red.is_unit, self.space.p
        )

    def contains(self, w) -> bool:
        return bool(self.contains_rows(np.asarray(w)[None, :])[0])

    # -- derived codes -----------------------------------------------------------

    def order_p_subcode(self) -> "AdditiveCode":
        """Subgroup of words of order dividing p: generated by the order-p
        rows together with p times the order-p^2 rows."""
        extra = (self.space.p * self.rows_p2) % self.space.moduli
        rows = np.vstack([self.rows_p, extra])
        return AdditiveCode(self.space, rows, np.zeros((0, self.space.length), np.int64))

    def punctured_x(self):
        """Restriction of the order-p subcode to the Z_p block, as a GF(p) code.

        Returns (rref basis, dimension); the dimension equals kappa.
        """
        if self.space.alpha == 0:
            raise ValueError("code has no Z_p block")
        sub = self.order_p_subcode()
        xs = self.space.x_part(sub.rows_p)
        basis, rank = backend.kernels().rref_mod(xs, self.space.p)
        return basis[:rank], rank

    def permuted(self, x_order=None, y_order=None) -> "AdditiveCode":
        """Column permutation within each block (order lists old indices)."""
        x_order = np.arange(self.space.alpha) if x_order is None else np.asarray(x_order)
        y_order = np.arange(self.space.beta) if y_order is None else np.asarray(y_order)
        cols = np.concatenate([x_order, self.space.alpha + y_order])
        return AdditiveCode(self.space, self.rows_p[:, cols], self.rows_p2[:, cols])

    # -- serialization -------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.space.p,
            "alpha": self.space.alpha,
            "beta": self.space.beta,
            "rows": self.generator_matrix.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AdditiveCode":
        if not isinstance(data, dict):
            raise ValueError("code spec must be a JSON object")
        missing = {"p", "alpha", "beta", "rows"} - set(data)
        if missing:
            raise ValueError(f"code spec missing keys: {sorted(missing)}")
        p = check_prime(data["p"])
        space = MixedSpace(p, data["alpha"], data["beta"])
        rows = data["rows"]
        if not isinstance(rows, list) or not rows:
            raise ValueError("rows must be a nonempty list")
        mat = np.asarray(rows, dtype=np.int64)
        if mat.ndim != 2 or mat.shape[1] != space.length:
            raise ValueError(f"rows must each have {space.length} entries")
        if (mat < 0).any() or (mat >= space.moduli).any():
            raise ValueError("row entries out of range for the declared alphabet")
        return cls.from_rows(space, mat)


def infer_type(space: MixedSpace, rows) -> CodeType:
    """Type of the group generated by arbitrary mixed rows."""
    return AdditiveCode.from_rows(space, rows).code_type


def save_code(code: AdditiveCode, path) -> None:
    with open(path, "w") as fh:
        json.dump(code.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_code(path) -> AdditiveCode:
    with open(path) as fh:
        return AdditiveCode.from_dict(json.load(fh))


# -- standard generator form ---------------------------------------------------


@dataclass
class StandardForm:
    """Generator matrix in block form, with the column permutation applied.

    Row blocks: kappa order-p rows pivoted on the Z_p block, gamma - kappa
    order-p rows pivoted (value p) on the Z_{p^2} block, delta order-p^2
    rows pivoted (value 1) on the trailing identity.  ``column_order`` lists
    the original column index for each new position.
    """

    code_type: CodeType
    g_s: np.ndarray
    column_order: np.ndarray
    blocks: dict

    def as_code(self) -> AdditiveCode:
        ty = self.code_type
        return AdditiveCode(
            ty.space, self.g_s[: ty.gamma], self.g_s[ty.gamma :]
        )


def _pattern_blocks(ty: CodeType, G: np.ndarray):
    """Split a candidate standard-form matrix into named blocks, or None."""
    a, b, g, d, k = ty.as_tuple()
    p = ty.p
    w = b - (g - k) - d
    if w < 0 or G.shape != (g + d, a + b):
        return None
    X, Y = G[:, :a], G[:, a:]
    r1, r2, r3 = slice(0, k), slice(k, g), slice(g, g + d)
    ident = np.eye(k, dtype=np.int64)
    if not (
        np.array_equal(X[r1, :k], ident)
        and not X[r2].any()
        and not X[r3, :k].any()
        and not (Y[r1, :w] % p).any()
        and not Y[r1, w:].any()
        and not (Y[r2, :w] % p).any()
        and np.array_equal(Y[r2, w : w + g - k], p * np.eye(g - k, dtype=np.int64))
        and not Y[r2, w + g - k :].any()
        and (Y[r3, w : w + g - k] < p).all()
        and np.array_equal(Y[r3, w + g - k :], np.eye(d, dtype=np.int64))
    ):
        return None
    return {
        "t_prime": X[r1, k:].copy(),
        "t2": (Y[r1, :w] // p).copy(),
        "t1": (Y[r2, :w] // p).copy(),
        "s_prime": X[r3, k:].copy(),
        "s": Y[r3, :w].copy(),
        "r": Y[r3, w : w + g - k].copy(),
    }


def standard_form(code: AdditiveCode) -> StandardForm:
    """Block-form generator matrix equivalent to the code up to column
    permutations within each alphabet block.

    A matrix already in the block pattern is returned unchanged with the
    identity permutation.  Raises InconsistentTypeError when the declared
    generator counts do not match the computed invariants.
    """
    space = code.space
    ty = code.code_type
    red = code._reduction
    computed = CodeType(space.p, space.alpha, space.beta, red.gamma, red.delta, red.kappa)
    if (ty.gamma, ty.delta) != (computed.gamma, computed.delta):
        raise InconsistentTypeError(ty, computed)

    G = code.generator_matrix
    fast = _pattern_blocks(computed, G)
    if fast is not None:
        return StandardForm(computed, G.copy(), np.arange(space.length), fast)

    a = space.alpha
    unit_cols = [int(c) for c, u in zip(red.cols, red.is_unit) if u]
    px_cols = [int(c) for c, u in zip(red.cols, red.is_unit) if not u and c < a]
    py_cols = [int(c) for c, u in zip(red.cols, red.is_unit) if not u and c >= a]
    x_rest = [c for c in range(a) if c not in px_cols]
    y_rest = [c for c in range(a, space.length) if c not in py_cols and c not in unit_cols]
    column_order = np.array(px_cols + x_rest + y_rest + py_cols + unit_cols, dtype=np.int64)

    mixed = space.unlift(red.rows)
    order = (
        [i for i, (c, u) in enumerate(zip(red.cols, red.is_unit)) if not u and c < a]
        + [i for i, (c, u) in enumerate(zip(red.cols, red.is_unit)) if not u and c >= a]
        + [i for i, u in enumerate(red.is_unit) if u]
    )
    g_s = mixed[order][:, column_order]
    blocks = _pattern_blocks(computed, g_s)
    if blocks is None:
        raise AssertionError("reduced matrix failed the standard pattern")
    return StandardForm(computed, g_s, column_order, blocks)
