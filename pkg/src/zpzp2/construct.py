"""Constructions that hit a prescribed rank, or a prescribed (rank, kernel)
pair, for a given code type.

The free S block of the generator matrix is assembled from a fixed column
inventory: scaled identity blocks, placement matrices seeded with rows of
the recursive A families, and an all-ones placement.  Keeping exactly rbar
of those columns raises the rank by rbar; a leading all-(p-1) column of
height kbar pins the kernel offset.  Plans record the block inventory and
the removed column indices, so a construction is reproducible bit-exactly
from its JSON serialization.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .code import AdditiveCode, CodeType
from .ring import check_prime
from .span_kernel import rank_of, sum_L_binom


class ConstructionError(Exception):
    """Target outside the admissible region, or assembly cannot fit."""


def build_A(i: int, j: int, p: int) -> np.ndarray:
    """Row family A_i^j: a C(j,i) x (i+1) matrix over Z_{p^2}.

    A_1^j lists the rows (p-j, p-j+t) for t = 0..j-1; for i >= 2 the family
    is a constant column of value p-j+1 glued onto the stack of
    A_{i-1}^{i-1} .. A_{i-1}^{j-1}, minus the all-ones matrix.  Entries
    must land in 1..p-1; anything else is reported, never clamped.
    """
    check_prime(p)
    if not (isinstance(i, int) and isinstance(j, int)):
        raise TypeError("i and j must be integers")
    if not 1 <= i <= j <= p - 1:
        raise ValueError(f"need 1 <= i <= j <= p-1, got i={i}, j={j}, p={p}")
    if i == 1:
        out = np.array([(p - j, p - j + t) for t in range(j)], dtype=np.int64)
    else:
        stack = np.vstack([build_A(i - 1, jj, p) for jj in range(i - 1, j)])
        const = np.full((stack.shape[0], 1), p - j + 1, dtype=np.int64)
        out = np.hstack([const, stack]) - 1
    if out.shape != (comb(j, i), i + 1):
        raise AssertionError("row family has the wrong shape")
    if (out < 1).any() or (out > p - 1).any():
        raise ArithmeticError(
            f"A_{i}^{j} at p={p} produced entries outside 1..p-1; "
            "counterexample to the recursion, not clamped"
        )
    return out


def build_gamma(i: int, p: int) -> np.ndarray:
    """All rows of A_i^{ibar+2m} for m = 0..(p-1-ibar)/2 plus all rows of
    A_i^{p-2}, where ibar rounds i up to even.  Row count matches the
    binomial-expansion coefficient attached to C(delta, i+1)."""
    check_prime(p)
    if not 1 <= i <= p - 2:
        raise ValueError(f"need 1 <= i <= p-2, got i={i}, p={p}")
    ibar = i if i % 2 == 0 else i + 1
    blocks = [build_A(i, ibar + 2 * m, p) for m in range((p - 1 - ibar) // 2 + 1)]
    blocks.append(build_A(i, p - 2, p))
    return np.vstack(blocks)


def gamma_coefficient(i: int, p: int) -> int:
    """Expansion coefficient of C(delta, i+1), valid for i = 0..p-2.

    i = 0 counts the scaled identity blocks plus the two +delta terms of
    the rewritten sum; i >= 1 equals the row count of build_gamma(i, p).
    """
    ibar = i if i % 2 == 0 else i + 1
    return sum(comb(ibar + 2 * m, i) for m in range((p - 1 - ibar) // 2 + 1)) + comb(p - 2, i)


def build_placement(delta: int, x) -> np.ndarray:
    """delta x C(delta, s) matrix whose columns run over the s-subsets of
    the rows in lexicographic support order; the i-th nonzero entry of
    each column is x_i.  Values must be nonzero and s must not exceed
    delta."""
    x = np.asarray(x, dtype=np.int64).ravel()
    s = len(x)
    if s == 0 or s > delta:
        raise ValueError(f"support size {s} must be in 1..{delta}")
    if (x == 0).any():
        raise ValueError("placement values must be nonzero")
    cols = np.zeros((comb(delta, s), delta), dtype=np.int64)
    for k, support in enumerate(itertools.combinations(range(delta), s)):
        cols[k, list(support)] = x
    return cols.T


def _inventory(p: int, s_rows: int):
    """Ordered column inventory for an S block with s_rows generator rows.

    Returns (descriptors, matrices); hstacking the matrices gives the full
    assembly of width sum_L_binom(p, s_rows) - s_rows.
    """
    descriptors, matrices = [], []
    for c in range(2, (p + 1) // 2 + 1):
        descriptors.append({"kind": "scaled_identity", "scalar": c, "width": s_rows})
        matrices.append(c * np.eye(s_rows, dtype=np.int64))
    for i in range(1, p - 1):
        if i + 1 > s_rows:
            continue
        for row in build_gamma(i, p):
            descriptors.append(
                {"kind": "gamma_placement", "i": i, "x": [int(v) for v in row],
                 "width": comb(s_rows, i + 1)}
            )
            matrices.append(build_placement(s_rows, row))
    if s_rows >= p:
        descriptors.append({"kind": "ones_placement", "width": comb(s_rows, p)})
        matrices.append(build_placement(s_rows, np.ones(p, dtype=np.int64)))
    return descriptors, matrices


def _matrix_from_descriptor(desc: dict, s_rows: int, p: int) -> np.ndarray:
    if desc["kind"] == "scaled_identity":
        return desc["scalar"] * np.eye(s_rows, dtype=np.int64)
    if desc["kind"] == "gamma_placement":
        return build_placement(s_rows, np.asarray(desc["x"], dtype=np.int64))
    if desc["kind"] == "ones_placement":
        return build_placement(s_rows, np.ones(p, dtype=np.int64))
    raise ValueError(f"unknown block kind {desc['kind']!r}")


@dataclass
class ConstructionPlan:
    """Recipe for one S block: the column inventory, which assembled
    columns were removed, and the optional leading column of the pair
    construction.  Width is the final padded column count."""

    code_type: CodeType
    target: dict
    blocks: list
    removed: list
    leading_column: list | None
    s_rows: int
    width: int

    def s_matrix(self) -> np.ndarray:
        ty = self.code_type
        mats = [_matrix_from_descriptor(d, self.s_rows, ty.p) for d in self.blocks]
        full = (
            np.hstack(mats)
            if mats
            else np.zeros((self.s_rows, 0), dtype=np.int64)
        )
        removed = set(self.removed)
        keep = [j for j in range(full.shape[1]) if j not in removed]
        S = full[:, keep]
        if self.leading_column is not None:
            lead = np.asarray(self.leading_column, dtype=np.int64).reshape(-1, 1)
            S = np.hstack([lead, S])
        if S.shape[1] > self.width:
            raise ConstructionError(
                f"assembly has {S.shape[1]} columns, exceeding the width {self.width}"
            )
        S = np.hstack([S, np.zeros((S.shape[0], self.width - S.shape[1]), dtype=np.int64)])
        if S.shape[0] < ty.delta:
            S = np.vstack([S, np.zeros((ty.delta - S.shape[0], self.width), dtype=np.int64)])
        return S % (ty.p * ty.p)

    def to_dict(self) -> dict:
        ty = self.code_type
        return {
            "p": ty.p,
            "type": list(ty.as_tuple()),
            "target": self.target,
            "blocks": self.blocks,
            "removed": [int(j) for j in self.removed],
            "leading_column": self.leading_column,
            "s_rows": self.s_rows,
            "width": self.width,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConstructionPlan":
        ty = CodeType(data["p"], *data["type"])
        return cls(
            code_type=ty,
            target=data["target"],
            blocks=data["blocks"],
            removed=[int(j) for j in data["removed"]],
            leading_column=data["leading_column"],
            s_rows=int(data["s_rows"]),
            width=int(data["width"]),
        )


def save_plan(plan: ConstructionPlan, path) -> None:
    with open(path, "w") as fh:
        json.dump(plan.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_plan(path) -> ConstructionPlan:
    with open(path) as fh:
        return ConstructionPlan.from_dict(json.load(fh))


def s_block_width(ty: CodeType) -> int:
    return ty.beta - (ty.gamma - ty.kappa) - ty.delta


def max_rbar(ty: CodeType) -> int:
    return min(s_block_width(ty), sum_L_binom(ty.p, ty.delta) - ty.delta)


def admissible_rank_range(ty: CodeType) -> range:
    base = ty.gamma + 2 * ty.delta
    return range(base, base + max_rbar(ty) + 1)


def admissible_pair_rbar_range(ty: CodeType, kbar: int) -> range:
    """rbar values reachable together with a given kbar; empty range when
    kbar itself is out of 0..delta."""
    if not 0 <= kbar <= ty.delta:
        return range(0)
    if kbar == 0:
        return range(0, 1)
    cap = min(s_block_width(ty), sum_L_binom(ty.p, kbar) - kbar)
    return range(1, cap + 1)


def assemble_Sr(ty: CodeType, rbar: int, removed=None) -> ConstructionPlan:
    """Plan whose realization has rank gamma + 2*delta + rbar.

    Keeps rbar columns of the full assembly; by default the removed
    columns are the tail of the fixed block order, but any explicit set of
    the right size is accepted (every choice achieves the same rank).
    """
    width = s_block_width(ty)
    total = sum_L_binom(ty.p, ty.delta) - ty.delta
    hi = max_rbar(ty)
    if not 0 <= rbar <= hi:
        raise ConstructionError(
            f"rbar={rbar} outside the admissible range 0..{hi} "
            f"(width cap {width}, combinatorial cap {total})"
        )
    descriptors, matrices = _inventory(ty.p, ty.delta)
    assembled = sum(m.shape[1] for m in matrices)
    if assembled != total:
        raise AssertionError("inventory width disagrees with the binomial sum")
    t = total - rbar
    if removed is None:
        removed = list(range(total - t, total))
    else:
        removed = [int(j) for j in removed]
        if len(set(removed)) != t or any(not 0 <= j < total for j in removed):
            raise ConstructionError(
                f"need exactly {t} distinct removed indices in 0..{total - 1}"
            )
    return ConstructionPlan(
        code_type=ty,
        target={"rank": ty.gamma + 2 * ty.delta + rbar},
        blocks=descriptors,
        removed=removed,
        leading_column=None,
        s_rows=ty.delta,
        width=width,
    )


def realize(ty: CodeType, plan: ConstructionPlan) -> AdditiveCode:
    """Generator matrix with the planned S block in place and every free
    block zero; returns the additive code, whose inferred type must come
    back equal to ty."""
    if plan.code_type != ty:
        raise ConstructionError("plan was assembled for a different type")
    a, b = ty.alpha, ty.beta
    g, d, k = ty.gamma, ty.delta, ty.kappa
    w = s_block_width(ty)
    if w < 0:
        raise ConstructionError("type leaves no room for the S block")
    S = plan.s_matrix()
    if S.shape != (d, w):
        raise ConstructionError(f"S block is {S.shape}, expected {(d, w)}")
    m = a + b
    rows_p = np.zeros((g, m), dtype=np.int64)
    rows_p[:k, :k] = np.eye(k, dtype=np.int64)
    rows_p[k:, a + w : a + w + g - k] = ty.p * np.eye(g - k, dtype=np.int64)
    rows_p2 = np.zeros((d, m), dtype=np.int64)
    rows_p2[:, a : a + w] = S
    rows_p2[:, a + w + g - k :] = np.eye(d, dtype=np.int64)
    code = AdditiveCode(ty.space, rows_p, rows_p2, check=True)
    if code.code_type != ty:
        raise ConstructionError(
            f"realized type {code.code_type.short()} differs from target {ty.short()}"
        )
    return code


def assemble_Srk(ty: CodeType, kbar: int, rbar: int) -> ConstructionPlan:
    """Plan realizing kernel offset kbar and rank offset rbar together.

    The S block's top kbar rows start with an all-(p-1) column followed by
    a prefix of the kbar-row column inventory; the prefix length is found
    by scanning (rank grows by 0 or 1 per added column, so every
    admissible rbar is hit).  kbar = rbar = 0 yields the zero block.
    """
    if kbar == 0 and rbar == 0:
        return ConstructionPlan(
            code_type=ty,
            target={"pair": [0, 0]},
            blocks=[],
            removed=[],
            leading_column=None,
            s_rows=ty.delta,
            width=s_block_width(ty),
        )
    rng_ok = 1 <= kbar <= ty.delta and rbar in admissible_pair_rbar_range(ty, kbar)
    if not rng_ok:
        cap = admissible_pair_rbar_range(ty, kbar)
        detail = (
            f"kbar must be 0..{ty.delta}"
            if not 0 <= kbar <= ty.delta
            else f"rbar for kbar={kbar} must lie in {cap.start}..{cap.stop - 1}"
        )
        raise ConstructionError(f"pair (kbar={kbar}, rbar={rbar}) inadmissible: {detail}")

    descriptors, matrices = _inventory(ty.p, kbar)
    total = sum(m.shape[1] for m in matrices)
    width = s_block_width(ty)
    for t in range(min(total, width - 1) + 1):
        plan = ConstructionPlan(
            code_type=ty,
            target={"pair": [kbar, rbar]},
            blocks=descriptors,
            removed=list(range(t, total)),
            leading_column=[ty.p - 1] * kbar,
            s_rows=kbar,
            width=width,
        )
        achieved = rank_of(realize(ty, plan), "generator-set").rbar
        if achieved == rbar:
            return plan
        if achieved > rbar:
            break
    raise ConstructionError(
        f"prefix search did not reach rbar={rbar} for kbar={kbar}; "
        "admissibility arithmetic and achieved ranks disagree"
    )


def binom_identity_check(p: int, delta_max: int = 12) -> dict:
    """Numeric audit of the two binomial identities behind the inventory.

    Checks the Pascal column-sum identity for 1 <= i <= k <= 2p, and the
    re-expansion of sum_L_binom into C(delta, i) terms for
    delta = 0..delta_max.  The expansion matches sum_L_binom(p, delta) +
    delta; the published form omits the +delta, and that offset is
    recorded rather than asserted away.
    """
    check_prime(p)
    pascal_ok = all(
        comb(k, i) == sum(comb(j, i - 1) for j in range(i - 1, k))
        for k in range(1, 2 * p + 1)
        for i in range(1, k + 1)
    )
    coeffs = [gamma_coefficient(i, p) for i in range(p - 1)] + [1]
    mismatches = []
    for delta in range(delta_max + 1):
        expansion = sum(c * comb(delta, i + 1) for i, c in enumerate(coeffs))
        if expansion != sum_L_binom(p, delta) + delta:
            mismatches.append(delta)
    return {
        "p": p,
        "pascal_range": [1, 2 * p],
        "pascal_ok": pascal_ok,
        "coefficients": coeffs,
        "delta_max": delta_max,
        "expansion_ok": not mismatches,
        "expansion_mismatches": mismatches,
        "as_written_offset": "delta",
    }
