"""Rank and kernel of the Gray image of an additive code.

The image is generally nonlinear; its linear span is generated over GF(p)
by the images of the generator rows together with the images of p times
star products of the order-p^2 rows, one per multiset of degrees drawn
from span_power_degrees(p).  The kernel is computed two independent ways,
"carry" in the additive domain (membership of carry words) and "translate"
in the Gray domain (set invariance under translation).  Both stay in the
code base on purpose: their agreement is part of the verification surface.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import backend
from .code import DEFAULT_CAP, AdditiveCode, CodeType, _coefficient_grid
from .gray import GrayMap, multiset_star_products, span_power_degrees

RANK_METHODS = ("generator-set", "exhaustive")
KERNEL_METHODS = ("carry", "translate")


class CosetRepSearchError(Exception):
    """No generator-row subset yields a full set of coset representatives.

    Raised instead of silently widening the search; an instance reaching
    this is a counterexample candidate and should be preserved.
    """


@dataclass
class RankReport:
    rank: int
    rbar: int
    basis: np.ndarray
    method: str


@dataclass
class KernelReport:
    dimension: int
    kbar: int
    basis: np.ndarray
    method: str
    size: int
    coset_reps: np.ndarray | None = field(default=None, repr=False)


def row_reduce(mat, p: int):
    """Reduced row echelon form over GF(p) plus the rank.

    Deterministic pivot rule: leftmost column, topmost row.
    """
    mat = np.ascontiguousarray(np.asarray(mat, dtype=np.int64) % p)
    return backend.kernels().rref_mod(mat, p)


def span_generators(code: AdditiveCode) -> np.ndarray:
    """Gray images whose GF(p) span equals the span of the whole image.

    Rows: the images of the order-p rows, the order-p^2 rows, and p times
    every star-product multiset of the order-p^2 rows with degree in
    span_power_degrees(p), multisets in lexicographic order.
    """
    space = code.space
    star = [w for _, _, w in multiset_star_products(space, code.rows_p2)]
    blocks = [code.rows_p, code.rows_p2]
    if star:
        blocks.append(np.array(star, dtype=np.int64))
    mixed = np.vstack([b for b in blocks if len(b)])
    return GrayMap(space.p).image_rows(space, mixed)


def rank_of(code: AdditiveCode, method: str = "generator-set", cap: int = DEFAULT_CAP) -> RankReport:
    """Rank of the GF(p) span of the Gray image.

    "generator-set" reduces the span_generators matrix; "exhaustive"
    reduces the image of every codeword (size-capped oracle).
    """
    if method not in RANK_METHODS:
        raise ValueError(f"method must be one of {RANK_METHODS}")
    space = code.space
    if method == "generator-set":
        mat = span_generators(code)
    else:
        words = code.codeword_matrix(cap)
        mat = GrayMap(space.p).image_rows(space, words)
    reduced, rank = row_reduce(mat, space.p)
    ty = code.code_type
    return RankReport(
        rank=int(rank),
        rbar=int(rank) - ty.gamma - 2 * ty.delta,
        basis=reduced[:rank],
        method=method,
    )


def kernel_of(code: AdditiveCode, method: str = "carry", cap: int = DEFAULT_CAP) -> KernelReport:
    """Kernel of the Gray image: all x with image + x = image.

    "carry" keeps u in C whenever every carry word carry_word(u, v), v in
    C, stays in C; "translate" tests translation invariance directly on
    the Gray words.  Candidates range over the image itself since the
    kernel contains 0 and is closed under translation into the image.
    """
    if method not in KERNEL_METHODS:
        raise ValueError(f"method must be one of {KERNEL_METHODS}")
    space = code.space
    ty = code.code_type
    words = code.codeword_matrix(cap)
    images = GrayMap(space.p).image_rows(space, words)
    k = backend.kernels()
    if method == "carry":
        red = code._reduction
        y0 = np.ascontiguousarray(space.y_part(words) % space.p)
        mask = k.carry_kernel_mask(
            y0, space.alpha, space.length, red.rows, red.cols, red.is_unit, space.p
        )
    else:
        mask = k.translate_kernel_mask(np.ascontiguousarray(images % space.p), space.p)

    kernel_words = images[mask]
    size = int(mask.sum())
    dim, rest = 0, size
    while rest % space.p == 0:
        rest //= space.p
        dim += 1
    if rest != 1:
        raise AssertionError(f"kernel size {size} is not a power of p")
    reduced, rank = row_reduce(kernel_words, space.p)
    if rank != dim:
        raise AssertionError("kernel words do not form a linear subspace")
    return KernelReport(
        dimension=dim,
        kbar=ty.gamma + 2 * ty.delta - dim,
        basis=reduced[:rank],
        method=method,
        size=size,
    )


def _residues(V: np.ndarray, basis: np.ndarray, p: int) -> np.ndarray:
    """Canonical representative of each row modulo the row space of an
    echelon basis (pivots normalized to 1)."""
    V = np.asarray(V, dtype=np.int64) % p
    V = V.copy()
    for row in basis:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            continue
        c = nz[0]
        V = (V - np.outer(V[:, c], row)) % p
    return V


@dataclass
class CosetDecomposition:
    chosen_rows: tuple
    reps: np.ndarray
    rep_images: np.ndarray
    disjoint: bool
    covers: bool

    @property
    def verified(self) -> bool:
        return self.disjoint and self.covers

    def as_pairs(self):
        return [(rep, self.verified) for rep in self.reps]


def coset_decomposition(
    code: AdditiveCode, kr: KernelReport, cap: int = DEFAULT_CAP
) -> CosetDecomposition:
    """Tile the Gray image by kernel cosets with representatives built
    from the order-p^2 generator rows.

    Searches kbar-subsets of those rows in index order; the p^kbar
    representatives are the images of all Z_p-combinations of the chosen
    rows.  Raises CosetRepSearchError when no subset separates the cosets.
    """
    space = code.space
    gray = GrayMap(space.p)
    p = space.p
    words = code.codeword_matrix(cap)
    image_res = _residues(gray.image_rows(space, words), kr.basis, p)
    image_keys = set(map(tuple, image_res.tolist()))

    if kr.kbar == 0:
        reps = np.zeros((1, space.length), dtype=np.int64)
        rep_images = np.zeros((1, space.gray_length), dtype=np.int64)
        decomp = CosetDecomposition((), reps, rep_images, True, image_keys == {(0,) * space.gray_length})
        kr.coset_reps = reps
        return decomp

    coeffs = _coefficient_grid(p, kr.kbar)
    for chosen in itertools.combinations(range(len(code.rows_p2)), kr.kbar):
        reps = (coeffs @ code.rows_p2[list(chosen)]) % space.moduli
        rep_images = gray.image_rows(space, reps)
        keys = set(map(tuple, _residues(rep_images, kr.basis, p).tolist()))
        if len(keys) == p**kr.kbar:
            decomp = CosetDecomposition(chosen, reps, rep_images, True, keys == image_keys)
            kr.coset_reps = reps
            return decomp
    raise CosetRepSearchError(
        f"no {kr.kbar}-subset of the {len(code.rows_p2)} order-p^2 rows "
        "separates the kernel cosets"
    )


def span_is_zpzp2_linear(code: AdditiveCode) -> AdditiveCode:
    """Additive code whose Gray image equals the span of the input's image.

    Generated by the original rows plus the p-times star products used by
    span_generators; its type has gamma increased by exactly rbar.
    """
    space = code.space
    star = [w for _, _, w in multiset_star_products(space, code.rows_p2)]
    blocks = [code.rows_p, code.rows_p2]
    if star:
        blocks.append(np.array(star, dtype=np.int64))
    rows = np.vstack([b for b in blocks if len(b)])
    return AdditiveCode.from_rows(space, rows)


def sum_L_binom(p: int, delta: int) -> int:
    """Sum of C(delta + l - 1, l) over the span power degrees."""
    return sum(comb(delta + l - 1, l) for l in span_power_degrees(p))


def rank_bounds(ty: CodeType) -> dict:
    """Rank window implied by the type, with both caps broken out.

    width_cap comes from the number of free S-block columns, the
    combinatorial cap from the star-product generator count.  delta_form
    and gamma_form are the two published closed forms of the upper bound;
    they differ when gamma != delta, so both are recorded.
    """
    base = ty.gamma + 2 * ty.delta
    width = ty.beta - (ty.gamma - ty.kappa) - ty.delta
    comb_cap = sum_L_binom(ty.p, ty.delta) - ty.delta
    return {
        "r_min": base,
        "r_max": base + min(width, comb_cap),
        "width_cap": width,
        "combinatorial_cap": comb_cap,
        "delta_form": ty.beta + ty.delta + ty.kappa,
        "gamma_form": ty.beta + ty.gamma + ty.kappa,
    }


def pair_rbar_cap(ty: CodeType, kbar: int) -> int:
    """Largest rbar compatible with a given kbar."""
    if kbar == 0:
        return 0
    width = ty.beta - (ty.gamma - ty.kappa) - ty.delta
    return min(width, sum_L_binom(ty.p, kbar) - kbar)


def analyze(code: AdditiveCode, cap: int = DEFAULT_CAP) -> dict:
    """Full rank/kernel report as a JSON-ready dict.

    Always computes the generator-set rank and the bounds; the exhaustive
    rank oracle, the two kernel methods and the coset tiling run only when
    the code size is within the cap, otherwise the corresponding entries
    hold the string "skipped".
    """
    ty = code.code_type
    gen = rank_of(code, "generator-set")
    bounds = rank_bounds(ty)
    report = {
        "p": ty.p,
        "type": list(ty.as_tuple()),
        "gray_length": code.space.gray_length,
        "log_p_size": ty.gamma + 2 * ty.delta,
        "rank": gen.rank,
        "rbar": gen.rbar,
        "bounds": dict(
            bounds,
            r_max_violated=gen.rank > bounds["r_max"],
            delta_form_violated=gen.rank > bounds["delta_form"],
            gamma_form_violated=gen.rank > bounds["gamma_form"],
        ),
    }
    if ty.size > cap:
        report.update(ker="skipped", kbar="skipped", method_agreement="skipped")
        return report

    exh = rank_of(code, "exhaustive", cap)
    k_carry = kernel_of(code, "carry", cap)
    k_translate = kernel_of(code, "translate", cap)
    kernels_equal = k_carry.dimension == k_translate.dimension and np.array_equal(
        k_carry.basis, k_translate.basis
    )
    tiling = coset_decomposition(code, k_carry, cap)
    report.update(
        ker=k_carry.dimension,
        kbar=k_carry.kbar,
        method_agreement=bool(gen.rank == exh.rank and kernels_equal and tiling.verified),
        coset_rows=list(tiling.chosen_rows),
    )
    return report
