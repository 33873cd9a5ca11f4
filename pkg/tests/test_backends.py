"""Parity between the numba kernels and the pure numpy fallback."""

import numpy as np
import pytest

from zpzp2 import _kernels_numpy as knp
from zpzp2 import backend
from zpzp2.code import AdditiveCode
from zpzp2.gray import GrayMap
from zpzp2.ring import MixedSpace

knb = pytest.importorskip("zpzp2._kernels_numba")


def random_codes(seed, count=6):
    rng = np.random.default_rng(seed)
    shapes = [(3, 1, 3), (3, 0, 4), (5, 2, 3), (5, 1, 2)]
    out = []
    while len(out) < count:
        p, a, b = shapes[len(out) % len(shapes)]
        sp = MixedSpace(p, a, b)
        rows = np.array([sp.random_word(rng) for _ in range(2)])
        try:
            code = AdditiveCode.from_rows(sp, rows)
        except ValueError:
            continue
        if code.size <= 2000:
            out.append(code)
    return out


class TestRrefParity:
    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_random_matrices(self, p):
        rng = np.random.default_rng(p)
        for rows, cols in [(1, 1), (4, 7), (7, 4), (6, 6), (3, 12)]:
            mat = rng.integers(0, p, size=(rows, cols))
            r1, k1 = knp.rref_mod(mat, p)
            r2, k2 = knb.rref_mod(mat, p)
            assert k1 == k2
            assert np.array_equal(r1, r2)

    def test_rank_deficient(self):
        rng = np.random.default_rng(42)
        for p in (3, 5):
            B = rng.integers(0, p, size=(5, 2))
            C = rng.integers(0, p, size=(2, 8))
            mat = (B @ C) % p
            r1, k1 = knp.rref_mod(mat, p)
            r2, k2 = knb.rref_mod(mat, p)
            assert k1 == k2 <= 2
            assert np.array_equal(r1, r2)

    def test_zero_matrix(self):
        mat = np.zeros((3, 5), np.int64)
        r1, k1 = knp.rref_mod(mat, 3)
        r2, k2 = knb.rref_mod(mat, 3)
        assert k1 == k2 == 0
        assert np.array_equal(r1, r2)


class TestMembershipParity:
    def test_against_enumeration(self):
        rng = np.random.default_rng(7)
        for code in random_codes(7):
            sp = code.space
            red = code._reduction
            members = {tuple(w) for w in code.codeword_matrix().tolist()}
            probes = np.array([sp.random_word(rng) for _ in range(120)])
            lifted = sp.lift(probes)
            m1 = knp.membership_mask(lifted, red.rows, red.cols, red.is_unit, sp.p)
            m2 = knb.membership_mask(lifted, red.rows, red.cols, red.is_unit, sp.p)
            assert np.array_equal(m1, m2)
            truth = np.array([tuple(w) in members for w in probes])
            assert np.array_equal(m1, truth)


class TestKernelScanParity:
    def test_four_way_agreement(self):
        for code in random_codes(13, count=4):
            sp = code.space
            red = code._reduction
            words = code.codeword_matrix()
            images = GrayMap(sp.p).image_rows(sp, words)
            y0 = np.ascontiguousarray(sp.y_part(words) % sp.p)
            g = np.ascontiguousarray(images % sp.p)
            carry_np = knp.carry_kernel_mask(
                y0, sp.alpha, sp.length, red.rows, red.cols, red.is_unit, sp.p
            )
            carry_nb = knb.carry_kernel_mask(
                y0, sp.alpha, sp.length, red.rows, red.cols, red.is_unit, sp.p
            )
            trans_np = knp.translate_kernel_mask(g, sp.p)
            trans_nb = knb.translate_kernel_mask(g, sp.p)
            assert np.array_equal(carry_np, carry_nb)
            assert np.array_equal(trans_np, trans_nb)
            assert np.array_equal(carry_np, trans_np)
            assert carry_np[0]  # zero word always in the kernel


class TestPacking:
    def test_pack_rows_is_injective(self):
        rng = np.random.default_rng(3)
        for p in (3, 5, 13):
            G = rng.integers(0, p, size=(50, 40))
            packed = knp.pack_rows(G, p)
            assert packed.shape[0] == 50
            assert len({tuple(r) for r in packed.tolist()}) == len(
                {tuple(r) for r in G.tolist()}
            )

    def test_digits_per_chunk_bound(self):
        for p in (3, 5, 7, 11, 13):
            k = knp.digits_per_chunk(p)
            assert p**k < 2**62 <= p ** (k + 1)


class TestDispatch:
    def test_env_switch(self, monkeypatch):
        monkeypatch.setenv("ZPZP2_JIT", "numpy")
        assert backend.backend_name() == "numpy"
        assert backend.kernels() is knp
        monkeypatch.setenv("ZPZP2_JIT", "numba")
        assert backend.backend_name() == "numba"
        assert backend.kernels() is knb

    def test_results_do_not_depend_on_backend(self, monkeypatch):
        from zpzp2.span_kernel import kernel_of, rank_of

        code = random_codes(21, count=1)[0]
        monkeypatch.setenv("ZPZP2_JIT", "numpy")
        a = (rank_of(code, "exhaustive").rank, kernel_of(code, "carry").dimension)
        monkeypatch.setenv("ZPZP2_JIT", "numba")
        b = (rank_of(code, "exhaustive").rank, kernel_of(code, "carry").dimension)
        assert a == b
