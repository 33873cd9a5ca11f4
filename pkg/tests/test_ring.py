"""Mixed-alphabet arithmetic: digits, componentwise ops, orders."""

import numpy as np
import pytest

from zpzp2.ring import SUPPORTED_PRIMES, MixedSpace, check_prime, pary_expand


class TestCheckPrime:
    def test_accepts_supported(self):
        for p in SUPPORTED_PRIMES:
            assert check_prime(p) == p

    @pytest.mark.parametrize("bad", [1, 2, 4, 9, 15, 17, -3, 0])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            check_prime(bad)

    @pytest.mark.parametrize("bad", [5.0, "5", True, None])
    def test_rejects_non_integers(self, bad):
        with pytest.raises(TypeError):
            check_prime(bad)


class TestParyExpand:
    def test_zero(self):
        assert pary_expand(0, 3) == (0, 0)

    def test_pinned_values(self):
        assert pary_expand(7, 5) == (2, 1)
        assert pary_expand(8, 3) == (2, 2)

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_bijection(self, p):
        seen = set()
        for u in range(p * p):
            u0, u1 = pary_expand(u, p)
            assert 0 <= u0 < p and 0 <= u1 < p
            assert u0 + p * u1 == u
            seen.add((u0, u1))
        assert len(seen) == p * p

    def test_vectorized_matches_scalar(self):
        u = np.arange(25)
        lo, hi = pary_expand(u, 5)
        for i in range(25):
            assert (lo[i], hi[i]) == pary_expand(i, 5)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            pary_expand(9, 3)
        with pytest.raises(ValueError):
            pary_expand(-1, 5)


@pytest.fixture
def sp3():
    return MixedSpace(3, 1, 2)


class TestMixedSpace:
    def test_shape_attributes(self, sp3):
        assert sp3.length == 3
        assert sp3.p2 == 9
        assert sp3.gray_length == 1 + 3 * 2
        assert list(sp3.moduli) == [3, 9, 9]

    def test_degenerate_blocks(self):
        assert MixedSpace(5, 3, 0).gray_length == 3
        assert MixedSpace(5, 0, 2).gray_length == 10
        with pytest.raises(ValueError):
            MixedSpace(5, 0, 0)
        with pytest.raises(ValueError):
            MixedSpace(5, -1, 2)

    def test_word_and_parts(self, sp3):
        w = sp3.word([5], [10, 4])
        assert list(w) == [2, 1, 4]
        assert list(sp3.x_part(w)) == [2]
        assert list(sp3.y_part(w)) == [1, 4]
        with pytest.raises(ValueError):
            sp3.word([1, 2], [0, 0])

    def test_reduce_checks_length(self, sp3):
        with pytest.raises(ValueError):
            sp3.reduce([1, 2])

    def test_lift_unlift_roundtrip(self, sp3):
        rng = np.random.default_rng(0)
        for _ in range(20):
            w = sp3.random_word(rng)
            lifted = sp3.lift(w)
            assert list(lifted[:1]) == [(3 * w[0]) % 9]
            assert np.array_equal(sp3.unlift(lifted), w)

    def test_unlift_rejects_bad_x_block(self, sp3):
        with pytest.raises(ValueError):
            sp3.unlift(np.array([1, 0, 0]))

    def test_group_ops(self, sp3):
        u = sp3.word([2], [8, 3])
        v = sp3.word([2], [4, 7])
        assert list(sp3.add(u, v)) == [1, 3, 1]
        assert list(sp3.sub(sp3.add(u, v), v)) == list(u)
        assert list(sp3.add(u, sp3.neg(u))) == [0, 0, 0]
        assert list(sp3.scale(3, u)) == [0, 6, 0]

    def test_star_pinned_example(self):
        sp = MixedSpace(5, 0, 2)
        assert list(sp.star(sp.word([], [2, 3]), sp.word([], [4, 7]))) == [8, 21]

    def test_star_algebra(self, sp3):
        rng = np.random.default_rng(1)
        for _ in range(20):
            u, v, w = (sp3.random_word(rng) for _ in range(3))
            assert np.array_equal(sp3.star(u, v), sp3.star(v, u))
            assert np.array_equal(
                sp3.star(sp3.star(u, v), w), sp3.star(u, sp3.star(v, w))
            )
            assert np.array_equal(sp3.star(u, sp3.ones()), u)
            # distributes over addition componentwise
            assert np.array_equal(
                sp3.star(u, sp3.add(v, w)),
                sp3.add(sp3.star(u, v), sp3.star(u, w)),
            )

    def test_star_shape_mismatch(self, sp3):
        with pytest.raises(ValueError):
            sp3.star(np.zeros(3, np.int64), np.zeros(4, np.int64))

    def test_star_power_pinned(self):
        sp5 = MixedSpace(5, 0, 1)
        assert list(sp5.star_power(sp5.word([], [2]), 4)) == [16]
        sp3 = MixedSpace(3, 0, 1)
        assert list(sp3.star_power(sp3.word([], [3]), 2)) == [0]

    def test_star_power_matches_repeated_star(self, sp3):
        rng = np.random.default_rng(2)
        u = sp3.random_word(rng)
        acc = u.copy()
        for m in range(2, 6):
            acc = sp3.star(acc, u)
            assert np.array_equal(sp3.star_power(u, m), acc)
        assert np.array_equal(sp3.star_power(u, 1), u)
        with pytest.raises(ValueError):
            sp3.star_power(u, 0)

    def test_order_of(self, sp3):
        assert sp3.order_of(sp3.zeros()) == 1
        assert sp3.order_of(sp3.word([1], [0, 3])) == 3
        assert sp3.order_of(sp3.word([0], [1, 0])) == 9
        assert sp3.order_of(sp3.word([2], [6, 0])) == 3

    def test_order_drops_under_scaling(self, sp3):
        rng = np.random.default_rng(3)
        for _ in range(30):
            c = sp3.random_word(rng)
            o = sp3.order_of(c)
            if o == 1:
                continue
            scaled = sp3.scale(3, c)
            assert sp3.order_of(scaled) == o // 3

    def test_random_word_in_range(self, sp3):
        rng = np.random.default_rng(4)
        for _ in range(50):
            w = sp3.random_word(rng)
            assert (w >= 0).all() and (w < sp3.moduli).all()

    def test_equality_and_hash(self):
        assert MixedSpace(3, 1, 2) == MixedSpace(3, 1, 2)
        assert MixedSpace(3, 1, 2) != MixedSpace(3, 2, 1)
        assert len({MixedSpace(3, 1, 2), MixedSpace(3, 1, 2)}) == 1
