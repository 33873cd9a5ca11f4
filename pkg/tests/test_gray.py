"""Gray map, carry words, carry polynomial and its coefficient support."""

import itertools

import numpy as np
import pytest

from zpzp2.gray import (
    CarryPolynomial,
    GrayMap,
    carry_direct,
    carry_word,
    coeff_support,
    multiset_star_products,
    power_sum_coeff,
    power_sum_coeff_sym,
    sigma_hat,
    span_generator_count,
    span_power_degrees,
)
from zpzp2.ring import MixedSpace


class TestPhi:
    def test_pinned_images_p3(self):
        g = GrayMap(3)
        assert list(g.phi(0)) == [0, 0, 0]
        assert list(g.phi(4)) == [1, 2, 0]
        assert list(g.phi(3)) == [1, 1, 1]

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_injective(self, p):
        g = GrayMap(p)
        images = {tuple(g.phi(u)) for u in range(p * p)}
        assert len(images) == p * p

    def test_table_matches_phi(self):
        g = GrayMap(5)
        for u in range(25):
            assert np.array_equal(g.table[u], g.phi(u))

    def test_out_of_range(self):
        g = GrayMap(3)
        with pytest.raises(ValueError):
            g.phi(9)


class TestImage:
    def test_pinned_mixed_image(self):
        sp = MixedSpace(3, 1, 1)
        assert list(GrayMap(3).image(sp, sp.word([2], [4]))) == [2, 1, 2, 0]

    def test_blocks(self):
        sp = MixedSpace(5, 2, 2)
        g = GrayMap(5)
        w = sp.word([3, 1], [7, 24])
        img = g.image(sp, w)
        assert img.shape == (sp.gray_length,)
        assert list(img[:2]) == [3, 1]
        assert list(img[2:7]) == list(g.phi(7))
        assert list(img[7:]) == list(g.phi(24))

    def test_image_rows_matches_loop(self):
        sp = MixedSpace(3, 2, 3)
        g = GrayMap(3)
        rng = np.random.default_rng(0)
        rows = np.array([sp.random_word(rng) for _ in range(12)])
        batch = g.image_rows(sp, rows)
        for i, row in enumerate(rows):
            assert np.array_equal(batch[i], g.image(sp, row))

    def test_image_rows_injective(self):
        sp = MixedSpace(3, 0, 2)
        g = GrayMap(3)
        words = np.array(list(itertools.product(range(9), repeat=2)))
        images = g.image_rows(sp, words)
        assert len({tuple(r) for r in images.tolist()}) == len(words)

    def test_wrong_prime_rejected(self):
        with pytest.raises(ValueError):
            GrayMap(3).image_rows(MixedSpace(5, 1, 1), np.zeros((1, 2), np.int64))


class TestCarry:
    def test_pinned_scalars(self):
        assert carry_direct(2, 2, 3) == 3
        assert carry_direct(7, 23, 5) == 5
        assert carry_direct(4, 0, 5) == 0

    def test_zero_against_anything(self):
        u = np.arange(25)
        assert not carry_direct(u, np.zeros_like(u), 5).any()

    def test_pinned_word(self):
        sp = MixedSpace(3, 1, 2)
        u = sp.word([1], [2, 5])
        v = sp.word([2], [2, 4])
        assert list(carry_word(sp, u, v)) == [0, 3, 3]

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_additivity_exhaustive_single_coordinate(self, p):
        sp = MixedSpace(p, 0, 1)
        g = GrayMap(p)
        for u in range(p * p):
            for v in range(p * p):
                lhs = g.image(sp, [(u + v) % (p * p)])
                rhs = (g.image(sp, [u]) + g.image(sp, [v])) % p
                corr = g.image(sp, carry_word(sp, [u], [v])) % p
                assert np.array_equal(lhs, (rhs + corr) % p)

    def test_additivity_random_shapes(self):
        rng = np.random.default_rng(1)
        for p, a, b in [(3, 2, 3), (5, 1, 4), (7, 0, 2)]:
            sp = MixedSpace(p, a, b)
            g = GrayMap(p)
            for _ in range(40):
                u, v = sp.random_word(rng), sp.random_word(rng)
                lhs = g.image(sp, sp.add(u, v))
                rhs = (g.image(sp, u) + g.image(sp, v) + g.image(sp, carry_word(sp, u, v))) % p
                assert np.array_equal(lhs, rhs)

    def test_carry_word_has_order_dividing_p(self):
        sp = MixedSpace(5, 2, 3)
        rng = np.random.default_rng(2)
        for _ in range(30):
            c = carry_word(sp, sp.random_word(rng), sp.random_word(rng))
            assert sp.order_of(c) in (1, 5)
            assert not sp.x_part(c).any()

    def test_additive_on_order_p_words(self):
        # carry vanishes when one argument has order dividing p
        sp = MixedSpace(5, 1, 3)
        rng = np.random.default_rng(3)
        g = GrayMap(5)
        for _ in range(30):
            u = sp.reduce(5 * sp.random_word(rng))
            v = sp.reduce(5 * sp.random_word(rng))
            assert not carry_word(sp, u, v).any()
            lhs = g.image(sp, sp.add(u, v))
            assert np.array_equal(lhs, (g.image(sp, u) + g.image(sp, v)) % 5)


class TestPowerDegrees:
    def test_pinned(self):
        assert span_power_degrees(3) == (2, 3)
        assert span_power_degrees(5) == (3, 4, 5)
        assert span_power_degrees(7) == (3, 5, 6, 7)

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_structure(self, p):
        L = span_power_degrees(p)
        assert L == tuple(sorted(set(range(3, p + 1, 2)) | {p - 1}))
        assert p in L and p - 1 in L


class TestSigmaHat:
    def test_degree_zero_is_one(self):
        for p in (3, 5, 7):
            for k in range(p):
                assert sigma_hat(0, k, p) == 1

    def test_pinned_value(self):
        assert sigma_hat(1, 2, 5) == 3

    @pytest.mark.parametrize("p", [5, 7])
    def test_power_identity(self, p):
        # removing l from {0..p-1} leaves sigma_j = (-l)^j mod p; the
        # identity lives on the canonical exponent domain 0..p-2
        for l in range(p):
            for j in range(p - 1):
                assert sigma_hat(j, l, p) == pow(-l, j, p)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sigma_hat(1, 5, 5)
        with pytest.raises(ValueError):
            sigma_hat(-1, 0, 5)


class TestPowerSumCoeff:
    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_pinned_specials(self, p):
        assert power_sum_coeff(0, 0, p) == 0
        assert power_sum_coeff(0, p - 2, p) == p - 1

    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_two_formulas_agree(self, p):
        for i in range(p - 1):
            for j in range(p - 1):
                assert power_sum_coeff(i, j, p) == power_sum_coeff_sym(i, j, p)

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_support_characterization(self, p):
        nonzero = {
            (i, j)
            for i in range(p - 1)
            for j in range(p - 1)
            if power_sum_coeff(i, j, p) != 0
        }
        assert nonzero == set(coeff_support(p))

    def test_aliasing_outside_canonical_domain(self):
        # k^(p-1) = k^0 on units, so exponent p-1 collapses onto exponent 0
        p = 5
        for i in range(p - 1):
            assert power_sum_coeff(i, p - 1, p) == power_sum_coeff(i, 0, p)


class TestCarryPolynomial:
    def test_frozen_p5_table(self):
        assert CarryPolynomial(5).terms == {
            (4, 1): 20, (3, 2): 15, (2, 3): 15, (1, 4): 20,
            (3, 1): 15, (2, 2): 10, (1, 3): 15,
            (2, 1): 20, (1, 2): 20,
        }

    def test_term_counts(self):
        assert len(CarryPolynomial(3).terms) == 3
        assert len(CarryPolynomial(5).terms) == 9

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_matches_direct_exhaustively(self, p):
        poly = CarryPolynomial(p)
        p2 = p * p
        u = np.repeat(np.arange(p2), p2)
        v = np.tile(np.arange(p2), p2)
        assert np.array_equal(poly.evaluate(u, v), carry_direct(u, v, p))

    def test_scalar_evaluation(self):
        poly = CarryPolynomial(5)
        assert poly.evaluate(7, 23) == 5
        assert poly.evaluate(0, 13) == 0

    def test_term_string(self):
        s = CarryPolynomial(5).term_string()
        assert s.startswith("20*u^4*v")
        assert s.count("+") == 8
        assert "u^2*v^2" in s


class TestStarProducts:
    def test_counts_match_binomials(self):
        sp = MixedSpace(5, 0, 22)
        rng = np.random.default_rng(4)
        rows = np.array([sp.random_word(rng) for _ in range(2)])
        prods = list(multiset_star_products(sp, rows))
        assert len(prods) == 15  # C(4,3) + C(5,4) + C(6,5)
        assert span_generator_count(5, 1, 2) == 1 + 2 + 15

    def test_lexicographic_multisets(self):
        sp = MixedSpace(3, 0, 3)
        rng = np.random.default_rng(5)
        rows = np.array([sp.random_word(rng) for _ in range(2)])
        combos = [c for _, c, _ in multiset_star_products(sp, rows)]
        by_degree = {}
        for c in combos:
            by_degree.setdefault(len(c), []).append(c)
        for degree, group in by_degree.items():
            assert group == sorted(group)
            assert all(tuple(sorted(c)) == c for c in group)

    def test_products_have_order_dividing_p(self):
        sp = MixedSpace(5, 1, 3)
        rng = np.random.default_rng(6)
        rows = np.array([sp.random_word(rng) for _ in range(2)])
        for _, _, w in multiset_star_products(sp, rows):
            assert sp.order_of(w) in (1, 5)

    def test_empty_generator_list(self):
        sp = MixedSpace(5, 0, 2)
        assert list(multiset_star_products(sp, np.zeros((0, 2), np.int64))) == []

    def test_degree_zero_case(self):
        assert span_generator_count(5, 3, 0) == 3
