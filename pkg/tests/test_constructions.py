from fractions import Fraction
from itertools import combinations
from math import isqrt

import pytest

from prodfree.constructions import (
    asymmetric_triple,
    counting_pathology,
    greedy_random_productfree,
    odd_occurrence,
    pathology_lengths,
    phi_floor,
)
from prodfree.density import ball_density, profile, upper_banach
from prodfree.productfree import check_explicit, check_regular
from prodfree.proofkit import PHI, Surd
from prodfree.sets import (
    dfa_concat,
    dfa_intersect,
    dfa_is_empty,
    dfa_layer_counts,
    dfa_truncate,
    same_language,
)
from prodfree.words import Alphabet, layer_words

AB = Alphabet("ab")
ABC = Alphabet("abc")


class TestOddOccurrence:
    def test_gamma_a_counts(self):
        counts = dfa_layer_counts(odd_occurrence(AB, "a"), 10)
        assert counts == [2 ** (n - 1) for n in range(1, 11)]

    def test_gamma_full_is_odd_length(self):
        d = odd_occurrence(AB, "ab")
        counts = dfa_layer_counts(d, 8)
        assert counts == [2**n if n % 2 else 0 for n in range(1, 9)]

    def test_accept_examples(self):
        d = odd_occurrence(AB, "a")
        for text, expected in [("a", True), ("ab", True), ("ba", True),
                               ("aaa", True), ("aa", False), ("b", False)]:
            assert d.accepts(AB.word(text)) == expected

    @pytest.mark.parametrize("alphabet", [AB, ABC])
    def test_every_gamma_product_free(self, alphabet):
        symbols = alphabet.symbols
        for size in range(1, len(symbols) + 1):
            for combo in combinations(symbols, size):
                assert check_regular(odd_occurrence(alphabet, "".join(combo))) is None

    def test_profiles_and_banach(self):
        half = Fraction(1, 2)
        for gamma in ("a", "ab"):
            d = odd_occurrence(AB, gamma)
            limit = upper_banach(profile(d, 64), 8)
            assert limit.value == half and limit.exact
        assert all(x == half for x in profile(odd_occurrence(AB, "a"), 20).densities)

    def test_empty_gamma_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            odd_occurrence(AB, "")


class TestCountingPathology:
    def test_c2_lengths_at_horizon_20(self):
        assert pathology_lengths(2, 20) == [5, 6, 9, 10, 17, 18]

    @pytest.mark.parametrize("c", [2, 3, 4])
    def test_default_horizon_product_free(self, c):
        s = counting_pathology(AB, c)
        assert s.horizon == 2**c + c
        assert check_explicit(s) is None

    @pytest.mark.parametrize("c", [2, 3, 4])
    def test_ball_density_at_least_1_minus_1_over_c(self, c):
        s = counting_pathology(AB, c)
        n = 2**c + c
        assert ball_density(s, n) >= 1 - Fraction(1, c)

    def test_c4_exact_value(self):
        s = counting_pathology(AB, 4)
        got = ball_density(s, 20)
        # Big-integer oracle: layers 17..20 full over a geometric denominator.
        member = sum(2**n for n in range(17, 21))
        total = sum(2**n for n in range(1, 21))
        assert got == Fraction(member, total) == Fraction(65536, 69905)

    def test_longer_horizon_reveals_same_block_products(self):
        # Two block-5 words concatenate to a block-10 word, so the infinite
        # union is not product-free; the truncated check reports it honestly.
        s = counting_pathology(AB, 2, horizon=12)
        witness = check_explicit(s)
        assert witness is not None
        assert (len(witness.x), len(witness.y), len(witness.z)) == (5, 5, 10)

    def test_length_sum_oracle_at_default_horizon(self):
        for c in (2, 3, 4):
            lengths = set(pathology_lengths(c, 2**c + c))
            assert not any(a + b in lengths for a in lengths for b in lengths)

    def test_rejects_unary_and_small_horizon(self):
        with pytest.raises(ValueError, match="two symbols"):
            counting_pathology(Alphabet("a"), 3)
        with pytest.raises(ValueError, match="below"):
            counting_pathology(AB, 3, horizon=10)


class TestAsymmetricTriple:
    def test_phi_floor_oracle(self):
        # 9 = floor(16 phi): (2*9 + 16)^2 = 1156 < 1280 = 5*16^2 < 1296.
        assert (2 * 9 + 16) ** 2 < 5 * 16**2 < (2 * 10 + 16) ** 2
        assert phi_floor(16) == 9
        for total in range(1, 2000):
            s = phi_floor(total)
            assert (2 * s + total) ** 2 < 5 * total**2 < (2 * (s + 1) + total) ** 2

    def test_w_is_lex_least_block(self):
        triple = asymmetric_triple(AB, 4, Fraction(1, 10))
        assert triple.w_set.layer_count(4) == 9
        texts = {w.text for w in triple.w_set.words()}
        assert texts == {w.text for w in layer_words(AB, 4)[:9]}

    def test_x_and_y_densities(self):
        triple = asymmetric_triple(AB, 4, Fraction(1, 10))
        xc = dfa_layer_counts(triple.x, 20)
        yc = dfa_layer_counts(triple.y, 20)
        for n in range(4, 21):
            assert Fraction(xc[n - 1], 2**n) == Fraction(9, 16)
            assert Fraction(yc[n - 1], 2**n) == Fraction(9, 16)
        for n in range(1, 4):
            assert xc[n - 1] == 0 and yc[n - 1] == 0
        # Exceeds phi - eps under the exact surd comparison.
        assert Surd.of(Fraction(9, 16)) > PHI - Fraction(1, 10)

    def test_x_contains_w_itself(self):
        triple = asymmetric_triple(AB, 4, Fraction(1, 10))
        for w in triple.w_set.words():
            assert triple.x.accepts(w)
            assert triple.y.accepts(w)

    def test_membership_oracle(self):
        triple = asymmetric_triple(AB, 4, Fraction(1, 10))
        w_texts = {w.text for w in triple.w_set.words()}
        for n in (4, 5, 6, 7):
            for w in layer_words(AB, n):
                assert triple.x.accepts(w) == (w.text[:4] in w_texts)
                assert triple.y.accepts(w) == (w.text[-4:] in w_texts)

    def test_no_solutions(self):
        triple = asymmetric_triple(AB, 4, Fraction(1, 10))
        xy = dfa_concat(triple.x, triple.y)
        empty, _ = dfa_is_empty(dfa_intersect(xy, triple.z))
        assert empty

    def test_z_long_run_density(self):
        triple = asymmetric_triple(AB, 4, Fraction(1, 10))
        zc = dfa_layer_counts(triple.z, 24)
        target = 1 - Fraction(9, 16) * Fraction(9, 16)
        xc = dfa_layer_counts(triple.x, 24)
        yc = dfa_layer_counts(triple.y, 24)
        for n in range(8, 25):
            dz = Fraction(zc[n - 1], 2**n)
            assert dz == target
            # Cross-check against 1 - d_X * d_Y at the same length.
            assert dz == 1 - Fraction(xc[3], 2**4) * Fraction(yc[3], 2**4)
        for n in range(1, 8):
            assert Fraction(zc[n - 1], 2**n) == 1

    def test_eps_gap_error(self):
        with pytest.raises(ValueError, match="eps/3"):
            asymmetric_triple(AB, 1, Fraction(1, 10))

    def test_unary_rejected_by_gap(self):
        with pytest.raises(ValueError):
            asymmetric_triple(Alphabet("a"), 3, Fraction(1, 100))


class TestGreedyGenerator:
    def test_deterministic(self):
        one = greedy_random_productfree(AB, 10, seed=42)
        two = greedy_random_productfree(AB, 10, seed=42)
        assert one == two
        other = greedy_random_productfree(AB, 10, seed=43)
        assert one != other

    @pytest.mark.parametrize("seed", range(8))
    def test_always_product_free(self, seed):
        s = greedy_random_productfree(AB, 9, seed)
        assert check_explicit(s) is None

    def test_odd_first_recovers_odd_truncation(self):
        s = greedy_random_productfree(AB, 6, seed=3, schedule="odd-first")
        expected = dfa_truncate(odd_occurrence(AB, "ab"), 6)
        assert s == expected

    def test_unknown_schedule(self):
        with pytest.raises(ValueError, match="schedule"):
            greedy_random_productfree(AB, 4, 0, schedule="bogus")

    def test_q3_and_q1(self):
        s = greedy_random_productfree(ABC, 5, seed=1)
        assert check_explicit(s) is None
        u = greedy_random_productfree(Alphabet("a"), 12, seed=1)
        assert check_explicit(u) is None
