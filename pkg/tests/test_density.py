import json
import random
from fractions import Fraction

import pytest

from prodfree.constructions import odd_occurrence
from prodfree.density import (
    ball_density,
    detect_period,
    frac_str,
    limits_report,
    profile,
    profile_csv,
    refined_density,
    upper_asymptotic,
    upper_banach,
)
from prodfree.sets import (
    dfa_full,
    dfa_truncate,
    explicit_empty,
    explicit_from_words,
    explicit_full,
)
from prodfree.words import Alphabet, layer_words

AB = Alphabet("ab")
ODD_A = odd_occurrence(AB, "a")
ODD_LEN = odd_occurrence(AB, "ab")
FULL = dfa_full(AB)
HALF = Fraction(1, 2)


class TestProfile:
    def test_odd_a_all_half(self):
        prof = profile(ODD_A, 64)
        assert all(d == HALF for d in prof.densities)
        assert prof.extendable

    def test_odd_length_alternates(self):
        prof = profile(ODD_LEN, 10)
        assert list(prof.densities) == [Fraction(n % 2) for n in range(1, 11)]

    def test_empty_profile(self):
        prof = profile(explicit_empty(AB, 6))
        assert all(d == 0 for d in prof.densities)
        assert not prof.extendable

    def test_counts_are_consistent(self):
        prof = profile(ODD_A, 12)
        for c in prof.counts:
            assert c.density * c.total == c.count

    def test_horizon_exceeded(self):
        s = explicit_full(AB, 4)
        with pytest.raises(ValueError, match="exceeds"):
            profile(s, 5)


class TestRefinedDensity:
    def test_odd_length_covered(self):
        assert refined_density(ODD_LEN, 3, (1,)) == 0

    def test_half_remaining(self):
        s = explicit_from_words([AB.word("a")] + list(layer_words(AB, 3)), 3)
        assert refined_density(s, 3, (1,)) == HALF

    def test_empty_ell_list_is_plain_density(self):
        prof = profile(ODD_A, 6)
        for n in range(1, 7):
            assert refined_density(ODD_A, n, ()) == prof.density(n)

    def test_never_exceeds_layer_density(self):
        prof = profile(ODD_A, 8)
        for n in range(2, 9):
            assert refined_density(ODD_A, n, (1,)) <= prof.density(n)


class TestPeriodDetection:
    def test_odd_length(self):
        report = detect_period(profile(ODD_LEN, 16))
        assert (report.preperiod, report.period, report.holds) == (1, 2, True)

    def test_odd_a(self):
        report = detect_period(profile(ODD_A, 16))
        assert (report.preperiod, report.period, report.holds) == (1, 1, True)

    def test_generic_explicit_has_no_period(self):
        rng = random.Random(2)
        words = [w for w in layer_words(AB, 1) + layer_words(AB, 2)
                 + layer_words(AB, 3) + layer_words(AB, 4) if rng.random() < 0.4]
        prof = profile(explicit_from_words(words, 4))
        assert not detect_period(prof).holds

    def test_alternating_detected_once_period_fits_cap(self):
        # d = (1,0,1,0,1): period 2 is over the H/3 cap at H=5, so nothing
        # is detected; at H=6 the alternation is found from the start.
        words5 = [w for n in (1, 3, 5) for w in layer_words(AB, n)]
        assert not detect_period(profile(explicit_from_words(words5, 5))).holds
        words6 = [w for n in (1, 3, 5) for w in layer_words(AB, n)]
        report = detect_period(profile(explicit_from_words(words6, 6)))
        assert (report.preperiod, report.period, report.holds) == (1, 2, True)

    def test_requires_two_periods_of_evidence(self):
        # d = (1, 0, 0, 1): the final d(4) = d(3) match alone is only one
        # period of evidence for p = 1, so it must not count.
        words = [w for n in (1, 4) for w in layer_words(AB, n)]
        assert not detect_period(profile(explicit_from_words(words, 4))).holds

    def test_small_horizon_rejected(self):
        with pytest.raises(ValueError, match=">= 4"):
            detect_period(profile(explicit_empty(AB, 3)))


class TestAsymptotic:
    def test_odd_length_exact_half(self):
        limit = upper_asymptotic(profile(ODD_LEN, 64))
        assert limit.value == HALF and limit.exact

    def test_full_set(self):
        limit = upper_asymptotic(profile(FULL, 32))
        assert limit.value == 1 and limit.exact

    def test_explicit_finite_support_not_exact(self):
        s = explicit_from_words(list(layer_words(AB, 1)), 8)
        limit = upper_asymptotic(profile(s, 8))
        assert limit.finite_max == 1  # attained by the n=1 prefix
        assert limit.window.start == 1 and limit.window.end == 1
        assert not limit.exact  # explicit truncations never extrapolate


class TestBanach:
    def test_odd_a_exact_half(self):
        limit = upper_banach(profile(ODD_A, 64), 8)
        assert limit.value == HALF and limit.exact

    def test_odd_length_exact_half(self):
        limit = upper_banach(profile(ODD_LEN, 64), 8)
        assert limit.value == HALF and limit.exact

    def test_full(self):
        limit = upper_banach(profile(FULL, 16), 4)
        assert limit.value == 1

    def test_bad_window(self):
        with pytest.raises(ValueError, match="min window"):
            upper_banach(profile(FULL, 8), 9)

    def test_banach_dominates_asymptotic_with_all_prefixes(self):
        rng = random.Random(9)
        for seed in range(5):
            words = [
                w
                for n in range(1, 7)
                for w in layer_words(AB, n)
                if rng.random() < 0.5
            ]
            prof = profile(explicit_from_words(words, 6))
            banach = upper_banach(prof, 1)
            asym = upper_asymptotic(prof)
            assert banach.finite_max >= asym.finite_max

    def test_window_mean_bounded_by_max_density(self):
        prof = profile(ODD_LEN, 32)
        limit = upper_banach(prof, 4)
        assert limit.finite_max <= max(prof.densities)

    def test_periodic_banach_equals_asymptotic(self):
        for d in (ODD_A, ODD_LEN):
            prof = profile(d, 48)
            assert upper_banach(prof, 8).value == upper_asymptotic(prof).value


class TestBallDensity:
    def test_full(self):
        assert ball_density(explicit_full(AB, 5), 5) == 1
        assert ball_density(FULL, 40) == 1

    def test_single_layer_at_least_half(self):
        # |F(n)| >= |F_<=(n)| / 2 at q = 2.
        s = explicit_from_words(list(layer_words(AB, 6)), 6)
        assert ball_density(s, 6) >= HALF

    def test_exact_value(self):
        s = explicit_from_words(list(layer_words(AB, 2)), 2)
        assert ball_density(s, 2) == Fraction(4, 6)

    def test_horizon_guard(self):
        s = explicit_full(AB, 3)
        with pytest.raises(ValueError, match="exceeds"):
            ball_density(s, 4)


class TestExactness:
    def test_summation_order_invariance(self):
        prof = profile(ODD_A, 20)
        forward = sum(prof.densities, Fraction(0))
        backward = sum(reversed(prof.densities), Fraction(0))
        rng = random.Random(3)
        shuffled = list(prof.densities)
        rng.shuffle(shuffled)
        assert forward == backward == sum(shuffled, Fraction(0))


class TestEmitters:
    def test_csv_shape(self):
        text = profile_csv(profile(ODD_A, 4))
        lines = text.strip().splitlines()
        assert lines[0] == "n,count,total,density_num,density_den"
        assert lines[1] == "1,1,2,1,2"
        assert lines[4] == "4,8,16,1,2"

    def test_limits_report_fields(self):
        report = limits_report(profile(ODD_A, 64), 8)
        assert report["asymptotic"]["exact"] is True
        assert report["asymptotic"]["value"] == "1/2"
        assert report["banach"]["min_window"] == 8
        assert json.dumps(report)  # serialisable

    def test_frac_str(self):
        assert frac_str(Fraction(5, 8)) == "5/8"
        assert frac_str(Fraction(1)) == "1/1"
