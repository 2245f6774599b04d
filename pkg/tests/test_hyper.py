"""2F1 evaluation routes, classical oracles, and dispatcher behavior."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from mpmath import mp

from helpers import assert_encloses, mpf_of_fraction, overlap

from hypergamma.hyper import (
    HypParams,
    NoFeasibleStrategyError,
    ParamsError,
    PochRatio,
    Precision,
    SeriesTermCapError,
    agm_K,
    f21_eval,
    f21_integral,
    f21_series,
    f21_terminating,
    pochhammer,
)
from hypergamma.mpreal import BigReal, gamma, pi_value, sqrt
from hypergamma.mpreal import asin as b_asin

P30 = Precision.of(30)
P50 = Precision.of(50)

AZ_RATIO = PochRatio(
    upper=(F(9, 8), F(11, 8), F(13, 8), F(15, 8)),
    lower=(F(6, 5), F(9, 5), F(13, 10), F(17, 10)),
)


def setup_module():
    mp.dps = 80


def oracle_f21(p: HypParams, z) -> "mp.mpf":
    zz = mpf_of_fraction(z) if isinstance(z, (F, int)) else z
    return mp.hyp2f1(
        mpf_of_fraction(p.a), mpf_of_fraction(p.b), mpf_of_fraction(p.c), zz
    )


class TestPochhammer:
    def test_empty_product(self):
        for x in (F(0), F(-3, 2), F(17, 2)):
            assert pochhammer(x, 0) == 1

    def test_factorial(self):
        assert pochhammer(F(1), 5) == 120

    def test_half(self):
        assert pochhammer(F(1, 2), 3) == F(15, 8)

    def test_recurrence_exhaustive(self):
        rng = random.Random(23)
        xs = [F(rng.randint(-40, 40), rng.randint(1, 12)) for _ in range(20)]
        for x in xs:
            for n in range(50):
                assert pochhammer(x, n + 1) == pochhammer(x, n) * (x + n)

    def test_poch_ratio_pole(self):
        bad = PochRatio(upper=(F(1, 2),), lower=(F(-2),))
        with pytest.raises(ParamsError):
            bad.value(4)
        assert bad.value(1) == F(1, 2) / F(-2)


class TestSeries:
    def test_z_zero(self):
        out = f21_series(HypParams(F(1, 3), F(4, 5), F(7, 2)), F(0), P50)
        assert float(out) == 1.0 and out.is_exact

    def test_arcsin_value(self):
        # 2F1(1/2,1/2;3/2;1/4) = pi/3
        out = f21_series(HypParams(F(1, 2), F(1, 2), F(3, 2)), F(1, 4), P50)
        assert_encloses(out * 3, mp.pi, "series pi/3")
        assert out.to_decimal(25).startswith("1.047197551196597746")

    def test_elliptic_value(self):
        # 2F1(1/2,1/2;1;1/4) = (2/pi) K(1/2)
        out = f21_series(HypParams(F(1, 2), F(1, 2), F(1)), F(1, 4), P50)
        k = agm_K(F(1, 2), P50)
        d = out * pi_value(P50) - k * 2
        assert not d.definitely_positive() and not d.definitely_negative()

    def test_oracle_random_params(self):
        rng = random.Random(6)
        for _ in range(25):
            p = HypParams(
                F(rng.randint(-9, 9), rng.randint(1, 8)),
                F(rng.randint(-9, 9), rng.randint(1, 8)),
                F(rng.randint(1, 9), rng.randint(1, 8)),
            )
            z = F(rng.randint(-8, 8), 10)
            out = f21_series(p, z, P30)
            assert_encloses(out, oracle_f21(p, z), f"series {p} {z}")

    def test_arcsin_oracle_sweep(self):
        rng = random.Random(9)
        for _ in range(20):
            z = F(rng.randint(1, 99), 100)
            s = f21_series(HypParams(F(1, 2), F(1, 2), F(3, 2)), z, P30)
            rz = sqrt(BigReal.from_fraction(z, P30.work_bits))
            d = s * rz - b_asin(rz)
            assert not d.definitely_positive() and not d.definitely_negative()

    def test_elliptic_oracle_sweep(self):
        rng = random.Random(10)
        for _ in range(20):
            z = F(rng.randint(1, 89), 100)
            s = f21_series(HypParams(F(1, 2), F(1, 2), F(1)), z, P30)
            k = agm_K(sqrt(BigReal.from_fraction(z, P30.work_bits)), P30)
            d = s * pi_value(P30) - 2 * k
            assert not d.definitely_positive() and not d.definitely_negative()

    def test_bigreal_argument(self):
        z = sqrt(BigReal.from_fraction(F(1, 2), P30.work_bits)) / 2  # irrational
        p = HypParams(F(1, 4), F(1, 2), F(5, 4))
        out = f21_series(p, z, P30)
        assert_encloses(out, oracle_f21(p, mp.sqrt(0.5) / 2), "series irrational z")

    def test_term_cap(self):
        p = HypParams(F(1, 2), F(1, 2), F(3, 2))
        with pytest.raises(SeriesTermCapError):
            f21_series(p, F(999999, 1000000), P30, term_cap=200)

    def test_domain(self):
        p = HypParams(F(1, 2), F(1, 2), F(3, 2))
        with pytest.raises(Exception):
            f21_series(p, F(3, 2), P30)

    def test_lower_pole_rejected(self):
        with pytest.raises(ParamsError):
            f21_series(HypParams(F(1, 2), F(1, 3), F(-2)), F(1, 4), P30)

    def test_terminating_before_pole_allowed(self):
        # a = -2 terminates at n=2 before the pole of c = -5/2... c=-5/2 is
        # not an integer; use c = -3 with a = -2: poles at n = 3 not reached
        p = HypParams(F(-2), F(1, 3), F(-3))
        out = f21_series(p, F(1, 4), P30)
        want = f21_terminating(p, F(1, 4))
        assert_encloses(out, mpf_of_fraction(want), "terminating series")


class TestTerminating:
    def test_two_term_sum(self):
        got = f21_terminating(HypParams(F(-1), F(-3, 2), F(17, 2)), F(1, 5))
        assert got == F(88, 85)

    def test_zero_upper(self):
        assert f21_terminating(HypParams(F(0), F(2, 3), F(1, 5)), F(9, 10)) == 1

    def test_az_member_n2(self):
        got = f21_terminating(HypParams(F(-2), F(-5, 2), F(25, 2)), F(1, 5))
        assert got == F(16384, 15625) ** 2 * AZ_RATIO.value(2)
        assert got == F(1216, 1125)

    def test_az_family_spot(self):
        for n in range(0, 9):
            p = HypParams(F(-n), F(-n) - F(1, 2), 4 * n + F(9, 2))
            assert f21_terminating(p, F(1, 5)) == F(16384, 15625) ** n * AZ_RATIO.value(n)

    def test_pole_inside_sum(self):
        with pytest.raises(ParamsError):
            f21_terminating(HypParams(F(-5), F(1, 2), F(-3)), F(1, 4))


class TestIntegral:
    def test_zucker_joyce_first(self):
        out = f21_integral(
            HypParams(F(1, 8), F(3, 8), F(1, 2)), F(2400, 2401), P30
        )
        want = mp.mpf(2) / 3 * mp.sqrt(7)
        assert_encloses(out, want, "ZJ 2400/2401")
        assert out.to_decimal(10).startswith("1.763834207")

    def test_z_zero_is_one(self):
        out = f21_integral(HypParams(F(1, 3), F(2, 5), F(7, 5)), F(0), P30)
        assert_encloses(out, mp.mpf(1), "integral at 0")

    def test_gauss_beta_form_at_one(self):
        a, b, c = F(1, 3), F(2, 5), F(7, 4)
        out = f21_integral(HypParams(a, b, c), F(1), P30)
        want = (
            gamma(c, P30) * gamma(c - a - b, P30)
            / (gamma(c - a, P30) * gamma(c - b, P30))
        )
        assert overlap(out, want)

    def test_preconditions(self):
        with pytest.raises(Exception):
            f21_integral(HypParams(F(1, 2), F(2, 3), F(1, 6)), F(1, 4), P30)
        with pytest.raises(Exception):
            f21_integral(HypParams(F(1, 8), F(3, 8), F(1, 2)), F(3, 2), P30)

    def test_negative_z_matches_series(self):
        p = HypParams(F(2, 5), F(1, 4), F(23, 20))
        z = F(-1, 2)
        a = f21_integral(p, z, P30)
        b = f21_series(p, z, P30)
        assert overlap(a, b)


class TestEval:
    def test_campbell_levrie(self):
        out = f21_eval(HypParams(F(1, 2), F(2, 3), F(1, 6)), F(1, 4), P50)
        want = mp.mpf(4) / 3 * mp.cbrt(2)
        assert_encloses(out, want, "Campbell-Levrie")
        assert out.to_decimal(17).startswith("1.679894733193164")

    def test_zj_third_entry_integral_path(self):
        out = f21_eval(HypParams(F(1, 6), F(1, 2), F(2, 3)), F(125, 128), P30)
        want = mp.mpf(4) / 3 * mp.root(2, 6)
        assert_encloses(out, want, "ZJ 125/128")

    def test_main_evaluation_params_small_digits(self):
        out = f21_eval(
            HypParams(F(7, 48), F(31, 48), F(9, 8)),
            F(29884728384, 34239431521),
            P30,
        )
        z = (mp.mpf(172872) / 185039) ** 2
        want = mp.hyp2f1(mp.mpf(7) / 48, mp.mpf(31) / 48, mp.mpf(9) / 8, z)
        assert_encloses(out, want, "main eval at 30 digits")

    def test_strategies_agree(self):
        p = HypParams(F(2, 5), F(1, 4), F(23, 20))
        z = F(1, 3)
        s = f21_eval(p, z, P30, strategy="series")
        i = f21_eval(p, z, P30, strategy="integral")
        a = f21_eval(p, z, P30)
        assert overlap(s, i) and overlap(a, s)

    def test_terminating_dispatch_exact(self):
        out = f21_eval(HypParams(F(-1), F(-3, 2), F(17, 2)), F(1, 5), P30)
        assert_encloses(out, mpf_of_fraction(F(88, 85)), "AZ dispatch")

    def test_no_strategy_above_one(self):
        with pytest.raises(NoFeasibleStrategyError):
            f21_eval(HypParams(F(1, 2), F(2, 3), F(1, 6)), F(3, 2), P30)

    def test_no_strategy_near_one_without_ordering(self):
        # c < min(a, b): no Euler ordering, z too large for the series
        with pytest.raises(NoFeasibleStrategyError):
            f21_eval(HypParams(F(1, 2), F(2, 3), F(1, 6)), F(99, 100), P30)

    def test_kummer_via_integral_path(self):
        rng = random.Random(77)
        for _ in range(5):
            a = F(rng.randint(1, 19), 20)
            b = F(rng.randint(1, 19), 20)
            p = HypParams(a, b, 1 + a - b)
            out = f21_eval(p, F(-1), P30)
            want = (
                gamma(1 + a - b, P30) * gamma(1 + a / 2, P30)
                / (gamma(1 + a, P30) * gamma(1 + a / 2 - b, P30))
            )
            assert overlap(out, want)

    def test_gosper_strange_spot(self):
        for (a, b) in ((F(1, 3), F(2)), (F(3), F(1, 4)), (F(1, 2), F(1, 2))):
            p = HypParams(1 - a, b, b + 2)
            z = b / (a + b)
            out = f21_eval(p, z, P30)
            base = BigReal.from_fraction(a / (a + b), P30.work_bits)
            want = base.pow_rational(a) * (b + 1)
            assert overlap(out, want)


class TestAgmK:
    def test_k_zero(self):
        out = agm_K(F(0), P50)
        assert_encloses(out * 2, mp.pi, "K(0)")

    def test_k_half(self):
        out = agm_K(F(1, 2), P50)
        assert out.to_decimal(16).startswith("1.685750354812596")
        assert_encloses(out, mp.ellipk(mp.mpf(1) / 4), "K(1/2)")

    def test_lemniscatic(self):
        # K(sqrt(1/2)) = Gamma(1/4)^2 / (4 sqrt(pi))
        k = sqrt(BigReal.from_fraction(F(1, 2), P50.work_bits))
        out = agm_K(k, P50)
        g = gamma(F(1, 4), P50)
        want = g * g / (4 * sqrt(pi_value(P50)))
        assert overlap(out, want)

    def test_domain(self):
        with pytest.raises(Exception):
            agm_K(F(3, 2), P30)
