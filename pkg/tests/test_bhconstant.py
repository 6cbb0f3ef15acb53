"""
Unit tests for the partial Euler products and their closed forms.
"""

import math
import random
from fractions import Fraction

import pytest
from sympy import totient as sympy_totient

from config.error_handling import (
    CapacityError, GcdError, OddShiftError, ParityError, PerfectSquareDiscriminantError,
    ReducibleError, ValidationError, VanishingPrimeError
)
from models.core import EngineConfig, Verdict
from models.polynomial import IntPoly
from services.bhconstant import (
    ap_constant, bh_constant, ck_constant, divergence_diagnostic, greentao_constant,
    hlf_constant, index_checkpoints, progression_family
)
from services.polynomial import check_family, load_family, parse_family
from services.primes import PrimeSieve

TWIN_CONSTANT = 0.6601618158


class TestGeneralProduct:
    """Test cases for bh_constant."""

    def setup_method(self):
        self.config = EngineConfig(segment_bytes=1 << 14)
        self.sieve = PrimeSieve(self.config)

    def teardown_method(self):
        self.sieve.shutdown()

    def test_twin_prime_family(self):
        estimate = bh_constant(load_family("t, t+2"), 10**6, sieve=self.sieve, config=self.config)
        assert estimate.value == pytest.approx(2 * TWIN_CONSTANT, rel=1e-5)
        assert estimate.k == 2
        assert estimate.divergence_verdict is Verdict.CONVERGING

    def test_landau_family(self):
        estimate = bh_constant(load_family("t^2+1"), 10**6, sieve=self.sieve, config=self.config)
        assert estimate.value == pytest.approx(1.3728134628, rel=5e-3)
        assert estimate.degrees == (2,)

    def test_checkpoints_are_ascending_partial_products(self):
        family = load_family("t, t+2, t+6")
        estimate = bh_constant(family, 10**5, [10**3, 10**4], sieve=self.sieve, config=self.config)
        bounds = [b for b, _ in estimate.checkpoints]
        assert bounds == [10**3, 10**4, 10**5]
        assert estimate.checkpoints[-1][1] == pytest.approx(estimate.value, rel=1e-12)
        assert len(estimate.series_checkpoints) == 3

    def test_result_independent_of_threads(self):
        family = load_family("t^2+1")
        serial = bh_constant(family, 2 * 10**5, [], sieve=self.sieve, config=self.config)
        config = EngineConfig(segment_bytes=1 << 14, threads=4)
        threaded_sieve = PrimeSieve(config)
        try:
            threaded = bh_constant(family, 2 * 10**5, [], sieve=threaded_sieve, config=config)
        finally:
            threaded_sieve.shutdown()
        assert threaded.value == serial.value

    def test_inadmissible_family_refused(self):
        with pytest.raises(ReducibleError):
            bh_constant(check_family(parse_family("t^2-1")), 1000, sieve=self.sieve)

    def test_vanishing_factor_with_override(self):
        family = check_family(parse_family("t, t+1"), override=True)
        with pytest.raises(VanishingPrimeError):
            bh_constant(family, 1000, sieve=self.sieve)

    def test_diverging_family_with_override(self):
        family = check_family(parse_family("t^2-1"), override=True)
        estimate = bh_constant(family, 10**6, sieve=self.sieve, config=self.config)
        assert estimate.divergence_verdict is Verdict.DIVERGING_TO_ZERO
        assert estimate.value < 0.06

    def test_bound_validation(self):
        with pytest.raises(ValidationError):
            bh_constant(load_family("t"), 1, sieve=self.sieve)
        capped = PrimeSieve(EngineConfig(max_prime_bound=1000))
        with pytest.raises(CapacityError):
            bh_constant(load_family("t"), 10**4, sieve=capped)

    def test_index_checkpoints(self):
        family = check_family(parse_family("t^2-1"), override=True)
        values = index_checkpoints(family, [10, 100], self.sieve, self.config)
        assert values[0] == (10, pytest.approx(0.210114, rel=5e-5))
        assert values[1] == (100, pytest.approx(0.117208, rel=5e-5))


class TestDivergenceDiagnostic:
    """Test cases for the heuristic verdict."""

    def test_needs_four_points(self):
        with pytest.raises(ValidationError):
            divergence_diagnostic([(10**3, 1.0), (10**4, 1.0), (10**6, 1.0)])

    def test_needs_three_decades(self):
        with pytest.raises(ValidationError):
            divergence_diagnostic([(100, 1.0), (1000, 1.0), (5000, 1.0), (9000, 1.0)])

    def test_verdicts(self):
        bounds = [10**3, 10**4, 10**5, 10**6]
        assert divergence_diagnostic(list(zip(bounds, [1.30, 1.305, 1.3051, 1.30511]))) is Verdict.CONVERGING
        assert divergence_diagnostic(list(zip(bounds, [1.0, 0.8, 0.6, 0.45]))) is Verdict.DIVERGING_TO_ZERO
        assert divergence_diagnostic(list(zip(bounds, [1.0, 1.3, 1.7, 2.2]))) is Verdict.DIVERGING
        assert divergence_diagnostic(list(zip(bounds, [1.0, 0.5, 0.0, 0.0]))) is Verdict.DIVERGING_TO_ZERO


class TestClosedForms:
    """Test cases for the closed-form constants."""

    def setup_method(self):
        self.sieve = PrimeSieve(EngineConfig(segment_bytes=1 << 14))

    def teardown_method(self):
        self.sieve.shutdown()

    def test_ap_constant(self):
        assert ap_constant(4, 1) == 2
        assert ap_constant(10**8, 1) == Fraction(5, 2)
        with pytest.raises(GcdError):
            ap_constant(4, 2)

    def test_ck_constant(self):
        c2 = ck_constant(2, 10**6, self.sieve)
        assert c2.value == pytest.approx(TWIN_CONSTANT, rel=1e-6)
        assert c2.tail_bound == pytest.approx(c2.value / (2 * (10**6 - 2)))
        c30 = ck_constant(30, 10**6, self.sieve)
        assert c30.value == pytest.approx(TWIN_CONSTANT * 2 * (4 / 3), rel=1e-6)

    def test_ck_rejects_odd_shift(self):
        with pytest.raises(OddShiftError) as exc_info:
            ck_constant(3, 1000, self.sieve)
        assert exc_info.value.exit_code == 2

    def test_hlf_matches_general_product(self):
        closed = hlf_constant(1, 0, 1, 10**5, self.sieve)
        general = bh_constant(load_family("t^2+1"), 10**5, [], sieve=self.sieve)
        assert closed.value == pytest.approx(general.value, rel=1e-9)
        assert closed.epsilon == Fraction(1, 2)

    def test_hlf_euler_polynomial(self):
        estimate = hlf_constant(1, 1, 41, 10**6, self.sieve)
        assert estimate.value == pytest.approx(6.63985, rel=5e-3)
        assert estimate.discriminant == -163

    def test_hlf_hypotheses(self):
        with pytest.raises(GcdError):
            hlf_constant(2, 4, 6, 100, self.sieve)
        with pytest.raises(ParityError):
            hlf_constant(1, 1, 2, 100, self.sieve)
        with pytest.raises(PerfectSquareDiscriminantError):
            hlf_constant(4, 12, 5, 100, self.sieve)

    def test_greentao_pair_is_twin_constant(self):
        estimate = greentao_constant(2, 10**5, difference=2, sieve=self.sieve)
        twin = bh_constant(load_family("t, t+2"), 10**5, [], sieve=self.sieve)
        assert estimate.value == pytest.approx(twin.value, rel=1e-9)
        assert estimate.family == "{t, t+2}"

    def test_greentao_triple(self):
        estimate = greentao_constant(3, 10**5, difference=6, sieve=self.sieve)
        general = bh_constant(progression_family(3, 6), 10**5, [], sieve=self.sieve)
        assert estimate.value == pytest.approx(general.value, rel=1e-9)
        with pytest.raises(VanishingPrimeError):
            greentao_constant(3, 1000, difference=2, sieve=self.sieve)

    def test_greentao_default_primorial(self):
        estimate = greentao_constant(3, 1000, sieve=self.sieve)
        assert estimate.family == "{t, t+30, t+60}"


class TestRandomizedProperties:
    """Seeded cross-checks between the general product and the closed forms."""

    def setup_method(self):
        self.rng = random.Random(20240101)
        self.sieve = PrimeSieve(EngineConfig(segment_bytes=1 << 14))

    def teardown_method(self):
        self.sieve.shutdown()

    def _random_admissible_quadratic(self):
        while True:
            a = self.rng.randint(1, 50)
            b = self.rng.randint(-50, 50)
            c = self.rng.randint(-50, 50)
            disc = b * b - 4 * a * c
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            if (a + b) % 2 == 0 and c % 2 == 0:
                continue
            if disc >= 0 and math.isqrt(disc) ** 2 == disc:
                continue
            return a, b, c

    def test_quadratic_closed_form_matches_product(self):
        for _ in range(20):
            a, b, c = self._random_admissible_quadratic()
            family = check_family([IntPoly((c, b, a))])
            general = bh_constant(family, 10**4, [], sieve=self.sieve)
            closed = hlf_constant(a, b, c, 10**4, self.sieve)
            assert abs(closed.value - general.value) < 1e-6, (a, b, c)

    def test_ap_constant_ignores_residue(self):
        for _ in range(50):
            a = self.rng.randint(1, 10**6)
            draws = (self.rng.randint(-10**6, 10**6) for _ in range(20))
            residues = [1] + [b for b in draws if math.gcd(a, b) == 1]
            assert {ap_constant(a, b) for b in residues} == {Fraction(a, int(sympy_totient(a)))}

    @pytest.mark.parametrize("k, equivalent", [(2, 4), (2, 8), (6, 12), (10, 50)])
    def test_ck_depends_on_prime_divisors_only(self, k, equivalent):
        assert ck_constant(k, 10**5, self.sieve).value == ck_constant(equivalent, 10**5, self.sieve).value

    @pytest.mark.parametrize("k", [2, 6, 30])
    def test_ck_tail_bound_covers_later_bounds(self, k):
        bounds = [10**4, 10**5, 10**6]
        estimates = [ck_constant(k, bound, self.sieve) for bound in bounds]
        for i, early in enumerate(estimates):
            for late in estimates[i + 1:]:
                assert abs(early.value - late.value) <= early.tail_bound


class TestPublishedScale:
    """Constants at the prime bounds used for the reference values."""

    def setup_method(self):
        self.sieve = PrimeSieve(EngineConfig())

    def teardown_method(self):
        self.sieve.shutdown()

    @pytest.mark.slow
    def test_landau_constant_at_hundred_million(self):
        estimate = bh_constant(load_family("t^2+1"), 10**8, sieve=self.sieve)
        assert estimate.value == pytest.approx(1.37281, abs=2e-3)
        assert [b for b, _ in estimate.checkpoints][-1] == 10**8

    @pytest.mark.slow
    def test_euler_quadratic_closed_form_at_ten_million(self):
        closed = hlf_constant(1, 1, 41, 10**7, self.sieve)
        general = bh_constant(load_family("t^2+t+41"), 10**7, [], sieve=self.sieve)
        assert abs(closed.value - general.value) < 1e-6
        assert closed.value == pytest.approx(6.6395, abs=5e-3)
