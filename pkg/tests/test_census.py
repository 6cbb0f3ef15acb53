"""
Unit tests for the empirical prime counts.
"""

import pytest
import sympy

from config.error_handling import CapacityError, GcdError, OddShiftError, ReducibleError, ValidationError
from models.core import ChainKind, EngineConfig
from services.census import Census, PrimeValueSieve
from services.polynomial import check_family, load_family, parse_family


class TestPrimeValueSieve:
    """Test cases for PrimeValueSieve."""

    def test_twin_hits(self):
        value_sieve = PrimeValueSieve(load_family("t, t+2"), small_limit=50)
        flags = value_sieve.hits((0, 32))
        assert [n for n in range(32) if flags[n]] == [3, 5, 11, 17, 29]

    def test_small_values_use_table(self):
        flags = PrimeValueSieve(load_family("t^2+1")).hits((1, 11))
        # 2, 5, 17, 37, 101 are prime; 10, 26, 50, 65, 82 are not
        assert flags.tolist() == [True, True, False, True, False, True, False, False, False, True]


class TestFamilyCounts:
    """Test cases for Q(F; x) and its variants."""

    def setup_method(self):
        self.census = Census(config=EngineConfig(segment_bytes=4096))

    def teardown_method(self):
        self.census.sieve.shutdown()

    def test_landau(self):
        assert self.census.count_landau(10**4).empirical == 19
        family = load_family("t^2+1")
        assert self.census.count_q(family, 1000).empirical == 112

    def test_cumulative_counts(self):
        family = load_family("t, t+2")
        assert self.census.cumulative_q(family, [1000, 10, 100]) == [(10, 2), (100, 8), (1000, 35)]

    def test_arguments(self):
        family = load_family("t, t+2")
        assert self.census.arguments(family, 1, 30) == [3, 5, 11, 17, 29]

    def test_count_without_estimate(self):
        family = load_family("t, t+2")
        report = self.census.count_q(family, 10**4, estimate=None)
        assert report.prediction is None
        assert report.to_dict()['count'] == 205

    def test_inadmissible_family_refused(self):
        with pytest.raises(ReducibleError):
            self.census.count_q(check_family(parse_family("t^2-1")), 100)

    def test_scale_cap(self):
        capped = Census(config=EngineConfig(max_x=1000))
        try:
            with pytest.raises(CapacityError):
                capped.count_q(load_family("t"), 10**4)
        finally:
            capped.sieve.shutdown()


class TestProgressions:
    """Test cases for primes in arithmetic progressions."""

    def setup_method(self):
        self.census = Census(config=EngineConfig(segment_bytes=1 << 15))

    def teardown_method(self):
        self.census.sieve.shutdown()

    def test_chebyshev_bias(self):
        assert self.census.count_ap(4, 1, 10**6).empirical == 39175
        assert self.census.count_ap(4, 3, 10**6).empirical == 39322

    def test_series_covers_coprime_residues(self):
        reports = self.census.count_ap_series(4, 10**6)
        assert [(r.family, r.empirical) for r in reports] == [("4t+1", 39175), ("4t+3", 39322)]
        assert reports[0].prediction.constant == pytest.approx(0.5)

    def test_gcd_rejected(self):
        with pytest.raises(GcdError) as exc_info:
            self.census.count_ap(4, 2, 100)
        assert exc_info.value.exit_code == 2

    def test_large_progression_values(self):
        values = self.census.ap_values(10**7, 123456789, 100)
        assert values == [11, 29, 43, 50, 59, 64, 68, 73, 97, 98]


class TestPairsAndChains:
    """Test cases for prime pairs, Sophie Germain primes and chains."""

    def setup_method(self):
        self.census = Census(config=EngineConfig(segment_bytes=1024))

    def teardown_method(self):
        self.census.sieve.shutdown()

    def test_twin_pairs(self):
        assert self.census.count_pairs(2, x=1000).empirical == 35
        report = self.census.count_pairs(2, first_primes=100)
        assert report.empirical == 25
        assert report.to_dict()['first_primes'] == 100

    def test_pair_arguments(self):
        with pytest.raises(OddShiftError):
            self.census.count_pairs(3, x=100)
        with pytest.raises(ValidationError):
            self.census.count_pairs(2, x=100, first_primes=10)
        with pytest.raises(ValidationError):
            self.census.count_pairs(2)

    def test_sophie_germain(self):
        assert self.census.count_sophie(100).empirical == 10
        assert self.census.count_sophie(1000).empirical == 37

    def test_first_kind_chains(self):
        chains = self.census.cunningham_chains(ChainKind.FIRST, 100, min_length=5)
        assert [c.elements for c in chains] == [[2, 5, 11, 23, 47], [89, 179, 359, 719, 1439, 2879]]
        assert all(c.complete for c in chains)

    def test_second_kind_chains(self):
        chains = self.census.cunningham_chains(ChainKind.SECOND, 20, min_length=3)
        assert [c.elements for c in chains] == [[2, 3, 5], [19, 37, 73]]
        assert chains[1].to_dict()['elements'] == "19 37 73"

    def test_brun_partial_sums(self):
        assert self.census.brun_partial(5) == pytest.approx(1 / 3 + 2 / 5 + 1 / 7)
        series = self.census.brun_series([10**4, 100])
        assert [b for b, _ in series] == [100, 10**4]
        assert series[0][1] < series[1][1] < 1.902
        with pytest.raises(ValidationError):
            self.census.brun_partial(4)

    @pytest.mark.slow
    def test_illiac_count(self):
        reports = self.census.illiac_series([112999])
        assert reports[0].empirical == 776
        assert reports[0].prediction is not None

    def test_chain_step_maps(self):
        assert ChainKind.FIRST.step(89) == 179
        assert ChainKind.SECOND.predecessor(37) == 19
        assert ChainKind.FIRST.predecessor(4) is None


class TestCensusProperties:
    """Structural checks on counts and chains."""

    def setup_method(self):
        self.census = Census(config=EngineConfig(segment_bytes=1 << 14))

    def teardown_method(self):
        self.census.sieve.shutdown()

    def test_count_q_monotone_from_zero(self):
        family = load_family("t^2+t+41")
        assert self.census.count_q(family, 0).empirical == 0
        bounds = [0, 1, 10, 39, 40, 41, 100, 1000, 5000]
        counts = [count for _, count in self.census.cumulative_q(family, bounds)]
        assert counts == sorted(counts)
        assert counts[bounds.index(39)] == 39

    def test_first_kind_chains_obey_fermat_bound(self):
        for chain in self.census.cunningham_chains(ChainKind.FIRST, 10**5, min_length=2):
            first = chain.elements[0]
            if first % 2:
                assert len(chain) <= first - 1

    @pytest.mark.parametrize("kind", [ChainKind.FIRST, ChainKind.SECOND])
    def test_chains_are_maximal(self, kind):
        for chain in self.census.cunningham_chains(kind, 10**4, min_length=1):
            assert all(sympy.isprime(p) for p in chain.elements)
            assert all(kind.step(p) == q for p, q in zip(chain.elements, chain.elements[1:]))
            if chain.complete:
                assert not sympy.isprime(kind.step(chain.elements[-1]))
            before = kind.predecessor(chain.elements[0])
            assert before is None or not sympy.isprime(before)

    @pytest.mark.parametrize("x", [10**3, 10**4, 10**5])
    def test_sophie_matches_family_count(self, x):
        family = load_family("t, 2*t+1")
        assert self.census.count_sophie(x).empirical == self.census.count_q(family, x).empirical

    def test_pair_counts_among_first_primes(self):
        assert self.census.count_pairs(2, first_primes=10**3).empirical == 174
        counts = [self.census.count_pairs(k, first_primes=10**4).empirical for k in (2, 4, 8)]
        assert counts == [1270, 1264, 1303]
        assert (max(counts) - min(counts)) / max(counts) < 0.03
