"""
Unit tests for the CRT construction of prime-rich Euler-type quadratics.
"""

import pytest

from config.error_handling import NonResidueError, ValidationError
from models.core import CrtPlan, EngineConfig
from services.bhconstant import hlf_constant
from services.eulersearch import (
    build_plan, euler_polynomial, euler_streak, least_nonresidue, least_primitive_root,
    plan_constant, plan_primes, verify_plan
)
from services.primes import PrimeSieve

K_37 = 1448243016041
K_100 = (
    "3682528442873462645493394982418837604455310384084190749577"
    "5453041420103519734083583186615204669729662489042369819157"
    "7358565650719425670030967384568941667322171286195075149379"
    "680113340447535104953498545635385597443028681"
)


class TestResidues:
    """Test cases for primitive roots and nonresidues."""

    def test_least_primitive_roots(self):
        primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
        assert [least_primitive_root(p) for p in primes] == [2, 2, 3, 2, 2, 3, 2, 5, 2, 3, 2]

    def test_least_nonresidue(self):
        assert least_nonresidue(3) == 2
        assert least_nonresidue(7) == 3
        assert least_nonresidue(23) == 5

    def test_rejects_non_odd_primes(self):
        with pytest.raises(ValidationError):
            least_primitive_root(2)
        with pytest.raises(ValidationError):
            least_primitive_root(15)
        with pytest.raises(ValidationError):
            least_nonresidue(4)


class TestPlans:
    """Test cases for build_plan and verify_plan."""

    def setup_method(self):
        self.sieve = PrimeSieve(EngineConfig())

    def teardown_method(self):
        self.sieve.shutdown()

    def test_plan_primes(self):
        assert plan_primes(primes_through=13) == [3, 5, 7, 11, 13]
        assert plan_primes(first_odd_primes=4, sieve=self.sieve) == [3, 5, 7]
        assert plan_primes(first_odd_primes=2, sieve=self.sieve) == [3]
        with pytest.raises(ValidationError):
            plan_primes()
        with pytest.raises(ValidationError):
            plan_primes(primes_through=2)
        with pytest.raises(ValidationError):
            plan_primes(first_odd_primes=1, sieve=self.sieve)

    def test_single_prime_plan(self):
        plan = build_plan([3], rule="explicit", nonresidues={3: 2})
        assert plan.k == 5
        assert plan.modulus == 6
        assert verify_plan(plan)

    def test_least_absolute_representative(self):
        plan = build_plan([3], rule="explicit", nonresidues={3: 2}, representative="least-absolute")
        assert plan.k == -1
        assert verify_plan(plan)

    def test_explicit_residue_rejected(self):
        with pytest.raises(NonResidueError):
            build_plan([3], rule="explicit", nonresidues={3: 1})
        with pytest.raises(ValidationError):
            build_plan([3, 5], rule="explicit", nonresidues={3: 2})

    def test_unknown_rule(self):
        with pytest.raises(ValidationError):
            build_plan([3], rule="largest-root")

    def test_k37(self):
        plan = build_plan(plan_primes(primes_through=37))
        assert plan.k == K_37
        assert plan.nonresidues[23] == 5
        assert verify_plan(plan)
        assert plan.to_dict()['digits'] == 13

    def test_k100_digit_block(self):
        plan = build_plan(plan_primes(first_odd_primes=100, sieve=self.sieve))
        assert plan.primes[0] == 3
        assert plan.primes[-1] == 541
        assert len(plan.primes) == 99
        assert len(K_100) == 219
        assert str(plan.k) == K_100
        assert verify_plan(plan)

    def test_least_nonresidue_rule_also_verifies(self):
        plan = build_plan(plan_primes(primes_through=101), rule="least-nonresidue")
        assert plan.k % 2 == 1
        assert verify_plan(plan)

    def test_verify_detects_roots(self):
        assert not verify_plan(CrtPlan(primes=[3], nonresidues={3: 2}, modulus=6, k=7))
        assert not verify_plan(CrtPlan(primes=[3], nonresidues={3: 2}, modulus=6, k=4))

    @pytest.mark.slow
    def test_k100_constant_beats_euler(self):
        plan = build_plan(plan_primes(first_odd_primes=100, sieve=self.sieve))
        estimate = plan_constant(plan, 10**7, self.sieve)
        assert estimate.value == pytest.approx(10.9945, abs=2e-2)
        euler = hlf_constant(1, 1, 41, 10**7, self.sieve)
        assert estimate.value > euler.value


class TestStreaks:
    """Test cases for euler_streak."""

    @pytest.mark.parametrize("k, streak", [(41, 40), (17, 16), (11, 10), (5, 4), (3, 2), (2, 1)])
    def test_known_streaks(self, k, streak):
        assert euler_streak(k) == streak

    def test_streak_of_composite_start(self):
        assert euler_streak(9) == 0

    def test_euler_polynomial(self):
        assert str(euler_polynomial(41)) == "t^2+t+41"
        assert euler_polynomial(K_37)(0) == K_37

    def test_rejects_non_positive_k(self):
        with pytest.raises(ValidationError):
            euler_streak(0)
