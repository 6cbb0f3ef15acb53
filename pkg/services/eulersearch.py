"""
Prime-rich quadratics t^2+t+k built by the Chinese remainder theorem.

For each odd prime p in the plan, k is chosen with 1 - 4k congruent to a
quadratic nonresidue r_p, so the discriminant is a nonresidue and
t^2+t+k has no roots mod p. k odd removes the roots mod 2.
"""

import logging
from typing import Dict, List, Optional, Sequence

from sympy import factorint
from sympy.ntheory.modular import crt

from config.error_handling import NonResidueError, ValidationError
from models.core import CrtPlan, EngineConfig, HlfEstimate
from models.polynomial import IntPoly
from services.bhconstant import hlf_constant
from services.primes import PrimeSieve, is_prime, is_prime_u64, jacobi, simple_sieve
from services.rootcount import omega_quadratic

logger = logging.getLogger(__name__)

RULES = ("least-primitive-root", "least-nonresidue", "explicit")
REPRESENTATIVES = ("least-positive", "least-absolute")
PRIMITIVE_ROOT_LIMIT = 10**6


def least_primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod an odd prime p."""
    if p < 3 or p % 2 == 0 or not is_prime_u64(p):
        raise ValidationError(f"primitive roots are computed for odd primes, got {p}")
    if p > PRIMITIVE_ROOT_LIMIT:
        raise ValidationError(f"primitive root search is limited to p <= {PRIMITIVE_ROOT_LIMIT}")
    cofactors = [(p - 1) // q for q in factorint(p - 1)]
    g = 2
    while any(pow(g, e, p) == 1 for e in cofactors):
        g += 1
    return g


def least_nonresidue(p: int) -> int:
    """Smallest quadratic nonresidue mod an odd prime p."""
    if p < 3 or p % 2 == 0:
        raise ValidationError(f"nonresidues are computed for odd primes, got {p}")
    r = 2
    while jacobi(r, p) != -1:
        r += 1
    return r


def _inverse_of_four(p: int) -> int:
    return (p + 1) // 4 if p % 4 == 3 else (3 * p + 1) // 4


def plan_primes(primes_through: Optional[int] = None, first_odd_primes: Optional[int] = None,
                sieve: Optional[PrimeSieve] = None) -> List[int]:
    """The odd primes of a plan: those up to a bound, or those among the first N primes."""
    if (primes_through is None) == (first_odd_primes is None):
        raise ValidationError("give exactly one of primes_through or first_odd_primes")
    if primes_through is not None:
        if primes_through < 3:
            raise ValidationError("a plan needs at least the prime 3")
        return [p for p in simple_sieve(primes_through).tolist() if p > 2]
    if first_odd_primes < 2:
        raise ValidationError("the first N primes must include an odd prime, so N >= 2")
    sieve = sieve or PrimeSieve()
    last = sieve.nth_prime(first_odd_primes)
    return [p for p in simple_sieve(last).tolist() if p > 2]


def build_plan(primes: Sequence[int], rule: str = "least-primitive-root",
               nonresidues: Optional[Dict[int, int]] = None,
               representative: str = "least-positive") -> CrtPlan:
    """
    Solve k = 4^-1 (1 - r_p) mod p for every plan prime together with k odd.

    Raises:
        NonResidueError: If a chosen r_p is a quadratic residue mod p
    """
    if rule not in RULES:
        raise ValidationError(f"unknown nonresidue rule '{rule}'; choose from {', '.join(RULES)}")
    if representative not in REPRESENTATIVES:
        raise ValidationError(f"unknown representative '{representative}'")
    if not primes:
        raise ValidationError("a plan needs at least one prime")

    chosen: Dict[int, int] = {}
    for p in primes:
        if p < 3 or p % 2 == 0 or not is_prime_u64(p):
            raise ValidationError(f"plan primes must be odd primes, got {p}")
        if rule == "explicit":
            if not nonresidues or p not in nonresidues:
                raise ValidationError(f"no nonresidue given for p = {p}")
            r = nonresidues[p]
        elif rule == "least-nonresidue":
            r = least_nonresidue(p)
        else:
            r = least_primitive_root(p)
        if jacobi(r, p) != -1:
            raise NonResidueError(
                f"r = {r} is not a quadratic nonresidue modulo {p}", prime=p,
                details={'nonresidue': r}
            )
        chosen[p] = r

    moduli = [2] + list(primes)
    residues = [1] + [(_inverse_of_four(p) * (1 - chosen[p])) % p for p in primes]
    k, modulus = crt(moduli, residues)
    k, modulus = int(k), int(modulus)
    if representative == "least-absolute" and k > modulus // 2:
        k -= modulus

    logger.info(f"CRT plan over {len(primes)} primes: k has {len(str(abs(k)))} digits")
    return CrtPlan(primes=list(primes), nonresidues=chosen, modulus=modulus, k=k, rule=rule)


def euler_polynomial(k: int) -> IntPoly:
    return IntPoly((k, 1, 1))


def verify_plan(plan: CrtPlan) -> bool:
    """True iff t^2+t+k has no roots modulo 2 or any plan prime."""
    f = euler_polynomial(plan.k)
    if plan.k % 2 == 0:
        return False
    return all(omega_quadratic(f, p) == 0 for p in plan.primes)


def euler_streak(k: int, config: Optional[EngineConfig] = None) -> int:
    """Largest m with t^2+t+k prime for every t in 0..m-1."""
    if k < 1:
        raise ValidationError(f"k must be positive, got {k}")
    config = config or EngineConfig()
    t = 0
    while is_prime(t * t + t + k, config.miller_rabin_rounds, config.seed):
        t += 1
    return t


def plan_constant(plan: CrtPlan, prime_bound: int, sieve: Optional[PrimeSieve] = None,
                  config: Optional[EngineConfig] = None) -> HlfEstimate:
    """Constant of t^2+t+k for the plan's k."""
    return hlf_constant(1, 1, plan.k, prime_bound, sieve, config)
