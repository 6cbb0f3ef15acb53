"""
Root counts omega_f(p): the number of residues x mod p with f(x) = 0 mod p.

Counts are of distinct residues, never multiplicities.
"""

import logging
from typing import Dict, List, Tuple, Union

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_degree, gf_from_int_poly, gf_gcd, gf_pow_mod, gf_sub

from config.error_handling import CapacityError, DomainError, VanishingPrimeError
from models.core import OmegaMethod, OmegaProfile
from models.polynomial import IntPoly, PolyFamily
from services.polynomial import resultant
from services.primes import jacobi, jacobi_array, simple_sieve

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 10_000
_X = [1, 0]


def omega_bruteforce(f: IntPoly, p: int, cutoff: int = DEFAULT_CUTOFF) -> int:
    """Exact count by evaluating f at every residue."""
    if p > cutoff:
        raise CapacityError(
            f"brute-force root count at p = {p} exceeds the cutoff {cutoff}",
            details={'prime': p, 'cutoff': cutoff}
        )
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in f.descending():
        acc = (acc * x + (c % p)) % p
    return int(np.count_nonzero(acc == 0))


def omega_linear(f: IntPoly, p: int) -> int:
    if f.degree != 1:
        raise DomainError(f"linear root count needs degree 1, got {f}")
    b, a = f.coeffs
    if a % p:
        return 1
    return p if b % p == 0 else 0


def omega_quadratic(f: IntPoly, p: int, cutoff: int = DEFAULT_CUTOFF) -> int:
    """1 + (disc/p) for odd p not dividing the leading coefficient."""
    if f.degree != 2:
        raise DomainError(f"quadratic root count needs degree 2, got {f}")
    c, b, a = f.coeffs
    if a % p == 0:
        # degree drops mod p
        reduced = IntPoly((c % p, b % p))
        if reduced.is_zero:
            return p
        if reduced.degree == 0:
            return 0
        return 1
    if p == 2:
        return omega_bruteforce(f, 2, cutoff)
    return 1 + jacobi((b * b - 4 * a * c) % p, p)


def vanishes_mod(f: IntPoly, p: int) -> bool:
    """True iff p divides f(x) for every integer x."""
    # deg f + 1 roots below p force f to be zero mod p
    return all(f(x) % p == 0 for x in range(min(p, f.degree + 1)))


def omega_generic(f: IntPoly, p: int) -> int:
    """
    Distinct roots mod p as deg gcd(x^p - x, f mod p).

    Raises:
        VanishingPrimeError: If f vanishes at every residue mod p
    """
    if vanishes_mod(f, p):
        raise VanishingPrimeError(f"{f} vanishes identically modulo {p}", prime=p)
    reduced = gf_from_int_poly(f.descending(), p)
    degree = gf_degree(reduced)
    if degree == 0:
        return 0
    if degree == 1:
        return 1
    frobenius = gf_pow_mod(_X, p, reduced, p, ZZ)
    common = gf_gcd(reduced, gf_sub(frobenius, _X, p, ZZ), p, ZZ)
    return int(gf_degree(common))


def _omega_with_method(f: IntPoly, p: int, cutoff: int) -> Tuple[int, OmegaMethod]:
    if vanishes_mod(f, p):
        return p, OmegaMethod.BRUTE_FORCE
    if f.degree == 1:
        return omega_linear(f, p), OmegaMethod.LINEAR
    if f.degree == 2:
        if p == 2:
            return omega_bruteforce(f, 2, cutoff), OmegaMethod.BRUTE_FORCE
        return omega_quadratic(f, p, cutoff), OmegaMethod.QUADRATIC
    return omega_generic(f, p), OmegaMethod.GENERIC


def omega(f: IntPoly, p: int, cutoff: int = DEFAULT_CUTOFF) -> int:
    """Root count by the cheapest exact method for the degree."""
    if f.degree < 1:
        raise DomainError(f"root count needs a nonconstant polynomial, got {f}")
    return _omega_with_method(f, p, cutoff)[0]


def omega_family(family: PolyFamily, p: int, cutoff: int = DEFAULT_CUTOFF) -> int:
    """
    Root count of the family product.

    Off the exceptional primes (those dividing a leading coefficient or a
    pairwise resultant) the member counts add; on them the product is
    counted directly.

    Raises:
        VanishingPrimeError: If the product vanishes identically mod p
    """
    if p in family.vanishing_primes:
        raise VanishingPrimeError(
            f"product of {family.label} vanishes identically modulo {p}", prime=p
        )
    if not family.is_exceptional(p):
        return sum(omega(m, p, cutoff) for m in family.members)
    if p <= cutoff:
        return omega_bruteforce(family.product, p, cutoff)
    return omega_generic(family.product, p)


def bigint_mod_array(value: int, moduli: np.ndarray) -> np.ndarray:
    """value mod m for each m in an int64 array; value may be arbitrarily large."""
    moduli = np.asarray(moduli, dtype=np.int64)
    if -(1 << 62) < value < (1 << 62):
        return np.mod(np.int64(value), moduli)
    magnitude = abs(value)
    digits: List[int] = []
    while magnitude:
        digits.append(magnitude & ((1 << 30) - 1))
        magnitude >>= 30
    acc = np.zeros(moduli.shape, dtype=np.int64)
    for digit in reversed(digits):
        acc = (acc * (1 << 30) + digit) % moduli
    if value < 0:
        acc = (moduli - acc) % moduli
    return acc


class OmegaCounter:
    """
    Vectorised omega_F(p) over arrays of primes.

    Linear members contribute 1 and quadratic members 1 + (disc/p) at every
    unexceptional odd prime; higher degrees and exceptional primes go
    through the scalar path.
    """

    def __init__(self, family: PolyFamily, cutoff: int = DEFAULT_CUTOFF):
        self.family = family
        self.cutoff = cutoff
        self._linear = sum(1 for m in family.members if m.degree == 1)
        self._discriminants = [
            m.coeffs[1] ** 2 - 4 * m.coeffs[2] * m.coeffs[0]
            for m in family.members if m.degree == 2
        ]
        self._higher = [m for m in family.members if m.degree >= 3]
        self._special = [m.leading for m in family.members]
        self._special.extend(family.pair_resultants.values())

    def exceptional_mask(self, primes: np.ndarray) -> np.ndarray:
        mask = primes == 2
        for value in self._special:
            if value == 0:
                mask |= True
            else:
                mask |= bigint_mod_array(value, primes) == 0
        return mask

    def counts(self, primes: np.ndarray) -> np.ndarray:
        """omega_F(p) for each prime; raises VanishingPrimeError like omega_family."""
        primes = np.asarray(primes, dtype=np.int64)
        result = np.full(primes.shape, self._linear, dtype=np.int64)
        if not len(primes):
            return result
        exceptional = self.exceptional_mask(primes)
        regular = ~exceptional
        regular_primes = primes[regular]
        for disc in self._discriminants:
            residues = bigint_mod_array(disc, regular_primes)
            result[regular] += 1 + jacobi_array(residues, regular_primes)
        if self._higher:
            for index in np.flatnonzero(regular):
                p = int(primes[index])
                result[index] += sum(omega_generic(m, p) for m in self._higher)
        for index in np.flatnonzero(exceptional):
            result[index] = omega_family(self.family, int(primes[index]), self.cutoff)
        return result


def _derivative(f: IntPoly) -> IntPoly:
    return IntPoly(i * c for i, c in enumerate(f.coeffs) if i > 0)


def build_profile(f: Union[IntPoly, PolyFamily], cutoff: int = DEFAULT_CUTOFF) -> OmegaProfile:
    """Root-count table for every prime up to cutoff, with method tags."""
    if isinstance(f, PolyFamily):
        family = f
        table: Dict[int, int] = {}
        methods: Dict[int, OmegaMethod] = {}
        exceptional = []
        for p in simple_sieve(cutoff).tolist():
            if family.is_exceptional(p):
                exceptional.append(p)
            if p in family.vanishing_primes:
                table[p], methods[p] = p, OmegaMethod.BRUTE_FORCE
                continue
            table[p] = omega_family(family, p, cutoff)
            methods[p] = OmegaMethod.BRUTE_FORCE if family.is_exceptional(p) else OmegaMethod.FAMILY_SUM
        return OmegaProfile(family.label, table, methods, exceptional, cutoff)

    disc = resultant(f, _derivative(f)) if f.degree > 1 else 0
    table, methods, exceptional = {}, {}, []
    for p in simple_sieve(cutoff).tolist():
        if f.leading % p == 0 or (f.degree > 1 and disc % p == 0):
            exceptional.append(p)
        table[p], methods[p] = _omega_with_method(f, p, cutoff)
    logger.debug(f"Built root-count profile of {f} up to {cutoff}")
    return OmegaProfile(str(f), table, methods, exceptional, cutoff)
