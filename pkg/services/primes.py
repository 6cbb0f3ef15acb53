"""
Prime generation, primality testing and scalar number-theoretic kernels.

The sieve is an odd-only segmented sieve of Eratosthenes on numpy boolean
segments; flags handed out in PrimeRange records are bit-packed.
"""

import logging
import math
import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint
from sympy.ntheory.generate import primorial as _sympy_primorial

from config.error_handling import CapacityError, DomainError, ValidationError
from config.resource_guard import ResourceGuard
from models.core import EngineConfig, Primality, PrimeRange
from services.interfaces import PrimeSourceInterface
from services.worker_pool import WorkerPool

logger = logging.getLogger(__name__)

U64_LIMIT = 1 << 64
SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# Deterministic for every n < 3.3e24, which covers all 64-bit inputs
MR_BASES_64 = SMALL_PRIMES
MEISSEL_MERTENS = 0.2614972128476


class CompensatedSum:
    """Neumaier running sum; array chunks are added via math.fsum."""

    def __init__(self, start: float = 0.0):
        self._sum = float(start)
        self._compensation = 0.0

    def add(self, value: float) -> None:
        value = float(value)
        total = self._sum + value
        if abs(self._sum) >= abs(value):
            self._compensation += (self._sum - total) + value
        else:
            self._compensation += (value - total) + self._sum
        self._sum = total

    def add_array(self, values: np.ndarray) -> None:
        if len(values):
            self.add(math.fsum(values.tolist()))

    @property
    def value(self) -> float:
        return self._sum + self._compensation


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_prime[p]:
            is_prime[p * p::2 * p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _sieve_odd_segment(first: int, hi: int, base: np.ndarray) -> np.ndarray:
    """
    Primality flags for the odd integers first, first+2, ... below hi.

    base holds the odd primes up to isqrt(hi - 1).
    """
    size = (hi - 1 - first) // 2 + 1 if first < hi else 0
    flags = np.ones(max(size, 0), dtype=bool)
    if size <= 0:
        return flags

    if hi < (1 << 62):
        p = base[base * base < hi]
        if len(p):
            start = np.maximum(p * p, ((first + p - 1) // p) * p)
            start = start + np.where(start % 2 == 0, p, 0)
            offsets = (start - first) // 2
            for prime, offset in zip(p.tolist(), offsets.tolist()):
                if offset < size:
                    flags[offset::prime] = False
    else:
        for prime in base.tolist():
            if prime * prime >= hi:
                break
            start = max(prime * prime, ((first + prime - 1) // prime) * prime)
            if start % 2 == 0:
                start += prime
            offset = (start - first) // 2
            if offset < size:
                flags[offset::prime] = False

    if first == 1:
        flags[0] = False
    return flags


class PrimeSieve(PrimeSourceInterface):
    """
    Segmented sieve engine.

    Segments are fixed by segment_bytes (one byte per odd integer while
    sieving), never by the worker count, so every aggregate built from
    iter_prime_segments is reproducible across thread settings.
    """

    def __init__(self, config: Optional[EngineConfig] = None,
                 guard: Optional[ResourceGuard] = None,
                 pool: Optional[WorkerPool] = None):
        self.config = config or EngineConfig()
        self.guard = guard or ResourceGuard(self.config)
        self.pool = pool or WorkerPool(self.config.threads)
        self._base = np.array([], dtype=np.int64)
        self._base_limit = 1

    @property
    def segment_odds(self) -> int:
        # Multiple of 8 so packed segments concatenate without re-packing
        return max(8, (self.config.segment_bytes // 8) * 8)

    def base_primes(self, limit: int) -> np.ndarray:
        """Odd primes up to limit, cached and grown on demand."""
        if limit > self._base_limit:
            target = max(limit, 2 * self._base_limit)
            self.guard.check_memory(target + 1, "base prime table")
            primes = simple_sieve(target)
            self._base = primes[primes > 2]
            self._base_limit = target
        return self._base[self._base <= limit]

    def segment_bounds(self, lo: int, hi: int) -> List[Tuple[int, int]]:
        span = 2 * self.segment_odds
        bounds = []
        start = lo
        while start < hi:
            end = min(start + span, hi)
            bounds.append((start, end))
            start = end
        return bounds

    def _segment_flags(self, bounds: Tuple[int, int]) -> np.ndarray:
        start, end = bounds
        base = self.base_primes(math.isqrt(max(end - 1, 0)))
        return _sieve_odd_segment(start | 1, end, base)

    def _segment_primes(self, bounds: Tuple[int, int]) -> np.ndarray:
        start, end = bounds
        flags = self._segment_flags(bounds)
        odd = np.flatnonzero(flags).astype(np.int64) * 2 + (start | 1)
        if start <= 2 < end:
            return np.concatenate([np.array([2], dtype=np.int64), odd])
        return odd

    def _validate_bounds(self, lo: int, hi: int) -> None:
        if lo < 0 or hi <= lo:
            raise ValidationError(f"sieve range requires 0 <= lo < hi, got [{lo}, {hi})")
        if hi > U64_LIMIT:
            raise DomainError(f"sieve bound {hi} exceeds 2^64")

    def sieve_range(self, lo: int, hi: int) -> PrimeRange:
        """
        Exact primality flags for [lo, hi).

        Raises:
            CapacityError: If the flags would not fit the memory budget
        """
        self._validate_bounds(lo, hi)
        self.guard.check_memory((hi - lo) // 16 + self.segment_odds, f"sieve of [{lo}, {hi})")
        segments = self.segment_bounds(lo, hi)
        # Warm the base table once before handing segments to workers
        self.base_primes(math.isqrt(hi - 1))
        packed = [
            np.packbits(flags, bitorder='little')
            for flags in self.pool.map_ordered(self._segment_flags, segments)
        ]
        size = (hi - 1 - (lo | 1)) // 2 + 1 if (lo | 1) < hi else 0
        bits = np.concatenate(packed) if packed else np.array([], dtype=np.uint8)
        return PrimeRange(lo=lo, hi=hi, bits=bits, size=max(size, 0))

    def iter_prime_segments(self, lo: int, hi: int) -> Iterator[np.ndarray]:
        """Yield primes in [lo, hi) as int64 arrays in ascending order."""
        self._validate_bounds(lo, hi)
        if hi > (1 << 63):
            raise CapacityError("prime arrays are limited to values below 2^63")
        self.base_primes(math.isqrt(hi - 1))
        return self.pool.map_ordered(self._segment_primes, self.segment_bounds(lo, hi))

    def segment_count(self, lo: int, hi: int) -> int:
        return len(self.segment_bounds(lo, hi))

    def count_primes(self, lo: int, hi: int) -> int:
        """Number of primes in [lo, hi)."""
        if hi <= lo:
            return 0
        return sum(len(seg) for seg in self.iter_prime_segments(lo, hi))

    def prime_pi(self, x: int) -> int:
        """pi(x), the number of primes <= x."""
        if x < 2:
            return 0
        return self.count_primes(0, int(x) + 1)

    def primes_up_to(self, x: int) -> np.ndarray:
        """All primes <= x as one array."""
        if x < 2:
            return np.array([], dtype=np.int64)
        estimate = int(1.3 * x / math.log(x)) + 16
        self.guard.check_memory(8 * estimate, f"prime list up to {x}")
        return np.concatenate(list(self.iter_prime_segments(0, int(x) + 1)))

    def nth_prime(self, n: int) -> int:
        """
        Return p_n with p_1 = 2.

        Raises:
            CapacityError: If n exceeds the configured maximum
        """
        if n < 1:
            raise ValidationError(f"prime index must be >= 1, got {n}")
        if n > self.config.nth_prime_max and not self.config.allow_large:
            raise CapacityError(
                f"prime index {n} exceeds the configured maximum {self.config.nth_prime_max}",
                details={'n': n, 'max': self.config.nth_prime_max}
            )
        if n < 6:
            return (2, 3, 5, 7, 11)[n - 1]
        log_n = math.log(n)
        upper = int(n * (log_n + math.log(log_n))) + 3
        seen = 0
        for seg in self.iter_prime_segments(0, upper + 1):
            if seen + len(seg) >= n:
                return int(seg[n - seen - 1])
            seen += len(seg)
        raise CapacityError(f"prime index {n} not reached below {upper}")

    def shutdown(self) -> None:
        self.pool.shutdown()


def sieve_range(lo: int, hi: int, config: Optional[EngineConfig] = None) -> PrimeRange:
    """Exact primality flags for [lo, hi) using a throwaway sieve."""
    return PrimeSieve(config).sieve_range(lo, hi)


def nth_prime(n: int, config: Optional[EngineConfig] = None) -> int:
    return PrimeSieve(config).nth_prime(n)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _decompose(n: int) -> Tuple[int, int]:
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return d, s


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n < 2^64."""
    if n >= U64_LIMIT:
        raise DomainError(f"{n} does not fit in 64 bits; use is_prime_big")
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = _decompose(n)
    return all(_strong_probable_prime(n, a, d, s) for a in MR_BASES_64)


def is_prime_big(n: int, rounds: int = 40, seed: int = 20240101) -> Primality:
    """
    Miller-Rabin with witnesses drawn from random.Random(seed).

    "composite" is certain; "probable-prime" errs with probability at most
    4^-rounds. Inputs below 2^64 are decided deterministically.
    """
    if rounds < 1:
        raise ValidationError("rounds must be >= 1")
    if n < U64_LIMIT:
        return Primality.PROBABLE_PRIME if is_prime_u64(max(n, 0)) else Primality.COMPOSITE
    for p in SMALL_PRIMES:
        if n % p == 0:
            return Primality.COMPOSITE
    d, s = _decompose(n)
    rng = random.Random(seed)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        if not _strong_probable_prime(n, a, d, s):
            return Primality.COMPOSITE
    return Primality.PROBABLE_PRIME


def is_prime(n: int, rounds: int = 40, seed: int = 20240101) -> bool:
    """Primality of any integer: exact below 2^64, probable above."""
    if n < U64_LIMIT:
        return is_prime_u64(max(n, 0))
    return is_prime_big(n, rounds, seed).is_probable_prime


def jacobi(a: int, n: int) -> int:
    """
    Jacobi symbol (a/n) by the binary reciprocity iteration.

    Raises:
        DomainError: If n is even or not positive
    """
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def jacobi_array(a: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Elementwise Jacobi symbol for int64 arrays; every n must be odd and positive."""
    n = np.array(n, dtype=np.int64, copy=True)
    a = np.mod(np.asarray(a, dtype=np.int64), n)
    result = np.ones(a.shape, dtype=np.int64)
    active = a != 0
    while active.any():
        while True:
            even = active & (a % 2 == 0)
            if not even.any():
                break
            a[even] //= 2
            residue = n % 8
            result[even & ((residue == 3) | (residue == 5))] *= -1
        result[active & (a % 4 == 3) & (n % 4 == 3)] *= -1
        old_a = a[active]
        a[active] = n[active] % old_a
        n[active] = old_a
        active = a != 0
    return np.where(n == 1, result, 0)


def totient(a: int) -> int:
    """Euler's phi via the product over the prime divisors of a."""
    if a < 1:
        raise ValidationError(f"totient needs a positive argument, got {a}")
    result = a
    for p in factorint(a):
        result = result // p * (p - 1)
    return result


def primorial(k: int) -> int:
    """Product of the first k primes (1 for k = 0)."""
    if k < 0:
        raise ValidationError("primorial index must be non-negative")
    if k == 0:
        return 1
    return int(_sympy_primorial(k, nth=True))


def prime_reciprocal_sums(bounds: Sequence[float], sieve: Optional[PrimeSieve] = None) -> List[Tuple[int, float]]:
    """Compensated partial sums of 1/p at each bound, in one ascending pass."""
    sieve = sieve or PrimeSieve()
    targets = sorted(int(b) for b in bounds)
    if not targets:
        return []
    if targets[0] < 2:
        raise ValidationError("reciprocal sums need bounds >= 2")
    acc = CompensatedSum()
    results: Dict[int, float] = {}
    pending = list(targets)
    for seg in sieve.iter_prime_segments(0, targets[-1] + 1):
        reciprocals = 1.0 / seg.astype(np.float64)
        consumed = 0
        while pending and len(seg) and pending[0] < seg[-1]:
            cut = int(np.searchsorted(seg, pending[0], side='right'))
            acc.add_array(reciprocals[consumed:cut])
            consumed = cut
            results[pending.pop(0)] = acc.value
        acc.add_array(reciprocals[consumed:])
        while pending and len(seg) and pending[0] == seg[-1]:
            results[pending.pop(0)] = acc.value
    for bound in pending:
        results[bound] = acc.value
    return [(b, results[b]) for b in targets]


def mertens_deviation(x: float, sieve: Optional[PrimeSieve] = None) -> float:
    """Sum of 1/p over p <= x minus log log x."""
    if x < 2:
        raise DomainError(f"Mertens deviation needs x >= 2, got {x}")
    (_, total), = prime_reciprocal_sums([math.floor(x)], sieve)
    return total - math.log(math.log(x))
