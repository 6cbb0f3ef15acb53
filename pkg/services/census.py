"""
Empirical prime counts: polynomial families, progressions, prime pairs,
Sophie Germain primes, Cunningham chains and Brun partial sums.
"""

import logging
import math
import time
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config.error_handling import GcdError, OddShiftError, ValidationError
from models.core import Chain, ChainKind, ConstantEstimate, CountReport, EngineConfig, Prediction
from models.polynomial import IntPoly, PolyFamily
from services.asymptotics import li, predict
from services.bhconstant import bh_constant
from services.polynomial import check_family, require_admissible
from services.primes import U64_LIMIT, CompensatedSum, PrimeSieve, is_prime, is_prime_u64, simple_sieve, totient

logger = logging.getLogger(__name__)

SMALL_SIEVE_LIMIT = 10_000


def _growth_key(f: IntPoly) -> Tuple[int, int, int]:
    return f.degree, abs(f.leading), sum(abs(c) for c in f.coeffs)


class PrimeValueSieve:
    """
    Flags the arguments n at which every member of a family is prime.

    Each member's roots modulo the primes q below SMALL_SIEVE_LIMIT strike
    out the n with q | f(n). Survivors below the square of the limit are
    prime; larger survivors go to Miller-Rabin. Members are tested in
    order of value growth so the cheapest rejections come first.
    """

    def __init__(self, family: PolyFamily, config: Optional[EngineConfig] = None,
                 small_limit: int = SMALL_SIEVE_LIMIT):
        self.family = family
        self.config = config or EngineConfig()
        self.members = sorted(family.members, key=_growth_key)
        primes = simple_sieve(small_limit)
        self.small_limit = small_limit
        self.small_primes = primes.tolist()
        self.small_table = np.zeros(small_limit + 1, dtype=bool)
        self.small_table[primes] = True
        self._roots = [self._root_table(m) for m in self.members]

    def _root_table(self, f: IntPoly) -> List[Tuple[int, List[int]]]:
        table = []
        coeffs = f.descending()
        for q in self.small_primes:
            x = np.arange(q, dtype=np.int64)
            acc = np.zeros(q, dtype=np.int64)
            for c in coeffs:
                acc = (acc * x + c % q) % q
            roots = np.flatnonzero(acc == 0)
            if len(roots):
                table.append((q, roots.tolist()))
        return table

    @staticmethod
    def _values(f: IntPoly, n: np.ndarray) -> np.ndarray:
        edge = max(abs(int(n[0])), abs(int(n[-1])))
        bound = sum(abs(c) * edge ** i for i, c in enumerate(f.coeffs))
        if bound < (1 << 63):
            acc = np.zeros(len(n), dtype=np.int64)
            for c in f.descending():
                acc = acc * n + c
            return acc
        return np.array([f(v) for v in n.tolist()], dtype=object)

    def _prime_mask(self, values: np.ndarray, struck: np.ndarray) -> np.ndarray:
        limit = self.small_limit
        square = limit * limit
        if values.dtype != object:
            result = np.zeros(len(values), dtype=bool)
            small = (values >= 2) & (values <= limit)
            result[small] = self.small_table[values[small]]
            large = (values > limit) & ~struck
            result[large & (values < square)] = True
            for i in np.flatnonzero(large & (values >= square)).tolist():
                result[i] = is_prime_u64(int(values[i]))
            return result

        rounds, seed = self.config.miller_rabin_rounds, self.config.seed
        out = []
        for value, hit in zip(values.tolist(), struck.tolist()):
            if value < 2:
                out.append(False)
            elif value <= limit:
                out.append(bool(self.small_table[value]))
            elif hit:
                out.append(False)
            elif value < square:
                out.append(True)
            else:
                out.append(is_prime(value, rounds, seed))
        return np.array(out, dtype=bool)

    def hits(self, bounds: Tuple[int, int]) -> np.ndarray:
        """Boolean flags for n in [lo, hi)."""
        lo, hi = bounds
        n = np.arange(lo, hi, dtype=np.int64)
        alive = np.ones(len(n), dtype=bool)
        for f, roots in zip(self.members, self._roots):
            idx = np.flatnonzero(alive)
            if not len(idx):
                break
            struck = np.zeros(len(n), dtype=bool)
            for q, residues in roots:
                for r in residues:
                    struck[(r - lo) % q::q] = True
            alive[idx] = self._prime_mask(self._values(f, n[idx]), struck[idx])
        return alive


class Census:
    """Counting engine sharing one sieve and worker pool per run."""

    def __init__(self, sieve: Optional[PrimeSieve] = None, config: Optional[EngineConfig] = None):
        self.sieve = sieve or PrimeSieve(config)
        self.config = config or self.sieve.config

    def _chunks(self, lo: int, hi: int) -> List[Tuple[int, int]]:
        span = max(1024, self.config.segment_bytes)
        return [(s, min(s + span, hi)) for s in range(lo, hi, span)]

    def cumulative_q(self, family: PolyFamily, bounds: Sequence[int], start: int = 1) -> List[Tuple[int, int]]:
        """Q(F; b) for each b in one ascending pass over n = start..max(bounds)."""
        require_admissible(family)
        targets = sorted(int(b) for b in bounds)
        if not targets or targets[-1] < start:
            return [(b, 0) for b in targets]
        self.sieve.guard.check_scale(x=targets[-1])

        value_sieve = PrimeValueSieve(family, self.config)
        results = {}
        pending = [b for b in targets if b >= start]
        for b in targets:
            if b < start:
                results[b] = 0
        total = 0
        chunks = self._chunks(start, targets[-1] + 1)
        for (lo, hi), flags in zip(chunks, self.sieve.pool.map_ordered(value_sieve.hits, chunks)):
            while pending and pending[0] < hi:
                bound = pending.pop(0)
                results[bound] = total + int(np.count_nonzero(flags[:bound - lo + 1]))
            total += int(np.count_nonzero(flags))
        for b in pending:
            results[b] = total
        return [(b, results[b]) for b in targets]

    def arguments(self, family: PolyFamily, lo: int, hi: int) -> List[int]:
        """The n in [lo, hi] at which every member is prime."""
        require_admissible(family)
        value_sieve = PrimeValueSieve(family, self.config)
        found: List[int] = []
        chunks = self._chunks(lo, hi + 1)
        for (start, _), flags in zip(chunks, self.sieve.pool.map_ordered(value_sieve.hits, chunks)):
            found.extend((np.flatnonzero(flags) + start).tolist())
        return found

    def count_q(self, family: PolyFamily, x: int,
                estimate: Optional[ConstantEstimate] = None) -> CountReport:
        """
        Q(F; x): the number of n in [1, x] with every f_i(n) prime.

        Raises:
            InadmissibleFamilyError: Without the override flag
        """
        started = time.perf_counter()
        (_, count), = self.cumulative_q(family, [max(int(x), 0)])
        prediction = predict(family, estimate, x) if estimate is not None and x >= 2 else None
        return CountReport(
            family=family.label,
            x=int(x),
            empirical=count,
            prediction=prediction,
            wall_time=time.perf_counter() - started,
        )

    def count_ap(self, a: int, b: int, x: int) -> CountReport:
        """pi_{a,b}(x): primes p <= x with p = b mod a."""
        self._check_progression(a, b)
        started = time.perf_counter()
        count = 0
        if x >= 2:
            self.sieve.guard.check_scale(x=x)
            residue = b % a
            for seg in self.sieve.iter_prime_segments(0, x + 1):
                count += int(np.count_nonzero(seg % a == residue))
        prediction = self._ap_prediction(a, b, x)
        return CountReport(
            family=f"{a}t+{b}", x=x, empirical=count, prediction=prediction,
            wall_time=time.perf_counter() - started,
        )

    def count_ap_series(self, a: int, x: int) -> List[CountReport]:
        """pi_{a,b}(x) for every residue class b coprime to a."""
        if a < 1:
            raise ValidationError(f"progression modulus must be positive, got {a}")
        self.sieve.guard.check_memory(8 * a, f"residue table modulo {a}")
        self.sieve.guard.check_scale(x=x)
        started = time.perf_counter()
        tally = np.zeros(a, dtype=np.int64)
        if x >= 2:
            for seg in self.sieve.iter_prime_segments(0, x + 1):
                tally += np.bincount(seg % a, minlength=a)
        elapsed = time.perf_counter() - started
        return [
            CountReport(family=f"{a}t+{b}", x=x, empirical=int(tally[b]),
                        prediction=self._ap_prediction(a, b, x), wall_time=elapsed)
            for b in range(a) if math.gcd(a, b) == 1
        ]

    def ap_values(self, a: int, b: int, limit: int) -> List[int]:
        """The t in [0, limit] with at+b prime."""
        self._check_progression(a, b)
        family = check_family([IntPoly((b, a))])
        return self.arguments(family, 0, limit)

    @staticmethod
    def _check_progression(a: int, b: int) -> None:
        if a < 1:
            raise ValidationError(f"progression modulus must be positive, got {a}")
        if math.gcd(a, b) != 1:
            raise GcdError(
                f"gcd({a}, {b}) = {math.gcd(a, b)}: {a}t+{b} contains at most one prime",
                details={'a': a, 'b': b}
            )

    @staticmethod
    def _ap_prediction(a: int, b: int, x: int) -> Optional[Prediction]:
        if x < 2:
            return None
        phi = totient(a)
        return Prediction(family=f"{a}t+{b}", constant=1.0 / phi, degree_product=1,
                          x=x, predicted=li(x) / phi, k=1)

    def count_landau(self, x: int) -> CountReport:
        """Primes of the form n^2+1 not exceeding x."""
        if x < 2:
            raise ValidationError(f"Landau count needs x >= 2, got {x}")
        family = check_family([IntPoly((1, 0, 1))])
        report = self.count_q(family, math.isqrt(x - 1))
        report.x = x
        return report

    def _pair_primes(self, k: int, limit: int) -> Iterator[np.ndarray]:
        """Primes p <= limit with p + k prime, segment by segment."""
        hi_total = limit + k + 1
        carry = np.array([], dtype=np.int64)
        previous = 0
        bounds = self.sieve.segment_bounds(0, hi_total)
        for (_, hi), seg in zip(bounds, self.sieve.iter_prime_segments(0, hi_total)):
            window = np.concatenate([carry, seg])
            shifted = window + k
            fresh = (shifted < hi) & (shifted >= previous) & (window <= limit)
            candidates = window[fresh]
            if len(candidates) and len(window):
                pos = np.minimum(np.searchsorted(window, candidates + k), len(window) - 1)
                yield candidates[window[pos] == candidates + k]
            carry = window[window >= hi - k]
            previous = hi

    def count_pairs(self, k: int, x: Optional[int] = None,
                    first_primes: Optional[int] = None) -> CountReport:
        """
        pi_k: primes p with p + k prime, either p <= x or among the first N primes.

        Raises:
            OddShiftError: For odd k
        """
        if k < 1:
            raise ValidationError(f"pair shift must be positive, got {k}")
        if k % 2:
            raise OddShiftError(f"k = {k} is odd: at most one prime pair (2, {2 + k})", details={'k': k})
        if (x is None) == (first_primes is None):
            raise ValidationError("give exactly one of x or first_primes")

        started = time.perf_counter()
        limit = x if x is not None else self.sieve.nth_prime(first_primes)
        self.sieve.guard.check_scale(x=limit)
        count = sum(len(p) for p in self._pair_primes(k, limit)) if limit >= 2 else 0
        return CountReport(
            family="{t, t+%d}" % k,
            x=x if x is not None else first_primes,
            empirical=count,
            wall_time=time.perf_counter() - started,
            label="x" if x is not None else "first_primes",
        )

    def count_sophie(self, x: int) -> CountReport:
        """Sophie Germain primes p <= x (2p+1 also prime)."""
        if x < 2:
            raise ValidationError(f"Sophie Germain count needs x >= 2, got {x}")
        self.sieve.guard.check_scale(x=x)
        started = time.perf_counter()
        flags = self.sieve.sieve_range(0, 2 * x + 2)
        count = 0
        for seg in self.sieve.iter_prime_segments(0, x + 1):
            count += int(np.count_nonzero(flags.is_prime_array(2 * seg + 1)))
        return CountReport(family="{t, 2*t+1}", x=x, empirical=count,
                           wall_time=time.perf_counter() - started)

    def cunningham_chains(self, kind: ChainKind, search_bound: int, min_length: int = 2) -> List[Chain]:
        """
        Maximal Cunningham chains whose first element is at most search_bound.

        A prime seeds a chain only when its predecessor under the step map is
        not prime, so each maximal chain is emitted once.
        """
        if min_length < 1:
            raise ValidationError(f"minimum chain length must be >= 1, got {min_length}")
        if search_bound < 2:
            return []
        self.sieve.guard.check_scale(x=search_bound)
        flags = self.sieve.sieve_range(0, 2 * search_bound + 2)
        offset = -1 if kind is ChainKind.FIRST else 1
        sign = 1 if kind is ChainKind.FIRST else -1

        chains = []
        for seg in self.sieve.iter_prime_segments(0, search_bound + 1):
            numerator = seg + offset
            has_predecessor = numerator % 2 == 0
            predecessor_prime = np.zeros(len(seg), dtype=bool)
            predecessor_prime[has_predecessor] = flags.is_prime_array(numerator[has_predecessor] // 2)
            seeds = seg[~predecessor_prime]
            if min_length >= 2:
                seeds = seeds[flags.is_prime_array(2 * seeds + sign)]
            for p in seeds.tolist():
                chain = self._extend_chain(kind, p)
                if len(chain) >= min_length:
                    chains.append(chain)
        logger.debug(f"Found {len(chains)} {kind.value}-kind chains up to {search_bound}")
        return chains

    @staticmethod
    def _extend_chain(kind: ChainKind, seed: int) -> Chain:
        elements = [seed]
        nxt = kind.step(seed)
        while True:
            if nxt >= U64_LIMIT:
                return Chain(kind, elements, complete=False)
            if not is_prime_u64(nxt):
                return Chain(kind, elements, complete=True)
            elements.append(nxt)
            nxt = kind.step(nxt)

    def brun_series(self, bounds: Sequence[int]) -> List[Tuple[int, float]]:
        """Brun partial sums at several bounds in one pass."""
        targets = sorted(int(b) for b in bounds)
        if not targets:
            return []
        if targets[0] < 5:
            raise ValidationError("Brun partial sums need x >= 5")
        self.sieve.guard.check_scale(x=targets[-1])
        acc = CompensatedSum()
        results = {}
        pending = list(targets)
        for p in self._pair_primes(2, targets[-1]):
            if not len(p):
                continue
            terms = 1.0 / p.astype(np.float64) + 1.0 / (p + 2).astype(np.float64)
            start = 0
            while pending and pending[0] < p[-1]:
                cut = int(np.searchsorted(p, pending[0], side='right'))
                acc.add_array(terms[start:cut])
                start = cut
                results[pending.pop(0)] = acc.value
            acc.add_array(terms[start:])
        for b in pending:
            results[b] = acc.value
        return [(b, results[b]) for b in targets]

    def brun_partial(self, x: int) -> float:
        """Sum of 1/p + 1/(p+2) over twin pairs with p <= x."""
        (_, value), = self.brun_series([x])
        return value

    def illiac_series(self, bounds: Sequence[int], constant_bound: int = 10**6) -> List[CountReport]:
        """
        Primes p <= x with p^2+p+1 prime at each x, beside the prediction
        C/2 times the integral of dt/(log t)^2.
        """
        family = check_family([IntPoly((0, 1)), IntPoly((1, 1, 1))])
        started = time.perf_counter()
        counts = self.cumulative_q(family, bounds)
        estimate = bh_constant(family, constant_bound, checkpoints=[], sieve=self.sieve, config=self.config)
        elapsed = time.perf_counter() - started
        return [
            CountReport(family=family.label, x=b, empirical=c,
                        prediction=predict(family, estimate, b) if b >= 2 else None,
                        wall_time=elapsed)
            for b, c in counts
        ]
