"""
Partial Euler products for the Bateman-Horn constant and its closed forms.

Every product is accumulated as a sum of logarithms over primes in strictly
ascending order. Each segment is summed with math.fsum and segments are
combined with a compensated running sum, so the result does not depend on
the worker count.
"""

import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from config.error_handling import (
    GcdError, OddShiftError, ParityError, PerfectSquareDiscriminantError,
    ValidationError, VanishingPrimeError
)
from models.core import ConstantEstimate, EngineConfig, HlfEstimate, Verdict
from models.polynomial import IntPoly, PolyFamily
from services.polynomial import check_family, require_admissible
from services.primes import CompensatedSum, PrimeSieve, jacobi_array, primorial, simple_sieve, totient
from services.rootcount import OmegaCounter, bigint_mod_array

logger = logging.getLogger(__name__)

TermFunction = Callable[[np.ndarray], Tuple[np.ndarray, Optional[np.ndarray]]]


@dataclass
class ProductTrace:
    """Log-sum of an ordered product with its checkpoint history."""
    log_value: float
    checkpoints: List[Tuple[int, float]] = field(default_factory=list)
    series: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    def values(self) -> List[Tuple[int, float]]:
        return [(b, math.exp(v)) for b, v in self.checkpoints]


class EulerProductEvaluator:
    """Runs a per-prime log-term function over [2, bound] in ascending order."""

    def __init__(self, sieve: Optional[PrimeSieve] = None, config: Optional[EngineConfig] = None):
        self.sieve = sieve or PrimeSieve(config)
        self.config = config or self.sieve.config

    def run(self, terms: TermFunction, bound: int, checkpoints: Sequence[int] = (),
            description: str = "product") -> ProductTrace:
        if bound < 2:
            raise ValidationError(f"prime bound must be >= 2, got {bound}")
        self.sieve.guard.check_scale(prime_bound=bound)

        marks = sorted({int(c) for c in checkpoints if 2 <= c <= bound} | {bound})
        log_acc = CompensatedSum()
        series_acc = CompensatedSum()
        trace = ProductTrace(log_value=0.0)

        def evaluate(primes: np.ndarray):
            logs, series = terms(primes)
            return primes, logs, series

        segments = self.sieve.iter_prime_segments(2, bound + 1)
        progress = tqdm(
            total=self.sieve.segment_count(2, bound + 1),
            desc=description,
            unit="seg",
            file=sys.stderr,
            disable=not self.config.show_progress,
        )
        pending = list(marks)
        has_series = True
        try:
            for primes, logs, series in self.sieve.pool.map_ordered(evaluate, segments):
                progress.update(1)
                if not len(primes):
                    continue
                has_series = series is not None
                start = 0
                while pending and pending[0] < primes[-1]:
                    cut = int(np.searchsorted(primes, pending[0], side='right'))
                    log_acc.add_array(logs[start:cut])
                    if has_series:
                        series_acc.add_array(series[start:cut])
                    start = cut
                    self._record(trace, pending.pop(0), log_acc, series_acc, has_series)
                log_acc.add_array(logs[start:])
                if has_series:
                    series_acc.add_array(series[start:])
        finally:
            progress.close()

        for mark in pending:
            self._record(trace, mark, log_acc, series_acc, has_series)
        trace.log_value = log_acc.value
        return trace

    @staticmethod
    def _record(trace: ProductTrace, mark: int, log_acc: CompensatedSum,
                series_acc: CompensatedSum, with_series: bool) -> None:
        trace.checkpoints.append((mark, log_acc.value))
        if with_series:
            trace.series.append((mark, series_acc.value))


def _family_terms(family: PolyFamily, cutoff: int) -> TermFunction:
    counter = OmegaCounter(family, cutoff)
    k = family.k

    def terms(primes: np.ndarray):
        omega = counter.counts(primes)
        if np.any(omega >= primes):
            p = int(primes[np.argmax(omega >= primes)])
            raise VanishingPrimeError(
                f"factor at p = {p} is zero: {family.label} has {p} roots modulo {p}", prime=p
            )
        p = primes.astype(np.float64)
        logs = -k * np.log1p(-1.0 / p) + np.log1p(-omega / p)
        series = (k - omega) / p
        return logs, series

    return terms


def bh_constant(family: PolyFamily, prime_bound: int, checkpoints: Optional[Sequence[int]] = None,
                sieve: Optional[PrimeSieve] = None, config: Optional[EngineConfig] = None) -> ConstantEstimate:
    """
    Partial product of (1 - 1/p)^-k (1 - omega(p)/p) over p <= prime_bound.

    Raises:
        InadmissibleFamilyError: For inadmissible families without override
        VanishingPrimeError: If some factor is zero
    """
    require_admissible(family)
    evaluator = EulerProductEvaluator(sieve, config)
    cfg = evaluator.config
    schedule = cfg.checkpoint_decades if checkpoints is None else checkpoints

    trace = evaluator.run(
        _family_terms(family, cfg.brute_force_cutoff), prime_bound, schedule,
        description=f"C{family.label}"
    )
    values = trace.values()
    verdict = None
    try:
        verdict = divergence_diagnostic(values, cfg.divergence_threshold, cfg.convergence_delta)
    except ValidationError:
        logger.debug(f"Too few checkpoints for a divergence verdict on {family.label}")

    logger.info(f"C{family.label} at bound {prime_bound}: {trace.value:.9g}")
    return ConstantEstimate(
        family=family.label,
        k=family.k,
        prime_bound=prime_bound,
        value=trace.value,
        log_value=trace.log_value,
        checkpoints=values,
        series_checkpoints=trace.series,
        divergence_verdict=verdict,
        degrees=family.degrees,
    )


def index_checkpoints(family: PolyFamily, counts: Sequence[int], sieve: Optional[PrimeSieve] = None,
                      config: Optional[EngineConfig] = None) -> List[Tuple[int, float]]:
    """Partial products up to p_n for each n in counts."""
    if not counts:
        return []
    sieve = sieve or PrimeSieve(config)
    bounds = {n: sieve.nth_prime(n) for n in counts}
    estimate = bh_constant(family, max(bounds.values()), list(bounds.values()), sieve, config)
    by_bound = dict(estimate.checkpoints)
    return [(n, by_bound[bounds[n]]) for n in counts]


def divergence_diagnostic(checkpoints: Sequence[Tuple[int, float]], threshold: float = 0.05,
                          convergence_delta: float = 1e-2) -> Verdict:
    """
    Heuristic verdict from the last three steps of a checkpoint trace.

    Raises:
        ValidationError: With fewer than 4 checkpoints or under 3 decades of span
    """
    points = sorted(checkpoints)
    if len(points) < 4:
        raise ValidationError(f"divergence diagnostic needs at least 4 checkpoints, got {len(points)}")
    if math.log10(points[-1][0]) - math.log10(points[0][0]) < 3 - 1e-9:
        raise ValidationError("divergence diagnostic needs checkpoints spanning 3 decades")
    if any(v <= 0 for _, v in points):
        return Verdict.DIVERGING_TO_ZERO

    logs = [math.log(v) for _, v in points[-4:]]
    deltas = [b - a for a, b in zip(logs, logs[1:])]
    if all(d < -threshold for d in deltas):
        return Verdict.DIVERGING_TO_ZERO
    if max(abs(d) for d in deltas) < convergence_delta and abs(deltas[-1]) <= abs(deltas[0]):
        return Verdict.CONVERGING
    return Verdict.DIVERGING


def ap_constant(a: int, b: int) -> Fraction:
    """a/phi(a): the constant of the progression at+b."""
    if a < 1:
        raise ValidationError(f"progression modulus must be positive, got {a}")
    if math.gcd(a, b) != 1:
        raise GcdError(
            f"gcd({a}, {b}) = {math.gcd(a, b)}: {a}t+{b} is prime for at most one t",
            details={'a': a, 'b': b}
        )
    return Fraction(a, totient(a))


def ck_constant(k: int, prime_bound: int, sieve: Optional[PrimeSieve] = None,
                config: Optional[EngineConfig] = None) -> ConstantEstimate:
    """
    C_k = prod over odd p | k of p/(p-1) times prod over odd p not dividing k
    of p(p-2)/(p-1)^2, both truncated at prime_bound.
    """
    if k < 1:
        raise ValidationError(f"shift must be positive, got {k}")
    if k % 2:
        raise OddShiftError(f"k = {k} is odd: t and t+{k} have opposite parity", details={'k': k})
    if prime_bound < 3:
        raise ValidationError("prime bound must be >= 3")

    def terms(primes: np.ndarray):
        p = primes.astype(np.float64)
        divides = bigint_mod_array(k, primes) == 0
        with np.errstate(divide='ignore'):
            logs = np.where(divides, -np.log1p(-1.0 / p), np.log1p(-1.0 / (p - 1.0) ** 2))
        logs[primes == 2] = 0.0
        return logs, None

    evaluator = EulerProductEvaluator(sieve, config)
    trace = evaluator.run(terms, prime_bound, description=f"C_{k}")
    value = trace.value
    return ConstantEstimate(
        family="{t, t+%d}" % k,
        k=2,
        prime_bound=prime_bound,
        value=value,
        log_value=trace.log_value,
        checkpoints=trace.values(),
        tail_bound=value / (2.0 * (prime_bound - 2)),
        degrees=(1, 1),
    )


def hlf_constant(a: int, b: int, c: int, prime_bound: int, sieve: Optional[PrimeSieve] = None,
                 config: Optional[EngineConfig] = None) -> HlfEstimate:
    """
    Closed form of the constant for at^2+bt+c through the Legendre symbol of
    the discriminant.

    Raises:
        GcdError, ParityError, PerfectSquareDiscriminantError: Each hypothesis named
    """
    if a <= 0:
        raise ValidationError(f"leading coefficient must be positive, got {a}")
    if math.gcd(math.gcd(a, b), c) != 1:
        raise GcdError(f"gcd({a}, {b}, {c}) != 1", details={'a': a, 'b': b, 'c': c})
    if (a + b) % 2 == 0 and c % 2 == 0:
        raise ParityError(
            f"a+b = {a + b} and c = {c} are both even: every value is even",
            details={'a': a, 'b': b, 'c': c}
        )
    disc = b * b - 4 * a * c
    if disc >= 0 and math.isqrt(disc) ** 2 == disc:
        raise PerfectSquareDiscriminantError(
            f"discriminant {disc} is a perfect square: the quadratic factors",
            details={'discriminant': disc}
        )

    epsilon = Fraction(1, 2) if (a + b) % 2 else Fraction(1)
    shared = math.gcd(a, b)

    def terms(primes: np.ndarray):
        p = primes.astype(np.float64)
        odd = primes > 2
        coprime = odd & (bigint_mod_array(a, primes) != 0)
        logs = np.zeros(len(primes), dtype=np.float64)
        legendre = jacobi_array(bigint_mod_array(disc, primes[coprime]), primes[coprime])
        logs[coprime] = np.log1p(-legendre / (p[coprime] - 1.0))
        in_gcd = odd & (bigint_mod_array(shared, primes) == 0)
        logs[in_gcd] = -np.log1p(-1.0 / p[in_gcd])
        return logs, None

    evaluator = EulerProductEvaluator(sieve, config)
    trace = evaluator.run(terms, prime_bound, description=f"HLF({a},{b},{c})")
    value = float(2 * epsilon) * trace.value
    return HlfEstimate(a=a, b=b, c=c, epsilon=epsilon, value=value, prime_bound=prime_bound)


def progression_family(k: int, difference: int, override: bool = False) -> PolyFamily:
    """The family t, t+d, ..., t+(k-1)d."""
    return check_family([IntPoly((i * difference, 1)) for i in range(k)], override)


def greentao_constant(k: int, prime_bound: int, difference: Optional[int] = None,
                      sieve: Optional[PrimeSieve] = None,
                      config: Optional[EngineConfig] = None) -> ConstantEstimate:
    """
    Constant of the k-term progression family t, t+a, ..., t+(k-1)a.

    The difference a defaults to the product of the first k primes.

    Raises:
        VanishingPrimeError: If some prime <= k does not divide a
    """
    if k < 1:
        raise ValidationError(f"progression length must be positive, got {k}")
    a = primorial(k) if difference is None else difference
    if a < 1:
        raise ValidationError(f"common difference must be positive, got {a}")
    for p in simple_sieve(k).tolist():
        if a % p:
            raise VanishingPrimeError(
                f"{k} terms with difference {a} cover every residue modulo {p}", prime=p
            )

    def terms(primes: np.ndarray):
        p = primes.astype(np.float64)
        divides = bigint_mod_array(a, primes) == 0
        base = -np.log1p(-1.0 / p)
        logs = (k - 1) * base
        rest = ~divides
        logs[rest] = k * base[rest] + np.log1p(-k / p[rest])
        return logs, None

    evaluator = EulerProductEvaluator(sieve, config)
    trace = evaluator.run(terms, prime_bound, description=f"AP{k}")
    label = "{" + ", ".join("t" if i == 0 else f"t+{i * a}" for i in range(k)) + "}"
    return ConstantEstimate(
        family=label,
        k=k,
        prime_bound=prime_bound,
        value=trace.value,
        log_value=trace.log_value,
        checkpoints=trace.values(),
        degrees=(1,) * k,
    )
