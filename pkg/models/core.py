"""
Core data models for the Bateman-Horn toolkit.
"""

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


MEMORY_BUDGET_ENV = "BATEMAN_HORN_MEMORY_BUDGET"


class Verdict(Enum):
    """Heuristic convergence verdict for a partial Euler product."""
    CONVERGING = "converging"
    DIVERGING_TO_ZERO = "diverging-to-zero-suspected"
    DIVERGING = "diverging-suspected"


class Primality(Enum):
    """Outcome of a probabilistic primality test."""
    COMPOSITE = "composite"
    PROBABLE_PRIME = "probable-prime"

    @property
    def is_probable_prime(self) -> bool:
        return self is Primality.PROBABLE_PRIME


class ChainKind(Enum):
    """Cunningham chain step maps."""
    FIRST = "first"
    SECOND = "second"

    def step(self, p: int) -> int:
        return 2 * p + 1 if self is ChainKind.FIRST else 2 * p - 1

    def predecessor(self, p: int) -> Optional[int]:
        """Inverse of the step map, or None when it is not an integer."""
        numerator = p - 1 if self is ChainKind.FIRST else p + 1
        if numerator % 2:
            return None
        return numerator // 2


class Direction(Enum):
    """Unit lattice steps; y grows upward."""
    E = (1, 0)
    NE = (1, 1)
    N = (0, 1)
    NW = (-1, 1)
    W = (-1, 0)
    SW = (-1, -1)
    S = (0, -1)
    SE = (1, -1)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    @property
    def is_diagonal(self) -> bool:
        return self.dx != 0 and self.dy != 0


class OutputFormat(Enum):
    """Supported report formats."""
    TABLE = "table"
    CSV = "csv"
    JSON = "json"


class OmegaMethod(Enum):
    """How a root count was obtained."""
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    GENERIC = "generic"
    BRUTE_FORCE = "brute-force"
    FAMILY_SUM = "family-sum"


def _default_memory_budget() -> Optional[int]:
    value = os.environ.get(MEMORY_BUDGET_ENV)
    if value:
        return int(float(value))
    return None


@dataclass
class EngineConfig:
    """Tunable settings shared by every computation."""
    segment_bytes: int = 1 << 20
    memory_budget_bytes: Optional[int] = field(default_factory=_default_memory_budget)
    threads: int = 1
    brute_force_cutoff: int = 10_000
    miller_rabin_rounds: int = 40
    seed: int = 20240101
    checkpoint_decades: List[int] = field(
        default_factory=lambda: [10**3, 10**4, 10**5, 10**6, 10**7]
    )
    max_x: int = 10**9
    max_prime_bound: int = 10**8
    allow_large: bool = False
    irreducibility_primes: int = 25
    divergence_threshold: float = 0.05
    convergence_delta: float = 1e-2
    ray_max_skip: int = 4
    nth_prime_max: int = 10**7
    show_progress: bool = False
    output_format: str = "table"
    golden_dir: str = "golden"

    def __post_init__(self):
        """Clamp values that have hard limits."""
        if self.threads < 1:
            self.threads = 1
        elif self.threads > 64:
            self.threads = 64

        if self.segment_bytes < 1024:
            self.segment_bytes = 1024

        if self.miller_rabin_rounds < 1:
            self.miller_rabin_rounds = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'segment_bytes': self.segment_bytes,
            'memory_budget_bytes': self.memory_budget_bytes,
            'threads': self.threads,
            'brute_force_cutoff': self.brute_force_cutoff,
            'miller_rabin_rounds': self.miller_rabin_rounds,
            'seed': self.seed,
            'checkpoint_decades': list(self.checkpoint_decades),
            'max_x': self.max_x,
            'max_prime_bound': self.max_prime_bound,
            'allow_large': self.allow_large,
            'irreducibility_primes': self.irreducibility_primes,
            'divergence_threshold': self.divergence_threshold,
            'convergence_delta': self.convergence_delta,
            'ray_max_skip': self.ray_max_skip,
            'nth_prime_max': self.nth_prime_max,
            'show_progress': self.show_progress,
            'output_format': self.output_format,
            'golden_dir': self.golden_dir,
        }


@dataclass
class RunConfig:
    """One parsed CLI invocation, validated before any computation."""
    subcommand: str
    family: List[str] = field(default_factory=list)
    x: Optional[int] = None
    prime_bound: Optional[int] = None
    count_n: Optional[int] = None
    output_format: OutputFormat = OutputFormat.TABLE
    checkpoints: List[int] = field(default_factory=list)
    override: bool = False
    big_int: bool = False
    seed: int = 20240101
    options: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subcommand': self.subcommand,
            'family': list(self.family),
            'x': self.x,
            'prime_bound': self.prime_bound,
            'count_n': self.count_n,
            'output_format': self.output_format.value,
            'checkpoints': list(self.checkpoints),
            'override': self.override,
            'big_int': self.big_int,
            'seed': self.seed,
            'options': dict(self.options),
        }


@dataclass
class PrimeRange:
    """
    Primality flags for [lo, hi).

    Only odd integers are stored, bit-packed little-endian; index i stands
    for first_odd + 2*i. The single even prime is tracked separately.
    """
    lo: int
    hi: int
    bits: np.ndarray
    size: int

    def __post_init__(self):
        if self.lo < 0 or self.hi <= self.lo:
            raise ValueError(f"invalid prime range [{self.lo}, {self.hi})")

    @property
    def first_odd(self) -> int:
        return self.lo | 1

    @property
    def has_two(self) -> bool:
        return self.lo <= 2 < self.hi

    @property
    def flags(self) -> np.ndarray:
        """Unpacked boolean flags for the odd integers of the range."""
        return np.unpackbits(self.bits, count=self.size, bitorder='little').astype(bool)

    def primes(self) -> np.ndarray:
        dtype = np.int64 if self.hi <= 2**63 else np.uint64
        odd = np.flatnonzero(self.flags).astype(dtype) * dtype(2) + dtype(self.first_odd)
        if self.has_two:
            return np.concatenate([np.array([2], dtype=dtype), odd])
        return odd

    def count(self) -> int:
        return int(np.count_nonzero(self.flags)) + (1 if self.has_two else 0)

    def is_prime(self, n: int) -> bool:
        if not self.lo <= n < self.hi:
            raise ValueError(f"{n} outside [{self.lo}, {self.hi})")
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        index = (n - self.first_odd) // 2
        return bool((self.bits[index >> 3] >> (index & 7)) & 1)

    def is_prime_array(self, values: np.ndarray) -> np.ndarray:
        """Vectorised membership test; every value must lie inside the range."""
        values = np.asarray(values, dtype=np.int64)
        result = values == 2
        odd = (values % 2 == 1) & (values >= self.first_odd)
        index = (values[odd] - self.first_odd) // 2
        result[odd] = ((self.bits[index >> 3] >> (index & 7)) & 1).astype(bool)
        return result


@dataclass
class OmegaProfile:
    """Root counts of one polynomial for the small primes."""
    polynomial: str
    table: Dict[int, int]
    methods: Dict[int, OmegaMethod]
    exceptional_primes: List[int]
    cutoff: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'polynomial': self.polynomial,
            'table': {str(p): w for p, w in sorted(self.table.items())},
            'methods': {str(p): m.value for p, m in sorted(self.methods.items())},
            'exceptional_primes': list(self.exceptional_primes),
            'cutoff': self.cutoff,
        }


@dataclass
class ConstantEstimate:
    """A partial Bateman-Horn product accumulated in ascending prime order."""
    family: str
    k: int
    prime_bound: int
    value: float
    log_value: float
    checkpoints: List[Tuple[int, float]] = field(default_factory=list)
    series_checkpoints: List[Tuple[int, float]] = field(default_factory=list)
    divergence_verdict: Optional[Verdict] = None
    tail_bound: Optional[float] = None
    degrees: Tuple[int, ...] = ()
    exact: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family,
            'k': self.k,
            'bound': self.prime_bound,
            'value': self.value,
            'checkpoints': [[b, v] for b, v in self.checkpoints],
            'series': [[b, v] for b, v in self.series_checkpoints],
            'verdict': self.divergence_verdict.value if self.divergence_verdict else None,
            'tail_bound': self.tail_bound,
            'exact': self.exact,
        }


@dataclass
class HlfEstimate:
    """Closed-form constant for a single quadratic at^2+bt+c."""
    a: int
    b: int
    c: int
    epsilon: Fraction
    value: float
    prime_bound: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def to_dict(self) -> Dict[str, Any]:
        return {
            'a': self.a,
            'b': self.b,
            'c': self.c,
            'epsilon': str(self.epsilon),
            'value': self.value,
            'bound': self.prime_bound,
        }


@dataclass
class Prediction:
    """Right-hand side of the conjectured asymptotic."""
    family: str
    constant: float
    degree_product: int
    x: float
    predicted: float
    k: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family,
            'constant': self.constant,
            'degree_product': self.degree_product,
            'x': self.x,
            'predicted': self.predicted,
            'k': self.k,
        }


@dataclass
class CountReport:
    """An empirical count, optionally set against a prediction."""
    family: str
    x: int
    empirical: int
    prediction: Optional[Prediction] = None
    wall_time: float = 0.0
    label: str = "x"

    @property
    def ratio(self) -> Optional[float]:
        if self.prediction is None or self.prediction.predicted <= 0:
            return None
        return self.empirical / self.prediction.predicted

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            'family': self.family,
            self.label: self.x,
            'count': self.empirical,
        }
        if self.prediction is not None:
            record['predicted'] = self.prediction.predicted
            record['ratio'] = self.ratio
        if include_timing:
            record['seconds'] = self.wall_time
        return record


@dataclass
class Chain:
    """A maximal Cunningham chain."""
    kind: ChainKind
    elements: List[int]
    complete: bool = True

    def __len__(self) -> int:
        return len(self.elements)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'length': len(self.elements),
            'elements': ' '.join(str(p) for p in self.elements),
            'complete': self.complete,
        }


@dataclass
class CrtPlan:
    """Congruence data defining t^2+t+k with prescribed nonresidue discriminants."""
    primes: List[int]
    nonresidues: Dict[int, int]
    modulus: int
    k: int
    rule: str = "least-primitive-root"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'primes': list(self.primes),
            'nonresidues': {str(p): r for p, r in self.nonresidues.items()},
            'modulus': str(self.modulus),
            'k': str(self.k),
            'digits': len(str(abs(self.k))),
            'rule': self.rule,
        }


@dataclass
class RaySpec:
    """A ray of the Ulam spiral and its fitted quadratic An^2+bn+c."""
    anchor: Tuple[int, int]
    direction: Direction
    skip: int = 0
    fitted: Optional[Tuple[int, int, int]] = None

    def to_dict(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            'anchor': f"{self.anchor[0]},{self.anchor[1]}",
            'direction': self.direction.name,
            'skip': self.skip,
        }
        if self.fitted is not None:
            record['A'], record['b'], record['c'] = self.fitted
        return record


@dataclass
class RayReport:
    """Prime census along a ray together with its classification."""
    ray: RaySpec
    count: int
    primes_found: int
    classification: str
    constant: Optional[float] = None
    reason: str = ""

    @property
    def half_constant(self) -> Optional[float]:
        return None if self.constant is None else self.constant / 2

    def to_dict(self) -> Dict[str, Any]:
        record = self.ray.to_dict()
        record.update({
            'count': self.count,
            'primes_found': self.primes_found,
            'classification': self.classification,
            'constant': self.constant,
            'half_constant': self.half_constant,
        })
        return record


@dataclass
class Table:
    """A regenerated numeric table; `key` names the column rows are matched on."""
    table_id: str
    columns: List[str]
    rows: List[Dict[str, Any]]
    key: str

    def to_records(self) -> List[Dict[str, Any]]:
        return [{c: row.get(c) for c in self.columns} for row in self.rows]


@dataclass
class GoldenMismatch:
    """One cell that disagrees with the golden table."""
    table_id: str
    key: Any
    column: str
    expected: Any
    actual: Any

    def to_dict(self) -> Dict[str, Any]:
        return {
            'table': self.table_id,
            'key': self.key,
            'column': self.column,
            'expected': self.expected,
            'actual': self.actual,
        }
