"""
Ulam spiral geometry, ray fitting and raster rendering.

1 sits at the origin, 2 at (1, 0), and the spiral winds counterclockwise
with y growing upward.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.error_handling import DomainError, InadmissibleFamilyError, ValidationError
from models.core import Direction, EngineConfig, RayReport, RaySpec
from services.bhconstant import hlf_constant
from services.primes import PrimeSieve, is_prime

logger = logging.getLogger(__name__)

PRIME_SHADE = 0
COMPOSITE_SHADE = 255
OVERLAY_SHADE = 128
FIT_SAMPLE = 20


def spiral_coords(n: int) -> Tuple[int, int]:
    """Lattice point of n, computed from its ring and offset."""
    if n < 1:
        raise ValidationError(f"spiral positions start at 1, got {n}")
    if n == 1:
        return 0, 0
    k = (math.isqrt(n - 1) + 1) // 2
    t = n - (2 * k - 1) ** 2 - 1
    side, pos = divmod(t, 2 * k)
    if side == 0:
        return k, -k + 1 + pos
    if side == 1:
        return k - 1 - pos, k
    if side == 2:
        return -k, k - 1 - pos
    return -k + 1 + pos, -k


def spiral_value(x: int, y: int) -> int:
    """The number written at (x, y)."""
    k = max(abs(x), abs(y))
    if k == 0:
        return 1
    m = (2 * k - 1) ** 2
    if x == k and y > -k:
        return m + y + k
    if y == k:
        return m + 3 * k - x
    if x == -k:
        return m + 5 * k - y
    return m + 7 * k + x


def spiral_values_array(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    k = np.maximum(np.abs(xs), np.abs(ys))
    m = (2 * k - 1) ** 2
    values = np.select(
        [k == 0, (xs == k) & (ys > -k), ys == k, xs == -k],
        [np.ones_like(k), m + ys + k, m + 3 * k - xs, m + 5 * k - ys],
        default=m + 7 * k + xs,
    )
    return values


def ray_values(ray: RaySpec, count: int) -> List[int]:
    """Spiral values at anchor + n*direction for n = skip .. skip+count-1."""
    if count < 1:
        raise ValidationError(f"ray length must be positive, got {count}")
    x0, y0 = ray.anchor
    dx, dy = ray.direction.value
    return [spiral_value(x0 + n * dx, y0 + n * dy) for n in range(ray.skip, ray.skip + count)]


def fit_ray_quadratic(values: Sequence[int]) -> Tuple[int, int, int]:
    """
    Integer (A, b, c) with An^2+bn+c equal to the n-th value, n = 1 first.

    Raises:
        DomainError: If the values do not lie on one integer quadratic
    """
    if len(values) < 4:
        raise ValidationError("fitting a ray needs at least 4 values")
    v1, v2, v3 = values[0], values[1], values[2]
    second = v3 - 2 * v2 + v1
    if second % 2:
        raise DomainError(f"second difference {second} is odd: no integer quadratic")
    a = second // 2
    b = (v2 - v1) - 3 * a
    c = v1 - a - b
    for n, value in enumerate(values, start=1):
        if a * n * n + b * n + c != value:
            raise DomainError(f"ray values are not quadratic (mismatch at n = {n})")
    return a, b, c


def fit_ray(anchor: Tuple[int, int], direction: Direction, max_skip: int = 4,
            sample: int = FIT_SAMPLE) -> RaySpec:
    """Fit the ray, skipping up to max_skip leading values that fall off the quadratic."""
    for skip in range(max_skip + 1):
        ray = RaySpec(anchor=anchor, direction=direction, skip=skip)
        try:
            ray.fitted = fit_ray_quadratic(ray_values(ray, sample))
        except DomainError:
            continue
        logger.debug(f"Ray from {anchor} {direction.name} fitted after skipping {skip}")
        return ray
    raise DomainError(
        f"ray from {anchor} towards {direction.name} is not quadratic within {max_skip} skipped values"
    )


def ray_from_value(value: int, direction: Direction, max_skip: int = 4) -> RaySpec:
    """Ray starting at the cell holding value."""
    return fit_ray(spiral_coords(value), direction, max_skip)


def ray_report(ray: RaySpec, count: int, constant_bound: int = 10**6,
               sieve: Optional[PrimeSieve] = None, config: Optional[EngineConfig] = None) -> RayReport:
    """
    Primes among the first `count` ray values and the classification of the
    ray quadratic: reducible rays carry at most one prime, irreducible ones
    get their closed-form constant.
    """
    if ray.fitted is None:
        raise ValidationError("ray report needs a fitted ray")
    config = config or (sieve.config if sieve else EngineConfig())
    a, b, c = ray.fitted
    values = ray_values(ray, count)
    found = sum(1 for v in values if is_prime(v, config.miller_rabin_rounds, config.seed))

    disc = b * b - 4 * a * c
    if disc >= 0 and math.isqrt(disc) ** 2 == disc:
        return RayReport(ray=ray, count=count, primes_found=found, classification="reducible",
                         reason=f"discriminant {disc} is a perfect square")
    try:
        estimate = hlf_constant(a, b, c, constant_bound, sieve, config)
    except InadmissibleFamilyError as e:
        return RayReport(ray=ray, count=count, primes_found=found, classification="irreducible",
                         constant=0.0, reason=e.message)
    return RayReport(ray=ray, count=count, primes_found=found, classification="irreducible",
                     constant=estimate.value)


def render_spiral(side: int, overlays: Sequence[RaySpec] = (),
                  sieve: Optional[PrimeSieve] = None) -> np.ndarray:
    """
    Grayscale raster, row 0 at the top: primes 0, composites 255, overlay
    cells 128 (prime cells stay dark).

    Raises:
        CapacityError: If side^2 bytes exceed the memory budget
    """
    if side < 1 or side % 2 == 0:
        raise ValidationError(f"spiral side must be a positive odd number, got {side}")
    sieve = sieve or PrimeSieve()
    sieve.guard.check_memory(10 * side * side, f"{side}x{side} spiral raster")

    half = side // 2
    cols, rows = np.meshgrid(np.arange(side, dtype=np.int64), np.arange(side, dtype=np.int64))
    values = spiral_values_array(cols - half, half - rows)
    flags = sieve.sieve_range(0, side * side + 1)
    prime = flags.is_prime_array(values.ravel()).reshape(side, side)

    raster = np.full((side, side), COMPOSITE_SHADE, dtype=np.uint8)
    for ray in overlays:
        x, y = ray.anchor
        dx, dy = ray.direction.value
        n = ray.skip
        while abs(x + n * dx) <= half and abs(y + n * dy) <= half:
            raster[half - (y + n * dy), (x + n * dx) + half] = OVERLAY_SHADE
            n += 1
    raster[prime] = PRIME_SHADE
    return raster
