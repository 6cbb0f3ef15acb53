"""
Logarithmic integrals and predicted counts.
"""

import logging
import math
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy.integrate import quad

from config.error_handling import DomainError, ValidationError
from models.core import ConstantEstimate, Prediction
from models.polynomial import PolyFamily

logger = logging.getLogger(__name__)

PANELS_PER_DECADE = 4
RELATIVE_TOLERANCE = 1e-12


@lru_cache(maxsize=256)
def log_integral_k(x: float, k: int = 1) -> float:
    """
    Integral of dt/(log t)^k over [2, x].

    The interval is split into log-spaced panels, each integrated by
    adaptive Gauss-Kronrod quadrature, and the panels are summed with fsum.

    Raises:
        DomainError: If x < 2
    """
    if k < 1:
        raise ValidationError(f"integral order must be >= 1, got {k}")
    if x < 2:
        raise DomainError(f"logarithmic integral needs x >= 2, got {x}")
    if x == 2:
        return 0.0

    panels = max(1, int(math.ceil(math.log10(x / 2.0) * PANELS_PER_DECADE)))
    edges = np.geomspace(2.0, float(x), panels + 1)
    edges[0], edges[-1] = 2.0, float(x)

    def integrand(t: float) -> float:
        return math.log(t) ** -k

    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, _ = quad(integrand, lo, hi, epsabs=0.0, epsrel=RELATIVE_TOLERANCE, limit=200)
        pieces.append(value)
    return math.fsum(pieces)


def li(x: float) -> float:
    """Offset logarithmic integral Li(x)."""
    return log_integral_k(x, 1)


def round_half_away(value: float) -> int:
    """Nearest integer, ties away from zero."""
    magnitude = math.floor(abs(value) + 0.5)
    return int(magnitude if value >= 0 else -magnitude)


def predicted_count(constant: float, degree_product: int, x: float, k: int) -> float:
    return constant / degree_product * log_integral_k(x, k)


def predict(family: PolyFamily, estimate: Union[ConstantEstimate, float], x: float,
            label: Optional[str] = None) -> Prediction:
    """
    C / prod(deg f_i) times the k-th logarithmic integral up to x.

    Raises:
        ValidationError: If the estimate was computed for another family
    """
    if isinstance(estimate, ConstantEstimate):
        if estimate.family != family.label or estimate.k != family.k:
            raise ValidationError(
                f"constant for {estimate.family} cannot predict counts of {family.label}"
            )
        constant = estimate.value
    else:
        constant = float(estimate)
    predicted = predicted_count(constant, family.degree_product, x, family.k)
    return Prediction(
        family=label or family.label,
        constant=constant,
        degree_product=family.degree_product,
        x=x,
        predicted=predicted,
        k=family.k,
    )
