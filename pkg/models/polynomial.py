"""
Integer polynomial models and the admissibility record of a polynomial family.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple


class Irreducibility(Enum):
    """Three-valued irreducibility verdict over the rationals."""
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IntPoly:
    """
    Polynomial in t with integer coefficients, constant term first.

    Trailing zero coefficients are stripped on construction, so equality is
    literal coefficient equality.
    """
    coeffs: Tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        values = [int(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, 'coeffs', tuple(values))

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> "IntPoly":
        return cls(reversed(list(coeffs)))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def content(self) -> int:
        value = 0
        for c in self.coeffs:
            value = gcd(value, c)
        return value

    def primitive_part(self) -> "IntPoly":
        """Divide out the content and make the leading coefficient positive."""
        if self.is_zero:
            return self
        divisor = self.content
        if self.leading < 0:
            divisor = -divisor
        return IntPoly(c // divisor for c in self.coeffs)

    def descending(self) -> List[int]:
        return list(reversed(self.coeffs))

    def __call__(self, n: int) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * n + c
        return value

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero or other.is_zero:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                variable = "t" if power == 1 else f"t^{power}"
                body = variable if magnitude == 1 else f"{magnitude}*{variable}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += sign + body
        return text


@dataclass(frozen=True)
class IrreducibilityVerdict:
    """Verdict plus a factor witnessing reducibility, when one was found."""
    status: Irreducibility
    witness: Optional[IntPoly] = None
    certificate_prime: Optional[int] = None

    def describe(self) -> str:
        if self.status is Irreducibility.REDUCIBLE and self.witness is not None:
            return f"reducible, factor {self.witness}"
        if self.certificate_prime is not None:
            return f"irreducible (mod {self.certificate_prime})"
        return self.status.value


@dataclass
class MemberReport:
    polynomial: IntPoly
    positive_leading: bool
    irreducibility: IrreducibilityVerdict

    def to_dict(self) -> Dict[str, Any]:
        return {
            'polynomial': str(self.polynomial),
            'positive_leading': self.positive_leading,
            'irreducibility': self.irreducibility.describe(),
        }


@dataclass
class AdmissibilityReport:
    """Per-member and family-level hypotheses of the conjecture."""
    members: List[MemberReport]
    distinct: bool
    vanishing_primes: List[int]
    fixed_divisor: int
    shared_factor_pairs: List[Tuple[int, int]] = field(default_factory=list)
    scalar_multiple_pairs: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return (
            all(m.positive_leading for m in self.members)
            and all(m.irreducibility.status is Irreducibility.IRREDUCIBLE for m in self.members)
            and self.distinct
            and not self.shared_factor_pairs
            and not self.vanishing_primes
        )

    def failing_hypotheses(self) -> List[str]:
        """Human-readable reasons the family is not admissible."""
        reasons = []
        for m in self.members:
            if not m.positive_leading:
                reasons.append(f"{m.polynomial}: leading coefficient is not positive")
            if m.irreducibility.status is Irreducibility.REDUCIBLE:
                reasons.append(f"{m.polynomial}: {m.irreducibility.describe()}")
            elif m.irreducibility.status is Irreducibility.UNKNOWN:
                reasons.append(f"{m.polynomial}: irreducibility could not be certified")
        if not self.distinct:
            reasons.append("members are not distinct")
        for i, j in self.shared_factor_pairs:
            reasons.append(f"members {i + 1} and {j + 1} share a common factor")
        for p in self.vanishing_primes:
            reasons.append(f"product vanishes identically modulo {p}")
        return reasons

    def to_dict(self) -> Dict[str, Any]:
        return {
            'members': [m.to_dict() for m in self.members],
            'distinct': self.distinct,
            'vanishing_primes': list(self.vanishing_primes),
            'fixed_divisor': self.fixed_divisor,
            'admissible': self.admissible,
        }


@dataclass
class PolyFamily:
    """Ordered members f_1..f_k with their product and pairwise resultants."""
    members: Tuple[IntPoly, ...]
    product: IntPoly
    pair_resultants: Dict[Tuple[int, int], int]
    admissibility: AdmissibilityReport
    override: bool = False

    @property
    def k(self) -> int:
        return len(self.members)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(m.degree for m in self.members)

    @property
    def degree_product(self) -> int:
        result = 1
        for d in self.degrees:
            result *= d
        return result

    @property
    def vanishing_primes(self) -> List[int]:
        return self.admissibility.vanishing_primes

    @property
    def label(self) -> str:
        return "{" + ", ".join(str(m) for m in self.members) + "}"

    def is_exceptional(self, p: int) -> bool:
        """True when additivity of root counts is not guaranteed at p."""
        if any(m.leading % p == 0 for m in self.members):
            return True
        return any(r % p == 0 for r in self.pair_resultants.values())

    def same_members(self, other: "PolyFamily") -> bool:
        return self.members == other.members
