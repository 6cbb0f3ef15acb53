"""
Polynomial parsing, exact integer arithmetic and admissibility analysis.
"""

import logging
import math
import re
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import divisors, factorint, isprime, prime
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_resultant
from sympy.polys.galoistools import gf_degree, gf_from_int_poly, gf_irreducible_p, gf_monic

from config.error_handling import (
    DomainError, DuplicateMemberError, InadmissibleFamilyError, ParseError,
    ReducibleError, ValidationError, VanishingPrimeError
)
from models.polynomial import (
    AdmissibilityReport, Irreducibility, IrreducibilityVerdict, IntPoly,
    MemberReport, PolyFamily
)

logger = logging.getLogger(__name__)

# Rational-root search factors these coefficients; above this the mod-p certificate is used
RATIONAL_ROOT_LIMIT = 1 << 64


class PolynomialParser:
    """
    Parser for integer polynomials in the variable t.

    Accepted terms: 41, t, -t, 4t, 4*t, t^2, 3*t^5. Whitespace is ignored and
    coefficients may be arbitrarily large.
    """

    TERM_SPLIT = re.compile(r'[+-]?[^+-]+')
    TERM_PATTERN = re.compile(
        r'(?P<sign>[+-]?)(?P<coeff>\d+)?(?P<star>\*)?(?P<var>t)?(?:\^(?P<power>\d+))?'
    )
    FAMILY_SEPARATORS = re.compile(r'[,;]')

    def parse(self, text: str) -> IntPoly:
        """
        Parse one polynomial.

        Raises:
            ParseError: On malformed text
        """
        if text is None:
            raise ParseError("empty polynomial")
        compact = re.sub(r'\s+', '', text)
        if not compact:
            raise ParseError("empty polynomial")

        terms = self.TERM_SPLIT.findall(compact)
        if ''.join(terms) != compact:
            raise ParseError(f"malformed polynomial '{text}'")

        coeffs: Dict[int, int] = {}
        for term in terms:
            power, value = self._parse_term(term, text)
            coeffs[power] = coeffs.get(power, 0) + value

        degree = max(coeffs)
        return IntPoly(coeffs.get(i, 0) for i in range(degree + 1))

    def _parse_term(self, term: str, text: str) -> Tuple[int, int]:
        match = self.TERM_PATTERN.fullmatch(term)
        if not match or not (match.group('coeff') or match.group('var')):
            raise ParseError(f"cannot parse term '{term}' in '{text}'")
        if match.group('star') and not (match.group('coeff') and match.group('var')):
            raise ParseError(f"dangling '*' in term '{term}'")
        if match.group('power') is not None and not match.group('var'):
            raise ParseError(f"exponent without variable in term '{term}'")

        value = int(match.group('coeff')) if match.group('coeff') else 1
        if match.group('sign') == '-':
            value = -value
        if match.group('var'):
            power = int(match.group('power')) if match.group('power') is not None else 1
        else:
            power = 0
        return power, value

    def parse_family(self, text: str) -> List[IntPoly]:
        """Parse a comma- or semicolon-separated list of polynomials."""
        parts = [p for p in self.FAMILY_SEPARATORS.split(text or '') if p.strip()]
        if not parts:
            raise ParseError("family needs at least one polynomial")
        return [self.parse(part) for part in parts]


_parser = PolynomialParser()


def parse_polynomial(text: str) -> IntPoly:
    return _parser.parse(text)


def parse_family(text: str) -> List[IntPoly]:
    return _parser.parse_family(text)


def evaluate(f: IntPoly, n: int) -> int:
    """Exact value f(n) by Horner's rule."""
    return f(n)


def family_product(members: Sequence[IntPoly]) -> IntPoly:
    if not members:
        raise ValidationError("family needs at least one member")
    product = IntPoly((1,))
    for member in members:
        product = product * member
    return product


def fixed_divisor(f: IntPoly) -> int:
    """gcd of f(0), ..., f(deg f); it divides every integer value of f."""
    if f.is_zero:
        raise DomainError("fixed divisor of the zero polynomial is undefined")
    value = 0
    for n in range(f.degree + 1):
        value = math.gcd(value, f(n))
    return value


def vanishing_primes(f: IntPoly) -> List[int]:
    """
    Primes modulo which f vanishes identically.

    A prime above deg f can only qualify by dividing the content, so small
    primes are checked on the fixed divisor and the content is factored.
    """
    divisor = fixed_divisor(f)
    found = {p for p in factorint(f.content) if p > 1}
    for p in range(2, f.degree + 1):
        if divisor % p == 0 and isprime(p):
            found.add(p)
    return sorted(found)


def discriminant_quadratic(f: IntPoly) -> int:
    if f.degree != 2:
        raise DomainError(f"discriminant needs a quadratic, got degree {f.degree} ({f})")
    c, b, a = f.coeffs
    return b * b - 4 * a * c


def _rational_root(f: IntPoly) -> Optional[IntPoly]:
    """A linear factor q*t - r of f with r/q a rational root, if any."""
    if f.coeffs[0] == 0:
        return IntPoly((0, 1))
    lead, const = abs(f.leading), abs(f.coeffs[0])
    for q in divisors(lead):
        for r in divisors(const):
            for signed in (r, -r):
                if math.gcd(signed, q) != 1:
                    continue
                # q^d f(r/q) as an integer
                total = 0
                for i, c in enumerate(f.coeffs):
                    total += c * signed ** i * q ** (f.degree - i)
                if total == 0:
                    return IntPoly((-signed, q))
    return None


def _mod_p_certificate(f: IntPoly, primes: int) -> Optional[int]:
    """First tested prime p with f irreducible over the p-element field."""
    descending = f.descending()
    for i in range(1, primes + 1):
        p = int(prime(i))
        if f.leading % p == 0:
            continue
        reduced = gf_from_int_poly(descending, p)
        if gf_degree(reduced) != f.degree:
            continue
        _, monic = gf_monic(reduced, p, ZZ)
        if gf_irreducible_p(monic, p, ZZ):
            return p
    return None


def irreducibility(f: IntPoly, primes: int = 25) -> IrreducibilityVerdict:
    """
    Three-valued irreducibility test over the rationals.

    Quadratics are decided by the discriminant and cubics by rational-root
    search; otherwise a mod-p irreducibility certificate is sought over the
    first `primes` primes.

    Raises:
        DomainError: For zero or constant polynomials
    """
    if f.degree < 1:
        raise DomainError(f"irreducibility needs a nonconstant polynomial, got {f}")
    g = f.primitive_part()

    if g.degree == 1:
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE)

    if g.degree == 2:
        c, b, a = g.coeffs
        disc = b * b - 4 * a * c
        if disc >= 0 and math.isqrt(disc) ** 2 == disc:
            s = math.isqrt(disc)
            # root (-b + s) / 2a gives the factor 2a*t + b - s
            witness = IntPoly((b - s, 2 * a)).primitive_part()
            return IrreducibilityVerdict(Irreducibility.REDUCIBLE, witness=witness)
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE)

    small = abs(g.leading) < RATIONAL_ROOT_LIMIT and abs(g.coeffs[0]) < RATIONAL_ROOT_LIMIT
    if small or g.coeffs[0] == 0:
        witness = _rational_root(g)
        if witness is not None:
            return IrreducibilityVerdict(Irreducibility.REDUCIBLE, witness=witness.primitive_part())
        if g.degree == 3:
            return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE)

    certificate = _mod_p_certificate(g, primes)
    if certificate is not None:
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE, certificate_prime=certificate)
    return IrreducibilityVerdict(Irreducibility.UNKNOWN)


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g) by the subresultant pseudo-remainder sequence."""
    if f.is_zero or g.is_zero:
        return 0
    return int(dup_resultant(f.descending(), g.descending(), ZZ))


def check_family(members: Sequence[IntPoly], override: bool = False,
                 irreducibility_primes: int = 25) -> PolyFamily:
    """
    Build a family with its product, pairwise resultants and admissibility report.

    Raises:
        ValidationError: For an empty family or a zero/constant member
        DuplicateMemberError: When a polynomial is listed twice
    """
    if not members:
        raise ValidationError("family needs at least one member")
    for member in members:
        if member.is_zero:
            raise ValidationError("family members must be nonzero polynomials")
        if member.degree < 1:
            raise ValidationError(f"family member {member} is constant")

    seen: Dict[IntPoly, int] = {}
    for i, member in enumerate(members):
        if member in seen:
            raise DuplicateMemberError(
                f"{member} is listed twice (members {seen[member] + 1} and {i + 1})",
                details={'polynomial': str(member)}
            )
        seen[member] = i

    scalar_pairs = []
    primitive = [m.primitive_part() for m in members]
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if primitive[i] == primitive[j]:
                scalar_pairs.append((i, j))
                logger.warning(f"{members[i]} and {members[j]} are scalar multiples of each other")

    product = family_product(members)
    resultants: Dict[Tuple[int, int], int] = {}
    shared = []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            value = resultant(members[i], members[j])
            resultants[(i, j)] = value
            if value == 0:
                shared.append((i, j))

    reports = [
        MemberReport(
            polynomial=m,
            positive_leading=m.leading > 0,
            irreducibility=irreducibility(m, irreducibility_primes)
        )
        for m in members
    ]
    report = AdmissibilityReport(
        members=reports,
        distinct=True,
        vanishing_primes=vanishing_primes(product),
        fixed_divisor=fixed_divisor(product),
        shared_factor_pairs=shared,
        scalar_multiple_pairs=scalar_pairs,
    )
    family = PolyFamily(
        members=tuple(members),
        product=product,
        pair_resultants=resultants,
        admissibility=report,
        override=override,
    )
    logger.debug(f"Checked family {family.label}: admissible={report.admissible}")
    return family


def require_admissible(family: PolyFamily) -> PolyFamily:
    """
    Refuse inadmissible families unless the override flag is set.

    Raises:
        InadmissibleFamilyError: Naming the first failing hypothesis
    """
    report = family.admissibility
    if report.admissible:
        return family
    reasons = report.failing_hypotheses()
    if family.override:
        logger.warning(f"Proceeding with inadmissible family {family.label}: {'; '.join(reasons)}")
        return family

    for m in report.members:
        if m.irreducibility.status is Irreducibility.REDUCIBLE:
            witness = str(m.irreducibility.witness) if m.irreducibility.witness else None
            raise ReducibleError(f"{m.polynomial} is {m.irreducibility.describe()}", witness=witness)
    for i, j in report.shared_factor_pairs:
        raise ReducibleError(
            f"{family.members[i]} and {family.members[j]} share a common factor",
            details={'members': [i + 1, j + 1]}
        )
    if report.vanishing_primes:
        p = report.vanishing_primes[0]
        raise VanishingPrimeError(
            f"product of {family.label} vanishes identically modulo {p}", prime=p
        )
    raise InadmissibleFamilyError(
        f"{family.label} is not admissible: {'; '.join(reasons)}",
        details={'reasons': reasons}
    )


def load_family(text: str, override: bool = False, irreducibility_primes: int = 25) -> PolyFamily:
    """Parse, check and gate a family given as text."""
    return require_admissible(check_family(parse_family(text), override, irreducibility_primes))
