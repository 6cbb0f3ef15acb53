"""
Interface definitions for CLI components.
"""

import re
from abc import ABC, abstractmethod
from decimal import Decimal, InvalidOperation
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config.error_handling import ParseError


class CLIInterface(ABC):
    """Interface for command-line interface operations."""

    @abstractmethod
    def display_records(self, records: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None,
                        output_format: Optional[str] = None) -> None:
        """Write result records to stdout in the requested format."""
        pass

    @abstractmethod
    def display_error(self, error_message: str) -> None:
        """Display error message to the user."""
        pass

    @abstractmethod
    def display_success(self, message: str) -> None:
        """Display a status message to the user."""
        pass


class ArgumentValidator:
    """Parses and validates numeric CLI arguments."""

    POWER_PATTERN = re.compile(r'^\s*(\d+)\s*(?:\^|\*\*)\s*(\d+)\s*$')
    POINT_PATTERN = re.compile(r'^\s*(-?\d+)\s*,\s*(-?\d+)\s*$')

    @staticmethod
    def parse_integer(text: str) -> int:
        """
        Exact integer from '1000000', '1e6', '10^6', '10**6' or '1_000_000'.

        Raises:
            ParseError: If the text is not an exact integer
        """
        if isinstance(text, int):
            return text
        raw = str(text).strip().replace('_', '')
        power = ArgumentValidator.POWER_PATTERN.match(raw)
        if power:
            return int(power.group(1)) ** int(power.group(2))
        try:
            value = Decimal(raw)
        except InvalidOperation:
            raise ParseError(f"'{text}' is not an integer")
        if not value.is_finite() or value != value.to_integral_value():
            raise ParseError(f"'{text}' is not an integer")
        return int(value)

    @staticmethod
    def parse_integer_list(text: str) -> List[int]:
        """Comma-separated integers, e.g. '1e3,1e4,1e5'."""
        parts = [p for p in str(text).split(',') if p.strip()]
        if not parts:
            raise ParseError("expected a comma-separated list of integers")
        return [ArgumentValidator.parse_integer(p) for p in parts]

    @staticmethod
    def parse_point(text: str) -> Tuple[int, int]:
        """Lattice point written 'x,y'."""
        match = ArgumentValidator.POINT_PATTERN.match(str(text))
        if not match:
            raise ParseError(f"'{text}' is not a lattice point 'x,y'")
        return int(match.group(1)), int(match.group(2))

    @staticmethod
    def parse_nonresidues(text: str) -> Dict[int, int]:
        """Explicit nonresidue list 'p:r,p:r'."""
        result = {}
        for item in str(text).split(','):
            if not item.strip():
                continue
            if ':' not in item:
                raise ParseError(f"nonresidue entry '{item}' must look like p:r")
            p, r = item.split(':', 1)
            result[ArgumentValidator.parse_integer(p)] = ArgumentValidator.parse_integer(r)
        if not result:
            raise ParseError("empty nonresidue list")
        return result

    @staticmethod
    def validate_side(side: int) -> bool:
        """Spiral sides are odd so the center cell is unique."""
        return side >= 1 and side % 2 == 1
