"""
Memory budget, scale caps and output path checks.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import psutil

from config.error_handling import CapacityError, ValidationError
from models.core import EngineConfig


DEFAULT_BUDGET_CAP = 2 * 1024 ** 3


class ResourceGuard:
    """Validates that a computation fits the configured budgets."""

    def __init__(self, config: Optional[EngineConfig] = None,
                 logger: Optional[logging.Logger] = None):
        self.config = config or EngineConfig()
        self.logger = logger or logging.getLogger(__name__)
        self._budget: Optional[int] = None

    @staticmethod
    def available_memory() -> int:
        return int(psutil.virtual_memory().available)

    @property
    def memory_budget(self) -> int:
        """Configured budget, else a quarter of available memory capped at 2 GiB."""
        if self._budget is None:
            if self.config.memory_budget_bytes is not None:
                self._budget = int(self.config.memory_budget_bytes)
            else:
                self._budget = min(self.available_memory() // 4, DEFAULT_BUDGET_CAP)
                self.logger.debug(f"Memory budget derived from available memory: "
                                  f"{self._format_bytes(self._budget)}")
        return self._budget

    def check_memory(self, requested_bytes: int, what: str) -> None:
        """
        Raise CapacityError when an allocation would exceed the budget.

        Args:
            requested_bytes: Size of the planned allocation
            what: Description used in the error message
        """
        budget = self.memory_budget
        if requested_bytes > budget:
            raise CapacityError(
                f"{what} needs {self._format_bytes(requested_bytes)}, "
                f"over the memory budget of {self._format_bytes(budget)}",
                details={'requested_bytes': requested_bytes, 'budget_bytes': budget}
            )

    def check_scale(self, x: Optional[int] = None, prime_bound: Optional[int] = None) -> None:
        """Enforce desk-scale caps unless large runs were allowed."""
        if self.config.allow_large:
            return
        if x is not None and x > self.config.max_x:
            raise CapacityError(
                f"x = {x} exceeds the cap {self.config.max_x}; pass --allow-large to lift it",
                details={'x': x, 'cap': self.config.max_x}
            )
        if prime_bound is not None and prime_bound > self.config.max_prime_bound:
            raise CapacityError(
                f"prime bound {prime_bound} exceeds the cap {self.config.max_prime_bound}; "
                f"pass --allow-large to lift it",
                details={'prime_bound': prime_bound, 'cap': self.config.max_prime_bound}
            )

    def validate_output_path(self, output_path: str) -> Path:
        """
        Check that a report or raster can be written to output_path.

        Raises:
            ValidationError: If the parent directory cannot be created or written
        """
        path = Path(output_path)
        parent = path.parent if str(path.parent) else Path('.')
        try:
            parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ValidationError(
                f"Cannot create directory {parent}: {str(e)}",
                original_exception=e
            )
        if path.exists() and path.is_dir():
            raise ValidationError(f"Output path {output_path} is a directory")
        if not os.access(str(parent), os.W_OK):
            raise ValidationError(f"No write permission for {parent}")
        return path

    def usage_info(self) -> Dict[str, Any]:
        """Snapshot of memory figures for logging."""
        vm = psutil.virtual_memory()
        return {
            'total': self._format_bytes(vm.total),
            'available': self._format_bytes(vm.available),
            'budget': self._format_bytes(self.memory_budget),
        }

    def _format_bytes(self, bytes_value: float) -> str:
        """Format bytes into human-readable string."""
        for unit in ['B', 'KB', 'MB', 'GB', 'TB']:
            if bytes_value < 1024.0:
                return f"{bytes_value:.1f} {unit}"
            bytes_value /= 1024.0
        return f"{bytes_value:.1f} PB"
