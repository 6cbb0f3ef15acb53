"""
Thread pool shared by the sieve, the constant evaluator and the census.

Results are always consumed in submission order, so aggregates do not depend
on the worker count.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, Optional, TypeVar

T = TypeVar('T')
R = TypeVar('R')

logger = logging.getLogger(__name__)


class WorkerPool:
    """Lazily created ThreadPoolExecutor with ordered mapping."""

    def __init__(self, max_workers: int = 1):
        self._max_workers = max(1, min(max_workers, 64))
        self._executor: Optional[ThreadPoolExecutor] = None
        self._lock = threading.Lock()

    @property
    def max_workers(self) -> int:
        return self._max_workers

    def set_workers(self, count: int) -> None:
        """Change the worker count, restarting the executor if one is running."""
        old_count = self._max_workers
        self._max_workers = max(1, min(count, 64))
        if self._executor and old_count != self._max_workers:
            self.shutdown()

    def _ensure_executor(self) -> ThreadPoolExecutor:
        """Ensure thread pool executor is available."""
        with self._lock:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(
                    max_workers=self._max_workers,
                    thread_name_prefix="bh_worker"
                )
                logger.debug(f"Started worker pool with {self._max_workers} threads")
            return self._executor

    def map_ordered(self, func: Callable[[T], R], items: Iterable[T]) -> Iterator[R]:
        """Apply func to items, yielding results in input order."""
        if self._max_workers == 1:
            return map(func, items)
        # executor.map preserves order but submits eagerly; keep a bounded window
        return self._windowed_map(func, items)

    def _windowed_map(self, func: Callable[[T], R], items: Iterable[T]) -> Iterator[R]:
        executor = self._ensure_executor()
        window = 2 * self._max_workers
        pending = []
        for item in items:
            pending.append(executor.submit(func, item))
            if len(pending) >= window:
                yield pending.pop(0).result()
        for future in pending:
            yield future.result()

    def shutdown(self, wait: bool = True) -> None:
        """Shutdown the executor and release its threads."""
        with self._lock:
            if self._executor:
                self._executor.shutdown(wait=wait)
                self._executor = None
