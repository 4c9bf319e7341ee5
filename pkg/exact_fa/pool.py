"""Bounded worker pool for independent branch, start and run jobs."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Generic, Iterable, List, Optional, Sequence, TypeVar

LOGGER = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class JobResult(Generic[R]):
    """Outcome of one job; exactly one of ``value`` and ``error`` is meaningful."""

    index: int
    value: Optional[R] = None
    error: Optional[BaseException] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _run_one(func: Callable[[T], R], index: int, item: T) -> JobResult[R]:
    try:
        return JobResult(index, value=func(item))
    except Exception as exc:  # noqa: BLE001 - reported per job
        return JobResult(index, error=exc)


class WorkerPool:
    """Runs a function over items inline or on worker processes.

    Results always come back ordered by item index so aggregation is deterministic.
    """

    def __init__(self, workers: int = 1) -> None:
        self.workers = max(1, int(workers))

    def run(self, func: Callable[[T], R], items: Iterable[T]) -> List[JobResult[R]]:
        jobs: Sequence[T] = list(items)
        if self.workers == 1 or len(jobs) < 2:
            return [_run_one(func, index, item) for index, item in enumerate(jobs)]
        LOGGER.debug("Dispatching %d jobs to %d workers", len(jobs), self.workers)
        results: List[JobResult[R]] = []
        with ProcessPoolExecutor(max_workers=min(self.workers, len(jobs))) as executor:
            futures = [executor.submit(_run_one, func, index, item) for index, item in enumerate(jobs)]
            for index, future in enumerate(futures):
                try:
                    results.append(future.result())
                except Exception as exc:  # noqa: BLE001 - pickling or a dead worker
                    LOGGER.error("Job %d did not come back from its worker: %s", index, exc)
                    results.append(JobResult(index, error=exc))
        return sorted(results, key=lambda result: result.index)


__all__ = ["JobResult", "WorkerPool"]
