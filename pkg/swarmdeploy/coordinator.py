"""Coordinator for bench points."""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
import logging
from typing import Any, TypeVar

from .const import BENCH_POINT_TIMEOUT, BENCH_WORKERS
from .model import DeploymentError

_LOGGER = logging.getLogger(__name__)

_Point = TypeVar("_Point")

Row = dict[str, Any]


class BenchCoordinator:
    """Run independent bench points on a worker pool, each under a timeout."""

    name: str
    concurrency: int
    timeout: float

    def __init__(
        self,
        name: str,
        concurrency: int = BENCH_WORKERS,
        timeout: float = BENCH_POINT_TIMEOUT,
    ) -> None:
        """Initialize the coordinator."""
        self.name = name
        self.concurrency = max(1, concurrency)
        self.timeout = timeout

    async def async_run(
        self, points: Sequence[_Point], row_fn: Callable[[_Point], Row]
    ) -> list[Row]:
        """Evaluate every point and return the rows in point order."""
        loop = asyncio.get_running_loop()
        executor = ThreadPoolExecutor(
            max_workers=self.concurrency, thread_name_prefix=self.name
        )

        async def evaluate(index: int, point: _Point) -> tuple[int, Row]:
            try:
                async with asyncio.timeout(self.timeout):
                    row = await loop.run_in_executor(executor, row_fn, point)
            except TimeoutError as err:
                raise BenchFailed(
                    f"{self.name} point {point!r} exceeded {self.timeout}s"
                ) from err
            _LOGGER.debug("%s point %s done: %s", self.name, index, row)
            return index, row

        try:
            results = await asyncio.gather(
                *(evaluate(index, point) for index, point in enumerate(points))
            )
        except BaseException:
            # Worker threads cannot be interrupted; queued points are dropped
            # and running ones are left to finish on their own.
            executor.shutdown(wait=False, cancel_futures=True)
            raise
        executor.shutdown(wait=True)

        _LOGGER.info("%s finished %s points", self.name, len(results))
        return [row for _, row in sorted(results, key=lambda result: result[0])]

    def run(
        self, points: Sequence[_Point], row_fn: Callable[[_Point], Row]
    ) -> list[Row]:
        """Blocking wrapper around async_run."""
        return asyncio.run(self.async_run(points, row_fn))


class BenchFailed(DeploymentError):
    """Error to indicate a bench point did not finish in time."""
