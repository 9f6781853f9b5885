"""Executes independent checks, sequentially or on a process pool."""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from qcheck.core.telemetry import flush_telemetry, get_meter, get_tracer, init_worker_telemetry

logger = logging.getLogger(__name__)

# OpenTelemetry Metrics
meter = get_meter()
check_counter = meter.create_counter(
    "qcheck.checks.count",
    description="Number of checks executed",
)
check_failure_counter = meter.create_counter(
    "qcheck.checks.failures",
    description="Number of checks that failed or raised",
)

# A check returns (passed, JSON-serialisable witness payload).
CheckFunction = Callable[["CheckTask"], tuple[bool, dict]]


@dataclass(frozen=True)
class CheckTask:
    """One check instance; ``params`` keeps insertion order and stays picklable."""

    check_id: str
    params: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def make(cls, check_id: str, **params: Any) -> "CheckTask":
        return cls(check_id, tuple(params.items()))

    @property
    def family(self) -> str:
        return self.check_id.split(".", 1)[0]

    @property
    def variant(self) -> str:
        return self.check_id.split(".", 1)[1]

    @property
    def param_dict(self) -> dict[str, Any]:
        return dict(self.params)


@dataclass
class CheckOutcome:
    task: CheckTask
    passed: bool
    witness: dict = field(default_factory=dict)
    elapsed_ms: int = 0
    error: str | None = None


def resolve_parallelism(parallelism: int) -> int:
    """``0`` means one worker per CPU."""
    if parallelism < 0:
        raise ValueError(f"parallelism must be >= 0, got {parallelism}")
    return parallelism or os.cpu_count() or 1


def execute_task(run_check: CheckFunction, task: CheckTask) -> CheckOutcome:
    """Run one check; exceptions become failing outcomes."""
    tracer = get_tracer()
    start = time.perf_counter()
    with tracer.start_as_current_span("qcheck.check") as span:
        span.set_attribute("qcheck.check_id", task.check_id)
        try:
            passed, witness = run_check(task)
            error = None
        except Exception as e:
            logger.error(f"Check {task.check_id} {task.param_dict} raised", exc_info=True)
            passed, witness, error = False, {"error": f"{type(e).__name__}: {e}"}, str(e)
        span.set_attribute("qcheck.pass", passed)
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    return CheckOutcome(task, passed, witness, elapsed_ms, error)


def execute_in_worker(run_check: CheckFunction, task: CheckTask) -> CheckOutcome:
    """``execute_task`` for pool workers: the span is exported before the result is returned."""
    outcome = execute_task(run_check, task)
    flush_telemetry()
    return outcome


def _record(outcome: CheckOutcome) -> None:
    labels = {"family": outcome.task.family}
    check_counter.add(1, labels)
    if not outcome.passed:
        check_failure_counter.add(1, labels)


def run_tasks(
    tasks: Iterable[CheckTask],
    run_check: CheckFunction,
    parallelism: int = 1,
    fail_fast: bool = False,
) -> list[CheckOutcome]:
    """
    Execute ``tasks`` and return their outcomes in task order.

    With ``fail_fast`` the outcomes stop at the first failure in task order,
    whatever order the workers finish in.  ``run_check`` must be a module-level
    function when ``parallelism > 1``.
    """
    tasks = list(tasks)
    workers = min(resolve_parallelism(parallelism), max(len(tasks), 1))
    outcomes: list[CheckOutcome] = []

    if workers == 1:
        for task in tasks:
            outcome = execute_task(run_check, task)
            _record(outcome)
            outcomes.append(outcome)
            if fail_fast and not outcome.passed:
                break
        flush_telemetry()
        return outcomes

    logger.info(f"Running {len(tasks)} checks on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers, initializer=init_worker_telemetry) as pool:
        futures = [pool.submit(execute_in_worker, run_check, task) for task in tasks]
        for future in futures:
            outcome = future.result()
            _record(outcome)
            outcomes.append(outcome)
            if fail_fast and not outcome.passed:
                pool.shutdown(wait=True, cancel_futures=True)
                break
    flush_telemetry()
    return outcomes
