# =============================================================================
# FILE: utils/job_runner.py
# PURPOSE:
#   Runs independent jobs either in-process or on a process pool and hands
#   back their outcomes in submission order, so merged output does not depend
#   on which worker finishes first.
# =============================================================================

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence

from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JobOutcome:
    """Result of one job: either a value or the error message that replaced it."""

    index: int
    ok: bool
    value: Any = None
    error: Optional[str] = None


def _progress(enabled: bool) -> Progress:
    return Progress(
        TextColumn("[bold blue]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        console=Console(stderr=True),
        transient=True,
        disable=not enabled,
    )


def _capture(func: Callable[[Any], Any], index: int, payload: Any) -> JobOutcome:
    try:
        return JobOutcome(index, True, value=func(payload))
    except Exception as e:
        return JobOutcome(index, False, error=f"{type(e).__name__}: {e}")


def run_jobs(
    func: Callable[[Any], Any],
    payloads: Sequence[Any],
    jobs: int = 1,
    description: str = "Running jobs",
    show_progress: bool = False,
) -> List[JobOutcome]:
    """
    Apply `func` to every payload.

    Args:
        func: top-level (picklable) callable taking one payload.
        payloads: job inputs; the output list follows this order.
        jobs: worker processes; 1 runs everything in the calling process.
        description: progress bar label.
        show_progress: draw a rich progress bar while jobs run.

    Returns:
        One JobOutcome per payload. Failures are captured, never raised.
    """
    payloads = list(payloads)
    outcomes: List[Optional[JobOutcome]] = [None] * len(payloads)
    jobs = max(1, int(jobs))
    logger.info("Dispatching %d jobs on %d worker(s)", len(payloads), jobs)

    with _progress(show_progress) as progress:
        task = progress.add_task(description, total=len(payloads))
        if jobs == 1:
            for index, payload in enumerate(payloads):
                outcomes[index] = _capture(func, index, payload)
                progress.advance(task)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_capture, func, i, p) for i, p in enumerate(payloads)]
                for future in futures:
                    outcome = future.result()
                    outcomes[outcome.index] = outcome
                    progress.advance(task)

    failed = sum(1 for outcome in outcomes if not outcome.ok)
    if failed:
        logger.warning("%d of %d jobs failed", failed, len(payloads))
    return outcomes
