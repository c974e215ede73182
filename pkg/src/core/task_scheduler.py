from typing import Any, Callable, Dict, List, Optional, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from datetime import datetime
import asyncio
import hashlib
import logging
import pickle
import time

from src.core.error_handler import ResourceBudgetExceeded
from src.core.state_manager import StateManager


def _signature(fn: Callable) -> Any:
    if isinstance(fn, partial):
        return (_signature(fn.func), fn.args, tuple(sorted(fn.keywords.items())))
    return f"{getattr(fn, '__module__', '')}.{getattr(fn, '__qualname__', repr(fn))}"


def unit_key(fn: Callable, item: Any) -> str:
    """Checkpoint key of one work unit: digest of the function (with any bound
    arguments) and the pickled item."""
    payload = pickle.dumps((_signature(fn), item), protocol=4)
    return hashlib.sha256(payload).hexdigest()[:24]


@dataclass
class Task:
    """One work unit of a stage."""
    task_id: str
    stage: str
    index: int
    key: str = ""
    status: str = "pending"
    started: Optional[datetime] = None
    finished: Optional[datetime] = None


class TaskScheduler:
    """Maps pure functions over work units, in a process pool when jobs > 1.

    Results come back in input order whatever the completion order. With a
    state manager, finished units are checkpointed and skipped on rerun.
    """

    def __init__(self, jobs: int = 1, budget_seconds: Optional[float] = None,
                 state_manager: Optional[StateManager] = None):
        self.logger = logging.getLogger(__name__)
        self.jobs = max(1, jobs)
        self.budget_seconds = budget_seconds
        self.state_manager = state_manager
        self.tasks: Dict[str, Task] = {}
        self.completed_tasks: List[str] = []

    def _task(self, stage: str, index: int, key: str) -> Task:
        task = Task(task_id=f"{stage}:{index}", stage=stage, index=index, key=key)
        self.tasks[task.task_id] = task
        return task

    def _finish(self, task: Task, result: Any) -> None:
        task.status = "completed"
        task.finished = datetime.now()
        self.completed_tasks.append(task.task_id)
        if self.state_manager is not None:
            self.state_manager.mark_done(task.stage, task.key, result)

    def _budget_exceeded(self, stage: str, done: int, total: int) -> ResourceBudgetExceeded:
        checkpoint = str(self.state_manager.directory) if self.state_manager else None
        return ResourceBudgetExceeded(
            f"stage {stage} exceeded {self.budget_seconds}s after {done}/{total} units",
            checkpoint
        )

    async def map(self, fn: Callable, items: Sequence, stage: str = "map") -> List:
        """Apply ``fn`` to every item; raise ResourceBudgetExceeded when the
        stage budget runs out (finished units stay checkpointed)."""
        deadline = None if self.budget_seconds is None else time.monotonic() + self.budget_seconds
        results: List[Any] = [None] * len(items)
        pending: List[Task] = []
        for index in range(len(items)):
            task = self._task(stage, index, unit_key(fn, items[index]))
            if self.state_manager is not None and self.state_manager.is_done(stage, task.key):
                results[index] = self.state_manager.load_result(stage, task.key)
                task.status = "restored"
            else:
                pending.append(task)
        if pending:
            self.logger.info(f"Stage {stage}: {len(pending)} of {len(items)} units to run, jobs={self.jobs}")

        if self.jobs == 1 or len(pending) <= 1:
            for done, task in enumerate(pending):
                if deadline is not None and time.monotonic() > deadline:
                    raise self._budget_exceeded(stage, done, len(pending))
                task.status = "running"
                task.started = datetime.now()
                results[task.index] = fn(items[task.index])
                self._finish(task, results[task.index])
            return results

        loop = asyncio.get_running_loop()
        executor = ProcessPoolExecutor(max_workers=self.jobs)
        try:
            futures = {}
            for task in pending:
                task.status = "running"
                task.started = datetime.now()
                futures[loop.run_in_executor(executor, fn, items[task.index])] = task
            waiting = set(futures)
            while waiting:
                timeout = None if deadline is None else max(0.0, deadline - time.monotonic())
                finished, waiting = await asyncio.wait(
                    waiting, timeout=timeout, return_when=asyncio.FIRST_COMPLETED)
                if not finished:
                    for future in waiting:
                        future.cancel()
                    raise self._budget_exceeded(stage, len(pending) - len(waiting), len(pending))
                for future in finished:
                    task = futures[future]
                    results[task.index] = future.result()
                    self._finish(task, results[task.index])
        finally:
            executor.shutdown(wait=False, cancel_futures=True)
        return results

    def runner(self, stage: str) -> Callable[[Callable, Sequence], List]:
        """Synchronous ``runner(fn, items)`` bound to one stage."""

        def run(fn: Callable, items: Sequence) -> List:
            return asyncio.run(self.map(fn, list(items), stage))

        return run

    def get_task_status(self, task_id: str) -> Optional[str]:
        task = self.tasks.get(task_id)
        return task.status if task else None
