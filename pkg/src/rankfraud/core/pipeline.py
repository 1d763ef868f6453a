"""Sequential stage runner with optional stop point and after-stage hooks."""

from __future__ import annotations

import abc
from collections import defaultdict
from collections.abc import Callable

import structlog

from rankfraud.core.context import RunContext
from rankfraud.core.errors import PipelineError, RankFraudError

logger = structlog.get_logger()

Hook = Callable[[RunContext], RunContext]


class PipelineStage(abc.ABC):
    name: str
    description: str

    @abc.abstractmethod
    def execute(self, ctx: RunContext) -> RunContext: ...


class Pipeline:
    def __init__(self) -> None:
        self._stages: list[PipelineStage] = []
        self._hooks: defaultdict[str, list[Hook]] = defaultdict(list)

    @property
    def stage_names(self) -> list[str]:
        return [s.name for s in self._stages]

    def add_stage(self, stage: PipelineStage) -> Pipeline:
        self._stages.append(stage)
        return self

    def add_hook(self, after_stage: str, callback: Hook) -> None:
        """Run ``callback`` on the context once ``after_stage`` succeeds; hooks run in registration order."""
        self._hooks[after_stage].append(callback)

    def _plan(self, stop_after: str | None) -> list[PipelineStage]:
        if stop_after is None:
            return list(self._stages)
        names = self.stage_names
        if stop_after not in names:
            raise PipelineError(f"unknown stage; choose one of {', '.join(names)}", stop_after)
        return self._stages[: names.index(stop_after) + 1]

    def _execute(self, stage: PipelineStage, ctx: RunContext) -> RunContext:
        log = logger.bind(stage=stage.name)
        log.info("pipeline.stage_started")
        try:
            ctx = stage.execute(ctx)
        except Exception as exc:
            ctx.status = "failed"
            ctx.errors.append(f"[{stage.name}] {exc}")
            if isinstance(exc, RankFraudError):
                log.error("pipeline.stage_failed", error=exc.message, code=exc.code)
                raise
            log.error("pipeline.stage_failed", error=str(exc), exc_type=type(exc).__name__)
            raise PipelineError(str(exc), stage.name) from exc
        log.info("pipeline.stage_completed")
        for hook in self._hooks.get(stage.name, []):
            ctx = hook(ctx)
        return ctx

    def run(self, ctx: RunContext, *, stop_after: str | None = None) -> RunContext:
        plan = self._plan(stop_after)
        ctx.status = "running"
        for stage in plan:
            ctx = self._execute(stage, ctx)
        if stop_after is not None:
            logger.info("pipeline.stopped_after", stage=stop_after)
        ctx.status = "completed"
        return ctx
