"""Dangerous-permission ramps across an app's snapshot history."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Literal

import structlog
from pydantic import BaseModel

from rankfraud.core.errors import ValidationError
from rankfraud.permissions.catalog import PermissionCatalog
from rankfraud.types.market import AppSnapshot

logger = structlog.get_logger()

RampMode = Literal["count", "set"]


class RampReport(BaseModel):
    perm_count: int
    danger_count: int
    ramp_count: int
    danger_added_total: int
    # Transitions as (from_index, to_index) positions in the snapshot list.
    ramps: list[tuple[int, int]] = []
    unknown_permissions: list[str] = []


def ramp_analysis(
    snapshots: Sequence[AppSnapshot],
    catalog: PermissionCatalog,
    mode: RampMode = "count",
) -> RampReport:
    """Scan consecutive snapshot pairs for dangerous-permission ramps.

    In ``count`` mode a ramp is a pair where the number of dangerous permissions
    strictly increases; in ``set`` mode any newly present dangerous permission
    counts. Each ramp adds the number of dangerous permissions new in the later
    snapshot to ``danger_added_total``.
    """
    if not snapshots:
        raise ValidationError("ramp analysis needs at least one snapshot")
    dates = [s.capture_date for s in snapshots]
    if any(a >= b for a, b in zip(dates[:-1], dates[1:], strict=True)):
        raise ValidationError(f"snapshots of {snapshots[0].app_id} are not in chronological order")

    danger_sets = [catalog.dangerous_in(s.permissions) for s in snapshots]
    ramps: list[tuple[int, int]] = []
    added_total = 0
    for i, (before, after) in enumerate(zip(danger_sets[:-1], danger_sets[1:], strict=True)):
        added = after - before
        is_ramp = len(after) > len(before) if mode == "count" else bool(added)
        if is_ramp:
            ramps.append((i, i + 1))
            added_total += len(added)

    unknown = sorted(set().union(*(catalog.unknown_in(s.permissions) for s in snapshots)))
    if unknown:
        logger.info("permissions.unknown", app_id=snapshots[0].app_id, permissions=unknown)

    latest = snapshots[-1]
    return RampReport(
        perm_count=len(latest.permissions),
        danger_count=len(danger_sets[-1]),
        ramp_count=len(ramps),
        danger_added_total=added_total,
        ramps=ramps,
        unknown_permissions=unknown,
    )
