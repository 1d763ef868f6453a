"""Daily positive-review spikes above the upper outer fence."""

from __future__ import annotations

import datetime as dt
from collections import Counter
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel

from rankfraud.types.market import Review


class SpikeReport(BaseModel):
    # 0-based positions in the daily series
    spike_days: list[int] = []
    spike_dates: list[dt.date] = []
    max_amplitude: int = 0
    fence_value: float = 0.0
    insufficient_data: bool = False


def upper_outer_fence(counts: Sequence[int], multiplier: float = 3.0) -> float:
    """Q3 + multiplier * IQR, quartiles by linear interpolation on the sorted series."""
    q1, q3 = np.percentile(np.asarray(counts, dtype=float), [25, 75], method="linear")
    return float(q3 + multiplier * (q3 - q1))


def detect_spikes(counts: Sequence[int], *, multiplier: float = 3.0, min_days: int = 4) -> SpikeReport:
    if len(counts) < min_days:
        return SpikeReport(insufficient_data=True)
    fence = upper_outer_fence(counts, multiplier)
    days = [i for i, c in enumerate(counts) if c > fence]
    return SpikeReport(
        spike_days=days,
        max_amplitude=max((int(counts[i]) for i in days), default=0),
        fence_value=fence,
    )


def daily_positive_counts(
    reviews: Sequence[Review],
    positive_rating: int = 4,
) -> tuple[list[dt.date], list[int]]:
    """Positive reviews per day from the first to the last review day, zero days included."""
    if not reviews:
        return [], []
    first = min(r.date for r in reviews)
    last = max(r.date for r in reviews)
    per_day = Counter(r.date for r in reviews if r.rating >= positive_rating)
    days = [first + dt.timedelta(days=i) for i in range((last - first).days + 1)]
    return days, [per_day.get(d, 0) for d in days]


def app_spikes(
    reviews: Sequence[Review],
    *,
    positive_rating: int = 4,
    multiplier: float = 3.0,
    min_days: int = 4,
) -> SpikeReport:
    days, counts = daily_positive_counts(reviews, positive_rating)
    report = detect_spikes(counts, multiplier=multiplier, min_days=min_days)
    return report.model_copy(update={"spike_dates": [days[i] for i in report.spike_days]})
