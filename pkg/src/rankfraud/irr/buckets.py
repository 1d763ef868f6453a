"""Bucket table lookups shared by install, rating and review counts."""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import Sequence

from rankfraud.core.errors import ValidationError


def bucket_index(value: int, boundaries: Sequence[int]) -> int:
    """Index i with boundaries[i] < value <= boundaries[i + 1]; 0 maps to the first bucket."""
    if value < 0:
        raise ValidationError(f"Counts cannot be negative: {value}")
    if value > boundaries[-1]:
        raise ValidationError(f"Count {value} is above the last bucket boundary {boundaries[-1]}")
    return max(bisect_left(boundaries, value) - 1, 0)


def bucket_of(value: int, boundaries: Sequence[int]) -> tuple[int, int]:
    i = bucket_index(value, boundaries)
    return boundaries[i], boundaries[i + 1]


def install_bucket_index(bucket: tuple[int, int], boundaries: Sequence[int]) -> int:
    """Table index of an install bucket, located by its upper endpoint."""
    return bucket_index(bucket[1], boundaries)


def bucket_label(i: int, boundaries: Sequence[int]) -> str:
    return f"({boundaries[i]},{boundaries[i + 1]}]"
