"""Pearson chi-square test of rating-count vs install-count buckets."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel
from scipy.special import gammaincc
from scipy.stats import chi2_contingency

from rankfraud.core.errors import ValidationError
from rankfraud.irr.buckets import bucket_index, bucket_label, install_bucket_index
from rankfraud.storage.dataset import DatasetStore


class ContingencyTable(BaseModel):
    """Rows are rating-count buckets, columns install-count buckets."""

    counts: list[list[int]]
    row_labels: list[str]
    col_labels: list[str]

    def trimmed(self) -> ContingencyTable:
        """Drop all-zero rows and columns."""
        arr = np.asarray(self.counts, dtype=int).reshape(len(self.row_labels), len(self.col_labels))
        rows = np.flatnonzero(arr.sum(axis=1) > 0)
        cols = np.flatnonzero(arr.sum(axis=0) > 0)
        return ContingencyTable(
            counts=arr[np.ix_(rows, cols)].tolist(),
            row_labels=[self.row_labels[i] for i in rows],
            col_labels=[self.col_labels[j] for j in cols],
        )


class ChiSquareResult(BaseModel):
    statistic: float
    dof: int
    p_value: float
    row_labels: list[str]
    col_labels: list[str]
    observed: list[list[int]]
    expected: list[list[float]]
    residuals: list[list[float]]

    def cells(self) -> pd.DataFrame:
        """Long-form cells for mosaic plotting: row, col, observed, expected, residual."""
        rows = []
        for i, r in enumerate(self.row_labels):
            for j, c in enumerate(self.col_labels):
                rows.append(
                    {
                        "rating_bucket": r,
                        "install_bucket": c,
                        "observed": self.observed[i][j],
                        "expected": self.expected[i][j],
                        "residual": self.residuals[i][j],
                    }
                )
        return pd.DataFrame(rows, columns=["rating_bucket", "install_bucket", "observed", "expected", "residual"])


def chi_square_independence(table: ContingencyTable | Sequence[Sequence[int]]) -> ChiSquareResult:
    if not isinstance(table, ContingencyTable):
        arr = np.asarray(table, dtype=int)
        if arr.ndim != 2:
            raise ValidationError("contingency table must be 2-D")
        table = ContingencyTable(
            counts=arr.tolist(),
            row_labels=[str(i) for i in range(arr.shape[0])],
            col_labels=[str(j) for j in range(arr.shape[1])],
        )
    if any(c < 0 for row in table.counts for c in row):
        raise ValidationError("contingency counts must be non-negative")

    trimmed = table.trimmed()
    observed = np.asarray(trimmed.counts, dtype=float)
    if observed.ndim != 2 or observed.shape[0] < 2 or observed.shape[1] < 2:
        raise ValidationError(f"need at least a 2x2 table after dropping empty rows/columns, got {observed.shape}")

    statistic, _, dof, expected = chi2_contingency(observed, correction=False)
    statistic = float(statistic)
    dof = int(dof)
    p_value = float(gammaincc(dof / 2.0, statistic / 2.0))
    residuals = (observed - expected) / np.sqrt(expected)
    return ChiSquareResult(
        statistic=statistic,
        dof=dof,
        p_value=p_value,
        row_labels=trimmed.row_labels,
        col_labels=trimmed.col_labels,
        observed=observed.astype(int).tolist(),
        expected=expected.tolist(),
        residuals=residuals.tolist(),
    )


def contingency_from_store(store: DatasetStore, boundaries: Sequence[int]) -> ContingencyTable:
    """Bucketize each app's latest rating count against its install bucket."""
    size = len(boundaries) - 1
    counts = np.zeros((size, size), dtype=int)
    for app_id in store.apps:
        snap = store.latest_snapshot(app_id)
        if snap is None:
            continue
        counts[bucket_index(snap.rating_count, boundaries), install_bucket_index(snap.install_bucket, boundaries)] += 1
    labels = [bucket_label(i, boundaries) for i in range(size)]
    return ContingencyTable(counts=counts.tolist(), row_labels=labels, col_labels=list(labels))
