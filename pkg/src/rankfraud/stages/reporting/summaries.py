"""Field-run summaries: per-category fraud density and clique coverage."""

from __future__ import annotations

import pandas as pd

from rankfraud.core.errors import ValidationError
from rankfraud.storage.dataset import DatasetStore
from rankfraud.types.model import Prediction


def prediction_frame(prediction: Prediction) -> pd.DataFrame:
    if len(prediction.ids) != len(prediction.labels):
        raise ValidationError("Prediction ids and labels differ in length")
    return pd.DataFrame(
        {
            "app_id": prediction.ids,
            "label": prediction.labels,
            "score": [s[1] for s in prediction.scores],
        }
    )


def category_fraud_density(predictions: pd.DataFrame, store: DatasetStore) -> pd.DataFrame:
    """Flagged / total apps per category, densest first (ties by category name)."""
    unknown = sorted(set(predictions["app_id"]) - set(store.apps))
    if unknown:
        raise ValidationError(f"Predictions name {len(unknown)} app(s) missing from the dataset, e.g. {unknown[0]}")
    frame = predictions.assign(category=[store.apps[a].category or "(none)" for a in predictions["app_id"]])
    grouped = frame.groupby("category", sort=True).agg(apps=("app_id", "size"), flagged=("label", "sum")).reset_index()
    grouped["density"] = grouped["flagged"] / grouped["apps"]
    grouped = grouped.sort_values(["density", "category"], ascending=[False, True], kind="mergesort")
    return grouped.reset_index(drop=True)[["category", "apps", "flagged", "density"]]


def clique_summary(features: pd.DataFrame) -> dict[str, float]:
    """Share of apps with at least one and at least three cliques, and how much of an app's reviewers they cover."""
    n = len(features)
    if n == 0:
        return {"apps": 0}
    cliques = features["nCliques"]
    return {
        "apps": n,
        "with_clique": float((cliques >= 1).mean()),
        "with_3_cliques": float((cliques >= 3).mean()),
        "in_clique_at_least_third": float((features["inCliqueSize"] >= 1 / 3).mean()),
        "largest_clique_share_mean": float(features["maxCliqueSizeN"].mean()),
        "largest_clique_share_max": float(features["maxCliqueSizeN"].max()),
    }
