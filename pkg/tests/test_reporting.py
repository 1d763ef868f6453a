"""Tests for field-run summaries."""

import pandas as pd
import pytest

from rankfraud.core.errors import ValidationError
from rankfraud.stages.reporting.summaries import category_fraud_density, clique_summary, prediction_frame
from rankfraud.types.features import APP_FEATURE_NAMES
from rankfraud.types.model import Prediction


def test_prediction_frame():
    prediction = Prediction(ids=["a", "b"], labels=[1, 0], scores=[[0.2, 0.8], [0.9, 0.1]])
    frame = prediction_frame(prediction)
    assert list(frame.columns) == ["app_id", "label", "score"]
    assert frame["score"].tolist() == [0.8, 0.1]


def test_prediction_frame_length_mismatch():
    with pytest.raises(ValidationError):
        prediction_frame(Prediction(ids=["a"], labels=[1, 0], scores=[[0, 1], [1, 0]]))


def test_category_density(store):
    predictions = pd.DataFrame({"app_id": ["app-a", "app-b", "app-c"], "label": [1, 0, 0], "score": [0.9, 0.4, 0.1]})
    density = category_fraud_density(predictions, store)
    assert density["category"].tolist() == ["Racing", "Tools"]
    assert density["apps"].tolist() == [2, 1]
    assert density["flagged"].tolist() == [1, 0]
    assert density["density"].tolist() == [0.5, 0.0]


def test_category_density_ties_sort_by_name(store):
    predictions = pd.DataFrame({"app_id": ["app-c", "app-a"], "label": [0, 0], "score": [0.1, 0.2]})
    assert category_fraud_density(predictions, store)["category"].tolist() == ["Racing", "Tools"]


def test_category_density_unknown_app(store):
    predictions = pd.DataFrame({"app_id": ["app-q"], "label": [1], "score": [1.0]})
    with pytest.raises(ValidationError, match="app-q"):
        category_fraud_density(predictions, store)


def test_clique_summary():
    frame = pd.DataFrame(0.0, index=range(4), columns=APP_FEATURE_NAMES)
    frame["nCliques"] = [0, 1, 3, 5]
    frame["inCliqueSize"] = [0.0, 0.2, 0.5, 0.9]
    frame["maxCliqueSizeN"] = [0.0, 0.2, 0.4, 0.6]
    summary = clique_summary(frame)
    assert summary["apps"] == 4
    assert summary["with_clique"] == 0.75
    assert summary["with_3_cliques"] == 0.5
    assert summary["in_clique_at_least_third"] == 0.5
    assert summary["largest_clique_share_mean"] == pytest.approx(0.3)
    assert summary["largest_clique_share_max"] == 0.6


def test_clique_summary_empty():
    assert clique_summary(pd.DataFrame(columns=APP_FEATURE_NAMES)) == {"apps": 0}
