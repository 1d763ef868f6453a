from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, field_validator

from rankfraud.config.defaults import DEFAULT_BUCKET_BOUNDARIES

LearnerKind = Literal["dt", "rf", "mlp"]


class GraphConfig(BaseModel):
    # Count the app under analysis among a pair's common apps (all weights >= 1).
    include_self_app: bool = True


class PcfConfig(BaseModel):
    theta: float = 3.0
    min_size: int = 3

    @field_validator("theta")
    @classmethod
    def _theta_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("theta must be > 0")
        return v

    @field_validator("min_size")
    @classmethod
    def _min_size(cls, v: int) -> int:
        if v < 3:
            raise ValueError("min_size must be >= 3")
        return v


class SentimentConfig(BaseModel):
    alpha: float = 1.0
    folds: int = 10


class ReviewConfig(BaseModel):
    text_fields: list[Literal["title", "text"]] = Field(default=["title", "text"])
    # At most this many fraudulent reviews per account enter the review-filter training set.
    max_fraud_reviews_per_account: int | None = 2
    gba_min_seed_apps: int = 10
    coercive_min_reviews: int = 2


class IrrConfig(BaseModel):
    positive_rating: int = 4
    fence_multiplier: float = 3.0
    min_days: int = 4
    # Spike series only; the review-count ratio bucket always uses genuine reviews.
    use_genuine_only: bool = False


class JhConfig(BaseModel):
    ramp_mode: Literal["count", "set"] = "count"


class TreeParams(BaseModel):
    min_leaf: int = 2
    confidence: float = 0.25
    prune: bool = True
    max_depth: int | None = None


class ForestParams(BaseModel):
    n_trees: int = 100
    max_features: int | None = None  # None -> ceil(sqrt(n_features))
    min_leaf: int = 1
    max_depth: int | None = None


class MlpParams(BaseModel):
    hidden_units: int | None = None  # None -> ceil((n_features + n_classes) / 2)
    epochs: int = 500
    learning_rate: float = 0.3
    momentum: float = 0.2
    batch_size: int = 32


class LearnConfig(BaseModel):
    dt: TreeParams = TreeParams()
    rf: ForestParams = ForestParams()
    mlp: MlpParams = MlpParams()
    folds: int = 10
    review_learner: LearnerKind = "mlp"
    app_learner: LearnerKind = "rf"


class AssetPaths(BaseModel):
    """Overrides for shipped data files; None uses the bundled asset."""

    permission_catalog: str | None = None
    malware_lexicon: str | None = None
    fraud_lexicon: str | None = None
    benign_lexicon: str | None = None
    coercive_keywords: str | None = None
    sentiment_corpus: str | None = None


class RankFraudConfig(BaseModel):
    graph: GraphConfig = GraphConfig()
    pcf: PcfConfig = PcfConfig()
    sentiment: SentimentConfig = SentimentConfig()
    review: ReviewConfig = ReviewConfig()
    irr: IrrConfig = IrrConfig()
    jh: JhConfig = JhConfig()
    learn: LearnConfig = LearnConfig()
    assets: AssetPaths = AssetPaths()
    bucket_boundaries: list[int] = Field(default_factory=lambda: list(DEFAULT_BUCKET_BOUNDARIES))
    output_dir: str = "./data/runs"
    # 0 uses every available core.
    jobs: int = Field(0, ge=0)
    seed: int = 0
    log_level: Literal["debug", "info", "warning", "error"] = "info"

    @field_validator("bucket_boundaries")
    @classmethod
    def _strictly_increasing(cls, v: list[int]) -> list[int]:
        if len(v) < 2 or any(a >= b for a, b in zip(v[:-1], v[1:], strict=True)):
            raise ValueError("bucket boundaries must be strictly increasing")
        if v[0] != 0:
            raise ValueError("bucket boundaries must start at 0")
        return v
