"""Per-review and per-app feature vectors."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

REVIEW_SCHEMA = "review-v1"
APP_SCHEMA = "app-v1"


class ReviewFeatures(BaseModel):
    expertise: int = 0
    bias: int = 0
    money_paid: float = 0.0
    liked_count: int = 0
    follower_count: int = 0
    pct_positive_sentences: float = Field(0.0, ge=0, le=100)
    pct_negative_sentences: float = Field(0.0, ge=0, le=100)
    rating: int = Field(3, ge=1, le=5)
    rating_percentile: float = Field(0.0, ge=0, le=100)
    imputed_profile: bool = False

    def vector(self) -> list[float]:
        return [float(getattr(self, name)) for name in REVIEW_FEATURE_NAMES]


REVIEW_FEATURE_NAMES: list[str] = [
    "expertise",
    "bias",
    "money_paid",
    "liked_count",
    "follower_count",
    "pct_positive_sentences",
    "pct_negative_sentences",
    "rating",
    "rating_percentile",
]


class AppFeatures(BaseModel):
    """The 26 canonical app features; serialized under their canonical names."""

    model_config = ConfigDict(populate_by_name=True)

    # co-review cliques
    n_cliques: float = Field(0.0, alias="nCliques")
    max_rho: float = Field(0.0, alias="maxRho")
    med_rho: float = Field(0.0, alias="medRho")
    sd_rho: float = Field(0.0, alias="sdRho")
    max_clique_size_n: float = Field(0.0, alias="maxCliqueSizeN")
    med_clique_size_n: float = Field(0.0, alias="medCliqueSizeN")
    sd_clique_size_n: float = Field(0.0, alias="sdCliqueSizeN")
    in_clique_size: float = Field(0.0, alias="inCliqueSize")
    # reviewer feedback
    mal_w: float = Field(0.0, alias="malW")
    fraud_w: float = Field(0.0, alias="fraudW")
    good_w: float = Field(0.0, alias="goodW")
    fri: float = Field(0.0, alias="FRI")
    # inter-review relation
    spike_days: float = Field(0.0, alias="spikeDays")
    max_spike_amp: float = Field(0.0, alias="maxSpikeAmp")
    i1rt1: float = 0.0
    i2rt2: float = 0.0
    i1rv1: float = 0.0
    i2rv2: float = 0.0
    # permissions
    perm_ct: float = Field(0.0, alias="permCt")
    danger_ct: float = Field(0.0, alias="dangerCt")
    ramp_ct: float = Field(0.0, alias="rampCt")
    danger_ramp: float = Field(0.0, alias="dangerRamp")
    # general
    avg_rating: float = Field(0.0, alias="avgRating")
    review_ct: float = Field(0.0, alias="reviewCt")
    rating_ct: float = Field(0.0, alias="ratingCt")
    install_lower: float = Field(0.0, alias="installLower")

    def vector(self) -> list[float]:
        data = self.model_dump(by_alias=True)
        return [float(data[name]) for name in APP_FEATURE_NAMES]


APP_FEATURE_NAMES: list[str] = [
    (field.alias or name) for name, field in AppFeatures.model_fields.items()
]


class AppFeatureRow(BaseModel):
    """One assembled app: the vector plus degeneracy flags for reporting."""

    app_id: str
    features: AppFeatures
    flags: list[str] = []
    schema_version: str = APP_SCHEMA
