"""Market records: apps, snapshots, reviews, reviewer profiles, labels."""

from __future__ import annotations

import datetime as dt
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

AppLabel = Literal["benign", "fraudulent", "malware"]
ReviewLabel = Literal["genuine", "fraudulent"]


class AppRecord(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    app_id: str = Field(min_length=1)
    developer_id: str = Field(min_length=1)
    category: str = ""
    price: float = Field(0.0, ge=0)
    first_review_date: dt.date | None = None
    similar_app_ids: list[str] = []


class AppSnapshot(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    app_id: str = Field(min_length=1)
    capture_date: dt.date
    rating_count: int = Field(0, ge=0)
    install_bucket: tuple[int, int]
    review_count: int = Field(0, ge=0)
    aggregate_rating: float | None = Field(None, ge=1, le=5)
    permissions: list[str] = []
    version_tag: str = ""

    @field_validator("install_bucket")
    @classmethod
    def _bucket_ordered(cls, v: tuple[int, int]) -> tuple[int, int]:
        lower, upper = v
        if lower < 0 or lower >= upper:
            raise ValueError(f"install bucket must satisfy 0 <= I1 < I2, got ({lower}, {upper}]")
        return v

    @field_validator("permissions")
    @classmethod
    def _canonical_permissions(cls, v: list[str]) -> list[str]:
        return sorted(set(v))

    @property
    def installs_lower(self) -> int:
        return self.install_bucket[0]

    @property
    def installs_upper(self) -> int:
        return self.install_bucket[1]


class Review(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    review_id: str = Field(min_length=1)
    app_id: str = Field(min_length=1)
    reviewer_id: str = Field(min_length=1)
    date: dt.date
    title: str = ""
    text: str = ""
    rating: int = Field(ge=1, le=5)

    def body(self, fields: list[str] | None = None) -> str:
        """Title and text joined, the unit lexicon and keyword matching runs on."""
        parts = [getattr(self, f) for f in (fields or ["title", "text"])]
        return " ".join(p for p in parts if p)


class ReviewerProfile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    reviewer_id: str = Field(min_length=1)
    # May name apps outside the dataset: the account's full review history.
    reviewed_app_ids: list[str] = []
    money_paid_total: float = Field(0.0, ge=0)
    liked_app_count: int = Field(0, ge=0)
    follower_count: int = Field(0, ge=0)
    imputed: bool = False

    @field_validator("reviewed_app_ids")
    @classmethod
    def _canonical_ids(cls, v: list[str]) -> list[str]:
        return sorted(set(v))


class LabelRecord(BaseModel):
    """One line of a labels file: exactly one of app_id / review_id."""

    model_config = ConfigDict(extra="forbid")

    app_id: str | None = None
    review_id: str | None = None
    label: str

    @model_validator(mode="after")
    def _one_target(self) -> LabelRecord:
        if (self.app_id is None) == (self.review_id is None):
            raise ValueError("label record needs exactly one of app_id, review_id")
        allowed = ("benign", "fraudulent", "malware") if self.app_id is not None else ("genuine", "fraudulent")
        if self.label not in allowed:
            raise ValueError(f"label '{self.label}' not in {allowed}")
        return self


class LabelSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    apps: dict[str, AppLabel] = {}
    reviews: dict[str, ReviewLabel] = {}

    def apps_with(self, *labels: str) -> list[str]:
        return sorted(a for a, lab in self.apps.items() if lab in labels)

    def reviews_with(self, *labels: str) -> list[str]:
        return sorted(r for r, lab in self.reviews.items() if lab in labels)
