"""DatasetStore: the immutable, validated market dataset plus derived indexes."""

from __future__ import annotations

import datetime as dt
import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import groupby

import structlog

from rankfraud.core.errors import DanglingReferenceError, IngestError, NotFoundError
from rankfraud.types.market import AppRecord, AppSnapshot, LabelSet, Review, ReviewerProfile

logger = structlog.get_logger()


@dataclass(frozen=True)
class DatasetStore:
    """Base tables keyed by id, plus indexes derived once at build time.

    Build through :meth:`build`; direct construction skips validation.
    Plain dicts and pydantic records only, so the store pickles into worker
    processes unchanged.
    """

    apps: dict[str, AppRecord]
    snapshots: dict[str, tuple[AppSnapshot, ...]]
    reviews: dict[str, Review]
    profiles: dict[str, ReviewerProfile]
    labels: LabelSet
    # reviewer -> apps reviewed in this dataset's review table
    reviewer_apps: dict[str, frozenset[str]]
    # reviewer -> full review history (profile list plus review table)
    reviewer_history: dict[str, frozenset[str]]
    # app -> reviews ordered by (date, review_id)
    app_reviews: dict[str, tuple[Review, ...]]
    # reviewer -> own reviews ordered by (date, review_id)
    reviewer_reviews: dict[str, tuple[Review, ...]]
    developer_apps: dict[str, frozenset[str]]
    asset_paths: dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        apps: Iterable[AppRecord],
        snapshots: Iterable[AppSnapshot] = (),
        reviews: Iterable[Review] = (),
        profiles: Iterable[ReviewerProfile] = (),
        labels: LabelSet | None = None,
        asset_paths: dict[str, str] | None = None,
    ) -> DatasetStore:
        labels = labels or LabelSet()
        app_map: dict[str, AppRecord] = {}
        for app in apps:
            if app.app_id in app_map:
                raise IngestError(f"Duplicate app_id: {app.app_id}")
            app_map[app.app_id] = app

        review_map: dict[str, Review] = {}
        for review in reviews:
            if review.review_id in review_map:
                raise IngestError(f"Duplicate review_id: {review.review_id}")
            review_map[review.review_id] = review

        profile_map: dict[str, ReviewerProfile] = {}
        for profile in profiles:
            if profile.reviewer_id in profile_map:
                raise IngestError(f"Duplicate reviewer_id: {profile.reviewer_id}")
            profile_map[profile.reviewer_id] = profile

        snapshot_lists: dict[str, list[AppSnapshot]] = {a: [] for a in app_map}
        dangling: list[str] = []
        for snap in snapshots:
            if snap.app_id not in app_map:
                dangling.append(f"snapshot {snap.app_id}@{snap.capture_date} -> app {snap.app_id}")
                continue
            snapshot_lists[snap.app_id].append(snap)

        for review in review_map.values():
            if review.app_id not in app_map:
                dangling.append(f"review {review.review_id} -> app {review.app_id}")
        for app_id in labels.apps:
            if app_id not in app_map:
                dangling.append(f"label -> app {app_id}")
        for review_id in labels.reviews:
            if review_id not in review_map:
                dangling.append(f"label -> review {review_id}")
        if dangling:
            raise DanglingReferenceError(sorted(dangling))

        snapshot_map: dict[str, tuple[AppSnapshot, ...]] = {}
        for app_id, snaps in snapshot_lists.items():
            snaps.sort(key=lambda s: s.capture_date)
            for prev, cur in zip(snaps, snaps[1:], strict=False):
                if prev.capture_date == cur.capture_date:
                    raise IngestError(f"App {app_id} has two snapshots captured on {cur.capture_date}")
            snapshot_map[app_id] = tuple(snaps)

        ordered = sorted(review_map.values(), key=_review_order)
        app_reviews: dict[str, list[Review]] = {a: [] for a in app_map}
        reviewer_reviews: dict[str, list[Review]] = {}
        reviewer_apps: dict[str, set[str]] = {}
        for review in ordered:
            app_reviews[review.app_id].append(review)
            reviewer_reviews.setdefault(review.reviewer_id, []).append(review)
            reviewer_apps.setdefault(review.reviewer_id, set()).add(review.app_id)

        # Profiles must agree with the review table on dataset apps.
        inconsistent: list[str] = []
        for reviewer_id, profile in profile_map.items():
            listed = set(profile.reviewed_app_ids)
            actual = reviewer_apps.get(reviewer_id, set())
            missing = actual - listed
            if missing and profile.reviewed_app_ids:
                inconsistent.append(f"{reviewer_id}: profile omits {sorted(missing)}")
            phantom = {a for a in listed if a in app_map} - actual
            if phantom:
                inconsistent.append(f"{reviewer_id}: profile lists unreviewed dataset apps {sorted(phantom)}")
        if inconsistent:
            raise IngestError("Reviewer profiles disagree with the review table: " + "; ".join(inconsistent[:20]))

        imputed = 0
        for reviewer_id in sorted(reviewer_apps):
            if reviewer_id not in profile_map:
                profile_map[reviewer_id] = ReviewerProfile(
                    reviewer_id=reviewer_id,
                    reviewed_app_ids=sorted(reviewer_apps[reviewer_id]),
                    imputed=True,
                )
                imputed += 1
            elif not profile_map[reviewer_id].reviewed_app_ids:
                profile_map[reviewer_id] = profile_map[reviewer_id].model_copy(
                    update={"reviewed_app_ids": sorted(reviewer_apps[reviewer_id])}
                )
        if imputed:
            logger.info("dataset.profiles_imputed", count=imputed)

        for app_id, app in list(app_map.items()):
            owned = app_reviews[app_id]
            if not owned:
                continue
            earliest = owned[0].date
            if app.first_review_date is None:
                app_map[app_id] = app.model_copy(update={"first_review_date": earliest})
            elif app.first_review_date > earliest:
                raise IngestError(f"App {app_id} first_review_date {app.first_review_date} is after its review on {earliest}")

        history: dict[str, frozenset[str]] = {}
        for reviewer_id, profile in profile_map.items():
            history[reviewer_id] = frozenset(profile.reviewed_app_ids) | frozenset(reviewer_apps.get(reviewer_id, ()))

        developer_apps: dict[str, set[str]] = {}
        for app in app_map.values():
            developer_apps.setdefault(app.developer_id, set()).add(app.app_id)

        return cls(
            apps=dict(sorted(app_map.items())),
            snapshots=dict(sorted(snapshot_map.items())),
            reviews=dict(sorted(review_map.items())),
            profiles=dict(sorted(profile_map.items())),
            labels=labels,
            reviewer_apps={k: frozenset(v) for k, v in sorted(reviewer_apps.items())},
            reviewer_history=dict(sorted(history.items())),
            app_reviews={k: tuple(v) for k, v in app_reviews.items()},
            reviewer_reviews={k: tuple(v) for k, v in sorted(reviewer_reviews.items())},
            developer_apps={k: frozenset(v) for k, v in sorted(developer_apps.items())},
            asset_paths=dict(asset_paths or {}),
        )

    def app(self, app_id: str) -> AppRecord:
        try:
            return self.apps[app_id]
        except KeyError:
            raise NotFoundError("app", app_id) from None

    def reviews_of(self, app_id: str) -> tuple[Review, ...]:
        self.app(app_id)
        return self.app_reviews[app_id]

    def snapshots_of(self, app_id: str) -> tuple[AppSnapshot, ...]:
        self.app(app_id)
        return self.snapshots.get(app_id, ())

    def latest_snapshot(self, app_id: str) -> AppSnapshot | None:
        snaps = self.snapshots_of(app_id)
        return snaps[-1] if snaps else None

    def profile(self, reviewer_id: str) -> ReviewerProfile:
        try:
            return self.profiles[reviewer_id]
        except KeyError:
            raise NotFoundError("reviewer", reviewer_id) from None

    def history_of(self, reviewer_id: str) -> frozenset[str]:
        return self.reviewer_history.get(reviewer_id, frozenset())

    def canonical_dump(self) -> str:
        """Byte-stable serialization of the base tables (derived indexes excluded)."""
        payload = {
            "apps": [a.model_dump(mode="json") for a in self.apps.values()],
            "snapshots": [s.model_dump(mode="json") for snaps in self.snapshots.values() for s in snaps],
            "reviews": [r.model_dump(mode="json") for r in self.reviews.values()],
            "reviewers": [p.model_dump(mode="json") for p in self.profiles.values()],
            "labels": self.labels.model_dump(mode="json"),
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def summary(self) -> dict[str, int]:
        return {
            "apps": len(self.apps),
            "snapshots": sum(len(s) for s in self.snapshots.values()),
            "reviews": len(self.reviews),
            "reviewers": len(self.profiles),
            "app_labels": len(self.labels.apps),
            "review_labels": len(self.labels.reviews),
        }


def _review_order(review: Review) -> tuple[dt.date, str]:
    return review.date, review.review_id


def daily_review_series(store: DatasetStore, app_id: str) -> list[tuple[dt.date, list[Review]]]:
    """Group an app's reviews by calendar day; days without reviews are omitted."""
    reviews = store.reviews_of(app_id)
    return [(day, list(group)) for day, group in groupby(reviews, key=lambda r: r.date)]
