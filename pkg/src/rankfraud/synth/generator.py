"""Deterministic synthetic app market with planted fraud campaigns.

Fraud and malware apps are promoted by campaigns: a fixed group of worker
accounts reviews every app of the campaign inside a short window, so each
promoted app carries a planted pseudo clique whose pair weights are at least
the campaign size. Malware apps also ramp up dangerous permissions across
updates and collect malware complaints in genuine reviews. Benign apps keep
installs near ``rating_install_ratio`` times their rating count.
"""

from __future__ import annotations

import datetime as dt
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from rankfraud.config.defaults import DEFAULT_BUCKET_BOUNDARIES
from rankfraud.core.errors import ConfigError, ValidationError
from rankfraud.irr.buckets import bucket_of
from rankfraud.permissions.catalog import PermissionCatalog, load_catalog
from rankfraud.storage.dataset import DatasetStore
from rankfraud.storage.export import export_store
from rankfraud.storage.schema import FORMAT_VERSION
from rankfraud.synth import templates
from rankfraud.types.market import AppRecord, AppSnapshot, LabelSet, Review, ReviewerProfile

logger = structlog.get_logger()

MIN_CLIQUE_SIZE = 3

CATEGORIES = ["Arcade", "Casual", "Education", "Entertainment", "Music", "Photography", "Productivity", "Puzzle", "Racing", "Tools"]


class GenConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    # apps per class
    fraud_apps: int = Field(200, ge=0)
    malware_apps: int = Field(200, ge=0)
    benign_apps: int = Field(200, ge=0)
    honest_reviewers: int = Field(4000, gt=0)
    fraud_workers: int = Field(150, gt=0)
    # None: just enough campaigns to promote every fraud and malware app once
    campaigns: int | None = Field(None, gt=0)
    workers_per_campaign: int = Field(10, gt=0)
    apps_per_campaign: int = Field(20, gt=0)
    window_days: int = Field(2, gt=0)
    market_days: int = Field(180, gt=0)
    start_date: dt.date = dt.date(2015, 1, 1)
    max_apps_per_developer: int = Field(3, gt=0)
    similar_apps: int = Field(5, ge=0)
    snapshots_per_app: int = Field(4, gt=0)
    honest_reviews_benign: tuple[int, int] = (15, 40)
    honest_reviews_promoted: tuple[int, int] = (5, 25)
    # star weights for ratings 1..5
    benign_rating_weights: list[float] = [0.06, 0.06, 0.12, 0.28, 0.48]
    promoted_rating_weights: list[float] = [0.30, 0.20, 0.20, 0.15, 0.15]
    campaign_rating_weights: list[float] = [0.0, 0.0, 0.0, 0.1, 0.9]
    rating_install_ratio: float = Field(100.0, gt=0)
    promoted_install_ratio: tuple[float, float] = (3.0, 25.0)
    ramp_probability: float = 0.8
    indicator_rate: float = 0.3
    complaint_rate: float = 0.15
    coercive_apps: int = Field(6, ge=0)
    coercive_rate: float = 0.4
    external_apps: int = Field(50_000, gt=0)
    honest_history: tuple[int, int] = (0, 30)
    worker_history: tuple[int, int] = (5, 20)

    @field_validator("ramp_probability", "indicator_rate", "complaint_rate", "coercive_rate")
    @classmethod
    def _probability(cls, v: float) -> float:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"probability must be in [0, 1], got {v}")
        return v

    @field_validator("benign_rating_weights", "promoted_rating_weights", "campaign_rating_weights")
    @classmethod
    def _weights(cls, v: list[float]) -> list[float]:
        if len(v) != 5 or any(w < 0 for w in v) or sum(v) <= 0:
            raise ValueError("rating weights need 5 non-negative values with a positive sum")
        return v

    @field_validator("honest_reviews_benign", "honest_reviews_promoted", "honest_history", "worker_history", "promoted_install_ratio")
    @classmethod
    def _range(cls, v: tuple) -> tuple:
        lo, hi = v
        if lo < 0 or lo > hi:
            raise ValueError(f"range must satisfy 0 <= low <= high, got {v}")
        return v

    @model_validator(mode="after")
    def _some_apps(self) -> GenConfig:
        if self.fraud_apps + self.malware_apps + self.benign_apps == 0:
            raise ValueError("config generates no apps")
        return self

    @property
    def promoted_apps(self) -> int:
        return self.fraud_apps + self.malware_apps

    def campaign_count(self) -> int:
        if self.promoted_apps == 0:
            return 0
        return self.campaigns or math.ceil(self.promoted_apps / self.apps_per_campaign)


def check_feasible(config: GenConfig) -> None:
    """Reject shapes the generator cannot realize."""
    problems: list[str] = []
    if config.promoted_apps:
        if config.workers_per_campaign < MIN_CLIQUE_SIZE:
            problems.append(f"workers_per_campaign={config.workers_per_campaign} is below the clique size {MIN_CLIQUE_SIZE}")
        if config.workers_per_campaign > config.fraud_workers:
            problems.append(f"workers_per_campaign={config.workers_per_campaign} exceeds fraud_workers={config.fraud_workers}")
        if config.apps_per_campaign > config.promoted_apps:
            problems.append(f"apps_per_campaign={config.apps_per_campaign} exceeds the {config.promoted_apps} fraud and malware apps")
        if config.campaign_count() * config.apps_per_campaign < config.promoted_apps:
            problems.append(f"{config.campaign_count()} campaigns of {config.apps_per_campaign} apps cannot cover {config.promoted_apps} apps")
    if config.window_days > config.market_days:
        problems.append(f"window_days={config.window_days} exceeds market_days={config.market_days}")
    if config.snapshots_per_app > config.market_days:
        problems.append(f"snapshots_per_app={config.snapshots_per_app} exceeds market_days={config.market_days}")
    top = max(config.honest_reviews_benign[1], config.honest_reviews_promoted[1])
    if top > config.honest_reviewers:
        problems.append(f"an app may need {top} honest reviewers but only {config.honest_reviewers} exist")
    if config.fraud_apps and config.coercive_apps > config.fraud_apps:
        problems.append(f"coercive_apps={config.coercive_apps} exceeds fraud_apps={config.fraud_apps}")
    if problems:
        raise ValidationError("Infeasible generator config: " + "; ".join(problems))


def load_gen_config(path: str | Path) -> GenConfig:
    source = Path(path)
    if not source.is_file():
        raise ConfigError(f"Generator config not found: {source}")
    try:
        return GenConfig(**json.loads(source.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, PydanticValidationError, TypeError) as exc:
        raise ConfigError(f"Invalid generator config {source}: {exc}") from exc


class Campaign(BaseModel):
    campaign_id: str
    workers: list[str]
    apps: list[str]


class GenerationTruth(BaseModel):
    """What was planted, for measuring recovery."""

    format_version: str = FORMAT_VERSION
    seed: int
    campaigns: list[Campaign]
    # app -> campaign workers that reviewed it
    planted_members: dict[str, list[str]]
    coercive_apps: list[str]
    ramped_apps: list[str]


@dataclass(frozen=True)
class GeneratedMarket:
    store: DatasetStore
    labels: LabelSet
    truth: GenerationTruth


@dataclass
class _DraftReview:
    app_id: str
    reviewer_id: str
    day: int
    rating: int
    title: str
    text: str
    fraudulent: bool


class MarketGenerator:
    def __init__(self, config: GenConfig | None = None, catalog: PermissionCatalog | None = None) -> None:
        self.config = config or GenConfig()
        check_feasible(self.config)
        self.catalog = catalog or load_catalog()
        self.rng = np.random.default_rng(self.config.seed)

    def run(self) -> GeneratedMarket:
        cfg = self.config
        labels_by_app = self._app_labels()
        app_ids = sorted(labels_by_app)
        apps = self._apps(app_ids)
        promoted = [a for a in app_ids if labels_by_app[a] != "benign"]
        fraud_only = [a for a in app_ids if labels_by_app[a] == "fraudulent"]
        coercive = sorted(self._sample(fraud_only, cfg.coercive_apps))

        campaigns = self._campaigns(promoted)
        drafts = self._campaign_reviews(campaigns)
        drafts += self._honest_reviews(app_ids, labels_by_app, set(coercive))
        drafts.sort(key=lambda d: (d.day, d.app_id, d.reviewer_id))
        reviews = [
            Review(
                review_id=f"r-{i:07d}",
                app_id=d.app_id,
                reviewer_id=d.reviewer_id,
                date=cfg.start_date + dt.timedelta(days=d.day),
                title=d.title,
                text=d.text,
                rating=d.rating,
            )
            for i, d in enumerate(drafts)
        ]

        snapshots, ramped = self._snapshots(app_ids, labels_by_app, drafts)
        profiles = self._profiles(drafts)
        labels = LabelSet(
            apps=labels_by_app,
            reviews={r.review_id: ("fraudulent" if d.fraudulent else "genuine") for r, d in zip(reviews, drafts, strict=True)},
        )
        store = DatasetStore.build(apps, snapshots, reviews, profiles, labels)

        planted: dict[str, list[str]] = {}
        for d in drafts:
            if d.fraudulent:
                planted.setdefault(d.app_id, []).append(d.reviewer_id)
        truth = GenerationTruth(
            seed=cfg.seed,
            campaigns=campaigns,
            planted_members={a: sorted(m) for a, m in sorted(planted.items())},
            coercive_apps=coercive,
            ramped_apps=sorted(ramped),
        )
        logger.info(
            "synth.generated",
            seed=cfg.seed,
            campaigns=len(campaigns),
            coercive=len(coercive),
            ramped=len(ramped),
            **store.summary(),
        )
        return GeneratedMarket(store=store, labels=labels, truth=truth)

    def _sample(self, items: list[str], k: int) -> list[str]:
        if k <= 0 or not items:
            return []
        idx = self.rng.choice(len(items), size=min(k, len(items)), replace=False)
        return [items[int(i)] for i in idx]

    def _app_labels(self) -> dict[str, str]:
        cfg = self.config
        classes = ["fraudulent"] * cfg.fraud_apps + ["malware"] * cfg.malware_apps + ["benign"] * cfg.benign_apps
        order = self.rng.permutation(len(classes))
        return {f"app-{i:05d}": classes[int(j)] for i, j in enumerate(order)}

    def _apps(self, app_ids: list[str]) -> list[AppRecord]:
        cfg = self.config
        developers: list[str] = []
        dev = 0
        while len(developers) < len(app_ids):
            developers += [f"dev-{dev:04d}"] * int(self.rng.integers(1, cfg.max_apps_per_developer + 1))
            dev += 1
        categories = {a: CATEGORIES[int(self.rng.integers(len(CATEGORIES)))] for a in app_ids}
        by_category: dict[str, list[str]] = {}
        for a in app_ids:
            by_category.setdefault(categories[a], []).append(a)

        records = []
        for app_id, developer in zip(app_ids, developers, strict=False):
            peers = [p for p in by_category[categories[app_id]] if p != app_id]
            price = 0.0 if self.rng.random() < 0.8 else float(self.rng.choice([0.99, 1.99, 2.99]))
            records.append(
                AppRecord(
                    app_id=app_id,
                    developer_id=developer,
                    category=categories[app_id],
                    price=price,
                    similar_app_ids=sorted(self._sample(peers, cfg.similar_apps)),
                )
            )
        return records

    def _campaigns(self, promoted: list[str]) -> list[Campaign]:
        cfg = self.config
        if not promoted:
            return []
        order = [promoted[int(i)] for i in self.rng.permutation(len(promoted))]
        workers = [f"worker-{i:04d}" for i in range(cfg.fraud_workers)]
        campaigns = []
        for c in range(cfg.campaign_count()):
            apps = sorted({order[(c * cfg.apps_per_campaign + j) % len(order)] for j in range(cfg.apps_per_campaign)})
            crew = sorted(self._sample(workers, cfg.workers_per_campaign))
            campaigns.append(Campaign(campaign_id=f"campaign-{c:03d}", workers=crew, apps=apps))
        return campaigns

    def _rating(self, weights: list[float]) -> int:
        p = np.asarray(weights, dtype=float)
        return int(self.rng.choice(5, p=p / p.sum())) + 1

    def _campaign_reviews(self, campaigns: list[Campaign]) -> list[_DraftReview]:
        cfg = self.config
        drafts: list[_DraftReview] = []
        seen: set[tuple[str, str]] = set()
        for campaign in campaigns:
            for app_id in campaign.apps:
                start = int(self.rng.integers(0, cfg.market_days - cfg.window_days + 1))
                for worker in campaign.workers:
                    if (worker, app_id) in seen:
                        continue
                    seen.add((worker, app_id))
                    title, text = templates.fraud_text(self.rng)
                    drafts.append(
                        _DraftReview(
                            app_id=app_id,
                            reviewer_id=worker,
                            day=start + int(self.rng.integers(cfg.window_days)),
                            rating=self._rating(cfg.campaign_rating_weights),
                            title=title,
                            text=text,
                            fraudulent=True,
                        )
                    )
        return drafts

    def _honest_reviews(self, app_ids: list[str], labels: dict[str, str], coercive: set[str]) -> list[_DraftReview]:
        cfg = self.config
        drafts: list[_DraftReview] = []
        for app_id in app_ids:
            label = labels[app_id]
            lo, hi = cfg.honest_reviews_benign if label == "benign" else cfg.honest_reviews_promoted
            weights = cfg.benign_rating_weights if label == "benign" else cfg.promoted_rating_weights
            count = int(self.rng.integers(lo, hi + 1))
            reviewers = self.rng.choice(cfg.honest_reviewers, size=count, replace=False)
            for reviewer in sorted(int(r) for r in reviewers):
                rating = self._rating(weights)
                title, text = templates.honest_text(self.rng, rating)
                if label == "malware" and self.rng.random() < cfg.indicator_rate:
                    rating = int(self.rng.integers(1, 3))
                    title, text = templates.honest_text(self.rng, rating)
                    text = templates.inject(self.rng, text, templates.MALWARE_SENTENCES)
                elif label != "benign" and self.rng.random() < cfg.complaint_rate:
                    rating = int(self.rng.integers(1, 3))
                    title, text = templates.honest_text(self.rng, rating)
                    text = templates.inject(self.rng, text, templates.FRAUD_COMPLAINTS)
                if app_id in coercive and self.rng.random() < cfg.coercive_rate:
                    text = templates.inject(self.rng, text, templates.COERCIVE_SENTENCES)
                drafts.append(
                    _DraftReview(
                        app_id=app_id,
                        reviewer_id=f"user-{reviewer:05d}",
                        day=int(self.rng.integers(cfg.market_days)),
                        rating=rating,
                        title=title,
                        text=text,
                        fraudulent=False,
                    )
                )
        return drafts

    def _capture_days(self) -> list[int]:
        cfg = self.config
        s = cfg.snapshots_per_app
        # Last capture on the final market day, so it sees every review.
        return [cfg.market_days - 1 - (s - 1 - i) * max((cfg.market_days - 1) // s, 1) for i in range(s)]

    def _permissions(self, label: str, steps: int) -> tuple[list[list[str]], bool]:
        """Permission sets per snapshot and whether a dangerous ramp was planted."""
        dangerous = sorted(self.catalog.dangerous)
        normal = sorted(self.catalog.permissions - self.catalog.dangerous)
        base = set(self._sample(normal, int(self.rng.integers(3, 9))))
        ramp = label == "malware" and steps > 1 and self.rng.random() < self.config.ramp_probability
        if label == "malware" and not ramp:
            base |= set(self._sample(dangerous, int(self.rng.integers(3, 7))))
        elif not ramp:
            base |= set(self._sample(dangerous, int(self.rng.integers(0, 4))))
        else:
            base |= set(self._sample(dangerous, int(self.rng.integers(0, 2))))

        sets = [sorted(base)]
        current = set(base)
        ramp_steps: set[int] = set()
        if ramp:
            picks = self.rng.choice(np.arange(1, steps), size=max(1, (steps - 1) // 2), replace=False)
            ramp_steps = {int(i) for i in picks}
        for i in range(1, steps):
            if i in ramp_steps:
                fresh = [p for p in dangerous if p not in current]
                current |= set(self._sample(fresh, int(self.rng.integers(1, 4))))
            elif self.rng.random() < 0.1:
                current |= set(self._sample(normal, 1))
            sets.append(sorted(current))
        return sets, ramp

    def _snapshots(
        self, app_ids: list[str], labels: dict[str, str], drafts: list[_DraftReview]
    ) -> tuple[list[AppSnapshot], list[str]]:
        cfg = self.config
        per_app: dict[str, list[_DraftReview]] = {}
        for d in drafts:
            per_app.setdefault(d.app_id, []).append(d)
        days = self._capture_days()
        top = DEFAULT_BUCKET_BOUNDARIES[-1]

        snapshots: list[AppSnapshot] = []
        ramped: list[str] = []
        for app_id in app_ids:
            label = labels[app_id]
            reviews = per_app.get(app_id, [])
            if label == "benign":
                ratings = max(len(reviews) * int(self.rng.integers(3, 10)), 1)
                installs = ratings * cfg.rating_install_ratio * float(self.rng.lognormal(0.0, 0.3))
            else:
                ratings = max(len(reviews) * int(self.rng.integers(3, 8)), 1)
                installs = ratings * float(self.rng.uniform(*cfg.promoted_install_ratio))
            permission_sets, ramp = self._permissions(label, len(days))
            if ramp:
                ramped.append(app_id)

            for i, day in enumerate(days):
                share = (i + 1) / len(days)
                so_far = [d for d in reviews if d.day <= day]
                snap_installs = min(max(round(installs * share), 1), top)
                snapshots.append(
                    AppSnapshot(
                        app_id=app_id,
                        capture_date=cfg.start_date + dt.timedelta(days=day),
                        rating_count=max(round(ratings * share), len(so_far)),
                        install_bucket=bucket_of(snap_installs, DEFAULT_BUCKET_BOUNDARIES),
                        review_count=len(so_far),
                        aggregate_rating=round(sum(d.rating for d in so_far) / len(so_far), 2) if so_far else None,
                        permissions=permission_sets[i],
                        version_tag=f"1.{i}",
                    )
                )
        return snapshots, ramped

    def _profiles(self, drafts: list[_DraftReview]) -> list[ReviewerProfile]:
        cfg = self.config
        reviewed: dict[str, set[str]] = {}
        for d in drafts:
            reviewed.setdefault(d.reviewer_id, set()).add(d.app_id)

        profiles = []
        for reviewer_id in sorted(reviewed):
            worker = reviewer_id.startswith("worker-")
            lo, hi = cfg.worker_history if worker else cfg.honest_history
            extra = int(self.rng.integers(lo, hi + 1))
            if worker:
                # Jobs outside the dataset come from a small shared pool.
                outside = {f"ext-job-{int(i):04d}" for i in self.rng.integers(0, 200, size=extra)}
                paid = 0.0 if self.rng.random() < 0.9 else round(float(self.rng.uniform(0.99, 4.99)), 2)
                liked, followers = int(self.rng.poisson(2)), int(self.rng.poisson(1))
            else:
                outside = {f"ext-{int(i):05d}" for i in self.rng.integers(0, cfg.external_apps, size=extra)}
                paid = round(float(self.rng.lognormal(1.0, 1.0)), 2) if self.rng.random() < 0.6 else 0.0
                liked, followers = int(self.rng.poisson(20)), int(self.rng.poisson(15))
            profiles.append(
                ReviewerProfile(
                    reviewer_id=reviewer_id,
                    reviewed_app_ids=sorted(reviewed[reviewer_id] | outside),
                    money_paid_total=paid,
                    liked_app_count=liked,
                    follower_count=followers,
                )
            )
        return profiles


def generate(config: GenConfig | None = None) -> tuple[DatasetStore, LabelSet]:
    market = MarketGenerator(config).run()
    return market.store, market.labels


def write_market(market: GeneratedMarket, directory: str | Path) -> Path:
    """Write ingestion files, manifest and the planted truth; returns the manifest path."""
    out = Path(directory)
    manifest = export_store(market.store, out, include_assets=False)
    truth = json.dumps(market.truth.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
    (out / "truth.json").write_text(truth, encoding="utf-8")
    return manifest
