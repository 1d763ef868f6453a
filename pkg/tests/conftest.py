"""Shared fixtures: the hand-written market and a small generated one."""

import datetime as dt
from pathlib import Path

import pytest

from rankfraud.storage.ingest import ingest
from rankfraud.synth.generator import GenConfig, GeneratedMarket, MarketGenerator
from rankfraud.types.market import Review

FIXTURES = Path(__file__).parent / "fixtures"
DAY0 = dt.date(2015, 1, 1)


@pytest.fixture
def market_manifest() -> Path:
    return FIXTURES / "market" / "manifest.json"


@pytest.fixture
def store(market_manifest):
    return ingest(market_manifest)


@pytest.fixture
def make_review():
    counter = iter(range(1_000_000))

    def _make(app_id: str, reviewer_id: str, day: int = 0, rating: int = 5, text: str = "", title: str = "") -> Review:
        return Review(
            review_id=f"r{next(counter):06d}",
            app_id=app_id,
            reviewer_id=reviewer_id,
            date=DAY0 + dt.timedelta(days=day),
            title=title,
            text=text,
            rating=rating,
        )

    return _make


def _small_gen_config(**overrides) -> GenConfig:
    values = {
        "seed": 3,
        "fraud_apps": 20,
        "malware_apps": 20,
        "benign_apps": 20,
        "honest_reviewers": 300,
        "fraud_workers": 30,
        "apps_per_campaign": 10,
        "external_apps": 2000,
        "market_days": 60,
        "coercive_apps": 2,
    }
    values.update(overrides)
    return GenConfig(**values)


@pytest.fixture(scope="session")
def small_market() -> GeneratedMarket:
    return MarketGenerator(_small_gen_config()).run()


@pytest.fixture
def small_gen_config():
    """Factory for a generator config small enough for unit tests."""
    return _small_gen_config
