"""Guilt-by-association expansion of seed fraud accounts."""

from __future__ import annotations

from collections.abc import Iterable

import structlog
from pydantic import BaseModel

from rankfraud.storage.dataset import DatasetStore

logger = structlog.get_logger()


class GuiltByAssociation(BaseModel):
    seed_accounts: list[str]
    associated_accounts: list[str]
    # Reviews of seed apps written by seed or associated accounts.
    fraudulent_review_ids: list[str]


def guilt_by_association(
    store: DatasetStore,
    seed_apps: Iterable[str],
    seed_accounts: Iterable[str] = (),
    *,
    min_seed_apps: int = 10,
) -> GuiltByAssociation:
    """Accounts that reviewed at least ``min_seed_apps`` seed fraud apps are treated as fraudulent."""
    seeds = {store.app(a).app_id for a in seed_apps}
    known = set(seed_accounts)

    associated = sorted(
        reviewer
        for reviewer, apps in store.reviewer_apps.items()
        if reviewer not in known and len(apps & seeds) >= min_seed_apps
    )
    suspects = known | set(associated)
    review_ids = sorted(r.review_id for r in store.reviews.values() if r.reviewer_id in suspects and r.app_id in seeds)
    logger.info("labeling.guilt_by_association", seed_apps=len(seeds), associated=len(associated), reviews=len(review_ids))
    return GuiltByAssociation(
        seed_accounts=sorted(known),
        associated_accounts=associated,
        fraudulent_review_ids=review_ids,
    )
