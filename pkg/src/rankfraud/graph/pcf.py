"""Pseudo Clique Finder: greedy, day-by-day search for dense co-review groups.

For every review day the finder grows the day's densest candidate clique,
then keeps extending it with the reviews of the following days for as long as
each day adds members. A clique is emitted when it has at least ``min_size``
members and weighted density >= theta.
"""

from __future__ import annotations

import datetime as dt
from collections.abc import Sequence
from dataclasses import dataclass, field

import structlog

from rankfraud.config.schema import PcfConfig
from rankfraud.graph.coreview import CoReviewGraph, density_of
from rankfraud.types.graph import PseudoClique
from rankfraud.types.market import Review

logger = structlog.get_logger()

DailyReviews = Sequence[tuple[dt.date, Sequence[Review]]]


@dataclass
class WorkingClique:
    """Work-in-progress clique: members in insertion order plus their summed weight."""

    members: list[str] = field(default_factory=list)
    total_weight: int = 0
    last_day: dt.date | None = None

    @property
    def size(self) -> int:
        return len(self.members)

    def density(self) -> float:
        return density_of(self.total_weight, self.size)

    def add(self, node: str, gain: int, day: dt.date) -> None:
        self.members.append(node)
        self.total_weight += gain
        self.last_day = day

    def copy(self) -> WorkingClique:
        return WorkingClique(list(self.members), self.total_weight, self.last_day)


@dataclass(frozen=True)
class Candidate:
    reviewer_id: str
    date: dt.date
    gain: int


def _day_candidates(reviews: Sequence[Review], exclude: set[str]) -> list[Review]:
    """One review per reviewer (their earliest), skipping current members."""
    seen: set[str] = set()
    out: list[Review] = []
    for r in sorted(reviews, key=lambda r: (r.date, r.review_id)):
        if r.reviewer_id in exclude or r.reviewer_id in seen:
            continue
        seen.add(r.reviewer_id)
        out.append(r)
    return out


def max_density_gain(graph: CoReviewGraph, clique: Sequence[str], candidates: Sequence[Review]) -> Candidate | None:
    """Candidate with the largest summed weight to the clique.

    Ties go to the earlier review date, then the smaller reviewer_id.
    """
    members = set(clique)
    best: Candidate | None = None
    for r in candidates:
        if r.reviewer_id in members:
            continue
        gain = sum(graph.weight(r.reviewer_id, m) for m in clique)
        cand = Candidate(r.reviewer_id, r.date, gain)
        if best is None or (-cand.gain, cand.date, cand.reviewer_id) < (-best.gain, best.date, best.reviewer_id):
            best = cand
    return best


def _grow(graph: CoReviewGraph, clique: WorkingClique, reviews: Sequence[Review], theta: float, day: dt.date) -> None:
    pool = _day_candidates(reviews, set(clique.members))
    while pool:
        cand = max_density_gain(graph, clique.members, pool)
        if cand is None:
            return
        # Density of clique + candidate grows with the gain, so once the best
        # candidate fails the threshold every remaining one does too.
        if density_of(clique.total_weight + cand.gain, clique.size + 1) < theta:
            return
        clique.add(cand.reviewer_id, cand.gain, day)
        pool = [r for r in pool if r.reviewer_id != cand.reviewer_id]


def best_near_clique(
    graph: CoReviewGraph,
    clique: WorkingClique,
    reviews: Sequence[Review],
    theta: float,
    day: dt.date,
) -> WorkingClique:
    """Extend ``clique`` with one day's reviews.

    An empty clique tries every review of the day as root and keeps the
    densest result (first root wins ties); a non-empty one is grown greedily.
    """
    if clique.size > 0:
        grown = clique.copy()
        _grow(graph, grown, reviews, theta, day)
        return grown

    best: WorkingClique | None = None
    max_rho = float("-inf")
    for root in _day_candidates(reviews, set()):
        cand = WorkingClique()
        cand.add(root.reviewer_id, 0, day)
        _grow(graph, cand, reviews, theta, day)
        rho = cand.density()
        if rho > max_rho:
            max_rho = rho
            best = cand
    return best if best is not None else WorkingClique()


def pcf(graph: CoReviewGraph, days: DailyReviews, config: PcfConfig | None = None) -> list[PseudoClique]:
    config = config or PcfConfig()
    theta = config.theta
    found: dict[tuple[str, ...], PseudoClique] = {}

    for d, (seed_day, seed_reviews) in enumerate(days):
        pc = best_near_clique(graph, WorkingClique(), seed_reviews, theta, seed_day)
        n = pc.size
        grew = True
        nd = d + 1
        while nd < len(days) and grew:
            day, reviews = days[nd]
            pc = best_near_clique(graph, pc, reviews, theta, day)
            grew = pc.size > n
            n = pc.size
            nd += 1

        if pc.size < config.min_size or pc.density() < theta:
            continue
        key = tuple(sorted(pc.members))
        if key in found:
            continue
        clique = PseudoClique(
            app_id=graph.app_id,
            members=list(key),
            density=pc.density(),
            total_weight=pc.total_weight,
            seed_day=seed_day,
            day_span=(seed_day, pc.last_day or seed_day),
        )
        found[key] = clique
        logger.debug("pcf.clique_emitted", app_id=graph.app_id, size=clique.size, density=round(clique.density, 4))

    return sorted(found.values(), key=lambda c: (c.seed_day, -c.density, c.members))
