"""Co-review graph features: pseudo cliques found by PCF."""

from __future__ import annotations

from collections.abc import Sequence
from itertools import groupby

import numpy as np

from rankfraud.config.schema import RankFraudConfig
from rankfraud.graph.coreview import build_graph
from rankfraud.graph.pcf import pcf
from rankfraud.stages.extraction.extractors.base import AppInputs, ExtractorResult, FeatureModels
from rankfraud.types.graph import PseudoClique


def clique_stats(cliques: Sequence[PseudoClique], n_reviews: int) -> dict[str, float]:
    """Max, median and population SD of clique densities and of clique sizes over ``n_reviews``."""
    if not cliques or n_reviews == 0:
        return dict.fromkeys(
            ("nCliques", "maxRho", "medRho", "sdRho", "maxCliqueSizeN", "medCliqueSizeN", "sdCliqueSizeN", "inCliqueSize"),
            0.0,
        )
    rho = np.asarray([c.density for c in cliques], dtype=float)
    sizes = np.asarray([c.size for c in cliques], dtype=float) / n_reviews
    members = set().union(*(c.members for c in cliques))
    return {
        "nCliques": float(len(cliques)),
        "maxRho": float(rho.max()),
        "medRho": float(np.median(rho)),
        "sdRho": float(np.std(rho)),
        "maxCliqueSizeN": float(sizes.max()),
        "medCliqueSizeN": float(np.median(sizes)),
        "sdCliqueSizeN": float(np.std(sizes)),
        "inCliqueSize": len(members) / n_reviews,
    }


def find_cliques(inputs: AppInputs, config: RankFraudConfig) -> list[PseudoClique]:
    graph = build_graph(inputs.store, inputs.app_id, include_self_app=config.graph.include_self_app)
    days = [(day, list(group)) for day, group in groupby(inputs.reviews, key=lambda r: r.date)]
    return pcf(graph, days, config.pcf)


class CoReviewExtractor:
    name = "coreg"

    def extract(self, inputs: AppInputs, models: FeatureModels, config: RankFraudConfig) -> ExtractorResult:
        if not inputs.reviews:
            return ExtractorResult(values=clique_stats([], 0), flags=["no_reviews"])
        cliques = find_cliques(inputs, config)
        flags = [] if cliques else ["no_cliques"]
        return ExtractorResult(values=clique_stats(cliques, len(inputs.reviews)), flags=flags)
