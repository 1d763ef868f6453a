"""Per-app co-review graph and weighted density."""

from __future__ import annotations

import datetime as dt
from collections.abc import Iterable, Mapping
from itertools import combinations

import networkx as nx

from rankfraud.storage.dataset import DatasetStore


class CoReviewGraph:
    """Reviewers of one app; edge weight = number of apps both reviewed.

    One node per reviewer (repeat reviews of the app collapse onto it, keeping
    every review date). Node order is first review date, then reviewer_id.
    """

    def __init__(self, app_id: str, graph: nx.Graph) -> None:
        self.app_id = app_id
        self.graph = graph

    @classmethod
    def from_weights(
        cls,
        app_id: str,
        weights: Mapping[tuple[str, str], int],
        node_dates: Mapping[str, Iterable[dt.date]] | None = None,
    ) -> CoReviewGraph:
        g = nx.Graph()
        for node, dates in (node_dates or {}).items():
            g.add_node(node, dates=tuple(sorted(dates)))
        for (u, v), w in weights.items():
            if u == v:
                raise ValueError(f"self-edge on {u}")
            for node in (u, v):
                if node not in g:
                    g.add_node(node, dates=())
            if w > 0:
                g.add_edge(u, v, weight=int(w))
        return cls(app_id, g)

    @property
    def nodes(self) -> list[str]:
        return sorted(self.graph.nodes, key=lambda n: (self.dates(n)[:1], n))

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def dates(self, node: str) -> tuple[dt.date, ...]:
        return self.graph.nodes[node].get("dates", ())

    def weight(self, u: str, v: str) -> int:
        if u == v:
            return 0
        data = self.graph.get_edge_data(u, v)
        return int(data["weight"]) if data else 0

    def total_weight(self, nodes: Iterable[str]) -> int:
        members = list(dict.fromkeys(nodes))
        return sum(self.weight(u, v) for u, v in combinations(members, 2))

    def density(self, nodes: Iterable[str] | None = None) -> float:
        members = list(dict.fromkeys(self.graph.nodes if nodes is None else nodes))
        return density_of(self.total_weight(members), len(members))

    def edges(self) -> list[tuple[str, str, int]]:
        out = []
        for u, v, data in self.graph.edges(data=True):
            a, b = (u, v) if u <= v else (v, u)
            out.append((a, b, int(data["weight"])))
        return sorted(out)

    def dump_lines(self) -> list[str]:
        """Node header followed by one ``u v w`` line per edge."""
        lines = [f"app {self.app_id}", "nodes " + " ".join(self.nodes)]
        lines.extend(f"{u} {v} {w}" for u, v, w in self.edges())
        return lines


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def density_of(total_weight: int, n: int) -> float:
    """Sum of edge weights over C(n, 2); 0 for fewer than two nodes."""
    if n < 2:
        return 0.0
    return total_weight / pair_count(n)


def weighted_density(graph: CoReviewGraph, nodes: Iterable[str] | None = None) -> float:
    return graph.density(nodes)


def build_graph(store: DatasetStore, app_id: str, *, include_self_app: bool = True) -> CoReviewGraph:
    reviews = store.reviews_of(app_id)
    node_dates: dict[str, list[dt.date]] = {}
    for r in reviews:
        node_dates.setdefault(r.reviewer_id, []).append(r.date)

    g = nx.Graph()
    for node, dates in node_dates.items():
        g.add_node(node, dates=tuple(sorted(dates)))

    histories = {node: store.history_of(node) for node in node_dates}
    offset = 0 if include_self_app else 1
    for u, v in combinations(sorted(node_dates), 2):
        w = len(histories[u] & histories[v]) - offset
        if w > 0:
            g.add_edge(u, v, weight=w)
    return CoReviewGraph(app_id, g)
