"""Retrieval metrics: average precision and the top-4 group-recall score."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class MetricReport:
    metric: str
    per_query: dict[int, float]
    mean: float

    @property
    def query_count(self) -> int:
        return len(self.per_query)

    def to_dict(self) -> dict:
        return {"metric": self.metric, "mean": self.mean,
                "query_count": self.query_count,
                "per_query": {str(q): v for q, v in self.per_query.items()}}


def average_precision(ranking_ids: list[int], relevant: set[int]) -> float:
    """AP over a ranked id list; the query itself must not appear in either."""
    if not relevant:
        raise ValueError("relevant set is empty")
    hits = 0
    acc = 0.0
    for r, item in enumerate(ranking_ids, start=1):
        if item in relevant:
            hits += 1
            acc += hits / r
    return acc / len(relevant)


def ns_score(ranking_ids_with_query: list[int], group: set[int]) -> float:
    """Count of the 4-member ground-truth group found in the top 4 ranks."""
    if len(group) != 4:
        raise ValueError(f"N-S score needs a group of 4, got {len(group)}")
    return float(len(set(ranking_ids_with_query[:4]) & group))


def aggregate(per_query: dict[int, float], metric: str) -> MetricReport:
    """Arithmetic mean with the per-query breakdown retained."""
    if not per_query:
        raise ValueError("no per-query values to aggregate")
    return MetricReport(metric=metric, per_query=dict(per_query),
                        mean=sum(per_query.values()) / len(per_query))
