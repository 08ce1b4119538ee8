"""Daily hit-count collection, JSONL sample storage, and divergence
statistics (lag cross-correlation, ratio summaries)."""

from __future__ import annotations

import csv
import datetime
import json
import math
import os
from dataclasses import dataclass, field

from . import backend as be
from .errors import (
    InsufficientDataError,
    StoreError,
    UndefinedCorrelationError,
)
from .model import Query


@dataclass(frozen=True)
class Sample:
    day: datetime.date
    query_id: str
    interface: str
    hits: int


@dataclass
class Series:
    query_id: str
    interface: str
    points: list[tuple[datetime.date, int]] = field(default_factory=list)

    def as_dict(self) -> dict[datetime.date, int]:
        return dict(self.points)

    @property
    def days(self) -> list[datetime.date]:
        return [d for d, _ in self.points]


class SampleStore:
    """JSONL-backed store of hit-count samples, keyed (day, query, interface)."""

    def __init__(self, path: str):
        self.path = path
        self._samples: dict[tuple[str, str, str], Sample] = {}
        if os.path.exists(path):
            self._load()

    def _load(self) -> None:
        try:
            with open(self.path, encoding="utf-8") as fh:
                for i, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        rec = json.loads(line)
                        s = Sample(
                            day=datetime.date.fromisoformat(rec["day"]),
                            query_id=rec["query"],
                            interface=rec["interface"],
                            hits=int(rec["hits"]),
                        )
                    except (KeyError, ValueError) as exc:
                        raise StoreError(f"{self.path}:{i}: bad sample: {exc}")
                    self._samples[(rec["day"], s.query_id, s.interface)] = s
        except OSError as exc:
            raise StoreError(f"cannot read {self.path}: {exc}") from exc

    def __len__(self) -> int:
        return len(self._samples)

    def upsert(self, sample: Sample) -> bool:
        """Insert or overwrite; returns True if the key already existed."""
        key = (sample.day.isoformat(), sample.query_id, sample.interface)
        existed = key in self._samples
        self._samples[key] = sample
        return existed

    def save(self) -> None:
        tmp = self.path + ".tmp"
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                for key in sorted(self._samples):
                    s = self._samples[key]
                    fh.write(
                        json.dumps(
                            {
                                "day": s.day.isoformat(),
                                "query": s.query_id,
                                "interface": s.interface,
                                "hits": s.hits,
                            }
                        )
                        + "\n"
                    )
            os.replace(tmp, self.path)
        except OSError as exc:
            raise StoreError(f"cannot write {self.path}: {exc}") from exc

    def series(self, query_id: str, interface: str) -> Series:
        points = sorted(
            (s.day, s.hits)
            for s in self._samples.values()
            if s.query_id == query_id and s.interface == interface
        )
        return Series(query_id=query_id, interface=interface, points=points)

    def interfaces(self, query_id: str) -> list[str]:
        return sorted(
            {s.interface for s in self._samples.values() if s.query_id == query_id}
        )

    def export_csv(self, path: str) -> int:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["day", "query", "interface", "hits"])
            n = 0
            for key in sorted(self._samples):
                s = self._samples[key]
                writer.writerow([s.day.isoformat(), s.query_id, s.interface, s.hits])
                n += 1
        return n


@dataclass
class CollectResult:
    appended: int
    updated: int
    gaps: list[tuple[str, str, str]]  # (query_id, backend name, reason)


def collect(
    backends: dict[str, be.SearchBackend],
    queries: dict[str, Query],
    day: datetime.date,
    store: SampleStore,
) -> CollectResult:
    """Record one hit-count sample per (query, backend) for `day`.

    Re-running for the same day overwrites samples in place. A failing
    backend leaves a gap for that pair instead of aborting the batch.
    """
    appended = updated = 0
    gaps: list[tuple[str, str, str]] = []
    for name, backend in backends.items():
        backend.set_observation_date(day)
        for qid, query in queries.items():
            try:
                hits = be.hit_count(backend, query)
            except Exception as exc:  # recorded as gap, batch continues
                gaps.append((qid, name, str(exc)))
                continue
            existed = store.upsert(
                Sample(day=day, query_id=qid, interface=name, hits=hits)
            )
            if existed:
                updated += 1
            else:
                appended += 1
    store.save()
    return CollectResult(appended=appended, updated=updated, gaps=gaps)


def pearson(x: list[float], y: list[float]) -> float:
    """Pearson product-moment correlation of two equal-length series."""
    if len(x) != len(y):
        raise ValueError("series lengths differ")
    if len(x) < 2:
        raise InsufficientDataError("need >= 2 points")
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("constant series")
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass
class LagReport:
    max_lag: int
    correlations: list[tuple[int, float]]  # (lag, r) with y lagging x
    best_lag: int
    best_r: float
    mean_ratio: float

    def to_json_dict(self) -> dict:
        return {
            "max_lag": self.max_lag,
            "correlations": [{"lag": k, "r": r} for k, r in self.correlations],
            "best_lag": self.best_lag,
            "best_r": self.best_r,
            "mean_ratio": self.mean_ratio,
        }


def lag_correlate(x: Series, y: Series, max_lag: int) -> LagReport:
    """Correlate x_t against y_{t+k} for k = 0..max_lag.

    Positive lag means y trails x. best_lag is the smallest k achieving the
    maximum correlation.
    """
    xd, yd = x.as_dict(), y.as_dict()
    correlations: list[tuple[int, float]] = []
    for k in range(max_lag + 1):
        shift = datetime.timedelta(days=k)
        pairs = [
            (xd[d], yd[d + shift]) for d in x.days if d + shift in yd
        ]
        if len(pairs) < 3:
            raise InsufficientDataError(
                f"lag {k}: only {len(pairs)} aligned points (need >= 3)"
            )
        xs, ys = [p[0] for p in pairs], [p[1] for p in pairs]
        correlations.append((k, pearson(xs, ys)))
    best_lag, best_r = max(correlations, key=lambda kr: (kr[1], -kr[0]))
    ratios = [yd[d] / xd[d] for d in x.days if d in yd and xd[d] > 0]
    mean_ratio = sum(ratios) / len(ratios) if ratios else 0.0
    return LagReport(
        max_lag=max_lag,
        correlations=correlations,
        best_lag=best_lag,
        best_r=best_r,
        mean_ratio=mean_ratio,
    )


@dataclass
class RatioSummary:
    mean_ratio: float
    min_ratio: float
    max_ratio: float
    aligned_days: int


def ratio_summary(x: Series, y: Series) -> RatioSummary:
    """Statistics of y_t / x_t over days present in both series with x_t > 0."""
    xd, yd = x.as_dict(), y.as_dict()
    ratios = [yd[d] / xd[d] for d in x.days if d in yd and xd[d] > 0]
    if not ratios:
        raise InsufficientDataError("no aligned days with positive x")
    return RatioSummary(
        mean_ratio=sum(ratios) / len(ratios),
        min_ratio=min(ratios),
        max_ratio=max(ratios),
        aligned_days=len(ratios),
    )
