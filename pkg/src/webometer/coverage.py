"""Journal web-coverage pipeline: CSV journal list in, per-title hit counts
and backlink counts out, with JSONL checkpointing so a run can span several
quota days."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field

from . import backend as be
from .analytics import normalize_url
from .errors import (
    BackendUnavailableError,
    LoadError,
    QuotaError,
    UrlParseError,
)
from .model import Query

CHECKPOINT_FLUSH_EVERY = 100

STATUS_OK = "ok"
STATUS_NO_HITS = "no-hits"
STATUS_QUOTA = "error:quota"
STATUS_UNAVAILABLE = "error:unavailable"

HISTOGRAM_BUCKETS = ("0", "1-9", "10-99", "100-999", ">=1000")


@dataclass(frozen=True)
class JournalRecord:
    title: str
    issn: str | None = None


@dataclass
class CoverageRow:
    journal: JournalRecord
    hits: int = 0
    top_url: str | None = None
    backlinks: int | None = None
    status: str = STATUS_OK

    def to_json_dict(self) -> dict:
        return {
            "title": self.journal.title,
            "issn": self.journal.issn,
            "hits": self.hits,
            "top_url": self.top_url,
            "backlinks": self.backlinks,
            "status": self.status,
        }

    @classmethod
    def from_json_dict(cls, rec: dict) -> "CoverageRow":
        return cls(
            journal=JournalRecord(title=rec["title"], issn=rec.get("issn")),
            hits=int(rec["hits"]),
            top_url=rec.get("top_url"),
            backlinks=rec.get("backlinks"),
            status=rec["status"],
        )


@dataclass
class CoverageReport:
    rows: list[CoverageRow] = field(default_factory=list)
    quota_spent: int = 0

    @property
    def attempted(self) -> list[CoverageRow]:
        return [r for r in self.rows if r.status != STATUS_QUOTA]

    @property
    def covered_fraction(self) -> float:
        attempted = self.attempted
        if not attempted:
            return 0.0
        return sum(1 for r in attempted if r.hits > 0) / len(attempted)

    def hit_histogram(self) -> dict[str, int]:
        hist = {b: 0 for b in HISTOGRAM_BUCKETS}
        for r in self.attempted:
            if r.hits == 0:
                hist["0"] += 1
            elif r.hits < 10:
                hist["1-9"] += 1
            elif r.hits < 100:
                hist["10-99"] += 1
            elif r.hits < 1000:
                hist["100-999"] += 1
            else:
                hist[">=1000"] += 1
        return hist


def load_journal_list(path: str) -> list[JournalRecord]:
    """Parse a "title[,issn]" CSV; blank titles skipped, duplicates dropped."""
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise LoadError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise LoadError("empty file", line=1)
        columns = [c.strip().lower() for c in header]
        if "title" not in columns:
            raise LoadError(f"header must name a 'title' column, got {header}", line=1)
        title_col = columns.index("title")
        issn_col = columns.index("issn") if "issn" in columns else None
        records: list[JournalRecord] = []
        seen: set[str] = set()
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) <= title_col:
                raise LoadError(f"row has {len(row)} columns", line=lineno)
            title = row[title_col].strip()
            if not title:
                continue
            if title in seen:
                continue
            seen.add(title)
            issn = None
            if issn_col is not None and len(row) > issn_col:
                issn = row[issn_col].strip() or None
            records.append(JournalRecord(title=title, issn=issn))
    return records


class Checkpoint:
    """JSONL file of completed coverage rows, keyed by journal title."""

    def __init__(self, path: str | None):
        self.path = path
        self.rows: dict[str, CoverageRow] = {}
        self._pending = 0
        self._fh = None
        if path and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        row = CoverageRow.from_json_dict(json.loads(line))
                        self.rows[row.journal.title] = row

    def append(self, row: CoverageRow) -> None:
        self.rows[row.journal.title] = row
        if not self.path:
            return
        if self._fh is None:
            self._fh = open(self.path, "a", encoding="utf-8")
        self._fh.write(json.dumps(row.to_json_dict()) + "\n")
        self._pending += 1
        if self._pending >= CHECKPOINT_FLUSH_EVERY:
            self._fh.flush()
            self._pending = 0

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def assess_coverage(
    backend: be.SearchBackend,
    journals: list[JournalRecord],
    do_backlinks: bool = False,
    max_journals: int | None = None,
    checkpoint: Checkpoint | None = None,
) -> CoverageReport:
    """Measure web presence per journal title (exact-phrase hit counts).

    Quota exhaustion marks the remaining rows "error:quota" instead of
    failing; a checkpoint lets a later run pick up where this one stopped.
    """
    report = CoverageReport()
    todo = journals[:max_journals] if max_journals is not None else journals
    quota_dead = False
    for journal in todo:
        if checkpoint is not None and journal.title in checkpoint.rows:
            report.rows.append(checkpoint.rows[journal.title])
            continue
        if quota_dead:
            report.rows.append(
                CoverageRow(journal=journal, status=STATUS_QUOTA)
            )
            continue
        row = CoverageRow(journal=journal)
        query = Query(phrase=journal.title)
        try:
            page = be.search(backend, query, start=0, page_size=1)
        except QuotaError:
            quota_dead = True
            report.rows.append(CoverageRow(journal=journal, status=STATUS_QUOTA))
            continue
        except BackendUnavailableError:
            # not checkpointed: transient failures are retried on resume
            row.status = STATUS_UNAVAILABLE
            report.rows.append(row)
            continue
        report.quota_spent += 1
        row.hits = page.estimated_total
        if row.hits == 0:
            row.status = STATUS_NO_HITS
        else:
            row.top_url = page.results[0].url if page.results else None
            if do_backlinks and row.top_url:
                try:
                    target = normalize_url(row.top_url)
                    row.backlinks = be.hit_count(backend, Query(link_target=target))
                    report.quota_spent += 1
                except QuotaError:
                    quota_dead = True
                    report.rows.append(
                        CoverageRow(journal=journal, status=STATUS_QUOTA)
                    )
                    report.quota_spent -= 1  # row not completed; not counted
                    continue
                except (BackendUnavailableError, UrlParseError):
                    row.backlinks = None
        report.rows.append(row)
        if checkpoint is not None:
            checkpoint.append(row)
    if checkpoint is not None:
        checkpoint.close()
    return report


def summarize(report: CoverageReport) -> tuple[str, str]:
    """(text summary, CSV body) for a coverage report."""
    hist = report.hit_histogram()
    lines = [
        f"journals: {len(report.rows)} (attempted {len(report.attempted)})",
        f"covered_fraction: {report.covered_fraction:.4f}",
        "hit_histogram: "
        + ", ".join(f"{b}={hist[b]}" for b in HISTOGRAM_BUCKETS),
        f"quota_spent: {report.quota_spent}",
    ]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["title", "hits", "top_url", "backlinks", "status"])
    for r in report.rows:
        writer.writerow(
            [
                r.journal.title,
                r.hits,
                r.top_url or "",
                "" if r.backlinks is None else r.backlinks,
                r.status,
            ]
        )
    return "\n".join(lines), buf.getvalue()
