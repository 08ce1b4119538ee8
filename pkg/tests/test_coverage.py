import csv
import datetime
import io

import pytest

from webometer.backend import QuotaMeter, SimBackend
from webometer.coverage import (
    STATUS_NO_HITS,
    STATUS_OK,
    STATUS_QUOTA,
    Checkpoint,
    CoverageReport,
    CoverageRow,
    JournalRecord,
    assess_coverage,
    load_journal_list,
    summarize,
)
from webometer.errors import LoadError
from webometer.sim_index import InterfaceKind

from oracles import brute_backlinks


# --- journal list loading ---------------------------------------------------

def test_load_skips_blank_titles(tmp_path):
    path = tmp_path / "j.csv"
    path.write_text("title,issn\nAlpha,1234-5678\n,\nBeta,\n")
    records = load_journal_list(str(path))
    assert [r.title for r in records] == ["Alpha", "Beta"]
    assert records[0].issn == "1234-5678"
    assert records[1].issn is None


def test_load_reordered_header(tmp_path):
    path = tmp_path / "j.csv"
    path.write_text("issn,title\n1111-2222,Gamma\n")
    records = load_journal_list(str(path))
    assert records == [JournalRecord(title="Gamma", issn="1111-2222")]


def test_load_deduplicates_titles(tmp_path):
    path = tmp_path / "j.csv"
    path.write_text("title\nSame\nSame\nOther\n")
    assert [r.title for r in load_journal_list(str(path))] == ["Same", "Other"]


def test_load_missing_file():
    with pytest.raises(LoadError):
        load_journal_list("/nonexistent/journals.csv")


def test_load_bad_header(tmp_path):
    path = tmp_path / "j.csv"
    path.write_text("name\nAlpha\n")
    with pytest.raises(LoadError, match="line 1"):
        load_journal_list(str(path))


# --- planted fixture --------------------------------------------------------

def planted_fixture(corpus, n_present=30, n_absent=20):
    """50 journal titles: n_present single-word titles planted in the corpus
    vocabulary (guaranteed hits), n_absent made-up words (guaranteed zero)."""
    present_terms = sorted({t for d in corpus.documents for t in d.terms})
    titles = [corpus.vocab[t] for t in present_terms[:n_present]]
    titles += [f"zzzjournal{i}" for i in range(n_absent)]
    return [JournalRecord(title=t) for t in titles]


def test_fixture_covered_fraction(small_corpus):
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    journals = planted_fixture(small_corpus)
    assert len(journals) == 50
    report = assess_coverage(backend, journals)
    assert report.covered_fraction == pytest.approx(0.60)
    assert sum(1 for r in report.rows if r.status == STATUS_OK) == 30
    assert sum(1 for r in report.rows if r.status == STATUS_NO_HITS) == 20
    assert report.quota_spent == 50


def test_backlink_counts_match_link_graph(small_corpus, small_config):
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    journals = planted_fixture(small_corpus, n_present=10, n_absent=0)
    report = assess_coverage(backend, journals, do_backlinks=True)
    day = backend.day
    checked = 0
    for row in report.rows:
        if row.status != STATUS_OK:
            continue
        assert row.top_url is not None
        target = next(
            d.doc_id for d in small_corpus.documents if d.url == row.top_url
        )
        oracle = brute_backlinks(
            small_corpus.documents, target, small_config, InterfaceKind.STANDARD, day
        )
        assert row.backlinks == len(oracle)
        checked += 1
    assert checked == 10
    assert report.quota_spent == 10 + sum(
        1 for r in report.rows if r.backlinks is not None
    )


def test_empty_journal_list(small_corpus):
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    report = assess_coverage(backend, [])
    assert report.rows == []
    assert report.covered_fraction == 0.0


# --- quota handling and resume ---------------------------------------------

def test_quota_exhaustion_truncates(small_corpus, clock):
    meter = QuotaMeter(daily_limit=20, clock=clock)
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD, quota=meter)
    journals = planted_fixture(small_corpus)
    report = assess_coverage(backend, journals)
    quota_rows = [r for r in report.rows if r.status == STATUS_QUOTA]
    assert len(quota_rows) == 30
    assert len(report.rows) == 50
    assert report.quota_spent == 20


def test_resume_equals_uninterrupted_run(small_corpus, clock, tmp_path):
    journals = planted_fixture(small_corpus)

    # uninterrupted reference run (no quota pressure)
    ref_backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    reference = assess_coverage(ref_backend, journals, do_backlinks=True)

    # quota-limited run: stops partway, then resumes on the next day
    meter = QuotaMeter(daily_limit=40, clock=clock)
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD, quota=meter)
    ckpt_path = str(tmp_path / "ckpt.jsonl")
    first = assess_coverage(
        backend, journals, do_backlinks=True, checkpoint=Checkpoint(ckpt_path)
    )
    assert any(r.status == STATUS_QUOTA for r in first.rows)

    clock.advance()
    second = assess_coverage(
        backend, journals, do_backlinks=True, checkpoint=Checkpoint(ckpt_path)
    )
    assert second.rows == reference.rows
    assert first.quota_spent + second.quota_spent == reference.quota_spent


def test_checkpoint_skips_completed(small_corpus, tmp_path):
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    journals = planted_fixture(small_corpus, n_present=5, n_absent=0)
    ckpt_path = str(tmp_path / "ckpt.jsonl")
    assess_coverage(backend, journals, checkpoint=Checkpoint(ckpt_path))
    meter_backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    meter_backend.quota = QuotaMeter(daily_limit=100)
    rerun = assess_coverage(
        meter_backend, journals, checkpoint=Checkpoint(ckpt_path)
    )
    assert rerun.quota_spent == 0  # everything served from the checkpoint
    assert len(rerun.rows) == 5


# --- summarize --------------------------------------------------------------

def test_summarize_zero_coverage():
    report = CoverageReport(
        rows=[
            CoverageRow(journal=JournalRecord(title=f"t{i}"), hits=0, status=STATUS_NO_HITS)
            for i in range(4)
        ]
    )
    text, _ = summarize(report)
    assert "covered_fraction: 0.0000" in text


def test_histogram_buckets_sum_to_rows(small_corpus):
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    report = assess_coverage(backend, planted_fixture(small_corpus))
    hist = report.hit_histogram()
    assert sum(hist.values()) == len(report.rows)


def test_summary_fraction_matches_csv_recount(small_corpus):
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    report = assess_coverage(backend, planted_fixture(small_corpus))
    text, csv_body = summarize(report)
    rows = list(csv.DictReader(io.StringIO(csv_body)))
    assert len(rows) == len(report.rows)
    attempted = [r for r in rows if r["status"] != STATUS_QUOTA]
    frac = sum(1 for r in attempted if int(r["hits"]) > 0) / len(attempted)
    assert f"covered_fraction: {frac:.4f}" in text
