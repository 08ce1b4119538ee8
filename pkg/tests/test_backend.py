import datetime
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

import pytest

from webometer.backend import (
    HttpBackend,
    QuotaMeter,
    QuotaState,
    SimBackend,
    charge_quota,
    fetch_top,
    hit_count,
    search,
)
from webometer.errors import (
    BackendUnavailableError,
    QuotaError,
    RangeError,
)
from webometer.model import Query
from webometer.sim_index import InterfaceKind

from oracles import brute_backlinks, brute_match_ids, brute_rank

D0 = datetime.date(2004, 7, 1)


# --- quota -----------------------------------------------------------------

def test_charge_to_exact_limit():
    state = QuotaState(day_key=D0, used=9_999)
    state = charge_quota(state, D0, 1)
    assert state.used == 10_000


def test_charge_past_limit_rejected():
    state = QuotaState(day_key=D0, used=10_000)
    with pytest.raises(QuotaError) as exc:
        charge_quota(state, D0, 1)
    assert exc.value.remaining == 0
    assert exc.value.reset == D0 + datetime.timedelta(days=1)


def test_day_rollover_resets_usage():
    state = QuotaState(day_key=D0, used=10_000)
    state = charge_quota(state, D0 + datetime.timedelta(days=1), 1)
    assert state.used == 1


def test_charge_is_atomic():
    state = QuotaState(day_key=D0, used=9_999, daily_limit=10_000)
    before = state
    with pytest.raises(QuotaError):
        charge_quota(state, D0, 5)
    assert state == before


def test_meter_persistence(tmp_path, clock):
    path = str(tmp_path / "quota.json")
    meter = QuotaMeter(daily_limit=100, path=path, clock=clock)
    meter.charge(7)
    again = QuotaMeter(daily_limit=100, path=path, clock=clock)
    assert again.state.used == 7
    assert again.remaining() == 93


# --- search contract --------------------------------------------------------

@pytest.fixture
def std(small_corpus):
    return SimBackend(small_corpus, InterfaceKind.STANDARD, day=29)


@pytest.fixture
def api(small_corpus):
    return SimBackend(small_corpus, InterfaceKind.API, day=29)


def test_page_size_over_cap_is_range_error(std):
    with pytest.raises(RangeError):
        search(std, Query(terms=("x",)), page_size=11)


def test_window_past_result_cap_is_range_error(std):
    with pytest.raises(RangeError):
        search(std, Query(terms=("x",)), start=995, page_size=10)


def test_quota_error_after_limit(small_corpus, clock):
    meter = QuotaMeter(daily_limit=3, clock=clock)
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD, quota=meter, day=29)
    q = Query(terms=(small_corpus.vocab[0],))
    for _ in range(3):
        search(backend, q)
    with pytest.raises(QuotaError):
        search(backend, q)
    clock.advance()
    assert search(backend, q).estimated_total > 0


def test_search_charges_one_unit_regardless_of_results(small_corpus, clock):
    meter = QuotaMeter(daily_limit=100, clock=clock)
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD, quota=meter, day=29)
    search(backend, Query(terms=("nosuchword",)))
    search(backend, Query(terms=(small_corpus.vocab[0],)), page_size=10)
    assert meter.state.used == 2


def test_fetch_top_empty_query(std):
    assert list(fetch_top(std, Query(terms=("nosuchword",)), 100)) == []


def test_fetch_top_matches_oracle(std, small_corpus, small_config):
    q = Query(terms=(small_corpus.vocab[40],))
    urls = fetch_top(std, q, 100)
    pairs = brute_match_ids(
        small_corpus.documents, q, small_corpus.vocab_index, small_config,
        InterfaceKind.STANDARD, 29,
    )
    expected_ids = brute_rank(pairs, small_config, InterfaceKind.STANDARD)[:100]
    expected = [small_corpus.documents[i].url for i in expected_ids]
    assert list(urls) == expected
    assert len(urls) == min(100, len(pairs))
    assert not urls.truncated


def test_fetch_top_quota_units(small_corpus, clock):
    meter = QuotaMeter(daily_limit=1000, clock=clock)
    backend = SimBackend(small_corpus, InterfaceKind.STANDARD, quota=meter, day=29)
    urls = fetch_top(backend, Query(terms=(small_corpus.vocab[0],)), 250)
    assert len(urls) == 250
    assert meter.state.used == 25  # ceil(250 / 10) pages


def test_hit_count_trivial_and_oracle(std, api, small_corpus, small_config):
    assert hit_count(std, Query(terms=("nosuchword",))) == 0
    for ti in (0, 10, 77):
        q = Query(terms=(small_corpus.vocab[ti],))
        s = hit_count(std, q)
        a = hit_count(api, q)
        oracle = brute_match_ids(
            small_corpus.documents, q, small_corpus.vocab_index, small_config,
            InterfaceKind.STANDARD, 29,
        )
        assert s == len(oracle)
        assert a <= s


def test_backlink_query_matches_link_graph(std, small_corpus, small_config):
    # choose a document that actually has inlinks
    target = max(
        range(len(small_corpus.documents)),
        key=lambda i: len(small_corpus.inlinks(i)),
    )
    url = small_corpus.documents[target].url
    count = hit_count(std, Query(link_target=url))
    oracle = brute_backlinks(
        small_corpus.documents, target, small_config, InterfaceKind.STANDARD, 29
    )
    assert count == len(oracle) > 0


def test_filetype_filter_counts(std, small_corpus, small_config):
    q = Query(terms=(small_corpus.vocab[0],), filetype_filter="pdf")
    oracle = brute_match_ids(
        small_corpus.documents, q, small_corpus.vocab_index, small_config,
        InterfaceKind.STANDARD, 29,
    )
    assert hit_count(std, q) == len(oracle)


# --- HTTP client ------------------------------------------------------------

class _Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_GET(self):
        parts = urlsplit(self.path)
        params = parse_qs(parts.query)
        if parts.path != "/search":
            self.send_error(404)
            return
        q = params.get("q", [""])[0]
        if q == "boom":
            self.send_error(503)
            return
        start = int(params.get("start", ["0"])[0])
        num = int(params.get("num", ["10"])[0])
        total = 23
        results = [
            {
                "rank": start + i + 1,
                "url": f"http://example{start + i}.com/p",
                "title": f"t{start + i}",
                "snippet": "s",
            }
            for i in range(min(num, max(0, total - start)))
        ]
        body = json.dumps(
            {"estimatedTotal": total, "start": start, "results": results}
        ).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@pytest.fixture(scope="module")
def http_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_http_backend_parses_pages(http_server):
    backend = HttpBackend(http_server)
    page = search(backend, Query(terms=("anything",)), start=0, page_size=10)
    assert page.estimated_total == 23
    assert [r.rank for r in page.results] == list(range(1, 11))


def test_http_backend_fetch_top(http_server):
    backend = HttpBackend(http_server)
    urls = fetch_top(backend, Query(terms=("anything",)), 100)
    assert len(urls) == 23
    assert not urls.truncated


def test_http_backend_non_200_is_unavailable(http_server):
    backend = HttpBackend(http_server)
    with pytest.raises(BackendUnavailableError) as exc:
        search(backend, Query(terms=("boom",)))
    assert exc.value.retryable


def test_http_backend_down_refunds_quota(clock):
    meter = QuotaMeter(daily_limit=10, clock=clock)
    backend = HttpBackend("http://127.0.0.1:1", quota=meter, timeout=0.2)
    with pytest.raises(BackendUnavailableError):
        search(backend, Query(terms=("x",)))
    assert meter.state.used == 0


def test_fetch_top_truncation_marker(http_server, monkeypatch):
    backend = HttpBackend(http_server)
    calls = {"n": 0}
    orig = backend._search

    def flaky(query, start, page_size):
        calls["n"] += 1
        if calls["n"] > 1:
            raise BackendUnavailableError("mid-run outage")
        return orig(query, start, page_size)

    monkeypatch.setattr(backend, "_search", flaky)
    urls = fetch_top(backend, Query(terms=("anything",)), 100)
    assert urls.truncated
    assert len(urls) == 10
