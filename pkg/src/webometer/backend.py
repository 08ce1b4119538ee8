"""Uniform search-backend contract: quota accounting, paging, and the two
concrete backends (simulated corpus adapter, JSON-over-HTTP client)."""

from __future__ import annotations

import datetime
import json
import os
from dataclasses import dataclass, replace

from .errors import (
    BackendUnavailableError,
    QuotaError,
    RangeError,
)
from .model import Query, Result, ResultPage
from .sim_index import InterfaceKind, SimCorpus, sim_search

DAILY_LIMIT = 10_000
PER_QUERY_RESULT_CAP = 1_000
PAGE_SIZE_MAX = 10


@dataclass(frozen=True)
class QuotaState:
    day_key: datetime.date
    used: int = 0
    daily_limit: int = DAILY_LIMIT
    per_query_result_cap: int = PER_QUERY_RESULT_CAP
    page_size_max: int = PAGE_SIZE_MAX


def charge_quota(state: QuotaState, now: datetime.date, units: int) -> QuotaState:
    """Charge `units` against the daily quota, rolling the day key forward.

    Raises QuotaError (leaving the state unchanged) if the charge does not
    fit; charges are all-or-nothing.
    """
    if units < 1:
        raise ValueError("units must be >= 1")
    if now != state.day_key:
        state = replace(state, day_key=now, used=0)
    if state.used + units > state.daily_limit:
        raise QuotaError(reset=state.day_key + datetime.timedelta(days=1))
    return replace(state, used=state.used + units)


class QuotaMeter:
    """Mutable quota ledger, optionally persisted to a small JSON file."""

    def __init__(
        self,
        daily_limit: int = DAILY_LIMIT,
        path: str | None = None,
        clock=datetime.date.today,
    ):
        self.clock = clock
        self.path = path
        self.state = QuotaState(day_key=clock(), daily_limit=daily_limit)
        if path and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                rec = json.load(fh)
            self.state = replace(
                self.state,
                day_key=datetime.date.fromisoformat(rec["day"]),
                used=int(rec["used"]),
            )

    def charge(self, units: int) -> None:
        self.state = charge_quota(self.state, self.clock(), units)
        self._persist()

    def refund(self, units: int) -> None:
        self.state = replace(self.state, used=max(0, self.state.used - units))
        self._persist()

    def remaining(self) -> int:
        state = self.state
        if self.clock() != state.day_key:
            return state.daily_limit
        return state.daily_limit - state.used

    def _persist(self) -> None:
        if not self.path:
            return
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(
                {"day": self.state.day_key.isoformat(), "used": self.state.used}, fh
            )
        os.replace(tmp, self.path)


class SearchBackend:
    """Base class: concrete backends implement `_search`."""

    name = "backend"
    page_size_max = PAGE_SIZE_MAX
    per_query_result_cap = PER_QUERY_RESULT_CAP

    def __init__(self, quota: QuotaMeter | None = None):
        self.quota = quota

    def _search(self, query: Query, start: int, page_size: int) -> ResultPage:
        raise NotImplementedError

    def set_observation_date(self, day: datetime.date) -> None:
        """Hook for backends whose view of the web depends on the date."""


class SimBackend(SearchBackend):
    """Adapter exposing one interface view of a simulated corpus."""

    def __init__(
        self,
        corpus: SimCorpus,
        kind: InterfaceKind,
        name: str | None = None,
        quota: QuotaMeter | None = None,
        epoch: datetime.date = datetime.date(2004, 7, 1),
        day: int | None = None,
    ):
        super().__init__(quota)
        self.corpus = corpus
        self.kind = kind
        self.name = name or kind.value
        self.epoch = epoch
        # default to a fully grown corpus view
        if day is None:
            cfg = corpus.config
            day = (cfg.num_docs - 1) // cfg.docs_per_day + cfg.api_lag_days
        self.day = day

    def set_observation_date(self, day: datetime.date) -> None:
        self.day = max(0, (day - self.epoch).days)

    def _search(self, query: Query, start: int, page_size: int) -> ResultPage:
        return sim_search(self.corpus, self.kind, query, self.day, start, page_size)


class HttpBackend(SearchBackend):
    """Client for the documented GET /search JSON protocol."""

    def __init__(
        self,
        base_url: str,
        name: str = "http",
        quota: QuotaMeter | None = None,
        timeout: float = 10.0,
        session=None,
    ):
        super().__init__(quota)
        import requests

        self.base_url = base_url.rstrip("/")
        self.name = name
        self.timeout = timeout
        self.session = session or requests.Session()

    def _search(self, query: Query, start: int, page_size: int) -> ResultPage:
        import requests

        params: dict[str, object] = {"start": start, "num": page_size}
        if query.link_target:
            params["q"] = ""
            params["link"] = query.link_target
        elif query.phrase is not None:
            params["q"] = f'"{query.phrase}"'
        else:
            params["q"] = " ".join(query.terms or ())
        if query.site_filter:
            params["q"] = f"{params['q']} site:{query.site_filter}".strip()
        if query.filetype_filter:
            params["filetype"] = query.filetype_filter
        try:
            resp = self.session.get(
                self.base_url + "/search", params=params, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise BackendUnavailableError(str(exc)) from exc
        if resp.status_code != 200:
            raise BackendUnavailableError(
                f"backend returned HTTP {resp.status_code}"
            )
        try:
            body = resp.json()
            results = tuple(
                Result(
                    rank=int(r["rank"]),
                    url=r["url"],
                    title=r.get("title", ""),
                    snippet=r.get("snippet", ""),
                )
                for r in body["results"]
            )
            return ResultPage(
                estimated_total=int(body["estimatedTotal"]),
                start=int(body["start"]),
                results=results,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendUnavailableError(f"malformed response: {exc}") from exc


def search(
    backend: SearchBackend, query: Query, start: int = 0, page_size: int = PAGE_SIZE_MAX
) -> ResultPage:
    """One paged search call; always costs exactly one quota unit."""
    if not (1 <= page_size <= backend.page_size_max):
        raise RangeError(
            f"page_size {page_size} outside [1, {backend.page_size_max}]"
        )
    if start < 0 or start + page_size > backend.per_query_result_cap:
        raise RangeError(
            f"window [{start}, {start + page_size}) exceeds result cap "
            f"{backend.per_query_result_cap}"
        )
    if backend.quota is not None:
        backend.quota.charge(1)
    try:
        return backend._search(query, start, page_size)
    except Exception:
        if backend.quota is not None:
            backend.quota.refund(1)
        raise


class TopUrls(list):
    """Rank-ordered URL list; `truncated` is set when a transport failure
    cut the paging loop short."""

    truncated = False


def fetch_top(backend: SearchBackend, query: Query, k: int) -> TopUrls:
    """Top-k result URLs, paging at the backend's max page size.

    Duplicate URLs keep their earlier rank. Costs ceil(pages fetched) quota
    units; on transport failure the partial list is returned with
    `truncated` set.
    """
    if k < 1 or k > backend.per_query_result_cap:
        raise RangeError(f"k {k} outside [1, {backend.per_query_result_cap}]")
    urls = TopUrls()
    seen: set[str] = set()
    start = 0
    step = backend.page_size_max
    while len(urls) < k:
        if start + step > backend.per_query_result_cap:
            break
        try:
            page = search(backend, query, start=start, page_size=step)
        except BackendUnavailableError:
            urls.truncated = True
            return urls
        for r in page.results:
            if r.url not in seen:
                seen.add(r.url)
                urls.append(r.url)
                if len(urls) >= k:
                    break
        start += step
        if start >= page.estimated_total or not page.results:
            break
    return urls


def hit_count(backend: SearchBackend, query: Query) -> int:
    """Estimated total hits from a single page_size=1 probe (1 quota unit)."""
    return search(backend, query, start=0, page_size=1).estimated_total
