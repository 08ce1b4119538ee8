"""Webometric mathematics: URL normalization, TLD rank-frequency
distributions, power-law fitting, result-list overlap, and file-format
shares."""

from __future__ import annotations

import ipaddress
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, UrlParseError
from .model import Query

OLS_LOGLOG = "ols-loglog"
MLE_DISCRETE = "mle-discrete"
FIT_METHODS = (OLS_LOGLOG, MLE_DISCRETE)

_DEFAULT_PORTS = {"http": 80, "https": 443}


def normalize_url(url: str) -> str:
    """Canonical form: lowercase scheme/host, default port and fragment
    dropped, a bare "/" path dropped; query string preserved."""
    from urllib.parse import urlsplit, urlunsplit

    try:
        parts = urlsplit(url.strip())
    except ValueError as exc:
        raise UrlParseError(f"cannot parse {url!r}: {exc}") from exc
    if not parts.scheme or not parts.netloc:
        raise UrlParseError(f"not an absolute URL: {url!r}")
    scheme = parts.scheme.lower()
    host = (parts.hostname or "").lower()
    if not host:
        raise UrlParseError(f"no host in {url!r}")
    port = parts.port
    netloc = host
    if port is not None and port != _DEFAULT_PORTS.get(scheme):
        netloc = f"{host}:{port}"
    path = parts.path
    if path == "/":
        path = ""
    return urlunsplit((scheme, netloc, path, parts.query, ""))


def extract_tld(url: str) -> str:
    """Last dot-separated host label, lowercased; IP hosts map to "(ip)"."""
    from urllib.parse import urlsplit

    try:
        parts = urlsplit(url.strip())
        host = parts.hostname
    except ValueError as exc:
        raise UrlParseError(f"cannot parse {url!r}: {exc}") from exc
    if not host:
        raise UrlParseError(f"no host in {url!r}")
    host = host.lower().rstrip(".")
    try:
        ipaddress.ip_address(host)
        return "(ip)"
    except ValueError:
        pass
    return host.rsplit(".", 1)[-1]


@dataclass
class TldDistribution:
    counts: dict[str, int]
    total_urls: int
    skipped: int
    ranked: list[tuple[int, str, int]]  # (rank starting at 1, tld, count)

    def to_json_dict(self) -> dict:
        return {
            "ranked": [
                {"rank": r, "tld": t, "count": c} for r, t, c in self.ranked
            ],
            "total_urls": self.total_urls,
            "skipped": self.skipped,
        }


def tld_distribution(urls: list[str]) -> TldDistribution:
    """Tally TLDs over the given URLs; unparseable entries become `skipped`."""
    counts: dict[str, int] = {}
    skipped = 0
    for url in urls:
        try:
            tld = extract_tld(url)
        except UrlParseError:
            skipped += 1
            continue
        counts[tld] = counts.get(tld, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ranked = [(i + 1, t, c) for i, (t, c) in enumerate(ordered)]
    return TldDistribution(
        counts=counts,
        total_urls=sum(counts.values()),
        skipped=skipped,
        ranked=ranked,
    )


@dataclass
class PowerLawFit:
    """Fitted rank-frequency model freq(rank) = C * rank**(-a)."""

    exponent_a: float
    log_c: float
    r_squared: float
    n_points: int
    method: str

    @property
    def c(self) -> float:
        return math.exp(self.log_c)

    def predict(self, rank: float) -> float:
        return self.c * rank ** (-self.exponent_a)

    def to_json_dict(self) -> dict:
        return {
            "a": self.exponent_a,
            "C": self.c,
            "r2": self.r_squared,
            "n_points": self.n_points,
            "method": self.method,
        }


def _r_squared(y: np.ndarray, y_hat: np.ndarray) -> float:
    ss_res = float(np.sum((y - y_hat) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def fit_power_law(dist: TldDistribution, method: str = OLS_LOGLOG) -> PowerLawFit:
    """Fit the rank-frequency power law to a TLD distribution.

    "ols-loglog" regresses ln(count) on ln(rank). "mle-discrete" estimates
    the exponent from the count values (discrete MLE with c_min = 1) and
    anchors the curve at the observed rank-1 frequency.
    """
    if method not in FIT_METHODS:
        raise ValueError(f"unknown fit method {method!r}")
    ranks = np.array([r for r, _, _ in dist.ranked], dtype=float)
    counts = np.array([c for _, _, c in dist.ranked], dtype=float)
    if len(ranks) < 3:
        raise InsufficientDataError(
            f"need >= 3 ranked TLDs to fit, got {len(ranks)}"
        )
    log_r = np.log(ranks)
    log_c = np.log(counts)
    if method == OLS_LOGLOG:
        slope, intercept = np.polyfit(log_r, log_c, 1)
        a = -float(slope)
        y_hat = intercept + slope * log_r
        return PowerLawFit(
            exponent_a=a,
            log_c=float(intercept),
            r_squared=_r_squared(log_c, y_hat),
            n_points=len(ranks),
            method=method,
        )
    # mle-discrete over the observed count values, c_min = 1
    n = len(counts)
    denom = float(np.sum(np.log(counts / 0.5)))
    a = 1.0 + n / denom
    intercept = float(np.log(counts[0]))  # rank-1 frequency anchors C
    y_hat = intercept - a * log_r
    return PowerLawFit(
        exponent_a=a,
        log_c=intercept,
        r_squared=_r_squared(log_c, y_hat),
        n_points=n,
        method=method,
    )


@dataclass
class OverlapReport:
    k: int
    intersection: int
    jaccard: float
    shared_prefix: int


def overlap(a: list[str], b: list[str]) -> OverlapReport:
    """Set overlap and rank agreement of two URL lists.

    Both lists are normalized (unparseable URLs dropped) and de-duplicated
    keeping first occurrence. Two empty lists give jaccard 0.
    """

    def clean(urls: list[str]) -> list[str]:
        out: list[str] = []
        seen: set[str] = set()
        for u in urls:
            try:
                n = normalize_url(u)
            except UrlParseError:
                continue
            if n not in seen:
                seen.add(n)
                out.append(n)
        return out

    ca, cb = clean(a), clean(b)
    sa, sb = set(ca), set(cb)
    inter = len(sa & sb)
    union = len(sa | sb)
    prefix = 0
    for x, y in zip(ca, cb):
        if x != y:
            break
        prefix += 1
    return OverlapReport(
        k=min(len(ca), len(cb)),
        intersection=inter,
        jaccard=(inter / union) if union else 0.0,
        shared_prefix=prefix,
    )


FACET_QUERY = "facet-query"
URL_EXTENSION = "url-extension"
FORMAT_MODES = (FACET_QUERY, URL_EXTENSION)


def url_extension(url: str) -> str:
    """Extension of the path's last segment (1-5 alphanumerics), else "html"."""
    from urllib.parse import urlsplit

    try:
        path = urlsplit(url).path
    except ValueError:
        return "html"
    segment = path.rsplit("/", 1)[-1]
    if "." in segment:
        ext = segment.rsplit(".", 1)[-1].lower()
        if 1 <= len(ext) <= 5 and ext.isalnum():
            return ext
    return "html"


@dataclass
class FormatDistribution:
    shares: dict[str, tuple[int, float]]  # extension -> (count, fraction)
    mode: str
    total: int

    @property
    def empty(self) -> bool:
        return self.total == 0

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "total": self.total,
            "shares": {
                ext: {"count": c, "fraction": f}
                for ext, (c, f) in self.shares.items()
            },
        }


def format_distribution(
    backend,
    query: Query,
    extensions: list[str] | None = None,
    mode: str = FACET_QUERY,
    k: int = 100,
) -> FormatDistribution:
    """File-format shares for a query, via facet counts or URL extensions."""
    from . import backend as be
    from dataclasses import replace

    if mode not in FORMAT_MODES:
        raise ValueError(f"unknown format mode {mode!r}")
    if mode == FACET_QUERY:
        if not extensions:
            raise ValueError("facet-query mode needs a non-empty extension list")
        counts = {
            ext: be.hit_count(backend, replace(query, filetype_filter=ext))
            for ext in extensions
        }
    else:
        urls = be.fetch_top(backend, query, k)
        counts = {}
        for u in urls:
            ext = url_extension(u)
            counts[ext] = counts.get(ext, 0) + 1
    total = sum(counts.values())
    shares = {
        ext: (c, (c / total) if total else 0.0)
        for ext, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    }
    return FormatDistribution(shares=shares, mode=mode, total=total)


def report_json(dist: TldDistribution, fit: PowerLawFit | None) -> str:
    """Serialize a distribution + fit pair to the documented JSON shape."""
    doc = {
        "ranked": [{"rank": r, "tld": t, "count": c} for r, t, c in dist.ranked],
        "fit": fit.to_json_dict() if fit is not None else None,
    }
    return json.dumps(doc)
