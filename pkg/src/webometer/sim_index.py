"""Deterministic simulated web corpus with two divergent search interfaces.

The "standard" interface sees every document created up to the query day.
The "api" interface sees a fixed random subsample, lagged by a few days, and
orders shared documents differently. These three knobs (subsample ratio, lag
days, per-interface tiebreak) make index-size, freshness, and ranking
divergence separately observable.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, QueryError
from .model import Query, Result, ResultPage
from .util import pseudo_word, stable_hash, unit_hash, zipf_cumulative, zipf_sample

DEFAULT_TLD_ALPHABET = (
    "com", "net", "org", "de", "uk", "es", "fr", "it", "nl", "edu",
    "gov", "jp", "cn", "ru", "br", "ca", "au", "se", "ch", "pl",
)

DEFAULT_FILETYPE_WEIGHTS = {
    "html": 0.70,
    "pdf": 0.15,
    "doc": 0.06,
    "ps": 0.04,
    "xls": 0.03,
    "ppt": 0.02,
}


class InterfaceKind(enum.Enum):
    STANDARD = "standard"
    API = "api"


@dataclass(frozen=True)
class SimConfig:
    seed: int = 42
    num_docs: int = 10_000
    tld_alphabet: tuple[str, ...] = DEFAULT_TLD_ALPHABET
    tld_zipf_exponent: float = 1.0
    vocab_size: int = 5000
    term_zipf_exponent: float = 1.1
    terms_per_doc: int = 50
    filetype_weights: tuple[tuple[str, float], ...] = tuple(
        DEFAULT_FILETYPE_WEIGHTS.items()
    )
    api_subsample_ratio: float = 0.7
    api_lag_days: int = 3
    docs_per_day: int = 200
    noise_amplitude: float = 0.0
    max_outlinks: int = 5

    def __post_init__(self):
        if isinstance(self.filetype_weights, dict):
            object.__setattr__(
                self, "filetype_weights", tuple(self.filetype_weights.items())
            )
        if not isinstance(self.tld_alphabet, tuple):
            object.__setattr__(self, "tld_alphabet", tuple(self.tld_alphabet))

    def validate(self) -> None:
        if self.num_docs < 1:
            raise ConfigurationError("num_docs", "must be >= 1")
        if self.vocab_size < 1:
            raise ConfigurationError("vocab_size", "must be >= 1")
        if not self.tld_alphabet:
            raise ConfigurationError("tld_alphabet", "must be non-empty")
        if self.tld_zipf_exponent <= 0:
            raise ConfigurationError("tld_zipf_exponent", "must be positive")
        if self.term_zipf_exponent <= 0:
            raise ConfigurationError("term_zipf_exponent", "must be positive")
        if self.terms_per_doc < 1:
            raise ConfigurationError("terms_per_doc", "must be >= 1")
        total = sum(w for _, w in self.filetype_weights)
        if abs(total - 1.0) > 1e-9:
            raise ConfigurationError(
                "filetype_weights", f"weights sum to {total}, expected 1"
            )
        if not (0.0 < self.api_subsample_ratio <= 1.0):
            raise ConfigurationError("api_subsample_ratio", "must be in (0, 1]")
        if self.api_lag_days < 0:
            raise ConfigurationError("api_lag_days", "must be >= 0")
        if self.docs_per_day < 1:
            raise ConfigurationError("docs_per_day", "must be >= 1")
        if self.noise_amplitude < 0:
            raise ConfigurationError("noise_amplitude", "must be >= 0")


@dataclass(frozen=True)
class SimDocument:
    doc_id: int
    url: str
    tld: str
    terms: tuple[int, ...]
    filetype: str
    created_day: int
    outlinks: tuple[int, ...] = ()


class SimCorpus:
    """Immutable generated corpus plus the indexes needed for fast search."""

    def __init__(self, config: SimConfig, documents: list[SimDocument], vocab: list[str]):
        self.config = config
        self.documents = documents
        self.vocab = vocab
        self.vocab_index = {w: i for i, w in enumerate(vocab)}
        n = len(documents)
        self.created_day = np.array([d.created_day for d in documents])
        self.filetypes = [d.filetype for d in documents]
        self.tlds = [d.tld for d in documents]
        self.urls = [d.url for d in documents]
        self.keep_mask = np.array(
            [
                unit_hash(config.seed, "keep", d.doc_id) < config.api_subsample_ratio
                for d in documents
            ]
        )
        self.tiebreak = {
            kind: np.array(
                [stable_hash(config.seed, "tie", kind.value, d.doc_id) for d in documents],
                dtype=np.uint64,
            )
            for kind in InterfaceKind
        }
        self._postings = self._build_postings()
        self._url_to_doc = {u: i for i, u in enumerate(self.urls)}
        self._inlinks: dict[int, np.ndarray] | None = None

    def _build_postings(self) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        vocab_n = self.config.vocab_size
        doc_ids = np.repeat(
            np.arange(len(self.documents)), self.config.terms_per_doc
        )
        term_ids = np.concatenate([np.asarray(d.terms) for d in self.documents])
        keys = doc_ids * vocab_n + term_ids
        uniq, counts = np.unique(keys, return_counts=True)
        terms = uniq % vocab_n
        docs = uniq // vocab_n
        order = np.argsort(terms, kind="stable")
        terms, docs, counts = terms[order], docs[order], counts[order]
        postings: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        bounds = np.searchsorted(terms, np.arange(vocab_n + 1))
        for t in np.unique(terms):
            lo, hi = bounds[t], bounds[t + 1]
            postings[int(t)] = (docs[lo:hi], counts[lo:hi])
        return postings

    def inlinks(self, doc_id: int) -> np.ndarray:
        """Doc ids of documents whose outlinks point at `doc_id`."""
        if self._inlinks is None:
            acc: dict[int, list[int]] = {}
            for d in self.documents:
                for target in d.outlinks:
                    acc.setdefault(target, []).append(d.doc_id)
            self._inlinks = {t: np.array(sorted(s)) for t, s in acc.items()}
        return self._inlinks.get(doc_id, np.array([], dtype=int))

    def doc_for_url(self, url: str) -> int | None:
        from .analytics import normalize_url

        if url in self._url_to_doc:
            return self._url_to_doc[url]
        try:
            norm = normalize_url(url)
        except Exception:
            return None
        return self._url_to_doc.get(norm)


def generate_corpus(config: SimConfig) -> SimCorpus:
    """Build the full document set from the seeded generator (single pass)."""
    config.validate()
    rng = np.random.default_rng(stable_hash(config.seed, "corpus"))
    n = config.num_docs

    tld_cum = zipf_cumulative(len(config.tld_alphabet), config.tld_zipf_exponent)
    term_cum = zipf_cumulative(config.vocab_size, config.term_zipf_exponent)
    exts = [e for e, _ in config.filetype_weights]
    ft_cum = np.cumsum([w for _, w in config.filetype_weights])
    ft_cum = ft_cum / ft_cum[-1]

    tld_idx = zipf_sample(tld_cum, rng.random(n))
    term_matrix = zipf_sample(term_cum, rng.random((n, config.terms_per_doc)))
    ft_idx = np.searchsorted(ft_cum, rng.random(n), side="right")
    link_counts = rng.integers(0, config.max_outlinks + 1, size=n)
    link_targets = rng.integers(0, n, size=int(link_counts.sum()))

    vocab = [pseudo_word(i) for i in range(config.vocab_size)]
    documents: list[SimDocument] = []
    offset = 0
    for doc_id in range(n):
        tld = config.tld_alphabet[tld_idx[doc_id]]
        ext = exts[ft_idx[doc_id]]
        raw_links = link_targets[offset : offset + link_counts[doc_id]]
        offset += link_counts[doc_id]
        seen: list[int] = []
        for t in raw_links:
            t = int(t)
            if t != doc_id and t not in seen:
                seen.append(t)
        documents.append(
            SimDocument(
                doc_id=doc_id,
                url=f"http://www.site{doc_id}.{tld}/docs/d{doc_id}.{ext}",
                tld=tld,
                terms=tuple(sorted(int(t) for t in term_matrix[doc_id])),
                filetype=ext,
                created_day=doc_id // config.docs_per_day,
                outlinks=tuple(seen),
            )
        )
    return SimCorpus(config, documents, vocab)


def tokenize(text: str) -> list[str]:
    out, cur = [], []
    for ch in text.lower():
        if ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def _visible_mask(corpus: SimCorpus, kind: InterfaceKind, day: int) -> np.ndarray:
    cfg = corpus.config
    if kind is InterfaceKind.STANDARD:
        return corpus.created_day <= day
    return (corpus.created_day <= day - cfg.api_lag_days) & corpus.keep_mask


def match_candidates(
    corpus: SimCorpus, kind: InterfaceKind, query: Query, day: int
) -> tuple[np.ndarray, np.ndarray]:
    """All matching doc ids (visible to `kind` on `day`) with their scores.

    Score is the total occurrence count of the query terms in the document;
    backlink matches score 1. Terms and phrase clauses require every token
    to be present (AND semantics).
    """
    if query.terms is not None:
        tokens = [t.lower() for t in query.terms]
    elif query.phrase is not None:
        tokens = tokenize(query.phrase)
        if not tokens:
            raise QueryError("empty phrase")
    else:
        tokens = None

    if tokens is not None:
        docs: np.ndarray | None = None
        per_term: list[tuple[np.ndarray, np.ndarray]] = []
        for tok in tokens:
            tid = corpus.vocab_index.get(tok)
            posting = corpus._postings.get(tid) if tid is not None else None
            if posting is None:
                return np.array([], dtype=int), np.array([], dtype=int)
            per_term.append(posting)
            docs = posting[0] if docs is None else np.intersect1d(docs, posting[0])
        assert docs is not None
        scores = np.zeros(len(docs), dtype=int)
        for pdocs, pcounts in per_term:
            scores += pcounts[np.searchsorted(pdocs, docs)]
    else:
        target = corpus.doc_for_url(query.link_target or "")
        if target is None:
            return np.array([], dtype=int), np.array([], dtype=int)
        docs = corpus.inlinks(target)
        scores = np.ones(len(docs), dtype=int)

    if len(docs) == 0:
        return docs, scores
    if query.filetype_filter is not None:
        mask = np.array([corpus.filetypes[d] == query.filetype_filter for d in docs])
        docs, scores = docs[mask], scores[mask]
    if query.site_filter is not None and len(docs):
        suffix = query.site_filter.lower().lstrip(".")
        mask = np.array(
            [
                corpus.urls[d].split("/")[2].endswith("." + suffix)
                or corpus.urls[d].split("/")[2] == suffix
                for d in docs
            ],
            dtype=bool,
        )
        docs, scores = docs[mask], scores[mask]

    if len(docs):
        vis = _visible_mask(corpus, kind, day)[docs]
        docs, scores = docs[vis], scores[vis]
    return docs, scores


def _ranked(corpus: SimCorpus, kind: InterfaceKind, docs: np.ndarray, scores: np.ndarray) -> np.ndarray:
    tie = corpus.tiebreak[kind][docs]
    order = np.lexsort((tie, -scores))
    return docs[order]


def _estimated_total(
    corpus: SimCorpus, kind: InterfaceKind, query: Query, day: int, true_count: int
) -> int:
    amp = corpus.config.noise_amplitude
    if amp == 0 or true_count == 0:
        return true_count
    rng = np.random.default_rng(
        stable_hash(corpus.config.seed, "noise", query.key(), day, kind.value)
    )
    est = round(true_count * math.exp(amp * rng.standard_normal()))
    return max(est, true_count)


def sim_search(
    corpus: SimCorpus,
    kind: InterfaceKind,
    query: Query,
    day: int,
    start: int = 0,
    page_size: int = 10,
) -> ResultPage:
    """Search one interface view of the corpus as it existed on `day`."""
    if day < 0:
        raise QueryError("day must be >= 0")
    if start < 0 or page_size < 1:
        raise QueryError("start must be >= 0 and page_size >= 1")
    docs, scores = match_candidates(corpus, kind, query, day)
    if len(docs) == 0:
        return ResultPage(estimated_total=0, start=start, results=())
    ranked = _ranked(corpus, kind, docs, scores)
    total = _estimated_total(corpus, kind, query, day, len(ranked))
    page = ranked[start : start + page_size]
    results = tuple(
        Result(
            rank=start + i + 1,
            url=corpus.urls[d],
            title=f"Document {d} ({corpus.tlds[d]})",
            snippet=" ".join(corpus.vocab[t] for t in corpus.documents[d].terms[:8]),
        )
        for i, d in enumerate(int(d) for d in page)
    )
    return ResultPage(estimated_total=int(total), start=start, results=results)


def corpus_size(corpus: SimCorpus, kind: InterfaceKind, day: int) -> int:
    """Exact number of documents visible to `kind` on `day` (noise-free)."""
    if day < 0:
        raise QueryError("day must be >= 0")
    return int(_visible_mask(corpus, kind, day).sum())


def export_jsonl(corpus: SimCorpus, path) -> int:
    """Write one JSON document per line; returns number of lines written."""
    with open(path, "w", encoding="utf-8") as fh:
        for d in corpus.documents:
            fh.write(
                json.dumps(
                    {
                        "doc_id": d.doc_id,
                        "url": d.url,
                        "tld": d.tld,
                        "filetype": d.filetype,
                        "created_day": d.created_day,
                        "terms": list(d.terms),
                        "outlinks": list(d.outlinks),
                    }
                )
                + "\n"
            )
    return len(corpus.documents)


def import_jsonl(path) -> list[SimDocument]:
    """Read documents back for oracle cross-checks."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            docs.append(
                SimDocument(
                    doc_id=rec["doc_id"],
                    url=rec["url"],
                    tld=rec["tld"],
                    terms=tuple(rec["terms"]),
                    filetype=rec["filetype"],
                    created_day=rec["created_day"],
                    outlinks=tuple(rec.get("outlinks", ())),
                )
            )
    return docs
