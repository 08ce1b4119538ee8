"""Webometric measurement toolkit: hit-count time series, TLD power-law
analysis, result-overlap metrics, and journal web-coverage reporting over a
deterministic simulated web index or a JSON-over-HTTP search backend."""

from .model import Query, Result, ResultPage, parse_query
from .sim_index import (
    InterfaceKind,
    SimConfig,
    SimCorpus,
    corpus_size,
    generate_corpus,
    sim_search,
)

__version__ = "0.1.0"

__all__ = [
    "Query",
    "Result",
    "ResultPage",
    "parse_query",
    "InterfaceKind",
    "SimConfig",
    "SimCorpus",
    "corpus_size",
    "generate_corpus",
    "sim_search",
    "__version__",
]
