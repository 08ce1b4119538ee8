"""Search request/response types shared by every backend implementation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import QueryError


@dataclass(frozen=True)
class Query:
    """One search request.

    Exactly one primary clause must be set: `terms` (all must match),
    `phrase` (exact string, matched term-wise by the sim backend), or
    `link_target` (backlink lookup). `filetype_filter` and `site_filter`
    narrow the match set.
    """

    terms: tuple[str, ...] | None = None
    phrase: str | None = None
    link_target: str | None = None
    filetype_filter: str | None = None
    site_filter: str | None = None

    def __post_init__(self):
        clauses = [c for c in (self.terms, self.phrase, self.link_target) if c]
        if len(clauses) != 1:
            raise QueryError(
                "exactly one of terms/phrase/link_target must be set"
            )
        if self.terms is not None and not isinstance(self.terms, tuple):
            object.__setattr__(self, "terms", tuple(self.terms))
        if self.filetype_filter is not None:
            ext = self.filetype_filter
            if not ext or ext != ext.lower() or ext.startswith("."):
                raise QueryError(
                    f"filetype_filter must be a lowercase extension without dot: {ext!r}"
                )

    def key(self) -> str:
        """Canonical string form, used as a cache / noise-stream key."""
        if self.terms:
            primary = " ".join(self.terms)
        elif self.phrase:
            primary = f'"{self.phrase}"'
        else:
            primary = f"link:{self.link_target}"
        extras = []
        if self.filetype_filter:
            extras.append(f"filetype:{self.filetype_filter}")
        if self.site_filter:
            extras.append(f"site:{self.site_filter}")
        return " ".join([primary, *extras])


def parse_query(text: str) -> Query:
    """Build a Query from a search-box style string.

    A double-quoted string is a phrase; `link:`, `filetype:` and `site:`
    prefixes set the corresponding fields; remaining tokens are terms.
    """
    text = text.strip()
    if not text:
        raise QueryError("empty query string")
    phrase = None
    if text.startswith('"') and text.endswith('"') and len(text) >= 2:
        phrase = text[1:-1]
        text = ""
    terms: list[str] = []
    link_target = None
    filetype_filter = None
    site_filter = None
    for token in text.split():
        if token.lower().startswith("link:"):
            link_target = token[5:]
        elif token.lower().startswith("filetype:"):
            filetype_filter = token[9:].lower().lstrip(".")
        elif token.lower().startswith("site:"):
            site_filter = token[5:]
        elif token.startswith('"') and token.endswith('"'):
            phrase = token[1:-1]
        else:
            terms.append(token.lower())
    return Query(
        terms=tuple(terms) or None,
        phrase=phrase,
        link_target=link_target,
        filetype_filter=filetype_filter,
        site_filter=site_filter,
    )


@dataclass(frozen=True)
class Result:
    rank: int  # 1-based global rank
    url: str
    title: str
    snippet: str


@dataclass(frozen=True)
class ResultPage:
    estimated_total: int
    start: int
    results: tuple[Result, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.results and not isinstance(self.results, tuple):
            object.__setattr__(self, "results", tuple(self.results))
