"""Deterministic hashing, Zipf sampling tables, and pseudo-word generation."""

from __future__ import annotations

import hashlib

import numpy as np

_SEP = b"\x1f"


def stable_hash(*parts: object) -> int:
    """64-bit hash of the given parts, stable across runs and platforms."""
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(str(p).encode("utf-8"))
        h.update(_SEP)
    return int.from_bytes(h.digest(), "big")


def unit_hash(*parts: object) -> float:
    """stable_hash normalized to [0, 1)."""
    return stable_hash(*parts) / 2.0**64


def zipf_cumulative(n: int, exponent: float) -> np.ndarray:
    """Cumulative probabilities of Zipf(exponent) over ranks 1..n.

    Sampling is inverse-CDF: draw u in [0,1), take searchsorted(cum, u, 'right').
    """
    weights = np.arange(1, n + 1, dtype=float) ** (-exponent)
    cum = np.cumsum(weights)
    cum /= cum[-1]
    return cum


def zipf_sample(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Map uniform draws to 0-based Zipf ranks via the cumulative table."""
    return np.searchsorted(cum, u, side="right")


_CONSONANTS = "bcdfghjklmnprstvz"
_VOWELS = "aeiou"
_SYLLABLES = [c + v for c in _CONSONANTS for v in _VOWELS]


def pseudo_word(i: int) -> str:
    """Pronounceable synthetic vocabulary word for term id `i` (injective)."""
    base = len(_SYLLABLES)
    parts = []
    n = i
    while True:
        parts.append(_SYLLABLES[n % base])
        n //= base
        if n == 0:
            break
    while len(parts) < 2:
        parts.append(_SYLLABLES[0])
    return "".join(parts)
