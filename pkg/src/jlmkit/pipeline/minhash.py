"""MinHash signatures over character shingles.

Each of the K permutations is a salted 64-bit mixing function
(splitmix64 finalizer) applied to a blake2b shingle hash; salts come from
a seeded PCG64 stream. Everything is fixed-width unsigned arithmetic, so
signatures are deterministic across runs, platforms, and worker counts.
"""

from __future__ import annotations

import hashlib

import numpy as np

from ..errors import DocumentTooShortError

_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _splitmix64(values: np.ndarray) -> np.ndarray:
    """Bijective 64-bit mixer; wrapping multiplication is intentional."""
    z = values + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX_1
    z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


def _shingle_hashes(text: str, size: int) -> np.ndarray:
    shingles = {text[i : i + size] for i in range(len(text) - size + 1)}
    values = [
        int.from_bytes(
            hashlib.blake2b(s.encode("utf-8"), digest_size=8).digest(), "big"
        )
        for s in sorted(shingles)
    ]
    return np.asarray(values, dtype=np.uint64)


class MinHasher:
    """Computes fixed-length signatures; one instance per pipeline run."""

    def __init__(self, shingle_size: int = 5, num_permutations: int = 128,
                 seed: int = 42):
        self.shingle_size = shingle_size
        self.num_permutations = num_permutations
        rng = np.random.default_rng(seed)
        self._salts = rng.integers(0, 2**63, size=num_permutations,
                                   dtype=np.uint64)

    def signature(self, text: str) -> np.ndarray:
        if len(text) < self.shingle_size:
            raise DocumentTooShortError(
                f"text has {len(text)} chars, below shingle size "
                f"{self.shingle_size}"
            )
        hashes = _shingle_hashes(text, self.shingle_size)
        with np.errstate(over="ignore"):
            mixed = _splitmix64(hashes[None, :] ^ self._salts[:, None])
        return mixed.min(axis=1)


def estimate_jaccard(sig_a: np.ndarray, sig_b: np.ndarray) -> float:
    """Fraction of matching signature positions."""
    if sig_a.shape != sig_b.shape:
        raise ValueError("signature lengths differ")
    return float(np.mean(sig_a == sig_b))
