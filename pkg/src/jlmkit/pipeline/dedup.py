"""Exact and near-duplicate removal; first occurrence always survives."""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import DocumentTooShortError
from .config import PipelineConfig
from .document import Document, StageOutcome
from .minhash import MinHasher, estimate_jaccard


def content_digest(text: str) -> bytes:
    """128-bit content hash of the exact text."""
    return hashlib.blake2b(text.encode("utf-8"), digest_size=16).digest()


def dedup_exact(docs: list[Document]) -> tuple[list[Document], list[StageOutcome]]:
    kept: list[Document] = []
    outcomes: list[StageOutcome] = []
    first_seen: dict[bytes, str] = {}
    for doc in docs:
        digest = content_digest(doc.text)
        survivor = first_seen.get(digest)
        if survivor is None:
            first_seen[digest] = doc.doc_id
            kept.append(doc)
            outcomes.append(StageOutcome(doc_id=doc.doc_id,
                                         stage="exact_dedup", verdict="kept"))
        else:
            outcomes.append(StageOutcome(
                doc_id=doc.doc_id, stage="exact_dedup", verdict="dropped",
                reason=f"exact duplicate of {survivor}",
                detail={"duplicate_of": survivor},
            ))
    return kept, outcomes


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # attach the later root to the earlier one so the earliest
            # stream index stays representative
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def dedup_near(docs: list[Document], config: PipelineConfig,
               workers: int = 1) -> tuple[list[Document], list[StageOutcome]]:
    """LSH banding proposes candidate pairs; pairs whose signature-estimated
    Jaccard clears the threshold are clustered; earliest per cluster wins.

    Signature hashing may run in parallel; candidate collection and union
    commits happen in stream order, so output never depends on workers.
    """
    hasher = MinHasher(shingle_size=config.shingle_size,
                       num_permutations=config.num_permutations,
                       seed=config.seed)

    def sig_or_none(doc: Document) -> np.ndarray | None:
        try:
            return hasher.signature(doc.text)
        except DocumentTooShortError:
            return None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            signatures = list(pool.map(sig_or_none, docs))
    else:
        signatures = [sig_or_none(doc) for doc in docs]

    rows = config.num_permutations // config.num_bands
    buckets: dict[tuple[int, bytes], list[int]] = {}
    uf = _UnionFind(len(docs))
    checked: set[tuple[int, int]] = set()

    for i, sig in enumerate(signatures):
        if sig is None:
            continue
        for band in range(config.num_bands):
            key = (band, sig[band * rows : (band + 1) * rows].tobytes())
            bucket = buckets.setdefault(key, [])
            for j in bucket:
                pair = (j, i)
                if pair in checked:
                    continue
                checked.add(pair)
                if (estimate_jaccard(signatures[j], sig)
                        >= config.jaccard_threshold):
                    uf.union(j, i)
            bucket.append(i)

    kept: list[Document] = []
    outcomes: list[StageOutcome] = []
    cluster_head: dict[int, int] = {}
    for i, doc in enumerate(docs):
        if signatures[i] is None:
            kept.append(doc)
            outcomes.append(StageOutcome(
                doc_id=doc.doc_id, stage="near_dedup", verdict="kept",
                reason="below shingle length",
            ))
            continue
        root = uf.find(i)
        head = cluster_head.get(root)
        if head is None:
            cluster_head[root] = i
            kept.append(doc)
            outcomes.append(StageOutcome(doc_id=doc.doc_id,
                                         stage="near_dedup", verdict="kept"))
        else:
            survivor = docs[head].doc_id
            outcomes.append(StageOutcome(
                doc_id=doc.doc_id, stage="near_dedup", verdict="dropped",
                reason=f"near duplicate of {survivor}",
                detail={"duplicate_of": survivor},
            ))
    return kept, outcomes
