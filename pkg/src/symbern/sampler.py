"""Reproducible sampling from a :class:`~symbern.count_pmf.CountPMF`.

Each vector is drawn by picking its weight ``K`` with probability
``C(n, K) f[K]`` and then setting a uniformly random ``K``-subset of the
coordinates to one.

Randomness comes from Philox4x64-10 (the Random123 counter-based generator,
as exposed by :class:`numpy.random.Philox`), keyed with ``(seed, 0)``.
Word ``w`` of the stream is lane ``w % 4`` of the Philox block at counter
``(w // 4 + 1, 0, 0, 0)``. Vector ``r`` reads the ``n + 1`` words starting
at word ``r * (n + 1)``:

* words 0 and 1 form a 128-bit integer ``u = w0 * 2**64 + w1``; the weight
  is the smallest ``K`` with ``u < ceil(2**128 * P(weight <= K))``, an exact
  integer comparison;
* word ``2 + i`` (``i = 0 .. n-2``) gives the swap partner
  ``j = i + w mod (n - i)`` of a Fisher-Yates pass over ``[0, n)``; only
  the first ``K`` swaps are applied and positions ``0 .. K-1`` are set.

A shuffle word that would bias ``w mod (n - i)`` is rejected and replaced
by the next accepted word from a side stream keyed ``(seed, r + 1)`` and
advanced by ``i * 2**32`` blocks. Every vector owns a fixed slice of the
counter space, so the batch depends only on ``(pmf, count, seed)``, never
on how the work is split across workers.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np
from numpy.random import Philox

from symbern.count_pmf import CountPMF, check_marginals

MASK64 = (1 << 64) - 1
CHUNK = 1 << 16
SIDE_STRIDE_BITS = 32


@dataclass(frozen=True)
class SampleBatch:
    n: int
    count: int
    vectors: np.ndarray  # (count, n) uint8
    seed: int

    def __post_init__(self) -> None:
        v = self.vectors
        if v.shape != (self.count, self.n) or v.dtype != np.uint8:
            raise ValueError("vectors must be a (count, n) uint8 array")
        if v.size and v.max() > 1:
            raise ValueError("vectors must be 0/1")

    def weights(self) -> np.ndarray:
        return self.vectors.sum(axis=1, dtype=np.int64)

    def to_csv(self, header: bool = False) -> bytes:
        """One ``0,1,...`` row per vector, ``\\n`` line endings."""
        n = self.n
        out = np.full((self.count, 2 * n), ord(","), dtype=np.uint8)
        out[:, 0::2] = self.vectors + ord("0")
        out[:, -1] = ord("\n")
        body = out.tobytes()
        if header:
            body = (",".join(f"x{i + 1}" for i in range(n)) + "\n").encode() + body
        return body

    def write_csv(self, stream: io.BufferedIOBase, header: bool = False) -> None:
        stream.write(self.to_csv(header))


@dataclass(frozen=True)
class EmpiricalStats:
    means: np.ndarray
    mean_agreement: float
    agreement: np.ndarray

    def to_json(self) -> dict:
        return {
            "means": self.means.tolist(),
            "mean_agreement": self.mean_agreement,
            "agreement": self.agreement.tolist(),
        }


def _key(low: int, high: int) -> np.ndarray:
    return np.array([low, high], dtype=np.uint64)


def _weight_thresholds(pmf: CountPMF) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Words of ``ceil(2**128 * P(weight <= k))`` for ``k < n``, plus whether each is below ``2**128``."""
    hi, lo, reachable = [], [], []
    cum = Fraction(0)
    for mass in pmf.layer_masses()[:-1]:
        cum += mass
        t = ceil(cum * (1 << 128))
        reachable.append(t < 1 << 128)
        t = min(t, (1 << 128) - 1)
        hi.append(t >> 64)
        lo.append(t & MASK64)
    return (
        np.array(hi, dtype=np.uint64),
        np.array(lo, dtype=np.uint64),
        np.array(reachable, dtype=bool),
    )


def _draw_weights(w0, w1, t_hi, t_lo, reachable) -> np.ndarray:
    h, l = w0[:, None], w1[:, None]
    below = (h < t_hi) | ((h == t_hi) & (l < t_lo))
    return (~below & reachable).sum(axis=1)


def _bounded(words: np.ndarray, bound: int, rows: np.ndarray, seed: int, step: int) -> np.ndarray:
    """``words mod bound`` without modulo bias, refilling rejects from per-row side streams."""
    limit = (1 << 64) - (1 << 64) % bound
    bad = np.nonzero(words >= np.uint64(limit))[0] if limit < (1 << 64) else ()
    out = words % np.uint64(bound)
    for i in bad:
        side = Philox(key=_key(seed, int(rows[i]) + 1))
        side.advance(step << SIDE_STRIDE_BITS)
        while True:
            w = int(side.random_raw())
            if w < limit:
                out[i] = w % bound
                break
    return out.astype(np.int64)


def _sample_rows(pmf: CountPMF, start: int, stop: int, seed: int, thresholds) -> np.ndarray:
    n = pmf.n
    width = n + 1
    count = stop - start
    offset = start * width
    gen = Philox(key=_key(seed, 0))
    gen.advance(offset // 4)
    skip = offset % 4
    raw = gen.random_raw(skip + count * width)[skip:].reshape(count, width)
    k = _draw_weights(raw[:, 0], raw[:, 1], *thresholds)
    rows = np.arange(start, stop)
    perm = np.tile(np.arange(n), (count, 1))
    ridx = np.arange(count)
    for i in range(n - 1):
        j = i + _bounded(raw[:, 2 + i], n - i, rows, seed, i)
        active = ridx[k > i]
        ja = j[active]
        a, b = perm[active, i].copy(), perm[active, ja]
        perm[active, i] = b
        perm[active, ja] = a
    bits = np.zeros((count, n), dtype=np.uint8)
    np.put_along_axis(bits, perm, (np.arange(n) < k[:, None]).astype(np.uint8), axis=1)
    return bits


def sample(pmf: CountPMF, count: int, seed: int, workers: int = 1) -> SampleBatch:
    """Draw ``count`` i.i.d. vectors; identical for any ``workers``."""
    if not check_marginals(pmf):
        raise ValueError("pmf does not have symmetric Bernoulli marginals")
    if not isinstance(count, int) or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    if not isinstance(seed, int) or not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    thresholds = _weight_thresholds(pmf)
    bounds = [(s, min(s + CHUNK, count)) for s in range(0, count, CHUNK)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda se: _sample_rows(pmf, se[0], se[1], seed, thresholds), bounds))
    else:
        parts = [_sample_rows(pmf, s, e, seed, thresholds) for s, e in bounds]
    return SampleBatch(pmf.n, count, np.concatenate(parts), seed)


def estimate(batch: SampleBatch) -> EmpiricalStats:
    if batch.count < 1:
        raise ValueError("cannot estimate from an empty batch")
    x = batch.vectors.astype(np.int64)
    ones = x.T @ x
    zeros = (1 - x).T @ (1 - x)
    agreement = (ones + zeros) / batch.count
    iu = np.triu_indices(batch.n, 1)
    return EmpiricalStats(
        means=x.mean(axis=0),
        mean_agreement=float(agreement[iu].mean()),
        agreement=agreement,
    )
