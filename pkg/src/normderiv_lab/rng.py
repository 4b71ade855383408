"""Deterministic, splittable random streams.

All randomness in the package flows through a single counter-based generator
(Philox) keyed by SHA-256 of (seed, labels).  Streams derived from distinct
labels are independent, so per-trial streams do not depend on execution
order and every sampled input can be regenerated from (seed, labels) alone.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_key(seed: int, *labels: object) -> int:
    """128-bit Philox key from a seed and an arbitrary label path."""
    text = "\x1f".join([str(int(seed))] + [str(lab) for lab in labels])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "little")


def stream(seed: int, *labels: object) -> np.random.Generator:
    """Independent generator for the given (seed, labels) path."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *labels)))


def unit_vector(gen: np.random.Generator, n: int) -> np.ndarray:
    """Uniform point on the Euclidean unit sphere (Gaussian normalization)."""
    while True:
        v = gen.standard_normal(n)
        nv = float(np.linalg.norm(v))
        if nv > 1e-12:
            return v / nv


def gaussian_matrix(gen: np.random.Generator, m: int, n: int) -> np.ndarray:
    """Matrix with independent standard normal entries."""
    return gen.standard_normal((m, n))


def random_orthogonal(gen: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish orthogonal matrix via QR with a deterministic sign fix."""
    q, r = np.linalg.qr(gen.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
