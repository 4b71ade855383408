"""Concrete finite-dimensional normed spaces over the reals.

A space is a pure descriptor; vectors and dual functionals are plain float
arrays acting through the standard coordinate pairing.  Supported kinds:

* ``l1`` / ``linf``  -- the polyhedral endpoints of the scale (their
  support sets are polytopes, so they are kept apart from ``lp``),
* ``lp``             -- strictly 1 < p < inf,
* ``euclidean``      -- the inner-product case,
* ``operator``       -- matrices between two of the above (norms for this
  kind live in :mod:`normderiv_lab.operators`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError

VECTOR_KINDS = ("l1", "linf", "lp", "euclidean")


@dataclass(frozen=True)
class Space:
    """Descriptor of a normed space; carries no state beyond its identity."""

    kind: str
    dim: int
    p: Optional[float] = None
    domain: Optional["Space"] = None
    codomain: Optional["Space"] = None

    def __post_init__(self):
        if self.kind not in VECTOR_KINDS + ("operator",):
            raise InputError(f"unknown space kind {self.kind!r}")
        if self.kind == "operator":
            if self.domain is None or self.codomain is None:
                raise InputError("operator space needs domain and codomain")
            if self.domain.kind == "operator" or self.codomain.kind == "operator":
                raise InputError("operator spaces nest exactly one level")
            if self.dim != self.domain.dim * self.codomain.dim:
                raise InputError("operator space dim must be domain.dim * codomain.dim")
            return
        if self.dim < 1:
            raise InputError("dimension must be a positive integer")
        if self.kind == "lp":
            if self.p is None or not (1.0 < self.p < math.inf):
                raise InputError("lp requires 1 < p < inf (use l1/linf for the endpoints)")
        elif self.p is not None:
            raise InputError(f"kind {self.kind!r} takes no exponent parameter")

    @property
    def is_operator(self) -> bool:
        return self.kind == "operator"


def l1(n: int) -> Space:
    return Space("l1", n)


def linf(n: int) -> Space:
    return Space("linf", n)


def lp(n: int, p: float) -> Space:
    return Space("lp", n, p=float(p))


def euclidean(n: int) -> Space:
    return Space("euclidean", n)


def operator_space(domain: Space, codomain: Space) -> Space:
    return Space("operator", domain.dim * codomain.dim, domain=domain, codomain=codomain)


def as_vector(space: Space, v) -> np.ndarray:
    """Validate and convert to a float array of the space's dimension."""
    if space.is_operator:
        raise InputError("vectors of an operator space are matrices; use the operators module")
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != space.dim:
        raise InputError(f"expected a vector of dimension {space.dim}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("vector has non-finite coordinates")
    return arr


def norm(space: Space, v) -> float:
    """Norm of ``v`` in ``space`` (vector kinds only)."""
    x = as_vector(space, v)
    if space.kind == "l1":
        return float(np.sum(np.abs(x)))
    if space.kind == "linf":
        return float(np.max(np.abs(x))) if x.size else 0.0
    if space.kind == "euclidean":
        return float(np.linalg.norm(x))
    return float(np.sum(np.abs(x) ** space.p) ** (1.0 / space.p))


def dual_exponent(space: Space) -> float:
    """Conjugate exponent q with 1/p + 1/q = 1."""
    if space.kind == "l1":
        return math.inf
    if space.kind == "linf":
        return 1.0
    if space.kind == "euclidean":
        return 2.0
    return space.p / (space.p - 1.0)


def dual_norm(space: Space, f) -> float:
    """Dual-space norm of the functional with coordinates ``f``."""
    g = as_vector(space, f)
    q = dual_exponent(space)
    if q == math.inf:
        return float(np.max(np.abs(g))) if g.size else 0.0
    if q == 1.0:
        return float(np.sum(np.abs(g)))
    if q == 2.0:
        return float(np.linalg.norm(g))
    return float(np.sum(np.abs(g) ** q) ** (1.0 / q))


def dual_pairing(f, v) -> float:
    """Standard pairing sum_i f_i v_i."""
    fa = np.asarray(f, dtype=float)
    va = np.asarray(v, dtype=float)
    if fa.shape != va.shape or fa.ndim != 1:
        raise InputError(f"pairing dimension mismatch: {fa.shape} vs {va.shape}")
    return float(fa @ va)


def space_to_json(space: Space) -> dict:
    if space.is_operator:
        return {
            "kind": "operator",
            "domain": space_to_json(space.domain),
            "codomain": space_to_json(space.codomain),
        }
    out = {"kind": space.kind, "dim": space.dim}
    if space.kind == "lp":
        out["p"] = space.p
    return out


def space_from_json(obj: dict) -> Space:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("space JSON must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "operator":
        return operator_space(space_from_json(obj["domain"]), space_from_json(obj["codomain"]))
    if kind not in VECTOR_KINDS:
        raise InputError(f"unknown space kind {kind!r}")
    if "dim" not in obj:
        raise InputError("space JSON missing 'dim'")
    dim = int(obj["dim"])
    if kind == "lp":
        if "p" not in obj:
            raise InputError("lp space JSON missing 'p'")
        return lp(dim, float(obj["p"]))
    return Space(kind, dim)
