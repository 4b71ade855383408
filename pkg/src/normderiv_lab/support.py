"""Exact support sets J(x) = {f in the dual sphere : f(x) = ||x||}.

For the supported spaces the set is either a single functional (smooth
point) or a polytope returned through its extreme functionals:

* ``l1``        -- sign vectors; every zero coordinate of x is free to be
                   +1 or -1, giving 2^z extremes,
* ``linf``      -- signed coordinate functionals of the maximal coordinates,
* ``lp``/``euclidean`` -- the unique functional sign(x_i)|x_i|^(p-1)/||x||^(p-1).

A linear functional attains its extrema over a polytope at extreme points,
so ranges of f(y) over J(x) reduce to a scan of the extreme list.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DegenerateInput, InputError
from .spaces import Space, as_vector, norm

# Face structure is discontinuous in x, so the zero/tie cutoff is explicit:
# coordinates within ZERO_CUTOFF * ||x||_inf of zero (resp. of the max) are
# treated as exact zeros (resp. exact ties).
ZERO_CUTOFF = 1e-12

# 2^z extreme enumeration cap for l1 faces.
MAX_FREE_SIGNS = 20


@dataclass(frozen=True)
class SupportFace:
    """J(x) as a tuple of extreme functionals; a single entry means a smooth point."""

    extremes: tuple

    def __post_init__(self):
        if not self.extremes:
            raise InputError("a support face has at least one extreme functional")
        for f in self.extremes:
            f.setflags(write=False)

    @property
    def is_singleton(self) -> bool:
        return len(self.extremes) == 1

    @property
    def functional(self) -> np.ndarray:
        if not self.is_singleton:
            raise InputError("face is a polytope; no unique functional")
        return self.extremes[0]

    def to_json(self) -> dict:
        return {
            "variant": "singleton" if self.is_singleton else "polytope",
            "functionals": [f.tolist() for f in self.extremes],
        }


def support_set(space: Space, x, zero_tol: float = ZERO_CUTOFF) -> SupportFace:
    """Support set of a nonzero vector, as a singleton or extreme-point list."""
    v = as_vector(space, x)
    nx = norm(space, v)
    if nx == 0.0:
        raise DegenerateInput("J(0) is the whole dual sphere; callers must special-case 0")

    if space.kind == "l1":
        cutoff = zero_tol * float(np.max(np.abs(v)))
        zero = np.abs(v) <= cutoff
        base = np.where(zero, 0.0, np.sign(v))
        free = np.flatnonzero(zero)
        if free.size == 0:
            return SupportFace((base,))
        if free.size > MAX_FREE_SIGNS:
            raise CapacityError(
                f"l1 face with {free.size} zero coordinates exceeds the 2^{MAX_FREE_SIGNS} cap"
            )
        extremes = []
        for signs in itertools.product((-1.0, 1.0), repeat=free.size):
            f = base.copy()
            f[free] = signs
            extremes.append(f)
        return SupportFace(tuple(extremes))

    if space.kind == "linf":
        a = np.abs(v)
        top = float(np.max(a))
        ties = np.flatnonzero(a >= top - zero_tol * top)
        extremes = []
        for i in ties:
            f = np.zeros(space.dim)
            f[i] = 1.0 if v[i] > 0 else -1.0
            extremes.append(f)
        return SupportFace(tuple(extremes))

    p = 2.0 if space.kind == "euclidean" else space.p
    f = np.sign(v) * np.abs(v) ** (p - 1.0) / nx ** (p - 1.0)
    return SupportFace((f,))


def range_over_face(face: SupportFace, y) -> tuple:
    """(min, max) of f(y) as f runs over the face."""
    ya = np.asarray(y, dtype=float)
    if ya.ndim != 1 or ya.shape[0] != face.extremes[0].shape[0]:
        raise InputError(
            f"direction dimension {ya.shape} does not match face dimension "
            f"{face.extremes[0].shape}"
        )
    values = np.stack(face.extremes) @ ya
    return float(values.min()), float(values.max())
