"""Orthogonality relations induced by the norm derivatives.

Four relations are decided from the exact face route:

* Birkhoff-James (``bj``):   rho_minus(x, y) <= 0 <= rho_plus(x, y),
* ``rho_plus`` / ``rho_minus`` / ``rho``: the corresponding derivative
  vanishes.

Two support-functional characterizations are checked literally against the
derivative definitions, and 2D orthogonality sets are scanned into ray
diagrams (unions of rays and, for Birkhoff-James, possibly fat cones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DegenerateInput, InputError
from .spaces import Space, as_vector, norm
from .support import range_over_face, support_set

# Scale-free default: |derivative| is bounded by ||x|| ||y||, so the zero
# test is calibrated against that product.
ORTHO_TOL = 1e-9


class Relation(str, Enum):
    BJ = "bj"
    RHO_PLUS = "rho_plus"
    RHO_MINUS = "rho_minus"
    RHO = "rho"


DERIVATIVE_RELATIONS = (Relation.RHO_PLUS, Relation.RHO_MINUS, Relation.RHO)


@dataclass(frozen=True)
class OrthogonalityVerdict:
    relation: Relation
    holds: bool
    witness: Optional[dict]
    tolerance: float

    def to_json(self) -> dict:
        return {
            "relation": self.relation.value,
            "holds": self.holds,
            "witness": self.witness,
            "tolerance": self.tolerance,
        }


def default_tolerance(space: Space, x, y, tol: Optional[float] = None) -> float:
    if tol is not None:
        return float(tol)
    return ORTHO_TOL * norm(space, x) * norm(space, y)


def _face_data(space: Space, x, y):
    """(||x||, m, M, face) with (m, M) the range of f(y) over J(x)."""
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    nx = norm(space, xv)
    if nx == 0.0:
        raise DegenerateInput("x must be nonzero")
    face = support_set(space, xv)
    m, big = range_over_face(face, yv)
    return nx, m, big, face


def _zero_functional_witness(face, y, m, big):
    """A functional in conv(extremes) annihilating y, when 0 in [m, M]."""
    vals = np.stack(face.extremes) @ np.asarray(y, dtype=float)
    lo = face.extremes[int(np.argmin(vals))]
    hi = face.extremes[int(np.argmax(vals))]
    if big - m <= 1e-15 * max(1.0, abs(big), abs(m)):
        return hi.tolist()
    lam = big / (big - m)
    lam = min(max(lam, 0.0), 1.0)
    return (lam * lo + (1.0 - lam) * hi).tolist()


def is_orthogonal(space: Space, x, y, relation: Relation, tol: Optional[float] = None) -> OrthogonalityVerdict:
    """Decide the relation; zero is orthogonal to everything and conversely."""
    relation = Relation(relation)
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    tolerance = default_tolerance(space, xv, yv, tol)
    if norm(space, xv) == 0.0 or norm(space, yv) == 0.0:
        return OrthogonalityVerdict(relation, True, {"degenerate": True}, tolerance)

    nx, m, big, face = _face_data(space, xv, yv)
    r_minus = nx * m
    r_plus = nx * big
    witness: dict = {"rho_minus": r_minus, "rho_plus": r_plus}

    if relation is Relation.BJ:
        holds = r_minus <= tolerance and r_plus >= -tolerance
    elif relation is Relation.RHO_PLUS:
        holds = abs(r_plus) <= tolerance
        if holds:
            witness["annihilating_functional"] = _zero_functional_witness(face, yv, m, big)
    elif relation is Relation.RHO_MINUS:
        holds = abs(r_minus) <= tolerance
        if holds:
            witness["annihilating_functional"] = _zero_functional_witness(face, yv, m, big)
    else:
        witness["rho"] = 0.5 * (r_plus + r_minus)
        holds = abs(0.5 * (r_plus + r_minus)) <= tolerance
    return OrthogonalityVerdict(relation, holds, witness, tolerance)


def check_rho_characterization(space: Space, x, y, tol: Optional[float] = None) -> tuple:
    """Literal support-functional test of mean-derivative orthogonality.

    For every extreme f of J(x) there must exist g in J(x) with
    (f + g)(y) = 0; since g(y) sweeps [m, M], this is the containment
    -f(y) in [m, M] for every extreme f.  Returns (holds,
    agrees_with_derivative), the latter comparing against |rho(x,y)| <= tol.
    """
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    tolerance = default_tolerance(space, xv, yv, tol)
    nx, m, big, face = _face_data(space, xv, yv)

    slack = 2.0 * tolerance / nx
    vals = np.stack(face.extremes) @ yv
    literal = bool(np.all((-vals >= m - slack) & (-vals <= big + slack)))

    derivative_zero = abs(nx * 0.5 * (m + big)) <= tolerance
    return literal, literal == derivative_zero


def check_rho_pm_characterization(space: Space, x, y, side: str, tol: Optional[float] = None) -> tuple:
    """Literal support-functional test of one-sided orthogonality.

    (a) some f0 in J(x) annihilates y: 0 in [m, M];
    (b) no f in J(x) annihilates z_t for any t in (0, 1), where
        z_t = -t x + (1 - t) y on the plus side (z_t = t x + (1 - t) y on
        the minus side).  f(z_t) is affine in t with f(z_1) = -+||x||, so a
        root in (0, 1) exists exactly when f(y) is on the wrong side of 0.

    Returns (holds, agrees_with_derivative).
    """
    if side not in ("plus", "minus"):
        raise InputError("side must be 'plus' or 'minus'")
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    tolerance = default_tolerance(space, xv, yv, tol)
    nx, m, big, face = _face_data(space, xv, yv)

    slack = tolerance / nx
    vals = np.stack(face.extremes) @ yv
    annihilator_exists = (m <= slack) and (big >= -slack)

    if side == "plus":
        # f(z_t) = -t ||x|| + (1 - t) f(y): sign change over (0, 1) iff f(y) > 0.
        kernel_hits = vals[vals > slack]
    else:
        # f(z_t) = t ||x|| + (1 - t) f(y): sign change over (0, 1) iff f(y) < 0.
        kernel_hits = vals[vals < -slack]
    literal = annihilator_exists and kernel_hits.size == 0

    value = nx * (big if side == "plus" else m)
    return literal, literal == (abs(value) <= tolerance)


# ---------------------------------------------------------------------------
# 2D ray scans


class Structure(str, Enum):
    HYPERPLANE = "hyperplane"
    RAY_UNION = "ray_union"
    EMPTY = "empty"


@dataclass(frozen=True)
class RayDiagram:
    """Directions (angles in radians) where the relation holds at ``point``.

    Isolated certified zeros are listed in ``rays``; fat membership cones
    (possible for Birkhoff-James in polyhedral planes) as ``arcs``.
    """

    point: tuple
    relation: Relation
    rays: tuple
    arcs: tuple
    structure: Structure
    tolerance: float
    angular_step: float
    stable: bool
    samples: Optional[tuple] = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "point": list(self.point),
            "relation": self.relation.value,
            "rays": list(self.rays),
            "rays_deg": [math.degrees(a) for a in self.rays],
            "arcs": [list(a) for a in self.arcs],
            "arcs_deg": [[math.degrees(a), math.degrees(b)] for a, b in self.arcs],
            "structure": self.structure.value,
            "tolerance": self.tolerance,
            "angular_step_deg": math.degrees(self.angular_step),
            "stable": self.stable,
        }


def _direction_values(space: Space, x, relation: Relation):
    """Membership function g(theta): relation holds at u(theta) iff g ~ 0 (<= 0 for BJ)."""
    xv = as_vector(space, x)
    face = support_set(space, xv)
    nx = norm(space, xv)
    extremes = np.stack(face.extremes)

    def values(theta: float) -> tuple:
        u = np.array([math.cos(theta), math.sin(theta)])
        vals = extremes @ u
        return nx * float(vals.min()), nx * float(vals.max())

    if relation is Relation.RHO_PLUS:
        return lambda t: values(t)[1]
    if relation is Relation.RHO_MINUS:
        return lambda t: values(t)[0]
    if relation is Relation.RHO:
        return lambda t: 0.5 * sum(values(t))
    # BJ membership: max(rho_minus, -rho_plus) <= 0.
    return lambda t: max(values(t)[0], -values(t)[1])


def _bisect_zero(g, a: float, b: float, fa: float, fb: float) -> float:
    for _ in range(80):
        mid = 0.5 * (a + b)
        fm = g(mid)
        if fm == 0.0:
            return mid
        if (fa < 0.0) != (fm < 0.0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
        if b - a < 1e-13:
            break
    return 0.5 * (a + b)


def _bisect_boundary(member, a: float, b: float) -> float:
    """Boundary between member(a) and member(b) (exactly one is True)."""
    ma = member(a)
    for _ in range(60):
        mid = 0.5 * (a + b)
        if member(mid) == ma:
            a = mid
        else:
            b = mid
        if b - a < 1e-13:
            break
    return 0.5 * (a + b)


def _wrap(theta: float) -> float:
    out = math.fmod(theta, 2.0 * math.pi)
    if out < 0.0:
        out += 2.0 * math.pi
    if out >= 2.0 * math.pi - 1e-12:
        out = 0.0 if out - 2.0 * math.pi > -1e-12 else out
    return out


def _scan_once(space: Space, x, relation: Relation, n: int, tol: float):
    g = _direction_values(space, x, relation)
    step = 2.0 * math.pi / n
    angles = [i * step for i in range(n)]
    vals = [g(t) for t in angles]

    if relation is Relation.BJ:
        member = [v <= tol for v in vals]
        member_at = lambda t: g(t) <= tol
    else:
        member = [abs(v) <= tol for v in vals]
        member_at = lambda t: abs(g(t)) <= tol

    rays: list = []
    arcs: list = []

    if all(member):
        return [], [(0.0, 2.0 * math.pi)], vals

    # Zero crossings between adjacent non-member grid points (derivative
    # relations change sign there; for BJ the two one-sided derivatives can
    # cross zero without the grid ever entering the membership set).
    if relation is Relation.BJ:
        xv = as_vector(space, x)
        face = support_set(space, xv)
        nx = norm(space, xv)
        extremes = np.stack(face.extremes)

        def h_minus(t):
            return nx * float((extremes @ np.array([math.cos(t), math.sin(t)])).min())

        def h_plus(t):
            return nx * float((extremes @ np.array([math.cos(t), math.sin(t)])).max())

        crossing_fns = (h_minus, h_plus)
    else:
        crossing_fns = (g,)

    for i in range(n):
        j = (i + 1) % n
        if member[i] or member[j]:
            continue
        a, b = angles[i], angles[i] + step
        for fn in crossing_fns:
            fa, fb = fn(a), fn(b)
            if (fa < 0.0) == (fb < 0.0) or fa == 0.0 or fb == 0.0:
                continue
            theta = _bisect_zero(fn, a, b, fa, fb)
            if member_at(theta):
                rays.append(_wrap(theta))

    # Maximal runs of member grid points become rays (length 1) or arcs.
    start = next(i for i in range(n) if not member[i])
    i = 0
    while i < n:
        idx = (start + i) % n
        if not member[idx]:
            i += 1
            continue
        run = [idx]
        while i + len(run) < n and member[(start + i + len(run)) % n]:
            run.append((start + i + len(run)) % n)
        left_out = angles[run[0]] - step
        right_out = angles[run[0]] + len(run) * step
        base = angles[run[0]]
        if len(run) == 1:
            fa, fb = g(left_out), g(right_out)
            if relation is not Relation.BJ and (fa < 0.0) != (fb < 0.0):
                rays.append(_wrap(_bisect_zero(g, left_out, right_out, fa, fb)))
            else:
                rays.append(_wrap(base))
        else:
            lo = _bisect_boundary(member_at, left_out, base)
            hi = _bisect_boundary(member_at, base + (len(run) - 1) * step, right_out)
            arcs.append((_wrap(lo), lo + (hi - lo)))
        i += len(run)

    # Deduplicate rays (mod 2 pi) and drop rays inside reported arcs.
    rays.sort()
    merged: list = []
    for theta in rays:
        if any(_angle_dist(theta, r) < 0.25 * step for r in merged):
            continue
        if any(_inside_arc(theta, a, b, step) for a, b in arcs):
            continue
        merged.append(theta)
    if len(merged) > 1 and _angle_dist(merged[0], merged[-1]) < 0.25 * step:
        merged.pop()
    arcs = [(_wrap(a), _wrap(a) + (b - a)) for a, b in sorted(arcs)]
    return merged, arcs, vals


def _angle_dist(a: float, b: float) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def _inside_arc(theta: float, a: float, b: float, pad: float) -> bool:
    span = b - a
    rel = (theta - a) % (2.0 * math.pi)
    return -pad * 0.25 <= rel <= span + pad * 0.25


def ray_scan_2d(
    space: Space,
    x,
    relation: Relation,
    angular_step: float = math.radians(0.5),
    tol: Optional[float] = None,
    keep_samples: bool = False,
) -> RayDiagram:
    """Scan unit directions of a 2D space for the orthogonality set of x.

    ``angular_step`` is in radians and must not exceed 1 degree.  Certified
    rays satisfy |g(theta)| <= tol; classification requires the ray set to be
    stable under halving the step once, otherwise a hyperplane claim is
    downgraded to a ray union.
    """
    relation = Relation(relation)
    if space.dim != 2:
        raise InputError("ray scans are defined for 2-dimensional spaces only")
    xv = as_vector(space, x)
    if norm(space, xv) == 0.0:
        raise DegenerateInput("x must be nonzero")
    if not (0.0 < angular_step <= math.radians(1.0) + 1e-15):
        raise InputError("angular_step must be positive and at most 1 degree")
    zero_tol = tol if tol is not None else ORTHO_TOL * max(1.0, norm(space, xv))

    n = max(8, int(round(2.0 * math.pi / angular_step)))
    coarse_rays, coarse_arcs, _ = _scan_once(space, xv, relation, n, zero_tol)
    fine_rays, fine_arcs, fine_vals = _scan_once(space, xv, relation, 2 * n, zero_tol)

    step = 2.0 * math.pi / n
    stable = len(coarse_rays) == len(fine_rays) and len(coarse_arcs) == len(fine_arcs)
    if stable:
        stable = all(
            any(_angle_dist(c, f) <= step for f in fine_rays) for c in coarse_rays
        ) and all(
            _angle_dist(ca, fa) <= step and _angle_dist(cb, fb) <= step
            for (ca, cb), (fa, fb) in zip(sorted(coarse_arcs), sorted(fine_arcs))
        )

    g = _direction_values(space, xv, relation)
    certified = tuple(t for t in fine_rays if abs(g(t)) <= zero_tol)

    if not certified and not fine_arcs:
        structure = Structure.EMPTY
    elif (
        stable
        and not fine_arcs
        and len(certified) == 2
        and abs(_angle_dist(certified[0], certified[1]) - math.pi) <= 1e-6
    ):
        structure = Structure.HYPERPLANE
    else:
        structure = Structure.RAY_UNION

    samples = None
    if keep_samples:
        fine_step = math.pi / n
        samples = tuple((i * fine_step, v) for i, v in enumerate(fine_vals))

    return RayDiagram(
        point=tuple(xv.tolist()),
        relation=relation,
        rays=certified,
        arcs=tuple(fine_arcs),
        structure=structure,
        tolerance=zero_tol,
        angular_step=angular_step,
        stable=stable,
        samples=samples,
    )
