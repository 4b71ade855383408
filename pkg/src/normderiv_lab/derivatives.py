"""One-sided norm derivatives.

rho_plus(x, y) is the right derivative of t -> ||x + t y|| at 0 scaled by
||x||; rho_minus is the left derivative, rho their average.  Two routes are
provided and cross-validated in the test suites:

* the exact route through the support face,
      rho_plus(x, y)  = ||x|| * max{f(y) : f in J(x)},
      rho_minus(x, y) = ||x|| * min{f(y) : f in J(x)},
* an independent finite-difference limit oracle along a decreasing step
  schedule with one Richardson step at the end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, OracleInconsistency
from .spaces import Space, as_vector, norm
from .support import range_over_face, support_set

EXACT_FACE = "exact_face"
LIMIT_ORACLE = "limit_oracle"

PLUS = "plus"
MINUS = "minus"

# t_k = 10^-k, k = 1..8: polyhedral norms are exactly linear below their
# smallest breakpoint and lp norms converge before cancellation dominates.
DEFAULT_SCHEDULE = tuple(10.0 ** -k for k in range(1, 9))

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class DerivativeValue:
    """A derivative result with provenance and an estimated numerical error."""

    value: float
    method: str
    error_estimate: float = 0.0

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "error_estimate": self.error_estimate,
        }


def _face_range(space: Space, x, y) -> tuple:
    """(||x||, min f(y), max f(y)) over J(x); (0, 0, 0) for x = 0."""
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    nx = norm(space, xv)
    if nx == 0.0:
        return 0.0, 0.0, 0.0
    m, big = range_over_face(support_set(space, xv), yv)
    return nx, m, big


def rho_plus(space: Space, x, y) -> DerivativeValue:
    nx, _, big = _face_range(space, x, y)
    return DerivativeValue(nx * big, EXACT_FACE)


def rho_minus(space: Space, x, y) -> DerivativeValue:
    nx, m, _ = _face_range(space, x, y)
    return DerivativeValue(nx * m, EXACT_FACE)


def rho(space: Space, x, y) -> DerivativeValue:
    nx, m, big = _face_range(space, x, y)
    return DerivativeValue(nx * 0.5 * (m + big), EXACT_FACE)


def validate_schedule(schedule) -> tuple:
    steps = tuple(float(t) for t in schedule)
    if len(steps) < 4:
        raise InputError("step schedule needs at least 4 entries")
    if steps[-1] <= 0.0:
        raise InputError("step schedule must stay positive")
    if any(b >= a for a, b in zip(steps, steps[1:])):
        raise InputError("step schedule must be strictly decreasing")
    return steps


def one_sided_limit(phi, prefactor: float, side: str, schedule=DEFAULT_SCHEDULE) -> tuple:
    """Limit of prefactor * (phi(t) - phi(0)) / t as t -> 0 on the given side.

    phi must be convex; its one-sided quotients are then monotone along the
    schedule, which is asserted up to an explicit rounding allowance.  The
    returned error estimate is the spread of the last two quotients plus
    the cancellation floor of the smallest steps.

    Returns (value, error_estimate).
    """
    if side not in (PLUS, MINUS):
        raise InputError(f"side must be {PLUS!r} or {MINUS!r}")
    steps = validate_schedule(schedule)
    sign = 1.0 if side == PLUS else -1.0
    base = float(phi(0.0))
    if not np.isfinite(base):
        raise OracleInconsistency("phi(0) is not finite")

    quotients = []
    for t in steps:
        ft = float(phi(sign * t))
        if not np.isfinite(ft):
            raise OracleInconsistency(f"phi({sign * t}) is not finite")
        quotients.append(prefactor * (ft - base) / (sign * t))

    # Plus-side quotients are nonincreasing toward the limit, minus-side
    # nondecreasing.  Cancellation in phi(t) - phi(0) injects noise of
    # order eps * |phi| / t, which must be allowed for at the small steps.
    for k in range(1, len(steps)):
        drift = quotients[k] - quotients[k - 1]
        if side == PLUS:
            drift = -drift
        allowance = 1e-12 * max(1.0, abs(quotients[k]), abs(quotients[k - 1]))
        allowance += 16.0 * _EPS * abs(prefactor) * max(1.0, abs(base)) / steps[k]
        if drift < -allowance:
            raise OracleInconsistency(
                f"difference quotients not monotone at step {steps[k]}: "
                f"{quotients[k - 1]} -> {quotients[k]} (side {side})"
            )

    ratio = steps[-2] / steps[-1]
    value = (ratio * quotients[-1] - quotients[-2]) / (ratio - 1.0)
    floor = (
        16.0
        * _EPS
        * abs(prefactor)
        * max(1.0, abs(base))
        * (1.0 / steps[-1] + 1.0 / steps[-2])
    )
    error = abs(quotients[-1] - quotients[-2]) + floor
    return value, error


def rho_limit_oracle(space: Space, x, y, side: str, schedule=DEFAULT_SCHEDULE) -> DerivativeValue:
    """Finite-difference evaluation of rho_plus/rho_minus, independent of J(x)."""
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    nx = norm(space, xv)
    value, error = one_sided_limit(
        lambda t: norm(space, xv + t * yv), nx, side, schedule
    )
    return DerivativeValue(value, LIMIT_ORACLE, error)
