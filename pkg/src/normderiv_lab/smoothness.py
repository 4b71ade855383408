"""Smoothness classification through additivity of the norm derivatives.

A nonzero point is classically smooth when its support set is a singleton;
it is plus/minus-smooth (resp. mean-smooth) when y -> rho_plus(x, y)
(resp. rho_minus, rho) is additive.  Additivity plus the built-in positive
homogeneity makes the map linear, so a passing probe reconstructs the
linear representative g from the standard basis and re-verifies it on
fresh samples; g is then the normal of the codimension-one orthogonality
hyperplane.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateInput, InputError, PlusMinusDisagreement
from .orthogonality import Relation
from .rng import stream, unit_vector
from .spaces import Space, as_vector, norm
from .support import support_set

# Exact-face arithmetic incurs only rounding error, so additivity residuals
# are tested at 1e-8 scaled by ||x|| (||y1|| + ||y2||).
ADDITIVITY_TOL = 1e-8
DEFAULT_TRIALS = 500
REVERIFY_SAMPLES = 100


@dataclass(frozen=True)
class AdditivityReport:
    additive: bool
    functional: Optional[np.ndarray]
    witness: Optional[dict]
    trials: int
    max_residual: float


@dataclass(frozen=True)
class SmoothnessReport:
    point: tuple
    classical: bool
    rho_plus: bool
    rho_minus: bool
    rho: bool
    hyperplane_functional: Optional[tuple]
    trials: int
    max_residual: float
    witness: Optional[dict]

    def to_json(self) -> dict:
        return {
            "point": list(self.point),
            "classical": self.classical,
            "rho_plus": self.rho_plus,
            "rho_minus": self.rho_minus,
            "rho": self.rho,
            "hyperplane_functional": None
            if self.hyperplane_functional is None
            else list(self.hyperplane_functional),
            "trials": self.trials,
            "max_residual": self.max_residual,
            "witness": self.witness,
        }


def _derivative_fn(space: Space, x, relation: Relation) -> Callable[[np.ndarray], float]:
    """Derivative in the second argument with the face of x precomputed."""
    xv = as_vector(space, x)
    nx = norm(space, xv)
    extremes = np.stack(support_set(space, xv).extremes)

    if relation is Relation.RHO_PLUS:
        return lambda y: nx * float((extremes @ y).max())
    if relation is Relation.RHO_MINUS:
        return lambda y: nx * float((extremes @ y).min())

    def d(y: np.ndarray) -> float:
        vals = extremes @ y
        return nx * 0.5 * (float(vals.min()) + float(vals.max()))

    return d


def is_classically_smooth(space: Space, x) -> bool:
    """True iff the support set at x is a singleton."""
    xv = as_vector(space, x)
    if norm(space, xv) == 0.0:
        raise DegenerateInput("smoothness is undefined at the zero vector")
    return support_set(space, xv).is_singleton


def _probe_additivity(
    space: Space,
    x: np.ndarray,
    relation: Relation,
    trials: int,
    tol: float,
    seed: int,
) -> AdditivityReport:
    if trials < 100:
        raise InputError("additivity sampling needs at least 100 trials")
    nx = norm(space, x)
    d = _derivative_fn(space, x, relation)
    n = space.dim
    worst = 0.0
    for k in range(trials):
        gen = stream(seed, "additivity", relation.value, k)
        y1 = unit_vector(gen, n)
        y2 = unit_vector(gen, n)
        residual = abs(d(y1 + y2) - d(y1) - d(y2))
        bound = tol * nx * (norm(space, y1) + norm(space, y2))
        worst = max(worst, residual)
        if residual > bound:
            witness = {
                "y1": y1.tolist(),
                "y2": y2.tolist(),
                "residual": residual,
                "trial": k,
            }
            return AdditivityReport(False, None, witness, k + 1, worst)

    # Additive + homogeneous => linear; recover g from the basis and re-verify.
    g = np.array([d(e) for e in np.eye(n)]) / nx
    for k in range(REVERIFY_SAMPLES):
        gen = stream(seed, "reverify", relation.value, k)
        y = unit_vector(gen, n)
        residual = abs(d(y) - nx * float(g @ y))
        bound = tol * nx * (1.0 + norm(space, y)) * n
        worst = max(worst, residual)
        if residual > bound:
            witness = {"y": y.tolist(), "residual": residual, "trial": k}
            return AdditivityReport(False, None, witness, trials, worst)
    g.setflags(write=False)
    return AdditivityReport(True, g, None, trials, worst)


def is_rho_smooth(
    space: Space, x, trials: int = DEFAULT_TRIALS, tol: float = ADDITIVITY_TOL, seed: int = 0
) -> AdditivityReport:
    """Additivity probe of the mean derivative rho(x, .)."""
    xv = as_vector(space, x)
    if norm(space, xv) == 0.0:
        raise DegenerateInput("smoothness is undefined at the zero vector")
    return _probe_additivity(space, xv, Relation.RHO, trials, tol, seed)


def is_rho_pm_smooth(
    space: Space, x, trials: int = DEFAULT_TRIALS, tol: float = ADDITIVITY_TOL, seed: int = 0
) -> AdditivityReport:
    """Additivity probe of rho_plus(x, .), cross-checked against rho_minus(x, .).

    The two verdicts are provably identical; a disagreement raises
    PlusMinusDisagreement because it can only come from an implementation bug.
    """
    xv = as_vector(space, x)
    if norm(space, xv) == 0.0:
        raise DegenerateInput("smoothness is undefined at the zero vector")
    plus = _probe_additivity(space, xv, Relation.RHO_PLUS, trials, tol, seed)
    minus = _probe_additivity(space, xv, Relation.RHO_MINUS, trials, tol, seed)
    if plus.additive != minus.additive:
        raise PlusMinusDisagreement(
            f"plus-side additive={plus.additive} but minus-side additive={minus.additive}"
        )
    return plus


def classify(
    space: Space, x, trials: int = DEFAULT_TRIALS, tol: float = ADDITIVITY_TOL, seed: int = 0
) -> SmoothnessReport:
    """Full smoothness report at x (classical, plus/minus, mean)."""
    xv = as_vector(space, x)
    classical = is_classically_smooth(space, xv)
    pm = is_rho_pm_smooth(space, xv, trials, tol, seed)
    mean = is_rho_smooth(space, xv, trials, tol, seed)
    functional = mean.functional if mean.additive else None
    witness = pm.witness if pm.witness is not None else mean.witness
    return SmoothnessReport(
        point=tuple(xv.tolist()),
        classical=classical,
        rho_plus=pm.additive,
        rho_minus=pm.additive,
        rho=mean.additive,
        hyperplane_functional=None if functional is None else tuple(functional.tolist()),
        trials=trials,
        max_residual=max(pm.max_residual, mean.max_residual),
        witness=witness,
    )


@dataclass(frozen=True)
class CodimensionReport:
    relation: Relation
    additive: bool
    hyperplane_confirmed: Optional[bool]
    normal: Optional[tuple]
    membership_failures: int
    witness: Optional[dict]
    samples: int
    max_residual: float


def verify_codimension_theorem(
    space: Space,
    x,
    relation: Relation,
    samples: int = 200,
    trials: int = DEFAULT_TRIALS,
    tol: float = ADDITIVITY_TOL,
    seed: int = 0,
) -> CodimensionReport:
    """Check that additivity of the chosen derivative matches the shape of its zero set.

    Additive case: every random y projects onto the recovered hyperplane
    N(g) along x (the shift identity makes y - (d(y)/||x||^2) x a zero of
    d), membership is confirmed sample by sample, and x itself is confirmed
    to lie off the hyperplane.  Non-additive case: two members whose sum is
    not a member are exhibited.
    """
    relation = Relation(relation)
    if relation is Relation.BJ:
        raise InputError("codimension verification applies to the derivative relations only")
    xv = as_vector(space, x)
    nx = norm(space, xv)
    if nx == 0.0:
        raise DegenerateInput("x must be nonzero")

    probe = _probe_additivity(space, xv, relation, trials, tol, seed)
    d = _derivative_fn(space, xv, relation)
    n = space.dim

    if probe.additive:
        g = probe.functional
        failures = 0
        worst = probe.max_residual
        d_other = None
        if relation in (Relation.RHO_PLUS, Relation.RHO_MINUS):
            # On a plus-smooth point the zero sets of both one-sided
            # derivatives coincide, so projected members must annihilate
            # the opposite side as well.
            other = Relation.RHO_MINUS if relation is Relation.RHO_PLUS else Relation.RHO_PLUS
            d_other = _derivative_fn(space, xv, other)
        for k in range(samples):
            gen = stream(seed, "codim-project", relation.value, k)
            y = unit_vector(gen, n)
            member = y - (d(y) / nx**2) * xv
            residual = abs(d(member))
            worst = max(worst, residual)
            if residual > tol * nx * (1.0 + norm(space, member)):
                failures += 1
            if d_other is not None:
                residual_other = abs(d_other(member))
                worst = max(worst, residual_other)
                if residual_other > tol * nx * (1.0 + norm(space, member)):
                    failures += 1
        off_hyperplane = abs(float(g @ xv)) > 0.5 * nx
        confirmed = failures == 0 and off_hyperplane
        return CodimensionReport(
            relation, True, confirmed, tuple(g.tolist()), failures, None, samples, worst
        )

    # Non-additive: hunt for two members of the zero set whose sum leaves it.
    for k in range(max(samples, 50)):
        gen = stream(seed, "codim-witness", relation.value, k)
        y1 = unit_vector(gen, n)
        y2 = unit_vector(gen, n)
        m1 = y1 - (d(y1) / nx**2) * xv
        m2 = y2 - (d(y2) / nx**2) * xv
        if abs(d(m1)) > tol * nx * (1.0 + norm(space, m1)):
            continue
        if abs(d(m2)) > tol * nx * (1.0 + norm(space, m2)):
            continue
        value = d(m1 + m2)
        if abs(value) > 100.0 * tol * nx * (norm(space, m1) + norm(space, m2) + 1.0):
            witness = {
                "member1": m1.tolist(),
                "member2": m2.tolist(),
                "sum_derivative": value,
            }
            return CodimensionReport(
                relation, False, False, None, 0, witness, samples, probe.max_residual
            )
    return CodimensionReport(
        relation, False, None, None, 0, None, samples, probe.max_residual
    )
