"""Matrices as operators between finite-dimensional normed spaces.

Supported domains are Euclidean(n) (operator norm = top singular value,
computed from a cyclic-Jacobi eigensolve of T'T) and l1(n) (operator norm =
largest codomain norm of a column, exact because the l1 ball is the convex
hull of the signed basis vectors).

For Euclidean domain and codomain the one-sided derivatives of the operator
norm reduce to extreme eigenvalues of the symmetric part of T'A restricted
to the top singular subspace:

    rho_plus(T, A)  = max{<Tx, Ax> : x in M_T} = lambda_max(P' sym(T'A) P),
    rho_minus(T, A) = min{<Tx, Ax> : x in M_T} = lambda_min(P' sym(T'A) P),

with P an orthonormal basis of the attainment subspace.  When M_T is a
single pair {±x0}, derivatives transfer to the codomain point:
rho_pm(T, A) = rho_pm(Tx0, Ax0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import derivatives as deriv
from .errors import (
    ConvergenceError,
    DegenerateInput,
    EquivalenceViolation,
    InputError,
    PreconditionViolation,
)
from .rng import gaussian_matrix, stream
from .smoothness import is_rho_pm_smooth
from .spaces import Space, norm, space_from_json, space_to_json

# Attainment structure is discontinuous in T, so the eigenvalue/column
# multiplicity cutoff is explicit: relative 1e-9 below the maximum counts
# as attaining.
MULTIPLICITY_RTOL = 1e-9

JACOBI_TOL = 1e-12

OPERATOR_PAIR_TRIALS = 200
OPERATOR_ADDITIVITY_TOL = 1e-8
# The oracle route carries finite-difference truncation error, so its
# additivity threshold is looser; genuine violations are O(||T|| ||A||).
ORACLE_ADDITIVITY_TOL = 1e-4


@dataclass(frozen=True)
class Operator:
    """Dense real matrix tagged with its domain and codomain spaces."""

    entries: np.ndarray
    domain: Space
    codomain: Space

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2:
            raise InputError("operator entries must be a 2-d matrix")
        if self.domain.kind not in ("euclidean", "l1"):
            raise InputError("operator domain must be euclidean or l1")
        if self.codomain.kind == "operator":
            raise InputError("operator codomain must be a vector space")
        if arr.shape != (self.codomain.dim, self.domain.dim):
            raise InputError(
                f"entries shape {arr.shape} does not match codomain x domain "
                f"({self.codomain.dim}, {self.domain.dim})"
            )
        if not np.all(np.isfinite(arr)):
            raise InputError("operator has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def shape(self) -> tuple:
        return self.entries.shape

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_spaces(other)
        return Operator(self.entries + other.entries, self.domain, self.codomain)

    def __mul__(self, scalar: float) -> "Operator":
        return Operator(self.entries * float(scalar), self.domain, self.codomain)

    __rmul__ = __mul__

    def _check_same_spaces(self, other: "Operator"):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise InputError("operators act between different spaces")

    def to_json(self) -> dict:
        return {
            "entries": self.entries.tolist(),
            "domain": space_to_json(self.domain),
            "codomain": space_to_json(self.codomain),
        }

    @staticmethod
    def from_json(obj: dict) -> "Operator":
        return Operator(
            np.asarray(obj["entries"], dtype=float),
            space_from_json(obj["domain"]),
            space_from_json(obj["codomain"]),
        )


def jacobi_eigh(matrix, tol: float = JACOBI_TOL, max_sweeps: int = 60) -> tuple:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until a full pass performs no rotation above rounding level,
    then asserts that the off-diagonal mass is below tol relative to the
    Frobenius scale of the input (the a-posteriori accuracy contract; the
    quadratic convergence of the sweep drives it to machine precision in
    practice).  Returns (eigenvalues descending, eigenvector columns).
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise InputError("jacobi_eigh needs a square matrix")
    if not np.allclose(a, a.T, atol=1e-10 * max(1.0, float(np.abs(a).max()))):
        raise InputError("jacobi_eigh needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    scale = max(1.0, float(np.linalg.norm(a, "fro")))
    skip = 0.5 * np.finfo(float).eps * scale

    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                rotated = True
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta)) if theta != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
        if not rotated:
            break
    else:
        raise ConvergenceError("jacobi_eigh did not settle within the sweep budget")

    off = float(np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0))
    if off > tol * scale:
        raise ConvergenceError(f"off-diagonal mass {off} above contract {tol * scale}")

    order = np.argsort(-a.diagonal(), kind="stable")
    return a.diagonal()[order].copy(), v[:, order]


def _column_norms(entries: np.ndarray, codomain: Space) -> np.ndarray:
    a = np.abs(entries)
    if codomain.kind == "euclidean":
        return np.sqrt((a * a).sum(axis=0))
    if codomain.kind == "l1":
        return a.sum(axis=0)
    if codomain.kind == "linf":
        return a.max(axis=0)
    return (a ** codomain.p).sum(axis=0) ** (1.0 / codomain.p)


def _op_norm_raw(entries: np.ndarray, domain: Space, codomain: Space) -> float:
    if domain.kind == "euclidean":
        values, _ = jacobi_eigh(entries.T @ entries)
        return float(np.sqrt(max(float(values[0]), 0.0)))
    return float(_column_norms(entries, codomain).max())


def op_norm(op: Operator) -> float:
    """Operator norm of T for the supported domain kinds."""
    return _op_norm_raw(op.entries, op.domain, op.codomain)


@dataclass(frozen=True)
class Attainment:
    """M_T: a finite set of ± unit-vector pairs or the sphere of a subspace.

    ``vectors`` holds one representative per ± pair (finite case) or an
    orthonormal basis of the attaining subspace.  For l1 domains with
    several maximizing columns, ``may_contain_nonextreme`` flags that
    positively aligned column images admit maximizers besides ±e_i.
    """

    variant: str
    vectors: tuple
    span_dim: int
    may_contain_nonextreme: bool = False

    def __post_init__(self):
        if self.variant not in ("finite_pairs", "subsphere"):
            raise InputError("unknown attainment variant")
        for u in self.vectors:
            u.setflags(write=False)

    @property
    def is_single_pair(self) -> bool:
        return self.variant == "finite_pairs" and len(self.vectors) == 1

    def basis_matrix(self) -> np.ndarray:
        return np.column_stack(self.vectors)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "vectors": [u.tolist() for u in self.vectors],
            "span_dim": self.span_dim,
            "may_contain_nonextreme": self.may_contain_nonextreme,
        }


def norm_attainment_set(op: Operator, rtol: float = MULTIPLICITY_RTOL) -> Attainment:
    """Unit vectors of the domain at which T attains its norm."""
    value = op_norm(op)
    if value == 0.0:
        raise DegenerateInput("the zero operator attains nowhere")

    if op.domain.kind == "euclidean":
        gram = op.entries.T @ op.entries
        eigenvalues, vectors = jacobi_eigh(gram)
        top = float(eigenvalues[0])
        keep = [i for i, lam in enumerate(eigenvalues) if lam >= top * (1.0 - rtol)]
        basis = tuple(vectors[:, i].copy() for i in keep)
        if len(basis) == 1:
            return Attainment("finite_pairs", basis, 1)
        return Attainment("subsphere", basis, len(basis))

    column_norms = _column_norms(op.entries, op.codomain)
    winners = [i for i, c in enumerate(column_norms) if c >= value * (1.0 - rtol)]
    reps = []
    for i in winners:
        e = np.zeros(op.domain.dim)
        e[i] = 1.0
        reps.append(e)
    if len(winners) == 1:
        return Attainment("finite_pairs", tuple(reps), 1)
    aligned = False
    for a in range(len(winners)):
        for b in range(a + 1, len(winners)):
            ca = op.entries[:, winners[a]]
            cb = op.entries[:, winners[b]]
            for sa, sb in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                mid = 0.5 * (sa * ca + sb * cb)
                if norm(op.codomain, mid) >= value * (1.0 - rtol):
                    aligned = True
    return Attainment("finite_pairs", tuple(reps), len(winners), may_contain_nonextreme=aligned)


def _restricted_symmetric(op: Operator, direction: np.ndarray, attainment: Attainment) -> np.ndarray:
    basis = attainment.basis_matrix()
    product = op.entries.T @ direction
    restricted = basis.T @ product @ basis
    return 0.5 * (restricted + restricted.T)


def _as_direction(op: Operator, direction) -> np.ndarray:
    arr = direction.entries if isinstance(direction, Operator) else np.asarray(direction, dtype=float)
    if arr.shape != op.shape:
        raise InputError(f"direction shape {arr.shape} does not match operator {op.shape}")
    return arr


def rho_pm_operator(
    op: Operator, direction, side: str, attainment: Optional[Attainment] = None
) -> deriv.DerivativeValue:
    """Exact one-sided operator-norm derivative for Euclidean domain and codomain."""
    if op.domain.kind != "euclidean" or op.codomain.kind != "euclidean":
        raise InputError("the eigenvalue formula needs Euclidean domain and codomain")
    if side not in (deriv.PLUS, deriv.MINUS):
        raise InputError("side must be 'plus' or 'minus'")
    arr = _as_direction(op, direction)
    att = attainment if attainment is not None else norm_attainment_set(op)
    restricted = _restricted_symmetric(op, arr, att)
    if restricted.shape == (1, 1):
        value = float(restricted[0, 0])
    else:
        eigenvalues, _ = jacobi_eigh(restricted)
        value = float(eigenvalues[0] if side == deriv.PLUS else eigenvalues[-1])
    return deriv.DerivativeValue(value, deriv.EXACT_FACE)


def rho_pm_via_unique_attainment(op: Operator, direction, x0, side: str) -> deriv.DerivativeValue:
    """Transfer formula rho_pm(T, A) = rho_pm(Tx0, Ax0) when M_T = {±x0}."""
    arr = _as_direction(op, direction)
    att = norm_attainment_set(op)
    if not att.is_single_pair:
        raise PreconditionViolation("attainment set is not a single ± pair")
    x0v = np.asarray(x0, dtype=float)
    rep = att.vectors[0]
    if x0v.shape != rep.shape:
        raise InputError(f"x0 has dimension {x0v.shape}, expected {rep.shape}")
    if min(np.max(np.abs(x0v - rep)), np.max(np.abs(x0v + rep))) > 1e-8:
        raise PreconditionViolation("x0 is not the attaining ± pair of T")
    image = op.entries @ x0v
    image_dir = arr @ x0v
    fn = deriv.rho_plus if side == deriv.PLUS else deriv.rho_minus
    return fn(op.codomain, image, image_dir)


def op_limit_oracle(op: Operator, direction, side: str, schedule=deriv.DEFAULT_SCHEDULE) -> deriv.DerivativeValue:
    """Finite-difference derivative of t -> ||T + tA||, scaled by ||T||."""
    arr = _as_direction(op, direction)
    base = op_norm(op)
    value, error = deriv.one_sided_limit(
        lambda t: _op_norm_raw(op.entries + t * arr, op.domain, op.codomain),
        base,
        side,
        schedule,
    )
    return deriv.DerivativeValue(value, deriv.LIMIT_ORACLE, error)


def construct_counterexample_pair(
    op: Operator, i: int, j: int, attainment: Optional[Attainment] = None
) -> tuple:
    """The additivity-breaking pair built from two attaining basis directions.

    A1 sends b_i to T b_i and b_j to -T b_j / 2 (A2 swaps the roles), where
    b_i, b_j are the i-th and j-th attaining basis vectors: standard basis
    vectors e_i, e_j for an l1 domain, orthonormal basis vectors of the
    attainment subspace for a Euclidean domain.  Indices are 0-based.
    """
    if i == j:
        raise InputError("need two distinct indices")
    att = attainment if attainment is not None else norm_attainment_set(op)

    if op.domain.kind == "l1":
        winners = {int(np.argmax(u)) for u in att.vectors}
        if i not in winners or j not in winners:
            raise PreconditionViolation("e_i and e_j must both attain the norm")
        a1 = np.zeros_like(op.entries)
        a2 = np.zeros_like(op.entries)
        a1[:, i] = op.entries[:, i]
        a1[:, j] = -0.5 * op.entries[:, j]
        a2[:, i] = -0.5 * op.entries[:, i]
        a2[:, j] = op.entries[:, j]
    else:
        if att.span_dim < 2 or i >= len(att.vectors) or j >= len(att.vectors):
            raise PreconditionViolation("both indices must address attaining basis vectors")
        b_i = att.vectors[i]
        b_j = att.vectors[j]
        t_bi = op.entries @ b_i
        t_bj = op.entries @ b_j
        a1 = np.outer(t_bi, b_i) - 0.5 * np.outer(t_bj, b_j)
        a2 = -0.5 * np.outer(t_bi, b_i) + np.outer(t_bj, b_j)
    return (
        Operator(a1, op.domain, op.codomain),
        Operator(a2, op.domain, op.codomain),
    )


def _frobenius(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix, "fro"))


def _sample_operator_additivity(op, evaluate, pairs, tol, seed, label):
    """Probe additivity of A -> evaluate(A) over Gaussian direction pairs."""
    m, n = op.shape
    scale = op_norm(op)
    worst = 0.0
    for k in range(pairs):
        gen = stream(seed, label, k)
        a = gaussian_matrix(gen, m, n)
        b = gaussian_matrix(gen, m, n)
        residual = abs(evaluate(a + b) - evaluate(a) - evaluate(b))
        worst = max(worst, residual)
        bound = tol * scale * (_frobenius(a) + _frobenius(b))
        if residual > bound:
            witness = {"a": a.tolist(), "b": b.tolist(), "residual": residual, "trial": k}
            return False, witness, worst
    return True, None, worst


@dataclass(frozen=True)
class KhReport:
    rho_plus_additive: bool
    rho_minus_additive: bool
    classically_smooth: bool
    attainment_single_pair: bool
    span_dim: int
    counterexample: Optional[dict]
    pairs: int
    max_residual: float

    def verdicts(self) -> tuple:
        return (
            self.rho_plus_additive,
            self.rho_minus_additive,
            self.classically_smooth,
            self.attainment_single_pair,
        )

    def to_json(self) -> dict:
        return {
            "rho_plus_additive": self.rho_plus_additive,
            "rho_minus_additive": self.rho_minus_additive,
            "classically_smooth": self.classically_smooth,
            "attainment_single_pair": self.attainment_single_pair,
            "span_dim": self.span_dim,
            "counterexample": self.counterexample,
            "pairs": self.pairs,
            "max_residual": self.max_residual,
        }


def check_kh_theorem(
    op: Operator,
    pairs: int = OPERATOR_PAIR_TRIALS,
    tol: float = OPERATOR_ADDITIVITY_TOL,
    seed: int = 0,
) -> KhReport:
    """Four-way equivalence for compact operators between Euclidean spaces.

    (i) plus-additive, (ii) minus-additive, (iii) classically smooth
    (operationally: single-pair attainment), (iv) M_T = {±x0} must all
    agree; when they are all false the constructed pair must break
    additivity with the exact gap ||T||^2 + ||T||^2 vs ||T||^2 / 2.
    Raises EquivalenceViolation on any disagreement.
    """
    if op.domain.kind != "euclidean" or op.codomain.kind != "euclidean":
        raise InputError("the four-way equivalence needs Euclidean domain and codomain")
    att = norm_attainment_set(op)
    single = att.is_single_pair

    plus_ok, plus_witness, worst_plus = _sample_operator_additivity(
        op,
        lambda a: rho_pm_operator(op, a, deriv.PLUS, att).value,
        pairs,
        tol,
        seed,
        "kh-plus",
    )
    minus_ok, minus_witness, worst_minus = _sample_operator_additivity(
        op,
        lambda a: rho_pm_operator(op, a, deriv.MINUS, att).value,
        pairs,
        tol,
        seed,
        "kh-minus",
    )

    counterexample = None
    if not single:
        a1, a2 = construct_counterexample_pair(op, 0, 1, att)
        v1 = rho_pm_operator(op, a1, deriv.PLUS, att).value
        v2 = rho_pm_operator(op, a2, deriv.PLUS, att).value
        v12 = rho_pm_operator(op, a1 + a2, deriv.PLUS, att).value
        scale = op_norm(op) ** 2
        counterexample = {
            "value_a1": v1,
            "value_a2": v2,
            "value_sum": v12,
            "expected_a1": scale,
            "expected_sum": 0.5 * scale,
            "gap": v1 + v2 - v12,
        }

    report = KhReport(
        plus_ok,
        minus_ok,
        single,
        single,
        att.span_dim,
        counterexample,
        pairs,
        max(worst_plus, worst_minus),
    )
    if len(set(report.verdicts())) != 1:
        raise EquivalenceViolation(
            f"four-way equivalence broken: {report.verdicts()} "
            f"(witnesses: {plus_witness or minus_witness})",
            report,
        )
    if counterexample is not None:
        scale = op_norm(op) ** 2
        ctol = max(1e-9 * scale, 1e-12)
        checks = (
            abs(counterexample["value_a1"] - scale) <= ctol
            and abs(counterexample["value_a2"] - scale) <= ctol
            and abs(counterexample["value_sum"] - 0.5 * scale) <= ctol
            and counterexample["gap"] > scale
        )
        if not checks:
            raise EquivalenceViolation(
                f"constructed pair does not reproduce the additivity gap: {counterexample}",
                report,
            )
    return report


@dataclass(frozen=True)
class RemarkReport:
    rho_additive: bool
    span_dim: int
    pairs: int
    max_residual: float

    def to_json(self) -> dict:
        return {
            "rho_additive": self.rho_additive,
            "span_dim": self.span_dim,
            "pairs": self.pairs,
            "max_residual": self.max_residual,
        }


def check_rho_smooth_remark(
    op: Operator,
    pairs: int = OPERATOR_PAIR_TRIALS,
    tol: float = OPERATOR_ADDITIVITY_TOL,
    seed: int = 0,
) -> RemarkReport:
    """Mean-derivative smoothness iff the attainment span has dimension <= 2.

    On the attainment subspace the mean derivative is (lambda_max +
    lambda_min) / 2 of the restricted symmetric form, which is half the
    trace (linear) exactly up to dimension two.  Raises EquivalenceViolation
    when the sampled verdict disagrees with the dimension test.
    """
    if op.domain.kind != "euclidean" or op.codomain.kind != "euclidean":
        raise InputError("the remark applies to Euclidean domain and codomain")
    att = norm_attainment_set(op)

    def mean_value(a: np.ndarray) -> float:
        plus = rho_pm_operator(op, a, deriv.PLUS, att).value
        minus = rho_pm_operator(op, a, deriv.MINUS, att).value
        return 0.5 * (plus + minus)

    additive, witness, worst = _sample_operator_additivity(
        op, mean_value, pairs, tol, seed, "rho-remark"
    )
    report = RemarkReport(additive, att.span_dim, pairs, worst)
    if additive != (att.span_dim <= 2):
        raise EquivalenceViolation(
            f"mean additivity {additive} vs span dim {att.span_dim} (witness {witness})",
            report,
        )
    return report


@dataclass(frozen=True)
class L1DomainReport:
    rho_plus_additive: bool
    attainment_unique_extreme: bool
    image_point_pm_smooth: Optional[bool]
    right_side: bool
    counterexample: Optional[dict]
    pairs: int
    max_residual: float
    transfer_residual: float

    def to_json(self) -> dict:
        return {
            "rho_plus_additive": self.rho_plus_additive,
            "attainment_unique_extreme": self.attainment_unique_extreme,
            "image_point_pm_smooth": self.image_point_pm_smooth,
            "right_side": self.right_side,
            "counterexample": self.counterexample,
            "pairs": self.pairs,
            "max_residual": self.max_residual,
            "transfer_residual": self.transfer_residual,
        }


def check_l1_domain_theorem(
    op: Operator,
    pairs: int = OPERATOR_PAIR_TRIALS,
    tol: float = ORACLE_ADDITIVITY_TOL,
    smooth_trials: int = 200,
    seed: int = 0,
) -> L1DomainReport:
    """Plus-smoothness of T from l1(n) iff M_T = {±e_i0} and Te_i0 is plus-smooth.

    The left side samples additivity through the finite-difference oracle
    (cross-checked against the unique-attainment transfer formula whenever
    it applies); the right side combines the column-maximizer dichotomy
    with the vector-level smoothness probe in the codomain.  Raises
    EquivalenceViolation when the sides disagree.
    """
    if op.domain.kind != "l1":
        raise InputError("this equivalence is about operators with l1 domain")
    att = norm_attainment_set(op)
    unique = att.is_single_pair and not att.may_contain_nonextreme

    image_smooth = None
    image_probe = None
    if unique:
        u0 = att.vectors[0]
        image_probe = is_rho_pm_smooth(
            op.codomain, op.entries @ u0, trials=max(100, smooth_trials), seed=seed
        )
        image_smooth = image_probe.additive
    right = bool(unique and image_smooth)

    transfer_worst = 0.0

    def left_value(a: np.ndarray) -> float:
        return op_limit_oracle(op, a, deriv.PLUS).value

    if unique:
        u0 = att.vectors[0]
        for k in range(4):
            gen = stream(seed, "l1-transfer", k)
            a = gaussian_matrix(gen, *op.shape)
            oracle = op_limit_oracle(op, a, deriv.PLUS)
            exact = rho_pm_via_unique_attainment(op, a, u0, deriv.PLUS)
            gap = abs(oracle.value - exact.value)
            transfer_worst = max(transfer_worst, gap)
            if gap > max(1e-6, oracle.error_estimate):
                raise EquivalenceViolation(
                    f"oracle and unique-attainment transfer disagree by {gap}", None
                )

    additive, witness, worst = _sample_operator_additivity(
        op, left_value, pairs, tol, seed, "l1-additivity"
    )

    counterexample = None
    if not att.is_single_pair:
        winners = sorted(int(np.argmax(u)) for u in att.vectors)
        a1, a2 = construct_counterexample_pair(op, winners[0], winners[1], att)
        v1 = op_limit_oracle(op, a1, deriv.PLUS)
        v2 = op_limit_oracle(op, a2, deriv.PLUS)
        v12 = op_limit_oracle(op, a1 + a2, deriv.PLUS)
        scale = op_norm(op) ** 2
        counterexample = {
            "kind": "tied_columns",
            "value_a1": v1.value,
            "value_a2": v2.value,
            "value_sum": v12.value,
            "expected_a1": scale,
            "expected_sum": 0.5 * scale,
            "gap": v1.value + v2.value - v12.value,
        }
        gap_ok = counterexample["gap"] > scale
        if not gap_ok:
            raise EquivalenceViolation(
                f"tied-column pair does not break additivity: {counterexample}", None
            )
    elif unique and not image_smooth:
        u0 = att.vectors[0]
        i0 = int(np.argmax(u0))
        probe = image_probe
        if probe.witness is not None and "y1" in probe.witness:
            a3 = np.zeros_like(op.entries)
            a4 = np.zeros_like(op.entries)
            a3[:, i0] = np.asarray(probe.witness["y1"])
            a4[:, i0] = np.asarray(probe.witness["y2"])
            v3 = op_limit_oracle(op, a3, deriv.PLUS)
            v4 = op_limit_oracle(op, a4, deriv.PLUS)
            v34 = op_limit_oracle(op, a3 + a4, deriv.PLUS)
            counterexample = {
                "kind": "nonsmooth_image",
                "value_a3": v3.value,
                "value_a4": v4.value,
                "value_sum": v34.value,
                "gap": v3.value + v4.value - v34.value,
            }

    report = L1DomainReport(
        additive,
        unique,
        image_smooth,
        right,
        counterexample,
        pairs,
        worst,
        transfer_worst,
    )
    if additive != right:
        raise EquivalenceViolation(
            f"l1-domain equivalence broken: additive={additive} right={right} "
            f"(witness {witness})",
            report,
        )
    return report
