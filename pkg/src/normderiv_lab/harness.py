"""Seeded verification suites with machine-readable, replayable reports.

Every suite draws its inputs from the package-wide counter-based generator
keyed by (seed, suite, family, trial), so a report is a pure function of
(suite, seed, trials, tolerance overrides) up to the elapsed field, and any
recorded failure can be re-executed verbatim from the report alone.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import derivatives as deriv
from . import operators as ops
from . import orthogonality as orth
from . import smoothness as sm
from . import spaces
from .errors import EquivalenceViolation, InputError, PlusMinusDisagreement
from .orthogonality import Relation
from .rng import gaussian_matrix, random_orthogonal, stream, unit_vector
from .support import support_set

DIMENSIONS = (2, 3, 4, 6)

VECTOR_FAMILIES = tuple(
    (f"{kind}:{n}" if p is None else f"{kind}{p}:{n}", kind, n, p)
    for kind in ("l1", "linf", "lp", "euclidean")
    for p in ((1.5, 3.0) if kind == "lp" else (None,))
    for n in DIMENSIONS
)

DEFAULT_TOLS = {
    "exact": 1e-9,
    "oracle_floor": 1e-6,
    "error_estimate_weight": 1.0,
    "additivity": 1e-8,
    "oracle_additivity": 1e-4,
    "ray_zero": 1e-9,
}

SUITE_DEFAULT_TRIALS = {
    "norm-axioms": 1000,
    "derivative-properties": 1000,
    "oracle-agreement": 100,
    "orthogonality-characterizations": 1000,
    "ray-example-linf": 1,
    "smoothness-codimension": 12,
    "kh": 200,
    "rho-remark": 200,
    "l1-domain": 200,
}

SUITE_NAMES = tuple(SUITE_DEFAULT_TRIALS) + ("all",)


def _family_space(kind: str, n: int, p) -> spaces.Space:
    if kind == "lp":
        return spaces.lp(n, p)
    return spaces.Space(kind, n)


@dataclass
class SuiteReport:
    suite_name: str
    seed: int
    trials: int
    tol_overrides: dict
    failures: list
    elapsed: float

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, include_elapsed: bool = True) -> str:
        payload = {
            "suite_name": self.suite_name,
            "seed": self.seed,
            "trials": self.trials,
            "tol_overrides": self.tol_overrides,
            "failures": self.failures,
        }
        if include_elapsed:
            payload["elapsed"] = self.elapsed
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class _Sink:
    """Collects failures; in replay mode targets one case and records a trace."""

    def __init__(self, only: Optional[tuple] = None):
        self.failures: list = []
        self.only = only
        self.trace: list = []
        self.done = False

    def active(self, family: str, trial: int) -> bool:
        if self.only is None:
            return True
        return self.only == (family, trial)

    def note(self, family: str, trial: int, text: str):
        if self.only == (family, trial):
            self.trace.append(text)

    def fail(self, suite, family, trial, check, inputs, expected, observed, residual):
        self.failures.append(
            {
                "suite": suite,
                "family": family,
                "trial": trial,
                "check": check,
                "inputs": inputs,
                "expected": expected,
                "observed": observed,
                "residual": float(residual),
            }
        )


def _fmt(v) -> str:
    if isinstance(v, np.ndarray):
        return np.array2string(v, precision=17, separator=", ")
    return repr(v)


# ---------------------------------------------------------------------------
# norm-axioms


def _run_norm_axioms(seed, trials, tols, sink: _Sink):
    suite = "norm-axioms"
    tol = tols["exact"]
    for label, kind, n, p in VECTOR_FAMILIES:
        space = _family_space(kind, n, p)
        if sink.only is None or sink.only[0] == label:
            zero = np.zeros(n)
            if spaces.norm(space, zero) != 0.0:
                sink.fail(suite, label, -1, "norm-zero", {"x": zero.tolist()}, 0.0,
                          spaces.norm(space, zero), abs(spaces.norm(space, zero)))
        for k in range(trials):
            if not sink.active(label, k):
                continue
            gen = stream(seed, suite, label, k)
            x = gen.standard_normal(n) * gen.uniform(0.2, 3.0)
            y = gen.standard_normal(n) * gen.uniform(0.2, 3.0)
            f = gen.standard_normal(n)
            alpha = gen.uniform(-3.0, 3.0)
            nx, ny = spaces.norm(space, x), spaces.norm(space, y)
            nf = spaces.dual_norm(space, f)
            inputs = {"x": x.tolist(), "y": y.tolist(), "f": f.tolist(), "alpha": alpha}
            sink.note(label, k, f"space={label} x={_fmt(x)} y={_fmt(y)} f={_fmt(f)} alpha={alpha}")
            sink.note(label, k, f"norm(x)={nx} norm(y)={ny} dual_norm(f)={nf}")

            if nx <= 0.0:
                sink.fail(suite, label, k, "norm-positive", inputs, "> 0", nx, -nx)
            r = abs(spaces.norm(space, alpha * x) - abs(alpha) * nx)
            if r > tol * max(1.0, abs(alpha) * nx):
                sink.fail(suite, label, k, "homogeneity", inputs, abs(alpha) * nx,
                          spaces.norm(space, alpha * x), r)
            r = spaces.norm(space, x + y) - (nx + ny)
            if r > tol * max(1.0, nx + ny):
                sink.fail(suite, label, k, "triangle", inputs, nx + ny,
                          spaces.norm(space, x + y), r)
            pairing = abs(spaces.dual_pairing(f, x))
            r = pairing - nf * nx
            if r > tol * max(1.0, nf * nx):
                sink.fail(suite, label, k, "holder", inputs, nf * nx, pairing, r)


# ---------------------------------------------------------------------------
# derivative-properties


def _derivative_triple(space, x, y):
    nx, m, big = deriv._face_range(space, x, y)
    return nx * m, nx * big, nx * 0.5 * (m + big)


def _run_derivative_properties(seed, trials, tols, sink: _Sink):
    suite = "derivative-properties"
    tol = tols["exact"]
    for label, kind, n, p in VECTOR_FAMILIES:
        space = _family_space(kind, n, p)
        for k in range(trials):
            if not sink.active(label, k):
                continue
            gen = stream(seed, suite, label, k)
            x = unit_vector(gen, n) * gen.uniform(0.5, 2.0)
            y = unit_vector(gen, n) * gen.uniform(0.5, 2.0)
            alpha = gen.uniform(-2.0, 2.0)
            inputs = {"x": x.tolist(), "y": y.tolist(), "alpha": alpha}
            nx = spaces.norm(space, x)
            ny = spaces.norm(space, y)
            scale = max(1.0, nx * ny, abs(alpha) * nx * ny, abs(alpha) * nx * nx)
            rm, rp, rmean = _derivative_triple(space, x, y)
            face = None
            sink.note(label, k, f"space={label} x={_fmt(x)} y={_fmt(y)} alpha={alpha}")
            sink.note(label, k, f"rho_minus={rm} rho_plus={rp} rho={rmean}")

            def expect(check, expected, observed, extra_scale=1.0):
                r = abs(expected - observed)
                if r > tol * scale * extra_scale:
                    sink.fail(suite, label, k, check, inputs, expected, observed, r)

            # (ii) ordering of the one-sided derivatives
            if rm > rp + tol * scale:
                sink.fail(suite, label, k, "order", inputs, "rho_minus <= rho_plus",
                          (rm, rp), rm - rp)
            # (i) homogeneity in each argument, both signs
            am, ap, amean = _derivative_triple(space, alpha * x, y)
            if alpha >= 0.0:
                expect("homog-first-plus", alpha * rp, ap)
                expect("homog-first-minus", alpha * rm, am)
            else:
                expect("homog-first-plus", alpha * rm, ap)
                expect("homog-first-minus", alpha * rp, am)
            expect("homog-first-mean", alpha * rmean, amean)
            bm, bp, bmean = _derivative_triple(space, x, alpha * y)
            if alpha >= 0.0:
                expect("homog-second-plus", alpha * rp, bp)
                expect("homog-second-minus", alpha * rm, bm)
            else:
                expect("homog-second-plus", alpha * rm, bp)
                expect("homog-second-minus", alpha * rp, bm)
            expect("homog-second-mean", alpha * rmean, bmean)
            # (iii) shift along x
            sm_, sp, _ = _derivative_triple(space, x, alpha * x + y)
            expect("shift-plus", alpha * nx * nx + rp, sp)
            expect("shift-minus", alpha * nx * nx + rm, sm_)
            # (iv) the Cauchy-Schwarz style bound
            worst = max(abs(rp), abs(rm), abs(rmean))
            if worst > nx * ny + tol * scale:
                sink.fail(suite, label, k, "bound", inputs, nx * ny, worst, worst - nx * ny)
            # (vii) every support functional is sandwiched
            face = support_set(space, x)
            for f in face.extremes:
                val = nx * float(f @ y)
                if val < rm - tol * scale or val > rp + tol * scale:
                    sink.fail(suite, label, k, "sandwich", inputs, (rm, rp), val,
                              max(rm - val, val - rp))
                    break
            # smooth points have equal one-sided derivatives
            if face.is_singleton and abs(rp - rm) > tol * scale:
                sink.fail(suite, label, k, "smooth-equal", inputs, rp, rm, abs(rp - rm))
            # Hilbert specialization
            if kind == "euclidean":
                inner = float(x @ y)
                expect("hilbert-plus", inner, rp)
                expect("hilbert-minus", inner, rm)
                expect("hilbert-mean", inner, rmean)
            # Birkhoff-James sign sandwich
            bj = orth.is_orthogonal(space, x, y, Relation.BJ, tol=tol * scale)
            direct = rm <= tol * scale and rp >= -tol * scale
            if bj.holds != direct:
                sink.fail(suite, label, k, "bj-sandwich", inputs, direct, bj.holds,
                          min(abs(rm), abs(rp)))
            # one-sided orthogonality implies Birkhoff-James (constructed holds case)
            y_plus = y - (rp / nx**2) * x
            pm, pp, _ = _derivative_triple(space, x, y_plus)
            if abs(pp) <= tol * scale:
                if not (pm <= tol * scale and pp >= -tol * scale):
                    sink.fail(suite, label, k, "rho-plus-implies-bj", inputs,
                              "bj holds", (pm, pp), max(pm, -pp))
            y_minus = y - (rm / nx**2) * x
            qm, qp, _ = _derivative_triple(space, x, y_minus)
            if abs(qm) <= tol * scale:
                if not (qm <= tol * scale and qp >= -tol * scale):
                    sink.fail(suite, label, k, "rho-minus-implies-bj", inputs,
                              "bj holds", (qm, qp), max(qm, -qp))
            if k == 0:
                # zero-vector conventions
                zero = np.zeros(n)
                for name, vec_x, vec_y in (("zero-x", zero, y), ("zero-y", x, zero)):
                    zm, zp, zmean = _derivative_triple(space, vec_x, vec_y)
                    if max(abs(zm), abs(zp), abs(zmean)) > tol:
                        sink.fail(suite, label, k, name, inputs, 0.0, (zm, zp, zmean),
                                  max(abs(zm), abs(zp), abs(zmean)))


# ---------------------------------------------------------------------------
# oracle-agreement


OPERATOR_SHAPES = ((2, 2), (3, 3), (4, 4), (6, 6), (3, 2), (2, 3), (6, 4), (4, 6))


def _separated_gaussian(gen, m, n):
    """Gaussian matrix redrawn until the top singular gap is well off the cliff."""
    for _ in range(50):
        t = gaussian_matrix(gen, m, n)
        values, _ = ops.jacobi_eigh(t.T @ t)
        if len(values) < 2 or values[1] <= values[0] * (1.0 - 1e-3):
            return t
    return t


def _run_oracle_agreement(seed, trials, tols, sink: _Sink):
    suite = "oracle-agreement"
    floor = tols["oracle_floor"]
    weight = tols["error_estimate_weight"]

    for label, kind, n, p in VECTOR_FAMILIES:
        space = _family_space(kind, n, p)
        for k in range(trials):
            if not sink.active(label, k):
                continue
            gen = stream(seed, suite, label, k)
            x = unit_vector(gen, n) * gen.uniform(0.5, 2.0)
            y = unit_vector(gen, n) * gen.uniform(0.5, 2.0)
            inputs = {"x": x.tolist(), "y": y.tolist()}
            for side, exact_fn in ((deriv.PLUS, deriv.rho_plus), (deriv.MINUS, deriv.rho_minus)):
                exact = exact_fn(space, x, y)
                oracle = deriv.rho_limit_oracle(space, x, y, side)
                gap = abs(exact.value - oracle.value)
                bound = max(floor, weight * oracle.error_estimate)
                sink.note(label, k, f"space={label} side={side} exact={exact.value} "
                                    f"oracle={oracle.value} est={oracle.error_estimate}")
                if gap > bound:
                    sink.fail(suite, label, k, f"vector-{side}", inputs, exact.value,
                              oracle.value, gap)

    pairs = 5 * trials
    label = "operator"
    for k in range(pairs):
        if not sink.active(label, k):
            continue
        gen = stream(seed, suite, label, k)
        m, n = OPERATOR_SHAPES[k % len(OPERATOR_SHAPES)]
        dom, cod = spaces.euclidean(n), spaces.euclidean(m)
        t = ops.Operator(_separated_gaussian(gen, m, n), dom, cod)
        a = gaussian_matrix(gen, m, n)
        inputs = {"t": t.entries.tolist(), "a": a.tolist(), "shape": [m, n]}
        att = ops.norm_attainment_set(t)
        values = {}
        for side in (deriv.PLUS, deriv.MINUS):
            exact = ops.rho_pm_operator(t, a, side, att)
            oracle = ops.op_limit_oracle(t, a, side)
            values[side] = exact.value
            gap = abs(exact.value - oracle.value)
            bound = max(floor, weight * oracle.error_estimate)
            sink.note(label, k, f"shape=({m},{n}) side={side} exact={exact.value} "
                                f"oracle={oracle.value} est={oracle.error_estimate}")
            if gap > bound:
                sink.fail(suite, label, k, f"operator-{side}", inputs, exact.value,
                          oracle.value, gap)
            if att.is_single_pair:
                transfer = ops.rho_pm_via_unique_attainment(t, a, att.vectors[0], side)
                gap = abs(exact.value - transfer.value)
                if gap > max(floor, 1e-9 * ops.op_norm(t) ** 2):
                    sink.fail(suite, label, k, f"transfer-{side}", inputs, exact.value,
                              transfer.value, gap)
        if values[deriv.MINUS] > values[deriv.PLUS] + 1e-9:
            sink.fail(suite, label, k, "operator-order", inputs,
                      "rho_minus <= rho_plus", values, values[deriv.MINUS] - values[deriv.PLUS])
        norm_t = ops.op_norm(t)
        norm_a = ops.op_norm(ops.Operator(a, dom, cod))
        worst = max(abs(values[deriv.PLUS]), abs(values[deriv.MINUS]))
        if worst > norm_t * norm_a + 1e-9 * max(1.0, norm_t * norm_a):
            sink.fail(suite, label, k, "operator-bound", inputs, norm_t * norm_a,
                      worst, worst - norm_t * norm_a)


# ---------------------------------------------------------------------------
# orthogonality-characterizations


def _run_orthogonality_characterizations(seed, trials, tols, sink: _Sink):
    suite = "orthogonality-characterizations"
    tol = tols["exact"]
    for label, kind, n, p in VECTOR_FAMILIES:
        space = _family_space(kind, n, p)
        for k in range(trials):
            if not sink.active(label, k):
                continue
            gen = stream(seed, suite, label, k)
            x = unit_vector(gen, n) * gen.uniform(0.5, 2.0)
            y = unit_vector(gen, n) * gen.uniform(0.5, 2.0)
            alpha = gen.uniform(0.1, 2.0)
            nx = spaces.norm(space, x)
            rm, rp, rmean = _derivative_triple(space, x, y)
            candidates = {
                "raw": y,
                "proj-mean": y - (rmean / nx**2) * x,
                "proj-plus": y - (rp / nx**2) * x,
                "proj-minus": y - (rm / nx**2) * x,
            }
            inputs = {"x": x.tolist(), "y": y.tolist(), "alpha": alpha}
            for tag, cand in candidates.items():
                scaled_tol = tol * max(1.0, nx * spaces.norm(space, cand))
                literal, agrees = orth.check_rho_characterization(space, x, cand, tol=scaled_tol)
                cm, cp, cmean = _derivative_triple(space, x, cand)
                sink.note(label, k, f"{tag}: cand={_fmt(np.asarray(cand))} "
                                    f"rho=({cm},{cp},{cmean}) literal={literal}")
                if not agrees:
                    sink.fail(suite, label, k, f"rho-characterization-{tag}", inputs,
                              abs(cmean) <= scaled_tol, literal, abs(cmean))
                for side in ("plus", "minus"):
                    lit_pm, agrees_pm = orth.check_rho_pm_characterization(
                        space, x, cand, side, tol=scaled_tol
                    )
                    if not agrees_pm:
                        value = cp if side == "plus" else cm
                        sink.fail(suite, label, k, f"pm-characterization-{side}-{tag}",
                                  inputs, abs(value) <= scaled_tol, lit_pm, abs(value))
                # relation implications on this candidate
                plus_holds = abs(cp) <= scaled_tol
                minus_holds = abs(cm) <= scaled_tol
                bj_holds = cm <= scaled_tol and cp >= -scaled_tol
                if (plus_holds or minus_holds) and not bj_holds:
                    sink.fail(suite, label, k, f"pm-implies-bj-{tag}", inputs,
                              "bj holds", (cm, cp), min(abs(cm), abs(cp)))
                if plus_holds and minus_holds and abs(cmean) > scaled_tol:
                    sink.fail(suite, label, k, f"pm-pair-implies-rho-{tag}", inputs,
                              0.0, cmean, abs(cmean))
            # homogeneity of the orthogonality sets on the projected members
            member = candidates["proj-mean"]
            for factor in (alpha, -alpha):
                _, _, smean = _derivative_triple(space, x, factor * member)
                scaled_tol = tol * max(1.0, abs(factor) * nx * spaces.norm(space, member))
                if abs(smean) > scaled_tol:
                    sink.fail(suite, label, k, "rho-set-homogeneity", inputs, 0.0,
                              smean, abs(smean))
            member = candidates["proj-plus"]
            pm_, pp_, _ = _derivative_triple(space, x, alpha * member)
            scaled_tol = tol * max(1.0, alpha * nx * spaces.norm(space, member))
            if abs(pp_) > scaled_tol:
                sink.fail(suite, label, k, "plus-set-positive-homogeneity", inputs,
                          0.0, pp_, abs(pp_))
            nm_, np_, _ = _derivative_triple(space, x, -alpha * member)
            if abs(nm_) > scaled_tol:
                sink.fail(suite, label, k, "plus-set-negative-flip", inputs,
                          0.0, nm_, abs(nm_))


# ---------------------------------------------------------------------------
# ray-example-linf


def _run_ray_example_linf(seed, trials, tols, sink: _Sink):
    suite = "ray-example-linf"
    label = "linf:2"
    if not sink.active(label, 0):
        return
    tol = tols["ray_zero"]
    space = spaces.linf(2)
    x = [1.0, 1.0]
    inputs = {"x": x}
    expectations = (
        (Relation.RHO_PLUS, (180.0, 270.0), orth.Structure.RAY_UNION),
        (Relation.RHO_MINUS, (0.0, 90.0), orth.Structure.RAY_UNION),
        (Relation.RHO, (135.0, 315.0), orth.Structure.HYPERPLANE),
    )
    for relation, expected_deg, expected_structure in expectations:
        diagram = orth.ray_scan_2d(space, x, relation, tol=tol)
        got = sorted(math.degrees(a) % 360.0 for a in diagram.rays)
        sink.note(label, 0, f"{relation.value}: rays={got} structure={diagram.structure.value}")
        ok = len(got) == len(expected_deg) and all(
            min(abs(g - e), 360.0 - abs(g - e)) <= 1e-6
            for g, e in zip(got, sorted(expected_deg))
        )
        if not ok:
            sink.fail(suite, label, 0, f"rays-{relation.value}", inputs,
                      list(expected_deg), got, float("nan"))
        if diagram.structure is not expected_structure:
            sink.fail(suite, label, 0, f"structure-{relation.value}", inputs,
                      expected_structure.value, diagram.structure.value, float("nan"))
    report = sm.classify(space, x, trials=200, seed=seed)
    if report.rho_plus or report.rho_minus:
        sink.fail(suite, label, 0, "not-pm-smooth", inputs, False, report.rho_plus, 1.0)
    if not report.rho:
        sink.fail(suite, label, 0, "rho-smooth", inputs, True, report.rho, 1.0)
    g = report.hyperplane_functional
    if g is None or abs(g[0] - 0.5) > 1e-9 or abs(g[1] - 0.5) > 1e-9:
        sink.fail(suite, label, 0, "hyperplane-normal", inputs, (0.5, 0.5), g, float("nan"))
    elif abs(g[0] * 1.0 + g[1] * (-1.0)) > 1e-9:
        sink.fail(suite, label, 0, "hyperplane-span", inputs, 0.0,
                  g[0] - g[1], abs(g[0] - g[1]))


# ---------------------------------------------------------------------------
# smoothness-codimension


def _smoothness_point(gen, kind, n, k):
    """Mix of generic points and points constructed on the non-smooth strata."""
    x = unit_vector(gen, n) * gen.uniform(0.5, 2.0)
    style = k % 3
    if style == 0:
        return x
    if kind == "l1":
        zeros = 1 if style == 1 else min(2, n - 1)
        idx = gen.permutation(n)[:zeros]
        x[idx] = 0.0
        if not np.any(x):
            x[(idx[0] + 1) % n] = 1.0
        return x
    if kind == "linf":
        ties = 2 if style == 1 else min(3, n)
        idx = gen.permutation(n)[:ties]
        top = float(np.max(np.abs(x))) + 0.5
        signs = np.where(gen.standard_normal(ties) < 0, -1.0, 1.0)
        x[idx] = signs * top
        return x
    return x


def _run_smoothness_codimension(seed, trials, tols, sink: _Sink):
    suite = "smoothness-codimension"
    probe_trials = 120
    specials = (
        ("special", 0, spaces.l1(2), np.array([1.0, 0.0]), {"rho": True, "classical": False}),
        ("special", 1, spaces.linf(2), np.array([1.0, 1.0]), {"rho": True, "classical": False}),
    )
    cases = []
    for label, kind, n, p in VECTOR_FAMILIES:
        space = _family_space(kind, n, p)
        for k in range(trials):
            cases.append((label, k, space, None, None))
    for label, k, space, x, expect in specials:
        cases.append((label, k, space, x, expect))

    for label, k, space, fixed_x, expect in cases:
        if not sink.active(label, k):
            continue
        if fixed_x is None:
            gen = stream(seed, suite, label, k)
            kind = space.kind
            x = _smoothness_point(gen, kind, space.dim, k)
        else:
            x = fixed_x
        inputs = {"x": x.tolist(), "space": spaces.space_to_json(space)}
        try:
            report = sm.classify(space, x, trials=probe_trials, seed=seed)
        except PlusMinusDisagreement as exc:
            sink.fail(suite, label, k, "plus-minus-agree", inputs, "agree", str(exc), 1.0)
            continue
        sink.note(label, k, f"x={_fmt(np.asarray(x))} classical={report.classical} "
                            f"pm={report.rho_plus} rho={report.rho}")
        if report.rho_plus != report.rho_minus:
            sink.fail(suite, label, k, "pm-equal", inputs, report.rho_plus,
                      report.rho_minus, 1.0)
        if report.classical and not report.rho_plus:
            sink.fail(suite, label, k, "classical-implies-pm", inputs, True,
                      report.rho_plus, 1.0)
        if report.rho_plus and not report.rho:
            sink.fail(suite, label, k, "pm-implies-rho", inputs, True, report.rho, 1.0)
        # On the supported families plus-additivity has always coincided with
        # classical smoothness; a disagreement is a reportable finding.
        if report.rho_plus != report.classical:
            sink.fail(suite, label, k, "finding-pm-vs-classical", inputs,
                      report.classical, report.rho_plus, 1.0)
        if expect is not None:
            if report.rho != expect["rho"] or report.classical != expect["classical"]:
                sink.fail(suite, label, k, "special-classification", inputs, expect,
                          {"rho": report.rho, "classical": report.classical}, 1.0)
        for relation in (Relation.RHO_PLUS, Relation.RHO_MINUS, Relation.RHO):
            codim = sm.verify_codimension_theorem(
                space, x, relation, samples=60, trials=probe_trials, seed=seed
            )
            sink.note(label, k, f"{relation.value}: additive={codim.additive} "
                                f"confirmed={codim.hyperplane_confirmed} "
                                f"witness={codim.witness is not None}")
            if codim.additive:
                if not codim.hyperplane_confirmed:
                    sink.fail(suite, label, k, f"hyperplane-{relation.value}", inputs,
                              True, codim.hyperplane_confirmed, codim.membership_failures)
            else:
                if codim.witness is None:
                    sink.fail(suite, label, k, f"witness-{relation.value}", inputs,
                              "witness pair", None, 1.0)


# ---------------------------------------------------------------------------
# operator suites


def _kh_matrix(gen, n, k):
    """Generic well-separated matrix or a constructed degenerate one."""
    if k % 4 == 3 and n >= 2:
        multiplicity = 2 + (k // 4) % 2
        multiplicity = min(multiplicity, n)
        top = gen.uniform(1.0, 2.0)
        rest = top * (0.5 ** np.arange(1, n - multiplicity + 1))
        sigma = np.concatenate([np.full(multiplicity, top), rest])
        u = random_orthogonal(gen, n)
        v = random_orthogonal(gen, n)
        return u @ np.diag(sigma) @ v.T, multiplicity
    return _separated_gaussian(gen, n, n), 1


def _run_kh(seed, trials, tols, sink: _Sink):
    suite = "kh"
    label = "kh"
    tol = tols["additivity"]
    for k in range(trials):
        if not sink.active(label, k):
            continue
        gen = stream(seed, suite, label, k)
        n = DIMENSIONS[k % len(DIMENSIONS)]
        matrix, multiplicity = _kh_matrix(gen, n, k)
        space = spaces.euclidean(n)
        t = ops.Operator(matrix, space, space)
        inputs = {"t": matrix.tolist(), "n": n, "intended_multiplicity": multiplicity}
        try:
            report = ops.check_kh_theorem(t, pairs=200, tol=tol, seed=seed)
        except EquivalenceViolation as exc:
            sink.fail(suite, label, k, "kh-equivalence", inputs, "all verdicts agree",
                      str(exc), 1.0)
            continue
        sink.note(label, k, f"n={n} multiplicity={multiplicity} "
                            f"verdicts={report.verdicts()} span={report.span_dim}")
        if report.span_dim != multiplicity:
            sink.fail(suite, label, k, "kh-construction", inputs, multiplicity,
                      report.span_dim, abs(report.span_dim - multiplicity))


def _run_rho_remark(seed, trials, tols, sink: _Sink):
    suite = "rho-remark"
    label = "remark"
    tol = tols["additivity"]
    for k in range(trials):
        if not sink.active(label, k):
            continue
        gen = stream(seed, suite, label, k)
        n = DIMENSIONS[k % len(DIMENSIONS)]
        style = k % 3
        if style == 0:
            matrix, intended = _separated_gaussian(gen, n, n), 1
        else:
            intended = min(style + 1, n)
            top = gen.uniform(1.0, 2.0)
            rest = top * (0.5 ** np.arange(1, n - intended + 1))
            sigma = np.concatenate([np.full(intended, top), rest])
            matrix = random_orthogonal(gen, n) @ np.diag(sigma) @ random_orthogonal(gen, n).T
        space = spaces.euclidean(n)
        t = ops.Operator(matrix, space, space)
        inputs = {"t": matrix.tolist(), "n": n, "intended_span": intended}
        try:
            report = ops.check_rho_smooth_remark(t, pairs=200, tol=tol, seed=seed)
        except EquivalenceViolation as exc:
            sink.fail(suite, label, k, "remark-equivalence", inputs,
                      "additivity iff span <= 2", str(exc), 1.0)
            continue
        sink.note(label, k, f"n={n} span={report.span_dim} additive={report.rho_additive}")
        if report.span_dim != intended:
            sink.fail(suite, label, k, "remark-construction", inputs, intended,
                      report.span_dim, abs(report.span_dim - intended))
        if report.rho_additive != (intended <= 2):
            sink.fail(suite, label, k, "remark-expected", inputs, intended <= 2,
                      report.rho_additive, 1.0)


L1_CODOMAINS = ("euclidean", "linf", "lp:1.5", "lp:3")


def _l1_matrix(gen, n, m, codomain, k):
    """Operator from l1(n) with a controlled attainment pattern."""
    matrix = gaussian_matrix(gen, m, n)
    style = k % 3
    norms = ops._column_norms(matrix, codomain)
    top = int(np.argmax(norms))
    if style == 0:
        # unique maximizing column with a safe margin
        runner_up = float(np.partition(norms, -2)[-2]) if n >= 2 else 0.0
        if n >= 2 and norms[top] < runner_up * 1.05:
            matrix[:, top] *= 1.1 * runner_up / norms[top]
        return matrix, "unique-smooth"
    if style == 1 and n >= 2:
        # two columns tied exactly at the maximum
        other = (top + 1) % n
        matrix[:, other] *= norms[top] / norms[other]
        return matrix, "tied-columns"
    # unique maximizing column whose image is a non-smooth point of linf
    signs = np.where(gen.standard_normal(m) < 0, -1.0, 1.0)
    matrix[:, top] = signs * (float(np.max(norms)) + 1.0)
    return matrix, "nonsmooth-image"


def _run_l1_domain(seed, trials, tols, sink: _Sink):
    suite = "l1-domain"
    label = "l1-domain"
    tol = tols["oracle_additivity"]
    for k in range(trials):
        if not sink.active(label, k):
            continue
        gen = stream(seed, suite, label, k)
        n = DIMENSIONS[k % len(DIMENSIONS)]
        m = DIMENSIONS[(k // len(DIMENSIONS)) % len(DIMENSIONS)]
        style = k % 3
        cod_kind = "linf" if style == 2 else L1_CODOMAINS[k % len(L1_CODOMAINS)]
        if cod_kind == "euclidean":
            codomain = spaces.euclidean(m)
        elif cod_kind == "linf":
            codomain = spaces.linf(m)
        else:
            codomain = spaces.lp(m, float(cod_kind.split(":")[1]))
        matrix, style_name = _l1_matrix(gen, n, m, codomain, k)
        t = ops.Operator(matrix, spaces.l1(n), codomain)
        inputs = {"t": matrix.tolist(), "codomain": spaces.space_to_json(codomain),
                  "style": style_name}
        try:
            report = ops.check_l1_domain_theorem(t, pairs=48, tol=tol,
                                                 smooth_trials=150, seed=seed)
        except EquivalenceViolation as exc:
            sink.fail(suite, label, k, "l1-equivalence", inputs, "sides agree",
                      str(exc), 1.0)
            continue
        sink.note(label, k, f"style={style_name} additive={report.rho_plus_additive} "
                            f"unique={report.attainment_unique_extreme} "
                            f"image_smooth={report.image_point_pm_smooth}")
        if style_name == "tied-columns" and report.rho_plus_additive:
            sink.fail(suite, label, k, "l1-tied-expected", inputs, False,
                      report.rho_plus_additive, 1.0)
        if style_name == "nonsmooth-image":
            if report.rho_plus_additive or not report.attainment_unique_extreme:
                sink.fail(suite, label, k, "l1-nonsmooth-expected", inputs,
                          {"additive": False, "unique": True},
                          {"additive": report.rho_plus_additive,
                           "unique": report.attainment_unique_extreme}, 1.0)


# ---------------------------------------------------------------------------
# driver


SUITE_RUNNERS: dict = {
    "norm-axioms": _run_norm_axioms,
    "derivative-properties": _run_derivative_properties,
    "oracle-agreement": _run_oracle_agreement,
    "orthogonality-characterizations": _run_orthogonality_characterizations,
    "ray-example-linf": _run_ray_example_linf,
    "smoothness-codimension": _run_smoothness_codimension,
    "kh": _run_kh,
    "rho-remark": _run_rho_remark,
    "l1-domain": _run_l1_domain,
}


def _resolve_tols(tol_overrides: Optional[dict]) -> dict:
    tols = dict(DEFAULT_TOLS)
    for key, value in (tol_overrides or {}).items():
        if key not in DEFAULT_TOLS:
            raise InputError(f"unknown tolerance override {key!r}")
        tols[key] = float(value)
    return tols


def run_suite(
    name: str,
    seed: int = 0,
    trials: Optional[int] = None,
    tol_overrides: Optional[dict] = None,
) -> SuiteReport:
    """Execute a named suite deterministically and return its report."""
    if name not in SUITE_NAMES:
        raise InputError(f"unknown suite {name!r}; choose from {sorted(SUITE_NAMES)}")
    tols = _resolve_tols(tol_overrides)
    start = time.perf_counter()
    if name == "all":
        failures: list = []
        for sub in SUITE_DEFAULT_TRIALS:
            sub_trials = trials if trials is not None else SUITE_DEFAULT_TRIALS[sub]
            sink = _Sink()
            SUITE_RUNNERS[sub](seed, sub_trials, tols, sink)
            failures.extend(sink.failures)
        elapsed = time.perf_counter() - start
        return SuiteReport("all", seed, trials if trials is not None else -1,
                           dict(tol_overrides or {}), failures, elapsed)
    sink = _Sink()
    used_trials = trials if trials is not None else SUITE_DEFAULT_TRIALS[name]
    SUITE_RUNNERS[name](seed, used_trials, tols, sink)
    elapsed = time.perf_counter() - start
    return SuiteReport(name, seed, used_trials, dict(tol_overrides or {}),
                       sink.failures, elapsed)


def load_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def replay_failure(report_path: str, failure_index: int) -> str:
    """Re-run one recorded failure with full intermediate values."""
    payload = load_report(report_path)
    failures = payload.get("failures", [])
    if not failures:
        raise InputError("report has no failures to replay")
    if not (0 <= failure_index < len(failures)):
        raise InputError(
            f"failure index {failure_index} out of range 0..{len(failures) - 1}"
        )
    failure = failures[failure_index]
    suite = failure["suite"]
    if suite not in SUITE_RUNNERS:
        raise InputError(f"report references unknown suite {suite!r}")
    seed = int(payload["seed"])
    trials = payload["trials"]
    tols = _resolve_tols(payload.get("tol_overrides"))
    sink = _Sink(only=(failure["family"], failure["trial"]))
    suite_trials = trials if trials not in (None, -1) else SUITE_DEFAULT_TRIALS[suite]
    SUITE_RUNNERS[suite](seed, suite_trials, tols, sink)

    lines = [
        f"replaying failure {failure_index} of suite {suite!r}",
        f"family={failure['family']} trial={failure['trial']} check={failure['check']}",
        f"recorded expected={failure['expected']!r} observed={failure['observed']!r} "
        f"residual={failure['residual']!r}",
        "--- trace ---",
    ]
    lines.extend(sink.trace)
    matching = [
        f for f in sink.failures
        if f["check"] == failure["check"] and f["trial"] == failure["trial"]
        and f["family"] == failure["family"]
    ]
    if matching:
        lines.append("--- re-execution ---")
        lines.append(
            f"reproduced residual={matching[0]['residual']!r} "
            f"observed={matching[0]['observed']!r}"
        )
    else:
        lines.append("--- re-execution ---")
        lines.append("case passed on replay (tolerances differ from the original run?)")
    return "\n".join(lines)
