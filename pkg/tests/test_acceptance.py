"""The ten acceptance criteria, one test each, at their stated tolerances.

Each test records a ``criterion N: PASS|FAIL ...`` line, printed in the
terminal summary (and immediately with ``-s``).
"""

import json
import math
import time

import numpy as np
import pytest

import conftest
from catalog import catalog, catalog_with_duals
from oracles import grid_min_quadratic, sqrt_profile
from smp_toolkit import characteristic as ch
from smp_toolkit import counterexample as ce
from smp_toolkit import linalg
from smp_toolkit import monotonicity as mono
from smp_toolkit import radial
from smp_toolkit import subequations as sub
from smp_toolkit.functions import GFunction, ScalarFn, parse_g

TRIALS = 10_000


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_sigma_psi_closed_form():
    t = time.perf_counter()
    grid = np.geomspace(0.01, 10.0, 200)
    tab = ch.char_fn(sub.SigmaPsiK(3, 1 / 3, 1), "upper", grid)
    elapsed = time.perf_counter() - t
    err = float(np.max(np.abs(tab.values - 8 * grid)))
    record(1, err <= 1e-4 and elapsed < 10, f"max |f - 8λ| = {err:.2e}, {elapsed:.2f} s")


def test_criterion_02_duality_table():
    rng = np.random.default_rng(2)
    disagreements = 0
    for alpha in (0.25, 1.0, 4.0):
        for n in (2, 3, 5):
            A = linalg.random_symmetric(rng, n, TRIALS) * (10.0 ** rng.uniform(-2, 2, TRIALS))[:, None, None]
            lhs = sub.dual_member(sub.MinMaxCone(n, alpha), A)
            rhs = sub.MinMaxCone(n, 1 / alpha).member(A)
            disagreements += int(np.sum(lhs != rhs))
    invol = 0
    for spec in catalog_with_duals():
        A = linalg.random_symmetric(rng, spec.dim, TRIALS)
        invol += int(np.sum(sub.Dual(sub.Dual(spec)).member(A) != spec.member(A)))
    record(2, disagreements == 0 and invol == 0,
           f"dual table disagreements {disagreements}, involution disagreements {invol}")


def test_criterion_03_classification():
    sqrt = ScalarFn("sqrt")
    expect = [
        (sub.Pos(3), ch.BORDERLINE),
        (sub.Mg(3, GFunction("neg_sqrt")), ch.BORDERLINE),
        (sub.Mg(3, parse_g("loginv")), ch.BORDERLINE),
        (sub.MinMaxF(3, sqrt), ch.BORDERLINE),
        (sub.MinTwoF(3, sqrt), ch.BORDERLINE),
        (sub.Subaffine(3), ch.COUNTEREXAMPLE),
        (sub.HalfSpace(3, 1.0), ch.GENERIC),
    ]
    bad, slow = [], []
    for spec, case in expect:
        t = time.perf_counter()
        c = ch.classify(spec)
        if time.perf_counter() - t >= 1.0:
            slow.append(spec.describe())
        if c.case != case:
            bad.append(spec.describe())
        if case == ch.COUNTEREXAMPLE:
            w = c.witness
            M = linalg.radial_matrix(0.0, -w["mu"], w["e"])
            if not (w["mu"] > 0 and np.allclose(M, w["matrix"]) and spec.member(M)):
                bad.append("witness")
    record(3, not bad and not slow, f"{len(expect)} specs, wrong {bad}, slow {slow}")


def test_criterion_04_smp_verdicts():
    cases = [(sub.Pos(3), ch.HOLDS)]
    cases += [(sub.SigmaPsiK(3, a, k), ch.HOLDS) for a in (1 / 3, 1.0, 3.0) for k in (1, 2, 3)]
    cases += [(sub.MinMaxF(3, ScalarFn("sqrt")), ch.FAILS)]
    dual118 = sub.Dual(sub.Mg(3, parse_g("loginv")))
    cases += [(dual118, ch.HOLDS)]
    bad = []
    for spec, want in cases:
        v = ch.smp_verdict(spec)
        d = json.loads(json.dumps(v.to_dict()))
        if v.verdict != want or not d["rationale"]:
            bad.append(spec.describe())
    via = ch.smp_verdict(dual118)
    divergent = via.upper is not None and via.upper.verdict == "Divergent"
    record(4, not bad and divergent, f"{len(cases)} verdicts, wrong {bad}, loginv dual integral divergent={divergent}")


def test_criterion_05_counterexample():
    f = ScalarFn("sqrt")
    t = time.perf_counter()
    rec = ce.build_counterexample(f, n_points=4096)
    elapsed = time.perf_counter() - t
    rf = rec.psi
    open_ = (rf.ts > 1.0) & (rf.ts < rec.t0)
    err = float(np.max(np.abs(rf.psi1[open_] - sqrt_profile(rf.ts[open_], rec.t0))))
    res = float(np.nanmax(np.abs(radial.radial_residual(f, rf)[open_])))
    witness = radial.smp_witness_check(rf)
    record(5, err <= 1e-6 and res <= 1e-6 and witness and elapsed < 30,
           f"ψ' error {err:.2e}, residual {res:.2e}, witness {witness}, {elapsed:.2f} s")


def test_criterion_06_hopf():
    rf = ce.hopf_function(10.0, 1.0, points=4096)
    res = float(np.max(np.abs(radial.radial_residual(ce.hopf_characteristic(10.0), rf))))
    record(6, res <= 1e-8, f"max residual {res:.2e}")


def test_criterion_07_sandwich():
    out = []
    ok = True
    for name in ("sqrt", "linear"):
        f = ScalarFn(name)
        fwd = ch.containment_check(sub.MinTwoF(3, f), sub.MinMaxF(3, f), trials=TRIALS, seed=7)
        rev = ch.containment_check(sub.MinMaxF(3, f), sub.MinTwoF(3, f), trials=TRIALS, seed=7)
        witness_ok = (rev["witness"] is not None
                      and sub.MinMaxF(3, f).member(rev["witness"])
                      and not sub.MinTwoF(3, f).member(rev["witness"]))
        ok &= fwd["contained"] and not rev["contained"] and bool(witness_ok)
        out.append(f"{name}: forward {fwd['contained']}, reverse witness {bool(witness_ok)}")
    record(7, ok, "; ".join(out))


def test_criterion_08_mg_dual_cross_check():
    g = GFunction("neg_sqrt")
    grid = np.linspace(0.01, 5.0, 200)
    formula = mono.mg_dual_char(g, 2, grid)
    numeric = ch.char_fn(sub.Dual(sub.Mg(2, g)), "upper", grid)
    err = float(np.max(np.abs(formula.values - numeric.values)))
    record(8, err <= 1e-6, f"max deviation {err:.2e}")


def test_criterion_09_cone_invariants():
    p = ch.cone_invariants(sub.Pucci(3, 1.0, 2.0))
    pucci_ok = abs(p["alpha"] - 1.0) <= 1e-8 and abs(p["riesz_p"] - 2.0) <= 1e-8
    mm_ok = True
    for a0 in (0.25, 0.5, 2.0, 4.0):
        c = ch.cone_invariants(sub.MinMaxCone(3, a0))
        mm_ok &= (abs(c["alpha"] - a0) <= 1e-8 and abs(c["alpha_star"] - 1 / a0) <= 1e-8
                  and abs(c["product"] - 1.0) <= 1e-8)
    q = ch.cone_invariants(sub.Pos(3))
    pos_ok = q["alpha"] == 0.0 and q["alpha_star"] == math.inf and q["riesz_p"] == 1.0
    record(9, pucci_ok and mm_ok and pos_ok, f"pucci {pucci_ok}, minmax-cone {mm_ok}, pos {pos_ok}")


def _prop_positivity():
    return all(sub.positivity_check(s, trials=TRIALS, seed=10)["passed"] for s in catalog())


def _prop_eigen_monotone(rng):
    A = linalg.random_symmetric(rng, 4, TRIALS)
    P = linalg.random_psd(rng, 4, TRIALS)
    return bool(np.all(linalg.eigvals(A + P) >= linalg.eigvals(A) - 1e-10))


def _prop_lower_upper():
    ok = True
    grid = np.linspace(-3.0, 3.0, 60)
    for s in catalog():
        # 60 λ × (3 axes + 164 directions) ≈ 10⁴ samples per spec
        up, low = ch.tables_both_sides(s, grid, e_samples=164, seed=11)
        ok &= bool(np.all(low.values <= up.values))
    return ok


def _prop_tables_monotone(rng):
    grid = np.sort(rng.uniform(-5, 5, TRIALS))
    return all(ch.char_fn(s, "upper", grid, e_samples=1, seed=12).is_monotone(slack=1e-9)
               for s in catalog() if s.invariant)


def _prop_homogeneity(rng):
    lam = rng.uniform(-5, 5, TRIALS)
    t = 10.0 ** rng.uniform(-2, 2, TRIALS)
    ok = True
    for s in (sub.Pucci(3, 1.0, 2.0), sub.MinMaxCone(3, 0.5), sub.Pos(3), sub.SigmaPsiK(3, 1 / 3, 1)):
        a, _ = ch.char_samples(s, lam, e_samples=1)
        b, _ = ch.char_samples(s, t * lam, e_samples=1)
        fa, fb = a.max(axis=1), b.max(axis=1)
        fin = np.isfinite(fa)
        ok &= bool(np.array_equal(fin, np.isfinite(fb)))
        ok &= bool(np.all(np.abs(fb[fin] - t[fin] * fa[fin]) <= 1e-8 * (1 + np.abs(fb[fin]))))
    return ok


def _prop_explicit_dual(rng):
    ok = True
    for g in (GFunction("neg_sqrt"), GFunction("neg_linear", delta=0.5), parse_g("loginv")):
        A = linalg.random_symmetric(rng, 3, TRIALS) * (10.0 ** rng.uniform(-2, 1, TRIALS))[:, None, None]
        ok &= bool(np.array_equal(mono.explicit_dual_member(g, A), sub.Dual(sub.Mg(3, g)).member(A)))
    return ok


def _prop_reduction(rng):
    worst = 0.0
    for _ in range(TRIALS):
        k = int(rng.integers(1, 4))
        p = rng.standard_normal(k)
        A = linalg.random_symmetric(rng, k)
        B = rng.standard_normal((1, k))
        C = np.array([[rng.uniform(0.5, 3.0)]])
        _, Ab = radial.reduce_test_function(p, [0.0], A, B, C)
        # small t keeps the minimizing y well inside the oracle's box
        t = 0.01 * rng.standard_normal(k)
        ref = grid_min_quadratic(p, np.zeros(1), A, B, C, t)
        h = 1.0 / 4000
        gap = ref - (p @ t + t @ Ab @ t)
        if not -1e-12 <= gap <= h * h * C[0, 0]:
            return False, gap
        worst = max(worst, gap)
    return True, worst


def test_criterion_10_property_suites():
    rng = np.random.default_rng(10)
    red_ok, red_gap = _prop_reduction(rng)
    results = {
        "positivity": _prop_positivity(),
        "eigen-monotone": _prop_eigen_monotone(rng),
        "lower<=upper": _prop_lower_upper(),
        "table-monotone": _prop_tables_monotone(rng),
        "homogeneity": _prop_homogeneity(rng),
        "explicit-dual": _prop_explicit_dual(rng),
        "reduction": red_ok,
    }
    failed = [k for k, v in results.items() if not v]
    record(10, not failed, f"{len(results)} suites x {TRIALS} trials, failed {failed}, reduction gap {red_gap:.1e}")
