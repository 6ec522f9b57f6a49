import math

import numpy as np
import pytest

from catalog import catalog
from oracles import grid_min_quadratic
from smp_toolkit import characteristic as ch
from smp_toolkit import linalg
from smp_toolkit import radial
from smp_toolkit.counterexample import hopf_characteristic, hopf_function
from smp_toolkit.errors import InputError, PreconditionError
from smp_toolkit.functions import ScalarFn

LINEAR = ScalarFn("linear")
TS = np.geomspace(0.1, 5.0, 400)


def quad():
    return radial.from_callables(TS, lambda t: t * t / 2, lambda t: t, np.ones_like)


def test_quadratic_residual():
    res = radial.radial_residual(LINEAR, quad())
    assert np.allclose(res, 2.0)


def test_hopf_residual_vanishes():
    rf = hopf_function(10.0, 1.0)
    assert np.max(np.abs(radial.radial_residual(hopf_characteristic(10.0), rf))) <= 1e-8


def test_residual_with_table_clamps():
    # ψ'/t ≡ 1 sits above a table ending at 0.5, so every point is clamped to f(0.5)
    lam = np.linspace(0.0, 0.5, 51)
    tab = ch.CharacteristicTable(lam, lam)
    res, clamped = radial.radial_residual(tab, quad(), return_clamped=True)
    assert clamped == TS.size
    assert np.allclose(res, 1.5)
    v = radial.verify_radial(tab, quad())
    assert v.holds and v.clamped == clamped and "clamped" in v.note
    full = ch.CharacteristicTable(np.linspace(0.0, 2.0, 201), np.linspace(0.0, 2.0, 201))
    res, clamped = radial.radial_residual(full, quad(), return_clamped=True)
    assert clamped == 0 and np.allclose(res, 2.0)


def test_grid_must_be_positive():
    with pytest.raises(InputError):
        radial.RadialFunction([0.0, 1.0], [0, 0], [0, 0], [0, 0])
    with pytest.raises(InputError):
        radial.RadialFunction([1.0, 0.5], [0, 0], [0, 0], [0, 0])


def test_monotone_up_down():
    lin = radial.from_callables(TS, lambda t: t, np.ones_like, np.zeros_like)
    assert radial.verify_monotone_radial(LINEAR, lin, "up").holds
    neg = radial.from_callables(TS, lambda t: -t, lambda t: -np.ones_like(t), np.zeros_like)
    assert not radial.verify_monotone_radial(LINEAR, neg, "up").holds
    assert radial.verify_monotone_radial(ScalarFn("zero"), neg, "down").sign_ok
    with pytest.raises(InputError):
        radial.verify_monotone_radial(LINEAR, lin, "sideways")


def test_reflection_consistency():
    # with f ≡ 0 the residual is ψ'' for both profiles, so up for ψ ⇔ down for its reflection
    zero = ScalarFn("zero")
    for psi, d1, d2 in [(lambda t: t**2, lambda t: 2 * t, lambda t: 2 + 0 * t),
                        (lambda t: np.log(t), lambda t: 1 / t, lambda t: -1 / t**2),
                        (lambda t: -t**3, lambda t: -3 * t**2, lambda t: -6 * t)]:
        rf = radial.from_callables(TS, psi, d1, d2)
        up = radial.verify_monotone_radial(zero, rf, "up").holds
        down = radial.verify_monotone_radial(zero, radial.reflect(rf), "down").holds
        assert up == down


def test_smp_witness_shapes():
    lin = radial.from_callables(TS, lambda t: t, np.ones_like, np.zeros_like)
    assert not radial.smp_witness_check(lin)
    const = radial.from_callables(TS, np.zeros_like, np.zeros_like, np.zeros_like)
    assert not radial.smp_witness_check(const)
    plateau = np.minimum(TS, 2.0)
    rf = radial.RadialFunction(TS, plateau, (TS < 2).astype(float), np.zeros_like(TS))
    assert radial.smp_witness_check(rf)
    assert radial.detect_plateau(rf)[1] == 2.0


def test_jet_consistency_hopf():
    rf = hopf_function(3.0, 1.0, points=200)
    rng = np.random.default_rng(0)
    for _ in range(20):
        i = int(rng.integers(rf.ts.size))
        n = int(rng.integers(2, 5))
        e = rng.standard_normal(n)
        x = rf.ts[i] * e / np.linalg.norm(e)
        vals = linalg.eigvals(linalg.radial_hessian(x, rf.psi1[i], rf.psi2[i]))
        expect = np.sort(np.r_[np.full(n - 1, rf.psi1[i] / rf.ts[i]), rf.psi2[i]])
        assert np.allclose(vals, expect, atol=1e-12)


@pytest.mark.parametrize("spec", [s for s in catalog() if s.invariant and s.characteristic() is not None
                                  and s.kind not in ("subaffine", "halfspace")],
                         ids=lambda s: s.describe())
def test_residual_sign_matches_membership(spec):
    # quadratic ψ(t) = a t²/2 + b t: ψ'/t = a + b/t, ψ'' = a
    f, upto = spec.characteristic()
    rng = np.random.default_rng(1)
    for _ in range(40):
        a, b = rng.uniform(-1, 1, 2)
        t = rng.uniform(0.2, 2.0)
        p, q = a * t + b, a
        lam = p / t
        if lam < 0 or lam > upto:
            continue
        res = q + float(f(lam))
        if abs(res) < 1e-9:
            continue
        x = t * np.eye(spec.dim)[0]
        H = linalg.radial_hessian(x, p, q)
        assert (res >= 0) == bool(spec.member(H))


def test_consistency_of_tabulated_columns():
    e1, e2 = hopf_function(10.0, 1.0, grid=np.linspace(0.05, 2, 4000)).consistency()
    assert e1 < 1e-4 and e2 < 1e-4


def test_csv_roundtrip(tmp_path):
    rf = hopf_function(2.0, 1.0, points=50)
    rf.psi2[10] = np.nan
    rf.flags[10] = True
    path = rf.to_csv(tmp_path / "psi.csv")
    assert path.read_text().splitlines()[0] == "t,psi,psi1,psi2,flag"
    back = radial.RadialFunction.from_csv(path)
    assert np.array_equal(back.flags, rf.flags)
    assert np.allclose(back.psi1, rf.psi1, rtol=1e-15)


def test_strict_check_uses_lower_envelope():
    lam = np.linspace(0, 2, 21)
    step = np.where(lam >= 1.0, 1.0, 0.0)
    tab = ch.CharacteristicTable(lam, step)
    env = radial.lower_envelope(tab)
    assert env(1.0) == 0.0 and tab(1.0) == 1.0
    rf = radial.from_callables(np.array([0.5, 1.0]), lambda t: t * t / 2, lambda t: t, lambda t: 0 * t - 0.5)
    assert radial.verify_radial(tab, rf).holds
    assert not radial.verify_radial_strict(tab, rf)


# -- test-function reduction -------------------------------------------------

def test_reduce_decoupled():
    A = np.array([[1.0, 0.2], [0.2, -1.0]])
    p, Ab = radial.reduce_test_function([1.0, 0.0], [0.0], A, np.zeros((1, 2)), [[2.0]])
    assert np.allclose(Ab, A)


def test_reduce_scalar_example():
    p, Ab = radial.reduce_test_function([1.0], [0.0], [[0.0]], [[1.0]], [[3.0]])
    assert Ab[0, 0] == pytest.approx(-1 / 3)


def test_reduce_preconditions():
    with pytest.raises(PreconditionError):
        radial.reduce_test_function([1.0], [0.1], [[0.0]], [[1.0]], [[3.0]])
    with pytest.raises(PreconditionError):
        radial.reduce_test_function([1.0], [0.0], [[0.0]], [[1.0]], [[-1.0]])
    with pytest.raises(InputError):
        radial.reduce_test_function([1.0], [0.0], [[0.0]], [[1.0, 2.0]], [[1.0]])


@pytest.mark.parametrize("seed", range(6))
def test_reduce_matches_grid_minimum(seed):
    rng = np.random.default_rng(seed)
    k, l = 2, int(rng.integers(1, 3))
    p = rng.standard_normal(k)
    A = linalg.random_symmetric(rng, k)
    B = rng.standard_normal((l, k))
    C = linalg.random_psd(rng, l) + np.eye(l)
    q = np.zeros(l)
    _, Ab = radial.reduce_test_function(p, q, A, B, C)
    for _ in range(5):
        t = 0.05 * rng.standard_normal(k)
        ref = grid_min_quadratic(p, q, A, B, C, t)
        val = p @ t + t @ Ab @ t
        # the grid minimum sits above the true one by at most the grid spacing squared times |C|
        h = 1.0 / (4000 if l == 1 else 400)
        assert -1e-12 <= ref - val <= h * h * np.linalg.norm(C, 2)
