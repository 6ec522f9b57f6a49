"""Property-based checks of the structural invariants."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from catalog import catalog
from smp_toolkit import characteristic as ch
from smp_toolkit import linalg
from smp_toolkit import subequations as sub
from smp_toolkit.functions import ScalarFn

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 5)


def sym_matrix(n):
    return arrays(np.float64, (n, n), elements=finite).map(lambda M: 0.5 * (M + M.T))


@settings(max_examples=200, deadline=None)
@given(dims.flatmap(lambda n: st.tuples(sym_matrix(n), seeds)))
def test_eigenvalues_increase_under_psd_shift(args):
    A, seed = args
    P = linalg.random_psd(np.random.default_rng(seed), A.shape[0])
    assert np.all(linalg.eigvals(A + P) >= linalg.eigvals(A) - 1e-9 * (1 + np.abs(A).max() + np.abs(P).max()))


@settings(max_examples=200, deadline=None)
@given(dims.flatmap(sym_matrix))
def test_min_of_negation_is_minus_max(A):
    assert linalg.lambda_min(-A) == pytest.approx(-linalg.lambda_max(A), abs=1e-9 * (1 + np.abs(A).max()))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(catalog()), seeds)
def test_positivity_on_catalog(spec, seed):
    assert sub.positivity_check(spec, trials=200, seed=seed)["passed"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(catalog()), st.lists(st.floats(0, 5), min_size=1, max_size=8, unique=True), seeds)
def test_lower_below_upper(spec, lams, seed):
    up, low = ch.tables_both_sides(spec, sorted(lams), e_samples=8, seed=seed)
    assert np.all(low.values <= up.values)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([s for s in catalog() if s.invariant]), seeds)
def test_invariant_sides_agree(spec, seed):
    # for invariant specs the choice of e is irrelevant: both sides collapse;
    # λ = 0 is left out since -μP_e there sits exactly on the boundary of some specs
    up, low = ch.tables_both_sides(spec, np.linspace(0.5, 3, 6), e_samples=6, seed=seed, tol=1e-10)
    fin = np.isfinite(up.values)
    assert np.array_equal(fin, np.isfinite(low.values))
    assert np.all(np.abs(up.values[fin] - low.values[fin]) <= 2e-10 * (1 + np.abs(up.values[fin])))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(catalog()), seeds)
def test_tables_increase(spec, seed):
    grid = np.sort(np.random.default_rng(seed).uniform(-3, 3, 12))
    assert ch.char_fn(spec, "upper", grid, e_samples=4, seed=seed).is_monotone(slack=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 10.0))
def test_sigma_psi_closed_form(lam):
    tab = ch.char_fn(sub.SigmaPsiK(3, 1 / 3, 1), "upper", [lam])
    assert tab.values[0] == pytest.approx(8 * lam, abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([sub.Pucci(3, 1.0, 2.0), sub.MinMaxCone(3, 0.5), sub.Pos(3), sub.MinMaxCone(2, 4.0)]),
       st.floats(-5, 5), st.floats(0.01, 100))
def test_cone_homogeneity(spec, lam, t):
    f = lambda x: ch.char_fn(spec, "upper", [x]).values[0]  # noqa: E731
    assert f(t * lam) == pytest.approx(t * f(lam), rel=1e-8, abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(catalog()), dims.flatmap(sym_matrix))
def test_dual_is_an_involution(spec, A):
    n = A.shape[0]
    spec = sub.from_dict(dict(spec.to_dict(), dim=n))
    assert np.array_equal(sub.Dual(sub.Dual(spec)).member(A), spec.member(A))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 20), dims.flatmap(sym_matrix))
def test_minmax_cone_dual_table(alpha, A):
    n = A.shape[0]
    assert sub.dual_member(sub.MinMaxCone(n, alpha), A) == sub.MinMaxCone(n, 1 / alpha).member(A)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([ScalarFn("sqrt"), ScalarFn("linear", c=2.0)]), seeds)
def test_sandwich(f, seed):
    inner, outer = sub.MinTwoF(3, f), sub.MinMaxF(3, f)
    assert ch.containment_check(inner, outer, trials=500, seed=seed)["contained"]
