import math

import numpy as np
import pytest

from smp_toolkit.errors import InputError
from smp_toolkit.functions import GFunction, ScalarFn, parse_g, parse_scalar_fn


def test_scalar_fn_values():
    assert ScalarFn("sqrt")(4.0) == 2.0
    assert ScalarFn("linear", c=3.0)(2.0) == 6.0
    assert ScalarFn("poly", coeffs=[1.0, 1.0])(2.0) == 6.0
    assert ScalarFn("zero")(5.0) == 0.0
    f = ScalarFn("log", c=3.0)
    assert f(0.0) == 0.0
    assert math.isclose(f(0.5), 0.5 * (3 - 2 * math.log(0.5)))


def test_hopf_equals_log_form():
    beta = 10.0
    lam = np.geomspace(1e-6, 1.0, 50)
    direct = lam * (np.log(beta**2 / lam**2) - 1)
    assert np.allclose(ScalarFn("hopf", beta=beta)(lam), direct, rtol=1e-13)
    assert math.isclose(ScalarFn("hopf", beta=beta).log_coefficient, 2 * math.log(beta) - 1)


def test_zero_behaviour_catalog():
    assert ScalarFn("linear").zero_behaviour()[0] == "divergent"
    assert ScalarFn("sqrt").zero_behaviour()[0] == "convergent"
    assert ScalarFn("log", c=2.0).zero_behaviour()[0] == "divergent"
    assert ScalarFn("sqrt").plus_identity().zero_behaviour()[0] == "convergent"
    assert ScalarFn("linear").plus_identity().zero_behaviour()[0] == "divergent"
    assert ScalarFn("table", x=[0, 1], y=[0, 1]).zero_behaviour() is None


def test_antiderivatives_by_differentiation():
    y = np.geomspace(1e-4, 0.5, 30)
    h = 1e-7 * y
    for f in [ScalarFn("linear", c=2.0), ScalarFn("sqrt"), ScalarFn("log", c=3.0),
              ScalarFn("sqrt").plus_identity()]:
        d = (f.antiderivative(y + h) - f.antiderivative(y - h)) / (2 * h)
        assert np.allclose(d, 1 / np.asarray(f(y)), rtol=1e-5)


def test_scalar_fn_roundtrip_and_errors():
    for f in [ScalarFn("sqrt"), ScalarFn("poly", coeffs=[1, 2]), ScalarFn("sqrt").plus_identity()]:
        assert ScalarFn.from_dict(f.to_dict()) == f
    with pytest.raises(InputError):
        ScalarFn("cube")
    with pytest.raises(InputError):
        ScalarFn("linear", c=-1)
    with pytest.raises(InputError):
        ScalarFn("table", x=[0, 1], y=[1, 0])
    with pytest.raises(InputError):
        parse_scalar_fn("nope")


def test_g_sqrt_extension_value():
    g = GFunction("neg_sqrt", extended=True, a=1.0)
    assert math.isclose(g(2.5), 2 * (-1.0) - math.sqrt(0.5), rel_tol=1e-15)
    assert math.isclose(g(0.3), -math.sqrt(0.3))


def test_g_inverse_roundtrip():
    for g in [GFunction("neg_sqrt"), GFunction("neg_linear", delta=0.5), GFunction("neg_rational"),
              parse_g("loginv"), GFunction("neg_sqrt", extended=True, a=1.0)]:
        xs = np.linspace(0.0, 3.0 if math.isinf(g.a) else 3 * g.a, 50)
        back = g.inverse(g(xs))
        assert np.allclose(back, xs, atol=1e-9), g


def test_g_unextended_clamps():
    g = GFunction("neg_sqrt", a=1.0)
    assert g(4.0) == -1.0
    assert math.isinf(g.inverse(-2.0))


def test_loginv_parameters():
    g = parse_g("loginv", alpha=1.0)
    lam_a = g.params["lam_a"]
    assert 1.0 - 2 - 2 * math.log(lam_a) > 0
    assert g.g_at_a == -lam_a
    lam = np.linspace(0.01, lam_a, 20)
    assert np.allclose(g.inverse(-lam), lam * (1.0 - 2 * np.log(lam)), rtol=1e-12)
    a = g.audit()
    assert a["zero_at_origin"] and a["negative"] and a["decreasing"] and a["concave"]


def test_loginv_shrinks_endpoint():
    g = GFunction("loginv", alpha=0.5, lam_a=1.0)
    assert g.params["lam_a"] < 1.0
    assert 0.5 - 2 - 2 * math.log(g.params["lam_a"]) > 0


def test_g_audit_detects_convexity():
    assert not GFunction("neg_sqrt", a=1.0).audit()["concave"]
    assert GFunction("neg_linear", delta=1.0).audit()["concave"]


def test_g_table_and_roundtrip():
    xs = np.linspace(0, 1, 11)
    g = GFunction("table", x=xs, g=-xs**2)
    assert math.isclose(g(0.5), -0.25, abs_tol=0.01)
    assert GFunction.from_dict(g.to_dict())(0.37) == g(0.37)
    for h in [parse_g("loginv"), GFunction("neg_sqrt", extended=True, a=1.0)]:
        assert GFunction.from_dict(h.to_dict())(2.2) == h(2.2)
    with pytest.raises(InputError):
        g(-1.0)
