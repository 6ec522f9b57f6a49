"""Closed-form scalar functions used as parameters of subequations.

Two families live here:

* :class:`ScalarFn` -- increasing functions ``f`` with ``f(0) = 0``. They play
  the role of characteristic functions and of the ``f`` parameter of the
  min/max and min/2 subequations. Each tag knows whether ``∫_{0+} dy/f(y)``
  converges, so integral verdicts on cataloged forms are certified.
* :class:`GFunction` -- continuous decreasing ``g`` on ``[0, a]`` with
  ``g(0) = 0`` and ``g < 0`` on ``(0, a]``, the parameter of ``M(g)``.
"""

import math

import numpy as np

from .errors import InputError

DIVERGENT = "divergent"
CONVERGENT = "convergent"


def _bisect_increasing(func, target, lo, hi, iters=200, xtol=0.0):
    """Vectorized bisection for ``func(x) = target`` with ``func`` increasing on [lo, hi]."""
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = func(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= xtol):
            break
    return 0.5 * (lo + hi)


class ScalarFn:
    """An increasing function on ``[0, domain)`` with ``f(0) = 0``.

    Tags and parameters:

    ``zero``            f ≡ 0
    ``linear(c)``       c y
    ``power(p, c)``     c y^p  (``sqrt`` is p = 1/2, c = 1)
    ``poly(coeffs)``    Σ_k coeffs[k-1] y^k, nonnegative coefficients
    ``log(c)``          y (c - 2 log y); increasing for y < exp((c - 2)/2)
    ``hopf(beta)``      y (log(β²/y²) - 1), i.e. ``log`` with c = 2 log β - 1
    ``plus_id(inner)``  y + inner(y)
    ``table(x, y)``     piecewise linear through the samples
    """

    TAGS = ("zero", "linear", "power", "sqrt", "poly", "log", "hopf", "plus_id", "table")

    def __init__(self, tag, **params):
        if tag not in self.TAGS:
            raise InputError(f"unknown function tag {tag!r}")
        if tag == "sqrt":
            tag, params = "power", {"p": 0.5, "c": params.get("c", 1.0)}
        if tag == "linear":
            params = {"c": float(params.get("c", 1.0))}
            if params["c"] < 0:
                raise InputError("linear coefficient must be nonnegative")
        elif tag == "power":
            params = {"p": float(params["p"]), "c": float(params.get("c", 1.0))}
            if params["p"] <= 0 or params["c"] <= 0:
                raise InputError("power needs p > 0 and c > 0")
        elif tag == "poly":
            coeffs = [float(c) for c in params["coeffs"]]
            if any(c < 0 for c in coeffs) or not any(c > 0 for c in coeffs):
                raise InputError("poly coefficients must be nonnegative and not all zero")
            params = {"coeffs": coeffs}
        elif tag == "hopf":
            beta = float(params["beta"])
            if beta <= 0:
                raise InputError("beta must be positive")
            params = {"beta": beta}
        elif tag == "log":
            params = {"c": float(params["c"])}
        elif tag == "plus_id":
            inner = params["inner"]
            if isinstance(inner, dict):
                inner = ScalarFn.from_dict(inner)
            params = {"inner": inner}
        elif tag == "table":
            x = np.asarray(params["x"], dtype=float)
            y = np.asarray(params["y"], dtype=float)
            if x.ndim != 1 or x.shape != y.shape or x.size < 2:
                raise InputError("table needs matching 1-d x and y with >= 2 points")
            if np.any(np.diff(x) <= 0) or np.any(np.diff(y) < 0):
                raise InputError("table must have increasing x and nondecreasing y")
            params = {"x": x, "y": y}
        else:
            params = {}
        self.tag = tag
        self.params = params

    # -- evaluation ---------------------------------------------------------

    @property
    def log_coefficient(self):
        if self.tag == "log":
            return self.params["c"]
        if self.tag == "hopf":
            return 2.0 * math.log(self.params["beta"]) - 1.0
        return None

    @property
    def domain(self):
        """Right end of the interval on which the formula is increasing."""
        c = self.log_coefficient
        if c is not None:
            return math.exp((c - 2.0) / 2.0)
        if self.tag == "plus_id":
            return self.params["inner"].domain
        if self.tag == "table":
            return float(self.params["x"][-1])
        return math.inf

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        tag, p = self.tag, self.params
        if tag == "zero":
            out = np.zeros_like(y)
        elif tag == "linear":
            out = p["c"] * y
        elif tag == "power":
            out = p["c"] * np.abs(y) ** p["p"] * np.sign(y)
        elif tag == "poly":
            out = sum(c * y ** (k + 1) for k, c in enumerate(p["coeffs"]))
        elif tag in ("log", "hopf"):
            c = self.log_coefficient
            with np.errstate(divide="ignore", invalid="ignore"):
                out = y * (c - 2.0 * np.log(y))
            out = np.where(y == 0.0, 0.0, out)
        elif tag == "plus_id":
            out = y + p["inner"](y)
        else:
            out = np.interp(y, p["x"], p["y"])
        return out if out.ndim else float(out)

    def zero_behaviour(self):
        """Certified behaviour of ``∫_{0+} dy/f(y)``, or ``None`` when unknown.

        Returns ``(verdict, reason)``.
        """
        tag, p = self.tag, self.params
        if tag == "zero" or (tag == "linear" and p["c"] == 0.0):
            return DIVERGENT, "f vanishes identically near 0, so 1/f = inf"
        if tag == "linear":
            return DIVERGENT, "antiderivative log(y)/c diverges at 0"
        if tag == "power":
            if p["p"] < 1.0:
                return CONVERGENT, f"antiderivative y^(1-p)/(c(1-p)) with p={p['p']:g} < 1 is finite at 0"
            if p["p"] == 1.0:
                return DIVERGENT, "antiderivative log(y)/c diverges at 0"
            return DIVERGENT, f"integrand y^(-p)/c with p={p['p']:g} > 1 is not integrable at 0"
        if tag == "poly":
            k = next(i for i, c in enumerate(p["coeffs"]) if c > 0) + 1
            return DIVERGENT, f"f ~ c y^{k} near 0 with k >= 1"
        if tag in ("log", "hopf"):
            c = self.log_coefficient
            return DIVERGENT, f"antiderivative -1/2 log({c:g} - 2 log y) diverges at 0"
        if tag == "plus_id":
            inner = p["inner"].zero_behaviour()
            if inner is None:
                return None
            verdict, reason = inner
            if verdict == CONVERGENT:
                return CONVERGENT, "1/(y + f) <= 1/f and " + reason
            # every divergent catalog form satisfies f(y) <= C y log(1/y) near 0
            return DIVERGENT, "y + f(y) is at most C y log(1/y) near 0 and " + reason
        return None

    def antiderivative(self, y):
        """A closed-form antiderivative of ``1/f`` where one is cataloged."""
        tag, p = self.tag, self.params
        y = np.asarray(y, dtype=float)
        if tag == "linear" and p["c"] > 0:
            return np.log(y) / p["c"]
        if tag == "power":
            if p["p"] == 1.0:
                return np.log(y) / p["c"]
            return y ** (1.0 - p["p"]) / (p["c"] * (1.0 - p["p"]))
        if tag in ("log", "hopf"):
            return -0.5 * np.log(self.log_coefficient - 2.0 * np.log(y))
        if tag == "plus_id" and p["inner"].tag == "power" and p["inner"].params["p"] == 0.5:
            c = p["inner"].params["c"]
            return 2.0 * np.log(c + np.sqrt(y))
        raise InputError(f"no cataloged antiderivative for {self.describe()}")

    def plus_identity(self):
        return ScalarFn("plus_id", inner=self)

    # -- bookkeeping -------------------------------------------------------

    def describe(self):
        if self.tag == "plus_id":
            return f"y + {self.params['inner'].describe()}"
        if self.tag == "table":
            return f"table[{self.params['x'].size}]"
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.tag}({args})"

    def to_dict(self):
        d = {"tag": self.tag}
        for k, v in self.params.items():
            if isinstance(v, ScalarFn):
                d[k] = v.to_dict()
            elif isinstance(v, np.ndarray):
                d[k] = v.tolist()
            else:
                d[k] = v
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        return cls(d.pop("tag"), **d)

    def __eq__(self, other):
        return isinstance(other, ScalarFn) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"ScalarFn({self.describe()})"


def parse_scalar_fn(name, **kw):
    """Resolve a short CLI-style name (``sqrt``, ``linear``, ``hopf``...)."""
    if name in ("sqrt", "zero"):
        return ScalarFn(name)
    if name == "linear":
        return ScalarFn("linear", c=kw.get("c", 1.0))
    if name == "hopf":
        return ScalarFn("hopf", beta=kw.get("beta", 10.0))
    if name == "log":
        return ScalarFn("log", c=kw["c"])
    if name == "power":
        return ScalarFn("power", p=kw["p"], c=kw.get("c", 1.0))
    raise InputError(f"unknown function name {name!r}")


class GFunction:
    """Continuous decreasing ``g`` on ``[0, a]`` with ``g(0) = 0``, ``g < 0`` after.

    Tags: ``neg_sqrt(c)`` (-c√x), ``neg_linear(delta)`` (-δx, giving P(δ)),
    ``neg_rational`` (-x/(1+x)), ``loginv(alpha, a)`` (defined through its
    inverse ``g^{-1}(-λ) = λ(α - 2 log λ)`` on ``0 <= λ <= a``) and
    ``table(x, g)``.

    Beyond the base interval the function is either held at ``g(a)`` or, with
    ``extended=True``, continued by the maximal subadditive extension
    ``g(x) = k g(a) + g(x - k a)`` for ``k a <= x <= (k+1) a``.
    """

    TAGS = ("neg_sqrt", "neg_linear", "neg_rational", "loginv", "table")

    def __init__(self, tag, extended=False, a=None, **params):
        if tag not in self.TAGS:
            raise InputError(f"unknown g tag {tag!r}")
        self.tag = tag
        self.extended = bool(extended)
        if tag == "neg_sqrt":
            self.params = {"c": float(params.get("c", 1.0))}
        elif tag == "neg_linear":
            self.params = {"delta": float(params.get("delta", 1.0))}
        elif tag == "neg_rational":
            self.params = {}
        elif tag == "loginv":
            alpha = float(params.get("alpha", 1.0))
            lam_a = float(params.get("lam_a", 0.5))
            # shrink until h'(λ) = α - 2 - 2 log λ > 0 on [0, lam_a]
            while alpha - 2.0 - 2.0 * math.log(lam_a) <= 1e-3:
                lam_a *= 0.5
            self.params = {"alpha": alpha, "lam_a": lam_a}
            a = self._h(lam_a)
        else:
            x = np.asarray(params["x"], dtype=float)
            g = np.asarray(params["g"], dtype=float)
            if x.ndim != 1 or x.shape != g.shape or x.size < 2 or x[0] != 0.0:
                raise InputError("g table needs matching 1-d x, g starting at x = 0")
            self.params = {"x": x, "g": g}
            a = float(x[-1])
        if any(v <= 0 for v in self.params.values() if isinstance(v, float)):
            raise InputError(f"parameters of {tag} must be positive")
        self.a = math.inf if a is None else float(a)
        if not self.a > 0:
            raise InputError("right endpoint a must be positive")

    def _h(self, lam):
        alpha = self.params["alpha"]
        lam = np.asarray(lam, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = lam * (alpha - 2.0 * np.log(lam))
        return np.where(lam == 0.0, 0.0, out)

    # -- base interval -----------------------------------------------------

    def _base(self, x):
        tag, p = self.tag, self.params
        if tag == "neg_sqrt":
            return -p["c"] * np.sqrt(x)
        if tag == "neg_linear":
            return -p["delta"] * x
        if tag == "neg_rational":
            return -x / (1.0 + x)
        if tag == "loginv":
            lam = _bisect_increasing(self._h, x, 0.0, p["lam_a"], iters=80)
            return np.where(np.asarray(x) == 0.0, 0.0, -lam)
        return np.interp(x, p["x"], p["g"])

    def _base_inverse(self, y):
        """``sup{x in [0, a] : g(x) >= y}`` for ``g(a) <= y <= 0``."""
        tag, p = self.tag, self.params
        if tag == "neg_sqrt":
            return (y / p["c"]) ** 2
        if tag == "neg_linear":
            return -y / p["delta"]
        if tag == "neg_rational":
            with np.errstate(divide="ignore"):
                return np.where(y > -1.0, -y / (1.0 + y), np.inf)
        if tag == "loginv":
            return self._h(-y)
        x, g = p["x"], p["g"]
        return np.interp(-y, -g, x)

    # -- public ------------------------------------------------------------

    @property
    def g_at_a(self):
        if self.tag == "loginv":
            return -self.params["lam_a"]
        return float(self._base(np.float64(self.a))) if math.isfinite(self.a) else -math.inf

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise InputError("g is defined on [0, inf)")
        if not math.isfinite(self.a):
            out = self._base(x)
        elif self.extended:
            k = np.floor(x / self.a)
            out = k * self.g_at_a + self._base(np.clip(x - k * self.a, 0.0, self.a))
        else:
            out = self._base(np.minimum(x, self.a))
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    def inverse(self, y):
        """``g^{-1}(y) = sup{x >= 0 : g(x) >= y}`` for ``y <= 0`` (``inf`` if unbounded)."""
        y = np.asarray(y, dtype=float)
        if np.any(y > 0):
            raise InputError("g^{-1} is only needed on (-inf, 0]")
        if not math.isfinite(self.a):
            out = self._base_inverse(y)
        elif self.extended:
            b = -self.g_at_a
            k = np.floor(-y / b)
            rem = np.minimum(y + k * b, 0.0)
            out = k * self.a + self._base_inverse(np.maximum(rem, -b))
        else:
            ga = self.g_at_a
            out = np.where(y >= ga, self._base_inverse(np.maximum(y, ga)), np.inf)
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    def dual_characteristic(self, n):
        """Closed form of ``λ ↦ g^{-1}(-λ) + (n-1)λ`` where the base tag allows it.

        Returns ``(ScalarFn, valid_upto)`` or ``None``; the formula holds on
        ``0 <= λ <= valid_upto``, i.e. while ``-λ`` stays in the base range.
        """
        upto = -self.g_at_a
        if self.tag == "neg_sqrt":
            return ScalarFn("poly", coeffs=[n - 1.0, 1.0 / self.params["c"] ** 2]), upto
        if self.tag == "neg_linear":
            return ScalarFn("linear", c=1.0 / self.params["delta"] + n - 1.0), upto
        if self.tag == "loginv":
            return ScalarFn("log", c=self.params["alpha"] + n - 1.0), upto
        return None

    def audit(self, points=1000, x_max=None):
        """Check ``g(0) = 0``, ``g < 0`` and monotone decrease on a grid.

        Returns a dict with one boolean per property plus ``concave`` on the
        base interval (needed only for the subadditive extension).
        """
        top = self.a if math.isfinite(self.a) else (x_max or 10.0)
        xs = np.linspace(0.0, top, points)
        gs = np.asarray(self(xs))
        second = gs[2:] - 2.0 * gs[1:-1] + gs[:-2]
        scale = 1e-12 * (1.0 + np.abs(gs).max())
        return {
            "zero_at_origin": bool(abs(gs[0]) == 0.0),
            "negative": bool(np.all(gs[1:] < 0)),
            "decreasing": bool(np.all(np.diff(gs) <= scale)),
            "concave": bool(np.all(second <= scale)),
        }

    def describe(self):
        if self.tag == "table":
            core = f"table[{self.params['x'].size}]"
        else:
            core = self.tag + "(" + ", ".join(f"{k}={v:g}" for k, v in self.params.items()) + ")"
        return core + (" extended" if self.extended else "")

    def to_dict(self):
        d = {"tag": self.tag, "extended": self.extended}
        if self.tag == "table":
            d["x"] = self.params["x"].tolist()
            d["g"] = self.params["g"].tolist()
            return d
        d.update(self.params)
        if self.tag != "loginv" and math.isfinite(self.a):
            d["a"] = self.a
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        return cls(d.pop("tag"), **d)

    def __repr__(self):
        return f"GFunction({self.describe()})"


def parse_g(name, **kw):
    if name in ("neg_sqrt", "sqrt"):
        return GFunction("neg_sqrt", extended=kw.get("extended", False))
    if name in ("neg_rational", "rational"):
        return GFunction("neg_rational")
    if name in ("neg_linear", "linear"):
        return GFunction("neg_linear", delta=kw.get("delta", 1.0))
    if name == "loginv":
        return GFunction("loginv", extended=True, alpha=kw.get("alpha", 1.0),
                         lam_a=kw.get("lam_a", 0.5))
    raise InputError(f"unknown g name {name!r}")
