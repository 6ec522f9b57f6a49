"""Explicit radial SMP violators and the Hopf barrier.

Given an increasing ``f`` with ``∫_{0+} dy/(y + f(y)) < ∞``, set
``s(y) = ∫_0^y dt/(t + f(t))``, ``s0 = s(y0)``, ``t0 = e^{s0}`` and

    ψ'(t) = t · y(s0 - log t)  on  [1, t0],    ψ' = 0  after,

with ``ψ(t0) = m``. Then ``ψ'' + f(ψ'/t) = 0`` on ``(1, t0)``, ``ψ`` increases
strictly up to ``t0`` and is constant afterwards.
"""

import dataclasses
import json
import math
from pathlib import Path

import numpy as np
from scipy.integrate import cumulative_simpson

from .characteristic import CharacteristicTable, integral_test
from .errors import InputError, Refusal
from .functions import ScalarFn
from .radial import RadialFunction
from .serialize import dumps, jsonable, write_csv

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _as_callable(f):
    if isinstance(f, CharacteristicTable):
        return lambda y: np.asarray(f(y, extrapolate=True), dtype=float)
    if isinstance(f, ScalarFn) or callable(f):
        return lambda y: np.asarray(f(y), dtype=float)
    raise InputError("f must be a ScalarFn, CharacteristicTable or callable")


def _gl(fun, a, b):
    """8-point Gauss-Legendre on each interval ``[a_i, b_i]`` (vectorized)."""
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * GL_NODES
    return np.sum(GL_WEIGHTS * fun(x), axis=-1) * half[..., 0]


def jump_count(f, lo=1e-12, hi=1.0, points=2000, factor=100.0):
    """Number of grid cells where an increasing ``f`` jumps (step far above both neighbouring steps)."""
    ys = np.geomspace(lo, hi, points)
    d = np.abs(np.diff(_as_callable(f)(ys)))
    nb = np.maximum(np.concatenate([[0.0], d[:-1]]), np.concatenate([d[1:], [0.0]]))
    return int(np.sum(d > factor * np.maximum(nb, 1e-300)))


class ArcLength:
    """``s(y) = ∫_0^y dt/(t + f(t))`` tabulated on a geometric grid, with its inverse.

    Panels in ``u = log y`` are integrated by Gauss-Legendre and accumulated
    from the small end; the part below the grid uses a power-law tail.
    """

    def __init__(self, f, y0, points=6000, decades=40.0):
        self.fun = _as_callable(f)
        self.y0 = float(y0)
        self.u = np.linspace(math.log(y0) - decades * math.log(10.0), math.log(y0), points)
        pieces = _gl(self._integrand, self.u[:-1], self.u[1:])
        # tail below the grid from the decay ratio of the last panels
        r = pieces[0] / pieces[1] if pieces[1] > 0 else 0.0
        self.tail = float(pieces[0] * r / (1.0 - r)) if 0 < r < 1 else 0.0
        self.s = self.tail + np.concatenate([[0.0], np.cumsum(pieces)])
        self.ys = np.exp(self.u)

    def _integrand(self, u):
        y = np.exp(u)
        return y / (y + self.fun(y))

    @property
    def s0(self):
        return float(self.s[-1])

    def s_of_y(self, y):
        """Evaluate ``s`` anywhere in ``(0, y0]`` from the nearest lower node."""
        y = np.asarray(y, dtype=float)
        u = np.log(np.maximum(y, 1e-320))
        i = np.clip(np.searchsorted(self.u, u, side="right") - 1, 0, self.u.size - 2)
        below = u < self.u[0]
        out = self.s[i] + _gl(self._integrand, self.u[i], np.maximum(u, self.u[0]))
        out = np.where(below, self.s[0] * y / self.ys[0], out)
        return np.where(y <= 0, 0.0, out)

    def y_of_s(self, s, iters=80):
        """Invert ``s`` by bisection in ``log y`` inside the bracketing panel."""
        s = np.asarray(s, dtype=float)
        i = np.clip(np.searchsorted(self.s, s, side="right") - 1, 0, self.u.size - 2)
        lo, hi = self.u[i].copy(), self.u[i + 1].copy()
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            go_up = self.s_of_y(np.exp(mid)) < s
            lo = np.where(go_up, mid, lo)
            hi = np.where(go_up, hi, mid)
        y = np.exp(0.5 * (lo + hi))
        y = np.where(s < self.s[0], self.ys[0] * s / self.s[0], y)
        return np.where(s <= 0, 0.0, np.where(s >= self.s0, self.y0, y))


@dataclasses.dataclass
class ConstructionRecord:
    f: object
    y0: float
    s0: float
    t0: float
    m: float
    s_table: tuple
    phi: dict
    psi: RadialFunction
    jet_at_t0: tuple
    meta: dict
    arc: ArcLength = dataclasses.field(repr=False, default=None)

    def y_of_s(self, s):
        return self.arc.y_of_s(s)

    def s_of_y(self, y):
        return self.arc.s_of_y(y)

    def to_dict(self):
        return jsonable({
            "f": self.f.to_dict() if hasattr(self.f, "to_dict") else str(self.f),
            "y0": self.y0, "s0": self.s0, "t0": self.t0, "m": self.m,
            "jet_at_t0": list(self.jet_at_t0), "meta": self.meta,
        })

    def write_bundle(self, out):
        """Write ``s_of_y.csv``, ``psi.csv`` and ``meta.json`` into ``out``."""
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "s_of_y.csv", ["y", "s"], list(self.s_table))
        self.psi.to_csv(out / "psi.csv")
        (out / "meta.json").write_text(dumps(self.to_dict()) + "\n")
        return out


def _t_grid(t0, n_points, tail):
    """Geometric grid on ``[1, tail·t0]`` containing ``t0`` as a node."""
    total = math.log(tail * t0)
    n1 = max(8, int(round(n_points * math.log(t0) / total)))
    left = np.geomspace(1.0, t0, n1)
    right = np.geomspace(t0, tail * t0, n_points - n1 + 1)[1:]
    left[-1] = t0
    return np.concatenate([left, right]), n1 - 1


def build_counterexample(f, m=0.0, y0=1.0, quad_tol=1e-10, n_points=4096, tail=1.25):
    """Construct the increasing radial profile that violates the SMP.

    Refuses (``Refusal`` carrying the integral verdict) unless
    ``∫_{0+} dy/(y + f(y))`` is certified or numerically Convergent.
    """
    if not y0 > 0 or not tail > 1 or n_points < 32:
        raise InputError("need y0 > 0, tail > 1 and at least 32 points")
    fun = _as_callable(f)
    probe = np.concatenate([[0.0], np.geomspace(1e-12 * y0, y0, 400)])
    fv = fun(probe)
    if np.any(np.isnan(fv)) or np.any(np.diff(fv) < -1e-12 * (1.0 + np.abs(fv[1:]))):
        raise InputError("f must be increasing on [0, y0]")
    if abs(fv[0]) > 1e-12:
        raise InputError("f must vanish at 0")
    if isinstance(f, ScalarFn):
        shifted = f.plus_identity()
    else:
        shifted = lambda y: np.asarray(y, dtype=float) + fun(y)  # noqa: E731
    iv = integral_test(shifted, y0=y0)
    if iv.verdict != "Convergent":
        raise Refusal(f"integral of 1/(y + f) near 0 is {iv.verdict}; no radial violator exists",
                      witness=iv)

    arc = ArcLength(f, y0)
    s0 = arc.s0
    t0 = math.exp(s0)
    ts, k0 = _t_grid(t0, n_points, tail)
    inside = ts <= t0
    sig = np.where(inside, s0 - np.log(ts), 0.0)
    sig[k0] = 0.0
    y = np.where(inside, arc.y_of_s(sig), 0.0)
    y[k0] = 0.0
    psi1 = ts * y

    # differentiate each smooth piece separately; t0 itself is a kink
    psi2 = np.empty_like(ts)
    psi2[: k0 + 1] = np.gradient(psi1[: k0 + 1], ts[: k0 + 1], edge_order=2)
    psi2[k0:] = 0.0
    psi2[k0] = np.nan
    flags = np.zeros(ts.size, dtype=bool)
    flags[k0] = True

    psi = np.full_like(ts, float(m))
    left = ts[: k0 + 1]
    acc = cumulative_simpson(psi1[: k0 + 1], x=left, initial=0.0)
    psi[: k0 + 1] = m - (acc[-1] - acc)  # anchored at t0, so the plateau is exact
    psi[k0] = m

    rf = RadialFunction(ts, psi, psi1, psi2, flags, plateau=(t0, float(m)),
                        meta={"source": "construction"})
    f_tag = f.describe() if hasattr(f, "describe") else "table"
    meta = {
        "f": f_tag,
        "quad_tol": quad_tol,
        "points": int(ts.size),
        "tail_below_grid": arc.tail,
        "integral": iv.to_dict(),
    }
    if isinstance(f, CharacteristicTable):
        meta["jump_count"] = jump_count(f, hi=y0)
    ss = np.linspace(0.0, s0, 1000)
    phi = {"s": ss, "phi1": arc.y_of_s(s0 - ss)}
    return ConstructionRecord(
        f=f, y0=float(y0), s0=s0, t0=t0, m=float(m),
        s_table=(arc.ys, arc.s), phi=phi, psi=rf,
        jet_at_t0=(float(t0 * arc.y_of_s(0.0)), float(-fun(0.0))),
        meta=meta, arc=arc,
    )


def hopf_function(beta, R, grid=None, points=4096):
    """``ψ(t) = e^{-βR²/2} - e^{-βt²/2}`` with exact derivatives.

    The default grid is geometric on ``[1e-3 R, 3R]``.
    """
    beta, R = float(beta), float(R)
    if not beta > 0 or not R > 0:
        raise InputError("beta and R must be positive")
    ts = np.geomspace(1e-3 * R, 3.0 * R, points) if grid is None else np.asarray(grid, dtype=float)
    e = np.exp(-0.5 * beta * ts * ts)
    psi = math.exp(-0.5 * beta * R * R) - e
    psi1 = beta * ts * e
    psi2 = beta * e * (1.0 - beta * ts * ts)
    return RadialFunction(ts, psi, psi1, psi2, meta={"beta": beta, "R": R, "source": "hopf"})


def hopf_characteristic(beta):
    """``f(λ) = λ(log(β²/λ²) - 1)``, the function that makes the Hopf profile harmonic."""
    return ScalarFn("hopf", beta=beta)


def load_meta(path):
    return json.loads(Path(path).read_text())
