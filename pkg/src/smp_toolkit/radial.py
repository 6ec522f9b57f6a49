"""Radial subharmonicity on tabulated profiles ``ψ(t)``.

For ``u(x) = ψ(|x|)`` and an invariant subequation with characteristic ``f``,
``u`` is subharmonic iff ``ψ'' + f(ψ'/t) >= 0``. Profiles are verified at grid
resolution, skipping flagged kink points where ``ψ''`` only exists a.e.
"""

import dataclasses
import math
from pathlib import Path

import numpy as np

from .characteristic import CharacteristicTable
from .errors import InputError, PreconditionError
from .functions import ScalarFn
from .serialize import read_csv, write_csv

PLATEAU_TOL = 1e-12


@dataclasses.dataclass
class RadialFunction:
    """``ψ, ψ', ψ''`` on a strictly increasing grid ``ts`` of positive radii.

    ``flags`` marks points where ``ψ''`` is not defined (stored as NaN);
    ``plateau`` is an optional ``(t0, m)`` with ``ψ ≡ m`` on ``[t0, ∞)``.
    """

    ts: np.ndarray
    psi: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    flags: np.ndarray = None
    plateau: tuple = None
    meta: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        n = self.ts.size
        self.psi, self.psi1, self.psi2 = (np.asarray(v, dtype=float) for v in (self.psi, self.psi1, self.psi2))
        if self.flags is None:
            self.flags = np.isnan(self.psi2)
        self.flags = np.asarray(self.flags, dtype=bool)
        if any(v.shape != (n,) for v in (self.psi, self.psi1, self.psi2, self.flags)):
            raise InputError("radial columns must all match the t grid")
        if self.ts.ndim != 1 or n < 2 or np.any(np.diff(self.ts) <= 0):
            raise InputError("t grid must be strictly increasing with at least 2 points")
        if self.ts[0] <= 0:
            raise InputError("radial grid must stay away from the origin (t > 0)")

    def consistency(self):
        """Max scaled mismatch of ``psi1`` and ``psi2`` against finite differences of the columns above."""
        ok = ~self.flags
        d1 = np.gradient(self.psi, self.ts, edge_order=2)
        d2 = np.gradient(self.psi1, self.ts, edge_order=2)
        scale1 = 1.0 + np.max(np.abs(self.psi1))
        scale2 = 1.0 + np.nanmax(np.abs(self.psi2))
        inner = np.zeros_like(ok)
        inner[1:-1] = ok[1:-1] & ok[:-2] & ok[2:]
        e1 = np.max(np.abs(d1 - self.psi1)[1:-1]) / scale1
        e2 = np.max(np.abs(d2 - self.psi2)[inner]) / scale2 if np.any(inner) else 0.0
        return float(e1), float(e2)

    def to_csv(self, path):
        write_csv(Path(path), ["t", "psi", "psi1", "psi2", "flag"],
                  [self.ts, self.psi, self.psi1, self.psi2, self.flags])
        return Path(path)

    @classmethod
    def from_csv(cls, path, plateau=None):
        cols = read_csv(Path(path))
        return cls(cols["t"], cols["psi"], cols["psi1"], cols["psi2"], cols["flag"] != 0, plateau)

    def to_dict(self):
        return {"points": int(self.ts.size), "t_range": [self.ts[0], self.ts[-1]],
                "plateau": self.plateau, "flagged": int(self.flags.sum()), "meta": self.meta}


def _evaluate(f, lam):
    """Evaluate ``f`` at ``lam``; tables are clamped to their range.

    Returns the values and the number of clamped points.
    """
    if isinstance(f, CharacteristicTable):
        lo, hi = f.lambdas[0], f.lambdas[-1]
        clamped = int(np.sum((lam < lo) | (lam > hi)))
        return np.asarray(f(np.clip(lam, lo, hi)), dtype=float), clamped
    if isinstance(f, ScalarFn) or callable(f):
        return np.asarray(f(lam), dtype=float), 0
    raise InputError("f must be a ScalarFn, CharacteristicTable or callable")


@dataclasses.dataclass
class RadialVerdict:
    holds: bool
    residual_min: float
    checked: int
    flagged: int
    clamped: int
    sign_ok: bool = True
    direction: str = None
    note: str = ""

    def to_dict(self):
        return dataclasses.asdict(self)


def radial_residual(f, rf, return_clamped=False):
    """Pointwise ``ψ'' + f(ψ'/t)`` on ``rf``; NaN at flagged points."""
    if np.any(rf.ts <= 0):
        raise InputError("t must be positive")
    lam = rf.psi1 / rf.ts
    vals, clamped = _evaluate(f, lam)
    with np.errstate(invalid="ignore"):
        res = rf.psi2 + vals
    res = np.where(rf.flags, np.nan, res)
    return (res, clamped) if return_clamped else res


def _verdict(f, rf, atol, sign=None, direction=None):
    res, clamped = radial_residual(f, rf, return_clamped=True)
    ok = ~rf.flags
    rmin = float(np.min(res[ok])) if np.any(ok) else math.inf
    sign_ok = True
    if sign is not None:
        sign_ok = bool(np.all(sign * rf.psi1[ok] >= 0))
    note = f"{clamped} points clamped to the table range" if clamped else ""
    return RadialVerdict(bool(rmin >= -atol and sign_ok), rmin, int(ok.sum()), int(rf.flags.sum()),
                         clamped, sign_ok, direction, note)


def verify_radial(f, rf, atol=1e-6):
    """Subharmonicity of ``ψ(|x|)`` at grid resolution: ``ψ'' + f(ψ'/t) >= -atol``."""
    return _verdict(f, rf, atol)


def verify_monotone_radial(f, rf, direction="up", atol=1e-6):
    """Residual check plus ``ψ' >= 0`` (``up``) or ``ψ' <= 0`` (``down``)."""
    if direction not in ("up", "down"):
        raise InputError("direction must be 'up' or 'down'")
    return _verdict(f, rf, atol, sign=1.0 if direction == "up" else -1.0, direction=direction)


def lower_envelope(table):
    """Conservative lower semicontinuous envelope ``f_-`` of an increasing table.

    Each grid value is replaced by its left neighbour, so a jump anywhere in a
    grid cell is seen from below.
    """
    v = table.values
    out = np.concatenate([v[:1], v[:-1]])
    return CharacteristicTable(table.lambdas, out, dict(table.meta, envelope="lower"))


def verify_radial_strict(f, rf):
    """Strict check ``ψ'' + f_-(ψ'/t) > 0``, with ``f_-`` the lower envelope of a table."""
    g = lower_envelope(f) if isinstance(f, CharacteristicTable) else f
    res = radial_residual(g, rf)
    ok = ~rf.flags
    return bool(np.all(res[ok] > 0))


def detect_plateau(rf, tol=PLATEAU_TOL):
    """``(t0, m)`` if ``ψ`` is constant within ``tol`` on a tail of the grid, else None."""
    if rf.plateau is not None:
        return tuple(rf.plateau)
    m = rf.psi[-1]
    off = np.flatnonzero(np.abs(rf.psi - m) > tol)
    if off.size == 0:
        return (float(rf.ts[0]), float(m))
    i = off[-1] + 1
    if i >= rf.ts.size - 1:
        return None
    return (float(rf.ts[i]), float(m))


def smp_witness_check(rf, tol=PLATEAU_TOL):
    """True iff ``ψ < m`` before ``t0`` and ``ψ ≡ m`` on ``[t0, ∞)`` of the grid."""
    pl = detect_plateau(rf, tol)
    if pl is None:
        return False
    t0, m = pl
    before = rf.ts < t0
    after = rf.ts >= t0
    if not np.any(before) or not np.any(after):
        return False
    return bool(np.all(rf.psi[before] < m) and np.all(np.abs(rf.psi[after] - m) <= tol))


def reflect(rf, c=None):
    """Profile ``t ↦ ψ(c - t)`` on the reflected grid (default ``c = t_lo + t_hi``)."""
    if c is None:
        c = rf.ts[0] + rf.ts[-1]
    ts = c - rf.ts[::-1]
    return RadialFunction(ts, rf.psi[::-1], -rf.psi1[::-1], rf.psi2[::-1], rf.flags[::-1])


def from_callables(ts, psi, dpsi, d2psi, **meta):
    ts = np.asarray(ts, dtype=float)
    return RadialFunction(ts, psi(ts), dpsi(ts), d2psi(ts), meta=meta)


# -- test-function reduction -------------------------------------------------


def reduce_test_function(p, q, A, B, C, tol=1e-12):
    """Eliminate the ``y`` variables of a quadratic test function.

    ``φ(t, y) = <p,t> + <q,y> + <At,t> + 2<Bt,y> + <Cy,y>`` with ``B`` of shape
    ``(l, k)``. Minimizing over ``y`` needs ``q = 0`` and ``C`` positive
    definite, and gives ``(p, A - B^T C^{-1} B)``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    q = np.atleast_1d(np.asarray(q, dtype=float))
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))
    k, l = p.size, q.size
    if A.shape != (k, k) or B.shape != (l, k) or C.shape != (l, l):
        raise InputError("shapes must be p:k, q:l, A:k×k, B:l×k, C:l×l")
    if np.any(np.abs(q) > tol):
        raise PreconditionError(
            "q must vanish: a nonzero linear term in y makes φ(0, y) < φ(0, 0) for small y, "
            "so φ cannot touch from above at the origin", witness={"q": q})
    C = 0.5 * (C + C.T)
    try:
        L = np.linalg.cholesky(C)
    except np.linalg.LinAlgError:
        raise PreconditionError(
            "C must be positive definite: otherwise φ(0, y) <= 0 along some direction y and "
            "the reduction is not a minimum", witness={"C": C}) from None
    X = np.linalg.solve(L, B)
    Abar = A - X.T @ X
    return p, 0.5 * (Abar + Abar.T)


def quadratic_form(p, q, A, B, C, t, y):
    """``φ(t, y)`` for stacks of points ``t (..., k)``, ``y (..., l)``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    return (t @ p + y @ q + np.einsum("...i,ij,...j->...", t, A, t)
            + 2 * np.einsum("...j,ji,...i->...", y, B, t) + np.einsum("...i,ij,...j->...", y, C, y))
