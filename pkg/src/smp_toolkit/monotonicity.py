"""Monotonicity subequations ``M_F`` and the ``M(g)`` family.

``M(g) = {tr A >= 0, λ_min(A) >= g(tr A)}`` is additive exactly when ``g`` is
subadditive. Its dual is borderline with characteristic
``f(λ) = g^{-1}(-λ) + (n-1)λ``, and strong comparison for ``M(g)`` follows
when ``∫_{0+} dy/f`` diverges.
"""

import dataclasses
import math

import numpy as np

from . import linalg
from .characteristic import (BORDERLINE, CharacteristicTable, classify, default_grid,
                             integral_test)
from .errors import InputError, PreconditionError
from .functions import GFunction
from .serialize import jsonable
from .subequations import Dual, Mg

HOLDS, UNKNOWN = "Holds", "Unknown"


def extension_of(g):
    """The same ``g`` continued past ``a`` by ``g(x) = k g(a) + g(x - k a)``."""
    if not math.isfinite(g.a):
        return g
    d = g.to_dict()
    d["extended"] = True
    if g.tag not in ("loginv", "table"):
        d["a"] = g.a
    return GFunction.from_dict(d)


def subadditive_extend(g, x, check_concave=True):
    """Value at ``x >= 0`` of the subadditive extension of a concave ``g`` on ``[0, a]``.

    Concavity is what makes the extension subadditive; ``check_concave=False``
    evaluates the shift formula for any decreasing ``g``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InputError("x must be nonnegative")
    audit = g.audit()
    if check_concave and not audit["concave"]:
        raise PreconditionError(f"{g.describe()} is not concave on [0, a]", witness=audit)
    if not (audit["zero_at_origin"] and audit["decreasing"]):
        raise PreconditionError(f"{g.describe()} must vanish at 0 and decrease", witness=audit)
    return extension_of(g)(x)


# -- additivity --------------------------------------------------------------


def _scalar_pairs(rng, trials, top):
    pairs = np.empty((trials, 2))
    pairs[0] = (1.0, 1.0)
    k = trials - 1
    half = k // 2
    pairs[1:1 + half] = rng.uniform(0.0, top, size=(half, 2))
    pairs[1 + half:] = 10.0 ** rng.uniform(-6, math.log10(top), size=(k - half, 2))
    return pairs


def _frame_member(g, n, x, Q):
    """Member of ``M(g)`` with trace ``x`` and ``λ_min = g(x)`` along ``Q e_1``."""
    low = np.asarray(g(x), dtype=float)
    rest = (x - low) / max(n - 1, 1)
    vals = np.concatenate([low[:, None], np.repeat(rest[:, None], n - 1, axis=1)], axis=1)
    return linalg.with_spectrum(Q, vals)


def additivity_check(g, n, trials=1000, seed=0, slack=1e-12):
    """Audit ``M(g) + M(g) ⊂ M(g)`` at the scalar and the matrix level.

    Scalar: ``g(x + y) <= g(x) + g(y)`` on sampled pairs, ``(1, 1)`` first.
    Matrix: for the same pairs, boundary members ``A, B`` with aligned
    minimal eigenvectors (so ``A + B`` is the binding case), plus generic
    boundary members sampled independently.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    if n < 2:
        raise InputError("n must be >= 2")
    rng = np.random.default_rng(seed)
    top = 2.0 * g.a if math.isfinite(g.a) else 10.0
    xy = _scalar_pairs(rng, trials, top)
    gx, gy, gxy = (np.asarray(g(v), dtype=float) for v in (xy[:, 0], xy[:, 1], xy.sum(axis=1)))
    tol = slack * (1.0 + np.abs(gx) + np.abs(gy))
    bad = np.flatnonzero(gxy > gx + gy + tol)
    scalar = {"passed": not bad.size,
              "witness": None if not bad.size else {"x": xy[bad[0], 0], "y": xy[bad[0], 1],
                                                    "g(x+y)": gxy[bad[0]], "g(x)+g(y)": gx[bad[0]] + gy[bad[0]]}}

    spec = Mg(n, g)
    Q = linalg.haar_orthogonal(rng, n, trials)
    A = _frame_member(g, n, xy[:, 0], Q)
    B = _frame_member(g, n, xy[:, 1], Q)
    # half of the pairs: independent frames, which can only relax the test
    Q2 = linalg.haar_orthogonal(rng, n, trials)
    indep = rng.random(trials) < 0.5
    indep[0] = False
    B[indep] = _frame_member(g, n, xy[indep, 1], Q2[indep])
    size = 1.0 + np.abs(xy).sum(axis=1) + np.abs(gx) + np.abs(gy)
    eps = (1e-10 * size)
    ok_a = spec.margin(A) >= -eps
    ok_b = spec.margin(B) >= -eps
    ok_sum = spec.margin(A + B) >= -eps
    badm = np.flatnonzero(ok_a & ok_b & ~ok_sum)
    matrix = {"passed": not badm.size,
              "witness": None if not badm.size else {"A": A[badm[0]], "B": B[badm[0]]}}
    return {"passed": scalar["passed"] and matrix["passed"], "scalar": scalar, "matrix": matrix,
            "trials": trials}


# -- dual characteristic -----------------------------------------------------


def mg_dual_char(g, n, lambda_grid=None):
    """Table of ``f(λ) = g^{-1}(-λ) + (n-1)λ``; ``+inf`` once ``-λ`` leaves the range of ``g``."""
    grid = default_grid() if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    if np.any(grid < 0):
        raise InputError("the formula covers λ >= 0 only")
    inv = np.asarray(g.inverse(-grid), dtype=float)
    values = np.where(np.isinf(inv), math.inf, inv + (n - 1) * grid)
    meta = {"g": g.to_dict(), "n": n, "side": "both", "source": "inverse formula"}
    cf = g.dual_characteristic(n)
    if cf is not None:
        meta["closed_form"] = cf[0].describe()
        meta["valid_upto"] = cf[1]
    if np.any(np.isinf(values)):
        meta["rationale"] = "+inf where -λ is below the range of g (no preimage)"
    return CharacteristicTable(grid, values, meta)


def explicit_dual_member(g, A):
    """Explicit dual membership ``tr A >= 0 or λ_max(A) >= -g(-tr A)``."""
    vals = linalg.eigvals(A)
    tr = np.sum(vals, axis=-1)
    with np.errstate(invalid="ignore"):
        alt = vals[..., -1] >= -np.asarray(g(np.maximum(-tr, 0.0)))
    return (tr >= 0) | alt


# -- monotonicity membership -------------------------------------------------


def _interior_point(spec):
    n = spec.dim
    t = 1.0
    for _ in range(60):
        if bool(spec.member(t * np.eye(n), strict=True)):
            return t
        t *= 2.0
    raise PreconditionError(f"no interior point t I found for {spec.describe()}")


def boundary_samples(spec, count, rng, radius=1.0, pull=1e-9):
    """Points just inside ``∂F`` on random rays from an interior point ``t I``."""
    n = spec.dim
    t = _interior_point(spec)
    center = t * np.eye(n)
    D = linalg.random_symmetric(rng, n, count)
    D /= np.linalg.norm(D, axis=(-2, -1), keepdims=True)
    D *= (radius * 10.0 ** rng.uniform(-3, 1, size=count))[:, None, None]
    hi = np.ones(count)
    for _ in range(40):
        out = ~spec.member(center + hi[:, None, None] * D)
        if np.all(out):
            break
        hi = np.where(out, hi, 2.0 * hi)
    lo = np.zeros(count)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        inside = spec.member(center + mid[:, None, None] * D)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    B = center + lo[:, None, None] * D
    return B + pull * (center - B)


def monotonicity_membership(specF, A, trials=1000, seed=0, radius=1.0):
    """One-sided test of ``F + A ⊂ F`` on boundary samples of ``F`` (and ``0`` when in F)."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    A = linalg.sym(A)
    rng = np.random.default_rng(seed)
    n = specF.dim
    Bs = boundary_samples(specF, trials, rng, radius)
    if bool(specF.member(np.zeros((n, n)))):
        Bs = np.concatenate([np.zeros((1, n, n)), Bs])
    inside = specF.member(Bs)
    Bs = Bs[inside]
    if not Bs.shape[0]:
        raise PreconditionError("sampler found no member of F")
    bad = np.flatnonzero(~specF.member(Bs + A))
    if bad.size:
        return {"consistent": False, "samples": int(Bs.shape[0]), "witness": Bs[bad[0]]}
    return {"consistent": True, "samples": int(Bs.shape[0]), "witness": None}


# -- strong comparison report ------------------------------------------------


@dataclasses.dataclass
class ScpReport:
    g: str
    n: int
    additivity: dict
    dual_borderline: bool
    dual_char: CharacteristicTable
    integral: object
    scp: str
    gates: list

    def to_dict(self):
        d = {
            "g": self.g, "n": self.n, "additivity": self.additivity,
            "dual_borderline": self.dual_borderline,
            "dual_char": {"lambda": self.dual_char.lambdas, "f_value": self.dual_char.values,
                          "meta": self.dual_char.meta},
            "integral": self.integral, "scp": self.scp, "gates": self.gates,
        }
        return jsonable(d)


def scp_report(g, n, trials=1000, seed=0, lambda_grid=None):
    """Gate chain additivity → dual borderline → dual characteristic → integral test."""
    gates = []
    add = additivity_check(g, n, trials, seed)
    gates.append(f"additivity: {'pass' if add['passed'] else 'fail'}")
    cls = classify(Dual(Mg(n, g)), seed=seed)
    borderline = cls.case == BORDERLINE
    gates.append(f"dual classification: {cls.case}")
    table = mg_dual_char(g, n, lambda_grid)
    cf = g.dual_characteristic(n)
    if cf is not None:
        fn, upto = cf
        y0 = min(1.0, 0.5 * upto, 0.5 * fn.domain)
        iv = integral_test(fn, y0=y0)
    else:
        iv = integral_test(table)
    gates.append(f"integral of 1/f: {iv.verdict}")
    scp = HOLDS if (add["passed"] and borderline and iv.verdict == "Divergent") else UNKNOWN
    return ScpReport(g.describe(), n, add, borderline, table, iv, scp, gates)
