"""The subequation catalog, Dirichlet duality and positivity audits.

A subequation is a closed set ``F ⊂ Sym(R^n)`` with ``F + P ⊂ F``. Each catalog
entry is described by a continuous, degenerate elliptic *margin* function
``m(A)``: weak membership is ``m(A) >= 0`` (the set ``F``) and strict
membership is ``m(A) > 0`` (used as ``Int F``). Because every margin is
continuous and nondecreasing along ``P``, the strict set really is the
interior and ``F`` is its closure.

All predicates are vectorized over stacks of matrices.
"""

import json
import math

import numpy as np

from . import linalg
from .errors import InputError, UnsupportedError
from .functions import GFunction, ScalarFn

_REGISTRY = {}


def _register(cls):
    _REGISTRY[cls.kind] = cls
    return cls


class Subequation:
    """Base class; subclasses define ``kind`` and ``margin_from``."""

    kind = None
    invariant = True
    cone = False

    def __init__(self, dim):
        dim = int(dim)
        if dim < 1:
            raise InputError("dimension must be >= 1")
        self.dim = dim

    # -- membership --------------------------------------------------------

    def _check(self, A):
        A = linalg.sym(A)
        if A.shape[-1] != self.dim:
            raise InputError(f"{self.kind} has dim {self.dim}, got {A.shape[-1]}x{A.shape[-1]}")
        return A

    def margin(self, A):
        A = self._check(A)
        return self.margin_from(linalg.eigvals(A), A)

    def margin_from(self, vals, A):
        raise NotImplementedError

    def member(self, A, strict=False, eps=0.0):
        """Weak (``F``) or strict (``Int F``) membership; ``eps`` is the slack."""
        m = self.margin(A)
        return m > eps if strict else m >= -eps

    def characteristic(self):
        """Closed-form characteristic function on ``λ >= 0`` if cataloged.

        Returns ``(ScalarFn, valid_upto)`` or ``None``.
        """
        return None

    # -- serialization -----------------------------------------------------

    def params(self):
        return {}

    def to_dict(self):
        return {"kind": self.kind, "dim": self.dim, "params": self.params()}

    def describe(self):
        p = self.params()
        inner = ", ".join(f"{k}={_short(v)}" for k, v in p.items())
        return f"{self.kind}({inner}; n={self.dim})"

    def __repr__(self):
        return f"<{self.describe()}>"


def _short(v):
    if isinstance(v, dict):
        return v.get("tag") or v.get("kind") or "{...}"
    return v


def _sigma(vals, k):
    """Elementary symmetric functions σ_1..σ_k of the last axis."""
    e = [np.ones(vals.shape[:-1])] + [np.zeros(vals.shape[:-1]) for _ in range(k)]
    for i in range(vals.shape[-1]):
        x = vals[..., i]
        for j in range(k, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return np.stack(e[1:], axis=-1)


@_register
class Pos(Subequation):
    """The convex cone ``P = {λ_min >= 0}``."""

    kind = "pos"
    cone = True

    def margin_from(self, vals, A):
        return vals[..., 0]

    def characteristic(self):
        return ScalarFn("zero"), math.inf


@_register
class Subaffine(Subequation):
    """``P̃ = {λ_max >= 0}``, the dual of ``P``."""

    kind = "subaffine"
    cone = True

    def margin_from(self, vals, A):
        return vals[..., -1]


@_register
class MinMaxCone(Subequation):
    kind = "minmax-cone"
    cone = True

    def __init__(self, dim, alpha):
        super().__init__(dim)
        self.alpha = float(alpha)
        if not self.alpha > 0:
            raise InputError("alpha must be positive")

    def margin_from(self, vals, A):
        return vals[..., 0] + self.alpha * vals[..., -1]

    def characteristic(self):
        return ScalarFn("linear", c=self.alpha), math.inf

    def params(self):
        return {"alpha": self.alpha}


@_register
class Pucci(Subequation):
    """Pucci cone ``λ0 tr A+ + Λ tr A- >= 0`` with ``A-`` the nonpositive part."""

    kind = "pucci"
    cone = True

    def __init__(self, dim, lam0, Lam):
        super().__init__(dim)
        self.lam0, self.Lam = float(lam0), float(Lam)
        if not 0 < self.lam0 <= self.Lam:
            raise InputError("Pucci cone needs 0 < lam0 <= Lam")

    def margin_from(self, vals, A):
        pos = np.sum(np.maximum(vals, 0.0), axis=-1)
        neg = np.sum(np.minimum(vals, 0.0), axis=-1)
        return self.lam0 * pos + self.Lam * neg

    def characteristic(self):
        return ScalarFn("linear", c=self.lam0 * (self.dim - 1) / self.Lam), math.inf

    def params(self):
        return {"lam0": self.lam0, "Lam": self.Lam}


@_register
class PDelta(Subequation):
    """``P(δ) = {A + δ (tr A) I >= 0}``."""

    kind = "p-delta"
    cone = True

    def __init__(self, dim, delta):
        super().__init__(dim)
        self.delta = float(delta)
        if not self.delta > 0:
            raise InputError("delta must be positive")

    def margin_from(self, vals, A):
        return vals[..., 0] + self.delta * np.sum(vals, axis=-1)

    def characteristic(self):
        d = self.delta
        return ScalarFn("linear", c=d * (self.dim - 1) / (1.0 + d)), math.inf

    def params(self):
        return {"delta": self.delta}


@_register
class SigmaPsiK(Subequation):
    """``σ_ℓ(ψ(λ_1), ..., ψ(λ_n)) >= 0`` for ``ℓ = 1..k`` with ``ψ(t) = sign(t)|t|^a``."""

    kind = "sigma-psi-k"
    cone = True

    def __init__(self, dim, a, k):
        super().__init__(dim)
        self.a, self.k = float(a), int(k)
        if not self.a > 0:
            raise InputError("exponent a must be positive")
        if not 1 <= self.k <= dim:
            raise InputError("need 1 <= k <= n")

    def psi(self, t):
        return np.sign(t) * np.abs(t) ** self.a

    def margin_from(self, vals, A):
        # eigenvalues are only accurate to ~eps·|A|; ψ is not Lipschitz at 0
        # (for a < 1), so rounding noise there is snapped to zero first
        floor = 64 * np.finfo(float).eps * np.max(np.abs(vals), axis=-1, keepdims=True)
        vals = np.where(np.abs(vals) <= floor, 0.0, vals)
        return np.min(_sigma(self.psi(vals), self.k), axis=-1)

    def characteristic(self):
        c = (self.dim / self.k - 1.0) ** (1.0 / self.a)
        return (ScalarFn("linear", c=c) if c > 0 else ScalarFn("zero")), math.inf

    def params(self):
        return {"a": self.a, "k": self.k}


class _WithF(Subequation):
    def __init__(self, dim, f):
        super().__init__(dim)
        self.f = f if isinstance(f, ScalarFn) else ScalarFn.from_dict(f)

    def characteristic(self):
        return self.f, self.f.domain

    def params(self):
        return {"f": self.f.to_dict()}


@_register
class MinMaxF(_WithF):
    """``λ_max >= 0`` and ``λ_min + f(λ_max) >= 0``."""

    kind = "minmax-f"

    def margin_from(self, vals, A):
        top = vals[..., -1]
        return np.minimum(top, vals[..., 0] + self.f(np.maximum(top, 0.0)))


@_register
class MinTwoF(_WithF):
    """``λ_2 >= 0`` and ``λ_min + f(λ_2) >= 0``."""

    kind = "min2-f"

    def __init__(self, dim, f):
        if int(dim) < 2:
            raise UnsupportedError("the min/2 subequation needs n >= 2")
        super().__init__(dim, f)

    def margin_from(self, vals, A):
        second = vals[..., 1]
        return np.minimum(second, vals[..., 0] + self.f(np.maximum(second, 0.0)))


@_register
class Mg(Subequation):
    """``M(g) = {tr A >= 0 and λ_min(A) >= g(tr A)}``; strict uses both strict."""

    kind = "mg"

    def __init__(self, dim, g):
        super().__init__(dim)
        self.g = g if isinstance(g, GFunction) else GFunction.from_dict(g)

    def margin_from(self, vals, A):
        tr = np.sum(vals, axis=-1)
        return np.minimum(tr, vals[..., 0] - self.g(np.maximum(tr, 0.0)))

    def params(self):
        return {"g": self.g.to_dict()}


@_register
class HalfSpace(Subequation):
    """``tr A >= c``; the generic-case fixture when ``c > 0``."""

    kind = "halfspace"

    def __init__(self, dim, c=0.0):
        super().__init__(dim)
        self.c = float(c)
        self.cone = self.c == 0.0

    def margin(self, A):
        A = self._check(A)
        return np.trace(A, axis1=-2, axis2=-1) - self.c

    def margin_from(self, vals, A):
        return np.sum(vals, axis=-1) - self.c

    def params(self):
        return {"c": self.c}


@_register
class AxisEntry(Subequation):
    """``<A e_1, e_1> >= 0``; a subequation that is not orthogonally invariant."""

    kind = "axis-entry"
    invariant = False
    cone = True

    def margin(self, A):
        A = self._check(A)
        return A[..., 0, 0]

    def margin_from(self, vals, A):
        return A[..., 0, 0]


@_register
class TraceZero(Subequation):
    """``{tr A = 0}``: a closed set that violates positivity (test fixture)."""

    kind = "trace-zero"

    def margin(self, A):
        A = self._check(A)
        return -np.abs(np.trace(A, axis1=-2, axis2=-1))

    def margin_from(self, vals, A):
        return -np.abs(np.sum(vals, axis=-1))

    def member(self, A, strict=False, eps=0.0):
        m = self.margin(A)
        if strict:
            return np.zeros(np.shape(m), dtype=bool)
        return m >= -eps

    def sample_boundary(self, rng, A):
        tr = np.trace(A, axis1=-2, axis2=-1)
        return A - (tr / self.dim)[..., None, None] * np.eye(self.dim)


@_register
class Dual(Subequation):
    """The Dirichlet dual ``F̃ = -(~Int F)`` of another subequation."""

    kind = "dual"

    def __init__(self, inner):
        inner = inner if isinstance(inner, Subequation) else from_dict(inner)
        super().__init__(inner.dim)
        self.inner = inner
        self.invariant = inner.invariant
        self.cone = inner.cone

    def margin(self, A):
        # only the sign structure is meaningful: m(A) = -m_inner(-A)
        return -self.inner.margin(-linalg.sym(A))

    def member(self, A, strict=False, eps=0.0):
        return dual_member(self.inner, A, strict=strict, eps=eps)

    def characteristic(self):
        if isinstance(self.inner, Mg):
            return self.inner.g.dual_characteristic(self.dim)
        return None

    def params(self):
        return {"inner": self.inner.to_dict()}


def dual_member(spec, A, strict=False, eps=0.0):
    """Membership in the dual of ``spec``.

    weak:   ``A ∈ F̃  ⇔  -A ∉ Int F``
    strict: ``A ∈ Int F̃  ⇔  -A ∉ F``
    """
    A = linalg.sym(A)
    return ~np.asarray(spec.member(-A, strict=not strict, eps=eps))


def dual(spec):
    return Dual(spec)


def from_dict(d):
    """Build a spec from ``{"kind": tag, "dim": n, "params": {...}}``."""
    try:
        cls = _REGISTRY[d["kind"]]
    except KeyError:
        raise InputError(f"unknown subequation kind {d.get('kind')!r}") from None
    params = dict(d.get("params", {}))
    if cls is Dual:
        return Dual(from_dict(params["inner"]))
    return cls(d["dim"], **params)


def to_json(spec):
    return json.dumps(spec.to_dict(), sort_keys=True)


def from_json(text):
    return from_dict(json.loads(text))


def catalog_kinds():
    return sorted(_REGISTRY)


# -- audits ------------------------------------------------------------------


def push_to_boundary(spec, A, iters=60):
    """Move each ``A`` along ``+t I`` until it lands (weakly) inside ``spec``.

    Membership is monotone in ``t`` by positivity, so the returned points sit
    on the boundary within bisection precision. Points already inside are
    pulled back towards the boundary as well.
    """
    A = linalg.sym(A)
    n = A.shape[-1]
    I = np.eye(n)
    scale = 1.0 + np.abs(A).max(axis=(-2, -1))
    hi = scale.copy()
    for _ in range(80):
        ok = spec.member(A + hi[..., None, None] * I)
        if np.all(ok):
            break
        hi = np.where(ok, hi, 2.0 * hi)
    lo = -hi
    for _ in range(80):
        bad = ~spec.member(A + lo[..., None, None] * I)
        if np.all(bad):
            break
        lo = np.where(bad, lo, 2.0 * lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = spec.member(A + mid[..., None, None] * I)
        hi = np.where(inside, mid, hi)
        lo = np.where(inside, lo, mid)
    return A + hi[..., None, None] * I


def sample_members(spec, rng, count, scale=1.0):
    """Random members of ``spec``, concentrated on its boundary."""
    n = spec.dim
    A = linalg.random_symmetric(rng, n, count, scale=scale)
    if hasattr(spec, "sample_boundary"):
        B = spec.sample_boundary(rng, A)
    else:
        B = push_to_boundary(spec, A)
    raw = spec.member(A)
    half = rng.random(count) < 0.25
    return np.where((raw & half)[:, None, None], A, B)


def positivity_check(spec, trials=1000, seed=0, slack=1e-10):
    """Audit ``F + P ⊂ F`` on random boundary members and random ``P >= 0``.

    Returns ``{"passed": bool, "trials": int, "witness": (A, P) or None}``.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = spec.dim
    A = sample_members(spec, rng, trials, scale=rng.choice([0.1, 1.0, 10.0]))
    ranks = rng.integers(1, n + 1, size=trials)
    P = np.empty_like(A)
    scales = 10.0 ** rng.uniform(-3, 1, size=trials)
    for r in range(1, n + 1):
        idx = ranks == r
        if np.any(idx):
            P[idx] = linalg.random_psd(rng, n, int(idx.sum()), rank=r) * scales[idx, None, None]
    size = 1.0 + np.abs(A).max(axis=(-2, -1)) + np.abs(P).max(axis=(-2, -1))
    inside = spec.member(A, eps=slack * size.max())
    after = np.asarray(spec.member(A + P, eps=slack * size.max()))
    bad = np.flatnonzero(inside & ~after)
    if bad.size:
        i = bad[0]
        return {"passed": False, "trials": trials, "witness": (A[i], P[i])}
    return {"passed": True, "trials": trials, "witness": None}


def orbit_member(spec, A, rotations=64, seed=0):
    """One-sided test of membership in the orbit hull ``∪_g g(F)``.

    True if ``Q^T A Q ∈ F`` for any sampled orthogonal ``Q`` (Haar), the
    identity and the coordinate permutations included.
    """
    if rotations < 1:
        raise InputError("rotations must be >= 1")
    A = linalg.sym(A)
    n = A.shape[-1]
    rng = np.random.default_rng(seed)
    Qs = [np.eye(n)]
    for i in range(1, n):
        perm = np.eye(n)
        perm[[0, i]] = perm[[i, 0]]
        Qs.append(perm)
    Qs = np.concatenate([np.stack(Qs), linalg.haar_orthogonal(rng, n, rotations)])
    single = A.ndim == 2
    As = A[None] if single else A
    rotated = np.swapaxes(Qs, -1, -2)[None] @ As[:, None] @ Qs[None]
    hit = np.any(spec.member(rotated), axis=1)
    return bool(hit[0]) if single else hit
