"""Characteristic functions, the three-case classification and the SMP test.

For a subequation ``F`` and ``λ ∈ R`` the set of ``μ`` with
``λ P_{e⊥} - μ P_e ∈ F`` is a closed lower ray (positivity), so its endpoint
can be bracketed and bisected. Taking the max over directions ``e`` gives the
upper characteristic function, the min gives the lower one.
"""

import dataclasses
import json
import math
from pathlib import Path

import numpy as np

from . import linalg
from .errors import InputError, PositivityViolation, PreconditionError
from .functions import CONVERGENT, DIVERGENT, ScalarFn
from .serialize import dumps, fmt_float, jsonable, read_csv, write_csv
from .subequations import push_to_boundary

GENERIC, BORDERLINE, COUNTEREXAMPLE = "Generic", "Borderline", "Counterexample"
HOLDS, FAILS, UNDETERMINED = "Holds", "Fails", "Undetermined"


def default_grid(points=200, lo=1e-8, hi=10.0):
    """``λ = 0`` followed by a geometric grid on ``[lo, hi]``."""
    return np.concatenate([[0.0], np.geomspace(lo, hi, points)])


# -- tables ------------------------------------------------------------------


@dataclasses.dataclass
class CharacteristicTable:
    """Sampled monotone map ``λ ↦ f(λ)`` with explicit ``±inf`` sentinels."""

    lambdas: np.ndarray
    values: np.ndarray
    meta: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.lambdas.ndim != 1 or self.lambdas.shape != self.values.shape:
            raise InputError("lambdas and values must be matching 1-d arrays")
        if np.any(np.diff(self.lambdas) <= 0):
            raise InputError("lambda grid must be strictly increasing")

    def is_monotone(self, slack=0.0):
        v = self.values
        with np.errstate(invalid="ignore"):
            d = np.diff(v)
        d = np.where(np.isnan(d), 0.0, d)  # inf - inf
        return bool(np.all(d >= -slack))

    def power_fit(self, decade=10.0):
        """Fit ``f(y) ≈ c y^p`` on the lowest decade of positive finite values."""
        lam, v = self.lambdas, self.values
        ok = (lam > 0) & np.isfinite(v) & (v > 0)
        if ok.sum() < 2:
            return None
        lo = lam[ok][0]
        sel = ok & (lam <= decade * lo)
        if sel.sum() < 2:
            sel = ok & (lam <= lam[ok][1])
        x, y = np.log(lam[sel]), np.log(v[sel])
        p, logc = np.polyfit(x, y, 1)
        return float(p), float(math.exp(logc)), float(lo)

    def __call__(self, y, extrapolate=False):
        """Evaluate by linear interpolation on the finite part of the table.

        Outside the finite range the table is held constant, except that points
        at or beyond a ``+inf`` (``-inf``) grid value return that sentinel.
        With ``extrapolate=True``, values below the smallest positive grid
        point follow a power law fitted on the lowest decade.
        """
        y = np.asarray(y, dtype=float)
        lam, v = self.lambdas, self.values
        fin = np.isfinite(v)
        if not np.any(fin):
            out = np.where(y >= lam[0], v[-1], v[0]) * np.ones_like(y)
            return out if out.ndim else float(out)
        lf, vf = lam[fin], v[fin]
        out = np.interp(y, lf, vf)
        pos_inf = np.flatnonzero(np.isposinf(v))
        if pos_inf.size:
            out = np.where(y >= lam[pos_inf[0]], math.inf, out)
        neg_inf = np.flatnonzero(np.isneginf(v))
        if neg_inf.size:
            out = np.where(y <= lam[neg_inf[-1]], -math.inf, out)
        if extrapolate:
            fit = self.power_fit()
            if fit is not None:
                p, c, lo = fit
                below = (y > 0) & (y < lo)
                with np.errstate(divide="ignore"):
                    anchor = float(np.interp(lo, lf, vf))
                    out = np.where(below, anchor * (np.maximum(y, 1e-300) / lo) ** p, out)
        return out if out.ndim else float(out)

    def to_dict(self):
        return {"lambda": self.lambdas, "f_value": self.values, "meta": self.meta}

    def to_csv(self, path):
        """Write ``lambda,f_value`` CSV plus a ``.meta.json`` sidecar."""
        path = Path(path)
        write_csv(path, ["lambda", "f_value"], [self.lambdas, self.values])
        path.with_suffix(".meta.json").write_text(dumps(self.meta) + "\n")
        return path

    @classmethod
    def from_csv(cls, path):
        path = Path(path)
        cols = read_csv(path)
        meta_path = path.with_suffix(".meta.json")
        meta = json.loads(meta_path.read_text()) if meta_path.exists() else {}
        return cls(cols["lambda"], cols["f_value"], meta)


def _directions(n, e_samples, rng):
    axes = np.eye(n)
    if e_samples <= 0:
        return axes
    return np.concatenate([axes, linalg.random_unit_vectors(rng, n, e_samples)])


def _sup_mu(spec, lam, es, mu_cap, tol):
    """Endpoint of ``{μ : λ P_{e⊥} - μ P_e ∈ F}`` for paired arrays ``lam``, ``es``.

    Brackets by doubling from ``μ = 1`` (upward while inside, downward while
    outside), then bisects to ``tol`` and returns the inside end of the
    bracket. Returns ``+inf`` when membership holds
    at ``mu_cap`` and ``-inf`` when it fails at ``-mu_cap``.
    """
    N = lam.size

    def inside(mu, idx, eps=0.0):
        return np.asarray(spec.member(linalg.radial_matrix(lam[idx], -mu, es[idx]), eps=eps))

    allidx = np.arange(N)
    lo = np.full(N, np.nan)
    hi = np.full(N, np.nan)
    out = np.full(N, np.nan)
    first = inside(np.ones(N), allidx)
    lo[first] = 1.0
    hi[~first] = 1.0

    # upward: lo is inside, look for an outside hi
    cur = np.where(first, 1.0, np.nan)
    active = np.flatnonzero(first)
    while active.size:
        nxt = np.minimum(2.0 * cur[active], mu_cap)
        m = inside(nxt, active)
        capped = m & (nxt >= mu_cap)
        out[active[capped]] = math.inf
        grow = m & ~capped
        lo[active[grow]] = nxt[grow]
        cur[active[grow]] = nxt[grow]
        hi[active[~m]] = nxt[~m]
        active = active[grow]

    # downward: hi is outside, look for an inside lo
    steps = np.zeros(N)
    active = np.flatnonzero(~first)
    while active.size:
        k = steps[active]
        nxt = np.where(k == 0, 0.0, -np.minimum(2.0 ** (k - 1), mu_cap))
        m = inside(nxt, active)
        lo[active[m]] = nxt[m]
        floor = ~m & (nxt <= -mu_cap)
        out[active[floor]] = -math.inf
        keep = ~m & ~floor
        hi[active[keep]] = nxt[keep]
        steps[active[keep]] += 1
        active = active[keep]

    active = np.flatnonzero(np.isnan(out))
    for _ in range(400):
        if not active.size:
            break
        mid = 0.5 * (lo[active] + hi[active])
        stuck = (mid == lo[active]) | (mid == hi[active])
        m = inside(mid, active)
        lo[active[m]] = mid[m]
        hi[active[~m]] = mid[~m]
        width = hi[active] - lo[active]
        active = active[(width > tol) & ~stuck]

    fin = np.flatnonzero(np.isnan(out))
    out[fin] = lo[fin]  # largest verified member, within tol of the endpoint

    # a lower ray must stay inside below lo and outside above hi; the slack
    # absorbs rounding in the eigenvalues of rank-one matrices
    if fin.size:
        step = np.maximum(1.0, np.abs(lo[fin]))
        below = inside(lo[fin] - step, fin, eps=1e-9)
        above = inside(np.minimum(hi[fin] + step, mu_cap), fin, eps=-1e-9)
        bad = np.flatnonzero(~below | above)
        if bad.size:
            i = fin[bad[0]]
            raise PositivityViolation(
                f"membership in mu is not a lower ray at lambda={lam[i]:g} "
                f"(bracket [{lo[i]:g}, {hi[i]:g}]); {spec.describe()} is not a subequation",
                witness={"lambda": float(lam[i]), "e": es[i], "mu": float(lo[i])},
            )
    return out


def _refine(spec, lam, e0, best, side, mu_cap, tol, rng, rounds=30):
    """Random local search on the sphere from the best sampled direction."""
    e = e0.copy()
    sigma = 0.3
    for _ in range(rounds):
        cand = e + sigma * rng.standard_normal(e.shape)
        cand /= np.linalg.norm(cand)
        v = float(_sup_mu(spec, np.array([lam]), cand[None], mu_cap, tol)[0])
        if (side == "upper" and v > best) or (side == "lower" and v < best):
            best, e = v, cand
        else:
            sigma *= 0.8
    return best


def char_samples(spec, lambda_grid, e_samples=None, mu_cap=1e12, tol=1e-10, seed=0):
    """``sup μ`` for every (λ, e) pair; shape ``(len(grid), n_directions)``."""
    if tol <= 0 or mu_cap <= 0:
        raise InputError("tol and mu_cap must be positive")
    rng = np.random.default_rng(seed)
    if e_samples is None:
        e_samples = 1 if spec.invariant else 64
    if e_samples < 1:
        raise InputError("e_samples must be >= 1")
    es = _directions(spec.dim, e_samples, rng)
    lams = np.asarray(lambda_grid, dtype=float)
    L, E = lams.size, es.shape[0]
    lam_f = np.repeat(lams, E)
    es_f = np.tile(es, (L, 1))
    return _sup_mu(spec, lam_f, es_f, mu_cap, tol).reshape(L, E), es


def char_fn(spec, side="upper", lambda_grid=None, e_samples=None, mu_cap=1e12,
            tol=1e-10, seed=0, refine=False):
    """Tabulate the upper (max over e) or lower (min over e) characteristic function.

    ``e_samples`` random unit directions are used in addition to the ``n``
    coordinate axes; the default is 1 for orthogonally invariant specs and 64
    otherwise. ``refine`` runs a local search around the best direction.
    """
    if side not in ("upper", "lower"):
        raise InputError("side must be 'upper' or 'lower'")
    grid = default_grid() if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    samples, es = char_samples(spec, grid, e_samples, mu_cap, tol, seed)
    pick = np.argmax if side == "upper" else np.argmin
    idx = pick(samples, axis=1)
    values = samples[np.arange(grid.size), idx]
    if refine:
        rng = np.random.default_rng(seed + 1)
        for i, lam in enumerate(grid):
            if np.isfinite(values[i]):
                values[i] = _refine(spec, lam, es[idx[i]], values[i], side, mu_cap, tol, rng)
    meta = {
        "spec": spec.to_dict(),
        "side": side,
        "e_samples": int(es.shape[0]),
        "tol": tol,
        "mu_cap": mu_cap,
        "seed": seed,
        "refined": bool(refine),
    }
    return CharacteristicTable(grid, values, meta)


def tables_both_sides(spec, lambda_grid=None, **kw):
    """Upper and lower tables from one shared set of direction samples."""
    grid = default_grid() if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    samples, es = char_samples(spec, grid, **kw)
    meta = {"spec": spec.to_dict(), "e_samples": int(es.shape[0])}
    meta.update({k: v for k, v in kw.items()})
    up = CharacteristicTable(grid, samples.max(axis=1), dict(meta, side="upper"))
    low = CharacteristicTable(grid, samples.min(axis=1), dict(meta, side="lower"))
    return up, low


# -- classification ----------------------------------------------------------


@dataclasses.dataclass
class Classification:
    case: str
    witness: dict = None
    rationale: str = ""
    f_lower_at_zero: float = None
    cross_check: bool = None

    def to_dict(self):
        return jsonable(dataclasses.asdict(self))


def classify(spec, probe_mus=(1e-6, 1e-3, 1.0, 1e3), probe_es=16, seed=0, tol=1e-8,
             random_nsd=256):
    """Sort ``spec`` into the generic, borderline or counterexample case.

    A found counterexample witness is exact; its absence is a sampling claim
    over the probes (``-μ P_e`` for the given ``μ`` and directions, plus random
    negative semidefinite matrices).
    """
    if len(probe_mus) == 0 or probe_es < 0:
        raise InputError("probes must be non-empty")
    n = spec.dim
    if not bool(spec.member(np.zeros((n, n)))):
        return Classification(GENERIC, rationale="0 is not in F, so F misses -P entirely")
    rng = np.random.default_rng(seed)
    es = _directions(n, probe_es, rng)
    mus = np.asarray(probe_mus, dtype=float)
    if np.any(mus <= 0):
        raise InputError("probe mus must be positive")
    lam = np.zeros(es.shape[0] * mus.size)
    mu_f = np.tile(mus, es.shape[0])
    e_f = np.repeat(es, mus.size, axis=0)
    M = linalg.radial_matrix(lam, -mu_f, e_f)
    hit = np.flatnonzero(spec.member(M))
    if hit.size:
        i = hit[0]
        return Classification(
            COUNTEREXAMPLE,
            witness={"mu": float(mu_f[i]), "e": e_f[i], "matrix": M[i]},
            rationale=f"-mu P_e lies in F for mu={mu_f[i]:g}",
        )
    ranks = rng.integers(1, n + 1, size=random_nsd)
    for r in range(1, n + 1):
        k = int((ranks == r).sum())
        if not k:
            continue
        N = -linalg.random_psd(rng, n, k, rank=r) * (10.0 ** rng.uniform(-4, 2, size=k))[:, None, None]
        hit = np.flatnonzero(spec.member(N))
        if hit.size:
            return Classification(
                COUNTEREXAMPLE,
                witness={"matrix": N[hit[0]]},
                rationale="a nonzero negative semidefinite matrix lies in F",
            )
    low0 = char_fn(spec, "lower", [0.0], e_samples=probe_es, seed=seed).values[0]
    ok = bool(abs(low0) <= tol)
    return Classification(
        BORDERLINE,
        rationale="0 in F and no nonzero element of -P found in F over the probes",
        f_lower_at_zero=float(low0),
        cross_check=ok,
    )


# -- integral test -----------------------------------------------------------


def adaptive_simpson(fun, a, b, rel_tol=1e-9, max_depth=48):
    """Adaptive Simpson quadrature of a scalar function on ``[a, b]``."""

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    fa, fb = fun(a), fun(b)
    m = 0.5 * (a + b)
    fm = fun(m)
    whole = simpson(fa, fm, fb, b - a)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, max(abs(whole), 1e-300) * rel_tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = fun(lm), fun(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        else:
            stack.append((a, m, fa, flm, fm, left, eps / 2.0, depth + 1))
            stack.append((m, b, fm, frm, fb, right, eps / 2.0, depth + 1))
    return total


@dataclasses.dataclass
class IntegralVerdict:
    verdict: str
    partial_sums: list
    rationale: str
    y0: float = None
    certified: bool = False
    numeric_verdict: str = None

    def to_dict(self):
        return jsonable(dataclasses.asdict(self))


def integral_test(f, y0=None, K=60, window=10, rel_tol=1e-9, decay_floor=1e-3, tail_rel=1e-9):
    """Decide whether ``∫_{0+} dy/f(y)`` diverges.

    ``f`` is a :class:`ScalarFn` (closed form; certified verdict), a
    :class:`CharacteristicTable` or a plain callable. The dyadic pieces
    ``I_k = ∫_{y0 2^{-k-1}}^{y0 2^{-k}} dy/f`` for ``k = 0..K`` are always
    computed and attached as evidence.

    Numeric rule: Divergent if the last ``window`` pieces all stay above
    ``decay_floor * I_0``; Convergent if their successive ratios stay below
    one and the geometric tail bound is below ``tail_rel`` times the sum;
    Inconclusive otherwise.
    """
    closed = None
    if isinstance(f, ScalarFn):
        fun, top = f, f.domain
        closed = f.zero_behaviour()
        label = f.describe()
    elif isinstance(f, CharacteristicTable):
        fun = lambda y: f(y, extrapolate=True)  # noqa: E731
        top = float(f.lambdas[-1])
        label = "table"
    elif callable(f):
        fun, top, label = f, math.inf, "callable"
    else:
        raise InputError("integral_test needs a ScalarFn, CharacteristicTable or callable")
    if y0 is None:
        y0 = 1.0 if not math.isfinite(top) else min(1.0, 0.5 * top)
    y0 = float(y0)
    if not y0 > 0:
        raise InputError("y0 must be positive")

    probe = y0 * 2.0 ** -np.linspace(0.0, K + 1.0, 8 * (K + 2))
    vals = np.asarray(fun(probe), dtype=float)
    if np.any(np.isnan(vals)) or np.any(vals < 0):
        raise InputError(f"f takes negative or undefined values on (0, {y0:g}]")
    if np.any(vals == 0):
        return IntegralVerdict(
            DIVERGENT.capitalize(), [], "f vanishes on an interval (0, y], so 1/f = inf there",
            y0=y0, certified=True, numeric_verdict=DIVERGENT.capitalize(),
        )

    def integrand(u):
        y = math.exp(u)
        fy = float(fun(y))
        return 0.0 if math.isinf(fy) else y / fy

    pieces = []
    for k in range(K + 1):
        b = math.log(y0) - k * math.log(2.0)
        pieces.append(adaptive_simpson(integrand, b - math.log(2.0), b, rel_tol))
    I = np.array(pieces)
    total = float(I.sum())
    tail = I[-window:]
    if I[0] > 0 and np.min(tail) >= decay_floor * I[0]:
        numeric, why = "Divergent", f"last {window} dyadic pieces stay >= {decay_floor:g} * I_0"
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = I[-window:] / I[-window - 1:-1]
        r = float(np.max(ratios)) if np.all(np.isfinite(ratios)) else math.inf
        if r < 1.0 and I[-1] * r / (1.0 - r) < tail_rel * total:
            numeric, why = "Convergent", f"geometric tail with ratio {r:.4g}, remainder below {tail_rel:g} * sum"
        else:
            numeric, why = "Inconclusive", "neither the divergence floor nor the tail bound fired"
    if closed is not None:
        verdict = closed[0].capitalize()
        rationale = f"{label}: {closed[1]}; numeric check: {numeric} ({why})"
        return IntegralVerdict(verdict, pieces, rationale, y0=y0, certified=True, numeric_verdict=numeric)
    return IntegralVerdict(numeric, pieces, f"{label}: {why}", y0=y0, certified=False, numeric_verdict=numeric)


# -- SMP verdict -------------------------------------------------------------


@dataclasses.dataclass
class SmpVerdict:
    verdict: str
    case: str
    rationale: list
    witness: dict = None
    upper: IntegralVerdict = None
    lower: IntegralVerdict = None
    closed_form: str = None
    closed_form_deviation: float = None

    def to_dict(self):
        return jsonable(dataclasses.asdict(self))


def _closed_form_deviation(table, fn, upto):
    lam = table.lambdas
    sel = (lam <= upto) & np.isfinite(table.values)
    if not np.any(sel):
        return math.inf
    ref = np.asarray(fn(lam[sel]))
    return float(np.max(np.abs(table.values[sel] - ref) / (1.0 + np.abs(ref))))


def smp_verdict(spec, lambda_grid=None, e_samples=None, seed=0, tol=1e-10, agree_tol=1e-6):
    """Strong maximum principle verdict with its rationale chain.

    Generic ⇒ Holds; Counterexample ⇒ Fails with the quadratic witness
    ``<Ax, x>``; Borderline ⇒ integral test on the upper function (Divergent
    ⇒ Holds), then on the lower one (Convergent ⇒ Fails), else Undetermined.
    """
    cls = classify(spec, seed=seed)
    chain = [f"classification: {cls.case} ({cls.rationale})"]
    if cls.case == GENERIC:
        chain.append("F does not meet -P, so the SMP holds")
        return SmpVerdict(HOLDS, cls.case, chain)
    if cls.case == COUNTEREXAMPLE:
        A = cls.witness["matrix"]
        chain.append("the quadratic <Ax, x> with A in F ∩ (-P) violates the SMP")
        return SmpVerdict(FAILS, cls.case, chain, witness={"quadratic_form": A, **cls.witness})
    if not cls.cross_check:
        chain.append(f"warning: lower characteristic at 0 is {cls.f_lower_at_zero:g}, expected 0")
    up, low = tables_both_sides(spec, lambda_grid, e_samples=e_samples, tol=tol, seed=seed)
    cf = spec.characteristic()
    deviation = None
    label = None
    if cf is not None:
        fn, upto = cf
        label = fn.describe()
        deviation = max(_closed_form_deviation(up, fn, upto), _closed_form_deviation(low, fn, upto))
        chain.append(f"closed-form characteristic {label}; max relative deviation from tables {deviation:.3g}")
    if cf is not None and deviation <= agree_tol:
        y0 = min(1.0, 0.5 * upto if math.isfinite(upto) else 1.0, 0.5 * fn.domain if math.isfinite(fn.domain) else 1.0)
        iv_up = iv_low = integral_test(fn, y0=y0)
    else:
        iv_up = integral_test(up)
        iv_low = integral_test(low)
    chain.append(f"upper integral: {iv_up.verdict} ({iv_up.rationale})")
    if iv_up.verdict == "Divergent":
        chain.append("integral of 1/f_upper diverges at 0+, so the SMP holds")
        verdict = HOLDS
    else:
        chain.append(f"lower integral: {iv_low.verdict} ({iv_low.rationale})")
        if iv_low.verdict == "Convergent":
            chain.append("integral of 1/f_lower converges at 0+, so the SMP fails")
            verdict = FAILS
        else:
            chain.append("neither integral criterion applies; left undetermined")
            verdict = UNDETERMINED
    return SmpVerdict(verdict, cls.case, chain, upper=iv_up, lower=iv_low,
                      closed_form=label, closed_form_deviation=deviation)


# -- cones -------------------------------------------------------------------


def cone_audit(spec, trials=200, seed=0):
    """Return a scaling witness ``(A, t)`` if ``member(tA) != member(A)``, else None."""
    rng = np.random.default_rng(seed)
    A = linalg.random_symmetric(rng, spec.dim, trials)
    base = spec.member(A)
    for t in (0.1, 0.37, 3.0, 10.0):
        diff = np.flatnonzero(spec.member(t * A) != base)
        if diff.size:
            return A[diff[0]], t
    return None


def cone_invariants(spec, side="upper", seed=0, tol=1e-10, mu_cap=1e12):
    """``alpha = f(1)``, ``alpha_star = -f(-1)`` and the Riesz characteristic ``alpha + 1``."""
    bad = cone_audit(spec, seed=seed)
    if bad is not None:
        raise PreconditionError(f"{spec.describe()} is not a cone", witness={"A": bad[0], "t": bad[1]})
    tab = char_fn(spec, side, [-1.0, 1.0], seed=seed, tol=tol, mu_cap=mu_cap)
    f_m1, f_1 = tab.values
    alpha = float(f_1)
    alpha_star = -float(f_m1)
    return {
        "alpha": alpha,
        "alpha_star": alpha_star,
        "riesz_p": alpha + 1.0,
        "smp": HOLDS if math.isfinite(alpha) else FAILS,
        "product": alpha * alpha_star if alpha > 0 else math.nan,
    }


# -- containment -------------------------------------------------------------


def containment_check(specA, specB, trials=10000, seed=0, region=1.0):
    """Search for ``A ∈ specA \\ specB`` in a ball of the given radius.

    Samples mix uniform points of the Frobenius ball, random spectra on
    random frames (with exact zeros) and boundary points of ``specA``. A
    found witness is exact; "no violation" is a sampling statement.
    """
    if specA.dim != specB.dim:
        raise InputError("dimensions differ")
    n = specA.dim
    rng = np.random.default_rng(seed)
    k1 = trials // 2
    k2 = trials // 4
    k3 = trials - k1 - k2
    G = linalg.random_symmetric(rng, n, k1)
    G /= np.linalg.norm(G, axis=(-2, -1), keepdims=True)
    d = n * (n + 1) // 2
    ball = G * (region * rng.random(k1) ** (1.0 / d))[:, None, None]
    vals = rng.uniform(-region, region, size=(k2, n))
    vals[rng.random((k2, n)) < 0.2] = 0.0
    spectral = linalg.with_spectrum(linalg.haar_orthogonal(rng, n, k2), vals)
    boundary = push_to_boundary(specA, linalg.random_symmetric(rng, n, k3, scale=region / n))
    S = np.concatenate([ball, spectral, boundary])
    bad = np.flatnonzero(specA.member(S) & ~specB.member(S))
    if bad.size:
        return {"contained": False, "samples": int(S.shape[0]), "witness": S[bad[0]], "region": region}
    return {"contained": True, "samples": int(S.shape[0]), "witness": None, "region": region,
            "note": f"no violation over {S.shape[0]} samples"}
