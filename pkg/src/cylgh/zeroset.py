"""Zeros of operator symbols on Z x R and sampled growth certificates.

Real roots per integer frequency are isolated with Sturm sequences on the
real part of the symbol, polished by Newton, then filtered by the imaginary
part.  First-order operators admit an exact closed-form case analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .symbols import ComplexPolynomial, ConstSplit, FirstOrderT, symbol_at

ZERO_TOL = 1e-10  # relative residual accepted after Newton polish
INT_TOL = 1e-9


class DegenerateOperatorError(ValueError):
    """The symbol is the zero polynomial."""


@dataclass(frozen=True)
class ZeroWitness:
    k: int
    xi: float
    residual: float


@dataclass(frozen=True)
class ZeroSearchResult:
    witnesses: list
    exhaustive: bool
    k_budget: int
    note: str = ""


@dataclass(frozen=True)
class LowerBoundCertificate:
    """Sampled inf of |p(xi)+q(k)| / |xi|^(N-1); numerical evidence, not proof."""

    C: float
    R: float
    k_range: int
    grid_inf: float


@dataclass(frozen=True)
class RefutationPath:
    """Minimizing (k, xi) samples along which the growth ratio trends to zero."""

    path: list  # (k, xi, ratio) triples, |k| ascending
    slope: float


# ---------------------------------------------------------------------------
# real-polynomial machinery (coefficients ascending, plain floats)

def _ptrim(c, tol=0.0):
    c = list(c)
    scale = max((abs(x) for x in c), default=0.0)
    cut = tol * scale
    while c and abs(c[-1]) <= cut:
        c.pop()
    return c


def _pdeg(c):
    return len(c) - 1


def _peval(c, x):
    acc = 0.0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _pderiv(c):
    return [i * a for i, a in enumerate(c)][1:]


def _prem(a, b):
    """Remainder of a / b for float polynomials."""
    a = list(a)
    db, lb = _pdeg(b), b[-1]
    while _pdeg(a) >= db:
        factor = a[-1] / lb
        shift = _pdeg(a) - db
        for i, bc in enumerate(b):
            a[i + shift] -= factor * bc
        a.pop()
        a = _ptrim(a, 1e-12)
        if not a:
            break
    return a


def _pgcd(a, b):
    a, b = _ptrim(a, 1e-12), _ptrim(b, 1e-12)
    while b:
        a, b = b, _prem(a, b)
        if b:
            m = max(abs(x) for x in b)
            b = [x / m for x in b]
    return a


def _square_free(c):
    d = _pderiv(c)
    if not d:
        return c
    g = _pgcd(c, d)
    if _pdeg(g) < 1:
        return c
    # divide c by g
    quo = []
    rem = list(c)
    dg, lg = _pdeg(g), g[-1]
    while _pdeg(rem) >= dg:
        f = rem[-1] / lg
        shift = _pdeg(rem) - dg
        quo.insert(0, f)
        for i, gc in enumerate(g):
            rem[i + shift] -= f * gc
        rem.pop()
        rem = rem if rem else [0.0]
    return _ptrim(quo, 1e-12) or c


def sturm_sequence(c):
    seq = [_ptrim(c, 1e-12)]
    d = _pderiv(seq[0])
    if d:
        seq.append(d)
        while _pdeg(seq[-1]) > 0:
            r = _prem(seq[-2], seq[-1])
            if not r:
                break
            seq.append([-x for x in r])
    return seq


def _variations(seq, x):
    signs = []
    for p in seq:
        v = _peval(p, x)
        if v != 0.0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_root_count(c, lo, hi):
    """Number of distinct real roots of c in (lo, hi]."""
    seq = sturm_sequence(_square_free(c))
    return _variations(seq, lo) - _variations(seq, hi)


def _cauchy_bound(c):
    lead = abs(c[-1])
    return 1.0 + max(abs(a) for a in c[:-1]) / lead if len(c) > 1 else 1.0


def _newton_polish(c, x, lo, hi, iters=60):
    d = _pderiv(c)
    for _ in range(iters):
        fx = _peval(c, x)
        if fx == 0.0:
            return x
        dfx = _peval(d, x)
        if dfx == 0.0:
            break
        step = fx / dfx
        nx = x - step
        if not (lo - 1e-9 <= nx <= hi + 1e-9):
            break
        if abs(step) < 1e-15 * max(1.0, abs(x)):
            return nx
        x = nx
    return x


def isolate_real_roots(c):
    """Distinct real roots of the float polynomial c, Sturm-isolated and
    Newton-polished.  Multiplicities are collapsed."""
    c = _ptrim(c, 1e-12)
    if _pdeg(c) < 1:
        return []
    sf = _square_free(c)
    seq = sturm_sequence(sf)
    B = _cauchy_bound(sf)
    roots = []

    def rec(lo, hi, n):
        if n == 0:
            return
        if n == 1:
            # bisect until Newton converges inside
            a, b = lo, hi
            for _ in range(80):
                mid = 0.5 * (a + b)
                left = _variations(seq, a) - _variations(seq, mid)
                if left == 1:
                    b = mid
                else:
                    a = mid
                if b - a < 1e-12 * max(1.0, abs(a) + abs(b)):
                    break
            roots.append(_newton_polish(sf, 0.5 * (a + b), lo, hi))
            return
        mid = 0.5 * (lo + hi)
        nl = _variations(seq, lo) - _variations(seq, mid)
        rec(lo, mid, nl)
        rec(mid, hi, n - nl)

    total = _variations(seq, -B) - _variations(seq, B)
    rec(-B, B, total)
    return sorted(roots)


# ---------------------------------------------------------------------------
# zero search

def _dist_to_int(x):
    return abs(x - round(x))


def _first_order_zeros(op: FirstOrderT, k_budget: int):
    """Exact case analysis for c1*xi + c2*k - i*c3 = 0 over Z x R."""
    A1, B1, C1 = op.c1.real, op.c2.real, op.c3.imag
    A2, B2, C2 = op.c1.imag, op.c2.imag, -op.c3.real
    scale = max(abs(op.c1), abs(op.c2), abs(op.c3), 1.0)
    tol = 1e-12 * scale
    hits = []  # (k, xi) candidates, k integer

    def line_solutions(A, B, C):
        """Integer-k solutions of A*xi + B*k + C = 0 (single constraint)."""
        if abs(A) > tol:
            return [(k, -(C + B * k) / A) for k in range(-k_budget, k_budget + 1)]
        if abs(B) > tol:
            kstar = -C / B
            if _dist_to_int(kstar) <= INT_TOL * (1.0 + abs(kstar)):
                return [(round(kstar), 0.0)]
            return []
        if abs(C) <= tol:
            return [(k, 0.0) for k in range(-k_budget, k_budget + 1)]
        return []

    det = A1 * B2 - A2 * B1
    row1_zero = abs(A1) <= tol and abs(B1) <= tol
    row2_zero = abs(A2) <= tol and abs(B2) <= tol
    if row1_zero and row2_zero:
        if abs(C1) <= tol and abs(C2) <= tol:
            raise DegenerateOperatorError("symbol is identically zero")
        hits = []
    elif row1_zero:
        if abs(C1) <= tol:
            hits = line_solutions(A2, B2, C2)
    elif row2_zero:
        if abs(C2) <= tol:
            hits = line_solutions(A1, B1, C1)
    elif abs(det) > tol * scale:
        xi_star = (-C1 * B2 + C2 * B1) / det
        k_star = (-A1 * C2 + A2 * C1) / det
        if _dist_to_int(k_star) <= INT_TOL * (1.0 + abs(k_star)):
            hits = [(round(k_star), xi_star)]
    else:
        # rows proportional and nonzero: consistent iff constants align
        if abs(A1) > tol or abs(B1) > tol:
            lam_num = A2 if abs(A1) > tol else B2
            lam_den = A1 if abs(A1) > tol else B1
            lam = lam_num / lam_den
            consistent = (
                abs(A2 - lam * A1) <= tol
                and abs(B2 - lam * B1) <= tol
                and abs(C2 - lam * C1) <= tol
            )
            if consistent:
                hits = line_solutions(A1, B1, C1)
    witnesses = []
    for k, xi in hits:
        res = abs(symbol_at(op, k, xi))
        if res <= 1e-8 * (1.0 + scale * (1.0 + abs(xi) + abs(k))):
            witnesses.append(ZeroWitness(int(k), float(xi), res))
    witnesses.sort(key=lambda w: (abs(w.k), w.k, w.xi))
    return witnesses


def _exhaustive_k_bound(op: ConstSplit):
    """Finite bound on |k| outside which no zeros can exist, when derivable.

    If one of Re/Im of p is constant, zeros force the matching part of the
    symbol, a polynomial in k alone, to vanish; when that polynomial is
    proper its real roots bound the candidate k.  Returns (bound, reason) or
    (None, reason).
    """
    for part in ("imag", "real"):
        p_part = op.p.imag_part() if part == "imag" else op.p.real_part()
        q_part = op.q.imag_part() if part == "imag" else op.q.real_part()
        if not p_part.is_constant():
            continue
        s = q_part.shifted(p_part.constant_value())
        if s.degree() >= 1:
            coeffs = [c.real for c in s.coeffs]
            return math.ceil(_cauchy_bound(coeffs)), f"{part} part proper in k"
        if not s.is_zero():
            return 0, f"{part} part constant nonzero"
    if op.p.degree() == 1:
        # p = p0 + p1*xi with p1 != 0: eliminate xi between the real and
        # imaginary equations; the residual constraint is a polynomial in k.
        p0, p1 = op.p.coeffs[0], op.p.coeffs[1]
        if abs(p1.real) >= abs(p1.imag):
            lam = p1.imag / p1.real
            re_q = [c.real for c in op.q.shifted(p0).coeffs] or [0.0]
            im_q = [c.imag for c in op.q.shifted(p0).coeffs] or [0.0]
            n = max(len(re_q), len(im_q))
            s_coeffs = [
                (im_q[i] if i < len(im_q) else 0.0)
                - lam * (re_q[i] if i < len(re_q) else 0.0)
                for i in range(n)
            ]
        else:
            lam = p1.real / p1.imag
            re_q = [c.real for c in op.q.shifted(p0).coeffs] or [0.0]
            im_q = [c.imag for c in op.q.shifted(p0).coeffs] or [0.0]
            n = max(len(re_q), len(im_q))
            s_coeffs = [
                (re_q[i] if i < len(re_q) else 0.0)
                - lam * (im_q[i] if i < len(im_q) else 0.0)
                for i in range(n)
            ]
        s_coeffs = _ptrim(s_coeffs, 1e-14)
        if not s_coeffs:
            return None, "every fiber admits a root"
        if _pdeg(s_coeffs) < 1:
            return 0, "eliminated constraint constant nonzero"
        return math.ceil(_cauchy_bound(s_coeffs)), "eliminated constraint proper in k"
    return None, "no a-priori k-bound derivable"


def _const_split_zeros_at_k(op: ConstSplit, k: int):
    """Real xi with p(xi) + q(k) = 0, via Sturm isolation on the dominant
    real part and filtering by the other part."""
    qk = op.q(k)
    re_poly = [c.real for c in op.p.coeffs] or [0.0]
    re_poly = list(re_poly)
    re_poly[0] += qk.real
    im_poly = [c.imag for c in op.p.coeffs] or [0.0]
    im_poly = list(im_poly)
    im_poly[0] += qk.imag
    re_poly, im_poly = _ptrim(re_poly, 1e-15), _ptrim(im_poly, 1e-15)

    def accept(xi):
        p_xi = op.p(xi)
        return abs(p_xi + qk) <= ZERO_TOL * (1.0 + abs(p_xi))

    if not re_poly and not im_poly:
        # whole fiber vanishes
        return [0.0], True
    primary, secondary = (re_poly, im_poly) if re_poly else (im_poly, re_poly)
    if _pdeg(primary) < 1:
        return [], False  # nonzero constant: no roots on this fiber
    roots = isolate_real_roots(primary)
    return [xi for xi in roots if accept(xi)], False


def find_zeros(op, k_budget: int) -> ZeroSearchResult:
    """Search the zero set of the symbol over k in [-k_budget..k_budget].

    FirstOrderT is solved in closed form (always exhaustive).  For ConstSplit
    the result is exhaustive only when an a-priori bound on candidate k is
    derivable; otherwise it is budget-limited.
    """
    if k_budget < 0:
        raise ValueError("k_budget must be nonnegative")
    if isinstance(op, FirstOrderT):
        if op.c1 == 0 and op.c2 == 0 and op.c3 == 0:
            raise DegenerateOperatorError("symbol is identically zero")
        return ZeroSearchResult(_first_order_zeros(op, k_budget), True, k_budget)
    if not isinstance(op, ConstSplit):
        raise TypeError("find_zeros supports ConstSplit and FirstOrderT")
    if op.p.is_zero() and op.q.is_zero():
        raise DegenerateOperatorError("symbol is identically zero")

    bound, reason = _exhaustive_k_bound(op)
    exhaustive = bound is not None and bound <= k_budget
    witnesses = []
    degenerate_fibers = False
    for k in range(-k_budget, k_budget + 1):
        roots, whole_fiber = _const_split_zeros_at_k(op, k)
        degenerate_fibers = degenerate_fibers or whole_fiber
        for xi in roots:
            res = abs(symbol_at(op, k, xi))
            witnesses.append(ZeroWitness(k, float(xi), res))
    witnesses.sort(key=lambda w: (abs(w.k), w.k, w.xi))
    note = reason + ("; fibers vanish identically" if degenerate_fibers else "")
    return ZeroSearchResult(witnesses, exhaustive, k_budget, note)


# ---------------------------------------------------------------------------
# sampled growth bounds

def _refine_min(fun, xi0, span):
    res = minimize_scalar(fun, bounds=(xi0 - span, xi0 + span), method="bounded")
    return (res.x, res.fun) if res.fun < fun(xi0) else (xi0, fun(xi0))


def certify_lower_bound(op: ConstSplit, R: float, k_budget: int, xi_samples: int,
                        R_max: float | None = None):
    """Sample |p(xi)+q(k)| / |xi|^(N-1) for |xi| in [R, R_max], k in budget.

    Returns a LowerBoundCertificate with the measured inf, or a
    RefutationPath when the per-k minima trend to zero.  Sampled evidence
    only, labelled as such by the reporting layer.
    """
    N = op.p.degree()
    if N <= 1:
        raise ValueError("growth certificate requires deg(p) > 1")
    if R <= 0 or xi_samples < 8:
        raise ValueError("need R > 0 and at least 8 xi samples")
    if R_max is None:
        R_max = 1e4 * R
    xs = np.logspace(math.log10(R), math.log10(R_max), xi_samples)
    xs = np.concatenate([xs, -xs])
    per_k = []
    for k in range(-k_budget, k_budget + 1):
        qk = op.q(k)
        ratio = lambda xi: abs(op.p(xi) + qk) / abs(xi) ** (N - 1)
        vals = np.array([ratio(x) for x in xs])
        i = int(np.argmin(vals))
        xi_best, v_best = _refine_min(ratio, float(xs[i]), max(abs(xs[i]) * 0.5, 1.0))
        per_k.append((k, xi_best, v_best))
    grid_inf = min(v for _, _, v in per_k)
    # trend of the per-|k| minima
    ks = np.array([abs(k) for k, _, _ in per_k], dtype=float)
    vs = np.array([v for _, _, v in per_k])
    pos = vs > 0
    slope = 0.0
    if pos.sum() >= 3 and ks.max() > 0:
        slope = float(np.polyfit(np.log1p(ks[pos]), np.log(vs[pos]), 1)[0])
    if grid_inf <= 0 or (slope < -0.5 and vs.min() < 0.1 * vs.max()):
        path = sorted(per_k, key=lambda t: abs(t[0]))
        return RefutationPath([(k, xi, v) for k, xi, v in path], slope)
    return LowerBoundCertificate(C=float(grid_inf), R=float(R),
                                 k_range=k_budget, grid_inf=float(grid_inf))


def uniform_gap(op, k_budget: int, xi_range, samples: int = 2001) -> float:
    """Measured inf of |symbol| over k in budget and xi in the given range.

    Integer xi values inside the range are sampled explicitly and the best
    point is refined by bounded local minimization.
    """
    lo, hi = float(xi_range[0]), float(xi_range[1])
    xs = np.linspace(lo, hi, samples)
    ints = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=float)
    xs = np.unique(np.concatenate([xs, ints, [0.0] if lo <= 0 <= hi else []]))
    best = math.inf
    span = (hi - lo) / samples * 4 + 1.0
    for k in range(-k_budget, k_budget + 1):
        fun = lambda xi: abs(symbol_at(op, k, xi))
        vals = np.array([fun(x) for x in xs])
        i = int(np.argmin(vals))
        x0 = float(np.clip(xs[i], lo, hi))
        res = minimize_scalar(
            fun, bounds=(max(lo, x0 - span), min(hi, x0 + span)), method="bounded"
        )
        best = min(best, float(vals[i]), float(res.fun))
    return best
