"""Global-hypoellipticity decision procedures with certificates.

Each verdict names the criterion applied, carries a machine-checkable
certificate (a zero witness, a sampled lower-bound certificate, or the trace
of an arithmetic condition), and the range of the decay order mu for which
the verdict is established.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .symbols import (
    ConstSplit,
    FirstOrderT,
    TrigPolynomial,
    TubeT,
    average,
    first_order_t,
    symbol_at,
)
from .zeroset import (
    LowerBoundCertificate,
    RefutationPath,
    ZeroWitness,
    certify_lower_bound,
    find_zeros,
    uniform_gap,
)

INT_TOL = 1e-9
SIGN_TOL = 1e-12  # relative to the sup norm of b

GH, NOT_GH, UNDECIDED = "GH", "NotGH", "Undecided"


@dataclass(frozen=True)
class CriterionTrace:
    """Named arithmetic condition together with the computed values."""

    name: str
    values: dict


@dataclass(frozen=True)
class Classification:
    verdict: str
    theorem: str
    certificate: object
    mu_validity: tuple  # (lower, lower_inclusive) with upper always +inf
    sigma_validity: str
    notion: str  # "S_sigma_mu" or "F_mu"
    boundary: bool = False
    notes: tuple = ()


@dataclass(frozen=True)
class Budgets:
    k_budget: int = 50
    xi_samples: int = 64
    R: float = 1.0
    xi_range: tuple = (-100.0, 100.0)


MU_HALF = (0.5, True)   # mu >= 1/2
MU_ONE = (1.0, True)    # mu >= 1
MU_ABOVE_ONE = (1.0, False)  # mu > 1
ALL_SIGMA = "all sigma >= 1"


def dist_to_int(x: float) -> float:
    if not math.isfinite(x):
        return math.inf
    return abs(x - round(x))


def is_integer(x: float):
    """(member, boundary): tolerance-banded Z-membership."""
    d = dist_to_int(x)
    return d <= INT_TOL, INT_TOL < d <= 1e3 * INT_TOL


def classify_first_order_t(a: float, b: float, c: complex) -> Classification:
    """dt + (a + i b) dx + c, with a, b real.

    GH iff (i) b != 0 and (a/b) Re c + Im c is not an integer, or
    (ii) b == 0 and either Re c != 0, or a = Re c = 0 and Im c not integer.
    """
    c = complex(c)
    if b != 0.0:
        # (a * Re c) / b is exact when Re c = 0 even if a/b overflows
        val = (a * c.real) / b + c.imag
        member, boundary = is_integer(val)
        trace = CriterionTrace("offset (a/b)Re(c)+Im(c) vs Z", {"value": val})
        if not member:
            return Classification(GH, "first-order-t criterion, complex slope",
                                  trace, MU_HALF, ALL_SIGMA, "S_sigma_mu", boundary)
        xi0 = c.real / b
        if not math.isfinite(xi0) or abs(val) > 2**52:
            return Classification(
                UNDECIDED, "first-order-t criterion, complex slope", trace,
                MU_HALF, ALL_SIGMA, "S_sigma_mu", boundary,
                notes=("criterion zero lies beyond floating-point range",))
        k0 = -round(val)
        res = abs(symbol_at(first_order_t(a, b, c), k0, xi0))
        return Classification(NOT_GH, "first-order-t criterion, complex slope",
                              ZeroWitness(k0, xi0, res), MU_HALF, ALL_SIGMA,
                              "S_sigma_mu", boundary)
    # b == 0
    if c.real != 0.0:
        trace = CriterionTrace("Re(c) nonzero", {"re_c": c.real})
        return Classification(GH, "first-order-t criterion, real slope",
                              trace, MU_HALF, ALL_SIGMA, "S_sigma_mu")
    if a != 0.0:
        xi0 = -(0 + c.imag) / a  # fiber k=0
        if not math.isfinite(xi0):
            trace = CriterionTrace("Re(c) zero, a nonzero", {"a": a})
            return Classification(
                UNDECIDED, "first-order-t criterion, real slope", trace,
                MU_HALF, ALL_SIGMA, "S_sigma_mu",
                notes=("criterion zero lies beyond floating-point range",))
        res = abs(symbol_at(first_order_t(a, 0.0, c), 0, xi0))
        return Classification(NOT_GH, "first-order-t criterion, real slope",
                              ZeroWitness(0, xi0, res), MU_HALF, ALL_SIGMA,
                              "S_sigma_mu")
    member, boundary = is_integer(c.imag)
    trace = CriterionTrace("Im(c) vs Z", {"im_c": c.imag})
    if not member:
        return Classification(GH, "first-order-t criterion, degenerate slope",
                              trace, MU_HALF, ALL_SIGMA, "S_sigma_mu", boundary)
    k0 = -round(c.imag)
    res = abs(symbol_at(first_order_t(0.0, 0.0, c), k0, 0.0))
    return Classification(NOT_GH, "first-order-t criterion, degenerate slope",
                          ZeroWitness(k0, 0.0, res), MU_HALF, ALL_SIGMA,
                          "S_sigma_mu", boundary)


def classify_first_order_x(a: float, b: float, c: complex) -> Classification:
    """dx + (a + i b) dt + c, with a, b real.

    GH iff (i) b != 0 and Re(c)/b is not an integer, or (ii) b == 0 and
    Re c != 0.
    """
    c = complex(c)
    op = FirstOrderT(1.0, complex(a, b), c)
    if b != 0.0:
        val = c.real / b
        member, boundary = is_integer(val)
        trace = CriterionTrace("ratio Re(c)/b vs Z", {"value": val})
        if not member:
            return Classification(GH, "first-order-x criterion, complex slope",
                                  trace, MU_HALF, ALL_SIGMA, "S_sigma_mu", boundary)
        if abs(val) > 2**52:
            return Classification(
                UNDECIDED, "first-order-x criterion, complex slope", trace,
                MU_HALF, ALL_SIGMA, "S_sigma_mu", boundary,
                notes=("criterion zero lies beyond floating-point range",))
        k0 = round(val)
        xi0 = -(a * k0 + c.imag)
        res = abs(symbol_at(op, k0, xi0))
        return Classification(NOT_GH, "first-order-x criterion, complex slope",
                              ZeroWitness(k0, xi0, res), MU_HALF, ALL_SIGMA,
                              "S_sigma_mu", boundary)
    if c.real != 0.0:
        trace = CriterionTrace("Re(c) nonzero", {"re_c": c.real})
        return Classification(GH, "first-order-x criterion, real slope",
                              trace, MU_HALF, ALL_SIGMA, "S_sigma_mu")
    xi0 = -c.imag  # fiber k=0
    res = abs(symbol_at(op, 0, xi0))
    return Classification(NOT_GH, "first-order-x criterion, real slope",
                          ZeroWitness(0, xi0, res), MU_HALF, ALL_SIGMA,
                          "S_sigma_mu")


def classify_const_deg_le1(op: ConstSplit, budgets: Budgets = Budgets()) -> Classification:
    """Split constant-coefficient operator with deg(p) <= 1: GH iff the
    symbol has no zero on Z x R."""
    if op.p.degree() > 1:
        raise ValueError("use classify_const_general for deg(p) > 1")
    result = find_zeros(op, budgets.k_budget)
    if result.witnesses:
        return Classification(NOT_GH, "const-split deg<=1 zero-set criterion",
                              result.witnesses[0], MU_HALF, ALL_SIGMA, "S_sigma_mu")
    if result.exhaustive:
        gap = uniform_gap(op, min(budgets.k_budget, 20), budgets.xi_range)
        trace = CriterionTrace("empty zero set, sampled gap",
                               {"gap": gap, "note": result.note})
        return Classification(GH, "const-split deg<=1 zero-set criterion",
                              trace, MU_HALF, ALL_SIGMA, "S_sigma_mu")
    trace = CriterionTrace("no zero found within budget",
                           {"k_budget": result.k_budget, "note": result.note})
    return Classification(UNDECIDED, "const-split deg<=1 zero-set criterion",
                          trace, MU_HALF, ALL_SIGMA, "S_sigma_mu")


def classify_const_general(op: ConstSplit, budgets: Budgets = Budgets()) -> Classification:
    """Split operator with deg(p) = N > 1: GH (for mu >= 1) iff the zero set
    is empty and the sampled growth bound |p+q| >= C |xi|^(N-1) holds."""
    N = op.p.degree()
    if N <= 1:
        raise ValueError("use classify_const_deg_le1 for deg(p) <= 1")
    zeros = find_zeros(op, budgets.k_budget)
    if zeros.witnesses:
        return Classification(NOT_GH, "const-split zero-set necessity",
                              zeros.witnesses[0], MU_HALF, ALL_SIGMA, "S_sigma_mu")
    growth = certify_lower_bound(op, budgets.R, budgets.k_budget, budgets.xi_samples)
    if zeros.exhaustive and isinstance(growth, LowerBoundCertificate):
        trace = CriterionTrace(
            "empty zero set + sampled growth certificate",
            {"C": growth.C, "R": growth.R, "k_range": growth.k_range,
             "label": "sampled"},
        )
        return Classification(GH, "const-split higher-order criterion",
                              (growth, trace), MU_ONE, ALL_SIGMA, "S_sigma_mu")
    notes = []
    if not zeros.exhaustive:
        notes.append(f"zero search budget-limited: {zeros.note}")
    if isinstance(growth, RefutationPath):
        notes.append(f"growth bound refuted along sampled path, slope {growth.slope:.3g}")
    trace = CriterionTrace("higher-order criterion inconclusive",
                           {"zeros": zeros.note,
                            "growth": "refuted" if isinstance(growth, RefutationPath)
                            else "certified"})
    return Classification(UNDECIDED, "const-split higher-order criterion",
                          (growth, trace), MU_ONE, ALL_SIGMA, "S_sigma_mu",
                          notes=tuple(notes))


def sign_change(b: TrigPolynomial) -> str:
    """One of 'nonnegative', 'nonpositive', 'changes_sign', 'identically_zero'.

    Evaluated on a dense grid; near-zero extrema are refined by local
    minimization before deciding.  Touching zero without crossing counts as
    one-signed.
    """
    if not b.is_real_valued():
        raise ValueError("sign_change requires a real-valued function")
    if b.is_zero():
        return "identically_zero"
    F = b.bandwidth()
    m = max(256, 16 * F + 32)
    ts = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
    vals = np.array([b(t).real for t in ts])
    sup = np.abs(vals).max()
    tol = SIGN_TOL * max(sup, 1e-300)

    def refine(extreme_sign):
        # polish the extremum with a few Newton steps on b'
        idx = int(np.argmin(extreme_sign * vals))
        t = ts[idx]
        db, d2b = b.derivative(1), b.derivative(2)
        for _ in range(50):
            d2 = d2b(t).real
            if d2 == 0.0:
                break
            step = db(t).real / d2
            t -= step
            if abs(step) < 1e-14:
                break
        return b(t).real

    lo, hi = vals.min(), vals.max()
    if abs(lo) <= tol:
        lo = min(lo, refine(+1))
    if abs(hi) <= tol:
        hi = max(hi, refine(-1))
    neg, pos = lo < -tol, hi > tol
    if neg and pos:
        return "changes_sign"
    if pos:
        return "nonnegative"
    if neg:
        return "nonpositive"
    return "identically_zero"


def classify_tube(a: TrigPolynomial, b: TrigPolynomial, q: TrigPolynomial,
                  budgets: Budgets = Budgets()) -> Classification:
    """Tube operator dt + (a(t) + i b(t)) dx + q(t); verdict in the F_mu sense.

    Constant coefficients delegate to the first-order criterion; b == 0 uses
    the averaged real-case criterion; otherwise the sign of b decides
    together with (a0/b0) Re(q0) + Im(q0) not in Z.
    """
    op = TubeT(a, b, q)  # validates real-valuedness
    a0 = average(a).real
    q0 = average(q)
    if a.is_constant() and b.is_constant() and q.is_constant():
        b0 = average(b).real
        base = classify_first_order_t(a0, b0, q0)
        return Classification(base.verdict, "tube constant-coefficient reduction",
                              base.certificate, MU_HALF, ALL_SIGMA, "F_mu",
                              base.boundary)
    if b.is_zero():
        base = classify_first_order_t(a0, 0.0, q0)
        return Classification(base.verdict, "tube real-case averaged criterion",
                              base.certificate, MU_HALF, ALL_SIGMA, "F_mu",
                              base.boundary,
                              notes=("averages a0=%r, q0=%r" % (a0, q0),))
    sign = sign_change(b)
    if sign == "changes_sign":
        trace = CriterionTrace("b changes sign", {"sign": sign})
        return Classification(NOT_GH, "tube sign-change necessity", trace,
                              MU_ABOVE_ONE, ALL_SIGMA, "F_mu")
    b0 = average(b).real
    val = (a0 / b0) * q0.real + q0.imag
    member, boundary = is_integer(val)
    if not member:
        trace = CriterionTrace(
            "b one-signed and (a0/b0)Re(q0)+Im(q0) vs Z",
            {"value": val, "sign": sign, "a0": a0, "b0": b0,
             "q0": [q0.real, q0.imag]},
        )
        return Classification(GH, "tube one-signed sufficiency", trace,
                              MU_HALF, ALL_SIGMA, "F_mu", boundary)
    xi0 = q0.real / b0
    k0 = -round(val)
    res = abs(k0 + complex(a0, b0) * xi0 - 1j * q0)
    return Classification(NOT_GH, "tube averaged-operator necessity",
                          ZeroWitness(k0, xi0, res), MU_HALF, ALL_SIGMA,
                          "F_mu", boundary)
