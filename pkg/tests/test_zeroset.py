"""Zero-set search: Sturm isolation, witnesses, lower-bound certificates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylgh.symbols import (
    ComplexPolynomial,
    ConstSplit,
    first_order_t,
    symbol_at,
)
from cylgh.zeroset import (
    DegenerateOperatorError,
    certify_lower_bound,
    find_zeros,
    isolate_real_roots,
    sturm_root_count,
    uniform_gap,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


# ---------------------------------------------------------------------------
# Sturm machinery against numpy's eigenvalue-based root finder

@given(st.lists(st.floats(-3, 3, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=6))
@settings(max_examples=100)
def test_sturm_count_matches_numpy_roots(coeffs):
    if abs(coeffs[-1]) < 1e-3:
        coeffs = coeffs[:-1] + [1.0]
    roots = np.roots(coeffs[::-1])
    real = sorted(r.real for r in roots
                  if abs(r.imag) < 1e-9 and -100 < r.real < 100)
    # avoid ill-conditioned clusters where float root counting is ambiguous
    if any(b - a < 1e-5 for a, b in zip(real, real[1:])):
        return
    lo, hi = -100.0, 100.0
    distinct = len(real) and len(set(round(r, 6) for r in real)) or 0
    assert sturm_root_count(list(coeffs), lo, hi) == distinct


def test_isolate_real_roots_cubic():
    # (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
    roots = isolate_real_roots([6.0, -5.0, -2.0, 1.0])
    assert sorted(round(r, 9) for r in roots) == [-2.0, 1.0, 3.0]


def test_isolate_real_roots_no_real():
    assert isolate_real_roots([1.0, 0.0, 1.0]) == []  # x^2 + 1


# ---------------------------------------------------------------------------
# first-order exact zero sets

@given(finite, finite, finite, finite)
@settings(max_examples=100, deadline=None)
def test_first_order_witnesses_reevaluate(a, b, cre, cim):
    res = find_zeros(first_order_t(a, b, complex(cre, cim)), 50)
    for w in res.witnesses:
        assert abs(symbol_at(first_order_t(a, b, complex(cre, cim)),
                             w.k, w.xi)) <= 1e-8


def test_first_order_zero_line_integer_case():
    # dt + dx + 1: symbol k + xi - i; Re c = 1 != 0 so no zeros at all
    res = find_zeros(first_order_t(1.0, 0.0, 1.0), 50)
    assert res.exhaustive and not res.witnesses
    # dt + dx: symbol k + xi vanishes at every (k, -k)
    res = find_zeros(first_order_t(1.0, 0.0, 0.0), 10)
    assert res.witnesses
    assert all(abs(w.k + w.xi) < 1e-12 for w in res.witnesses)


def test_const_split_elimination_degree_one_q():
    # p = xi + i, q = k^2: Im part never vanishes, exhaustively empty
    op = ConstSplit(ComplexPolynomial([1j, 1]), ComplexPolynomial([0, 0, 1]))
    res = find_zeros(op, 50)
    assert res.exhaustive
    assert res.witnesses == []


def test_const_split_linear_symbol():
    op = ConstSplit(ComplexPolynomial([0, 1]), ComplexPolynomial([0, 1]))
    res = find_zeros(op, 5)
    ks = sorted(w.k for w in res.witnesses)
    assert ks == list(range(-5, 6))
    assert all(abs(w.xi + w.k) < 1e-12 for w in res.witnesses)


def test_const_split_constant_p_no_integer_hit():
    # 5 - k^2 never vanishes at integer k
    op = ConstSplit(ComplexPolynomial([5.0]), ComplexPolynomial([0, 0, -1.0]))
    res = find_zeros(op, 50)
    assert res.exhaustive
    assert res.witnesses == []
    gap = uniform_gap(op, 50, (-100.0, 100.0))
    assert abs(gap - 1.0) < 1e-9  # attained at k = 2


def test_degenerate_operator_rejected():
    op = ConstSplit(ComplexPolynomial(), ComplexPolynomial())
    with pytest.raises(DegenerateOperatorError):
        find_zeros(op, 10)


# ---------------------------------------------------------------------------
# lower-bound certification

def test_certify_lower_bound_on_growth_family():
    # p = -i xi^3 - i xi^2, q = 0.5 - k^2 (deg p = 3): |p+q| >= C |xi|^2
    op = ConstSplit(ComplexPolynomial([0, 0, -1j, -1j]),
                    ComplexPolynomial([0.5, 0, -1.0]))
    cert = certify_lower_bound(op, R=1.0, k_budget=50, xi_samples=64)
    assert cert is not None
    assert cert.C > 0


def test_certify_lower_bound_refuted():
    # p = xi^2 - i, q = -k^2: zero-free (Im = -1) but the growth ratio
    # min_xi |xi^2 - k^2 - i| / |xi| decays like 1/k along xi = k
    op = ConstSplit(ComplexPolynomial([-1j, 0, 1]),
                    ComplexPolynomial([0, 0, -1]))
    out = certify_lower_bound(op, R=1.0, k_budget=50, xi_samples=64)
    from cylgh.zeroset import RefutationPath
    assert isinstance(out, RefutationPath)
    assert out.slope < -0.5
