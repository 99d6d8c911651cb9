"""Verdict logic for constant-coefficient and tube operators."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylgh.classifier import (
    Budgets,
    classify_const_deg_le1,
    classify_const_general,
    classify_first_order_t,
    classify_first_order_x,
    classify_tube,
    dist_to_int,
    is_integer,
    sign_change,
)
from cylgh.symbols import (
    ComplexPolynomial,
    ConstSplit,
    TrigPolynomial,
    first_order_t,
    symbol_at,
)
from cylgh.zeroset import ZeroWitness

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


def test_dist_to_int():
    assert dist_to_int(3.0) == 0
    assert abs(dist_to_int(2.4) - 0.4) < 1e-12
    assert abs(dist_to_int(-0.5) - 0.5) < 1e-12


def test_is_integer_boundary_band():
    member, boundary = is_integer(2.0)
    assert member and not boundary
    member, boundary = is_integer(2.0 + 5e-10)
    assert member  # within int_tol
    member, boundary = is_integer(2.0 + 5e-7)
    assert not member and boundary  # suspiciously close: flagged
    member, boundary = is_integer(2.3)
    assert not member and not boundary


# ---------------------------------------------------------------------------
# first-order criteria

def test_first_order_t_complex_slope_gh():
    c = classify_first_order_t(1.0, 1.0, 1 + 0.5j)
    assert c.verdict == "GH"
    assert c.mu_validity == (0.5, True)


def test_first_order_t_complex_slope_notgh_witness():
    c = classify_first_order_t(1.0, 1.0, 1.0 + 0j)
    assert c.verdict == "NotGH"
    w = c.certificate
    assert isinstance(w, ZeroWitness)
    assert (w.k, w.xi) == (-1, 1.0)
    assert abs(symbol_at(first_order_t(1.0, 1.0, 1.0 + 0j), w.k, w.xi)) <= 1e-8


def test_first_order_t_real_slope_cases():
    assert classify_first_order_t(0.0, 0.0, 0.3j).verdict == "GH"
    assert classify_first_order_t(0.0, 0.0, 1j).verdict == "NotGH"
    assert classify_first_order_t(2.0, 0.0, 0.5 + 0j).verdict == "GH"
    assert classify_first_order_t(2.0, 0.0, 1j).verdict == "NotGH"


def test_first_order_x_cases():
    c = classify_first_order_x(1.0, 2.0, 4 + 1j)
    assert c.verdict == "NotGH"
    assert (c.certificate.k, c.certificate.xi) == (2, -3.0)
    assert classify_first_order_x(0.0, 2.0, 3 + 1j).verdict == "GH"
    assert classify_first_order_x(1.0, 0.0, 1j).verdict == "NotGH"


@given(finite, finite, finite, finite)
@settings(max_examples=200, deadline=None)
def test_first_order_t_consistent_with_zero_search(a, b, cre, cim):
    """The closed-form criterion agrees with exhaustive symbol-zero search."""
    # tiny-but-nonzero coefficients sit between the classifier's exact
    # case split and the zero search's numerical tolerance; skip the band
    if any(0 < abs(v) < 1e-8 for v in (a, b, cre, cim)):
        return
    c = classify_first_order_t(a, b, complex(cre, cim))
    op = first_order_t(a, b, complex(cre, cim))
    if c.verdict == "Undecided":
        return
    from cylgh.zeroset import DegenerateOperatorError, find_zeros
    try:
        res = find_zeros(op, 200)
    except DegenerateOperatorError:
        return
    has_zero = bool(res.witnesses)
    if c.boundary:
        return  # within the honesty band around Z; skip the sharp comparison
    if res.exhaustive:
        assert (c.verdict == "NotGH") == has_zero
    elif has_zero:
        assert c.verdict == "NotGH"


def test_scaling_invariance_of_x_criterion():
    for lam in (0.5, 2.0, 7.0):
        base = classify_first_order_x(1.0, 2.0, 3 + 1j)
        scaled = classify_first_order_x(1.0, 2.0 * lam, lam * (3 + 1j).real + 1j * (3 + 1j).imag)
        # criterion value Re(c)/b is literally invariant under (b, c) -> (l b, l c)
        assert scaled.verdict == base.verdict


# ---------------------------------------------------------------------------
# split constant-coefficient operators

def test_deg_le1_im_never_vanishes():
    op = ConstSplit(ComplexPolynomial([1j, 1]), ComplexPolynomial([0, 0, 1]))
    c = classify_const_deg_le1(op)
    assert c.verdict == "GH"
    assert c.mu_validity == (0.5, True)


def test_deg_le1_linear_notgh():
    op = ConstSplit(ComplexPolynomial([0, 1]), ComplexPolynomial([0, 1]))
    c = classify_const_deg_le1(op)
    assert c.verdict == "NotGH"
    assert isinstance(c.certificate, ZeroWitness)


def test_deg_le1_constant_p_gap():
    op = ConstSplit(ComplexPolynomial([5.0]), ComplexPolynomial([0, 0, -1.0]))
    c = classify_const_deg_le1(op)
    assert c.verdict == "GH"


def test_general_family_gh_vs_notgh():
    def family(c):
        return ConstSplit(ComplexPolynomial([0, 0, -1j, -1j]),
                          ComplexPolynomial([c, 0, -1.0]))
    assert classify_const_general(family(0.5)).verdict == "GH"
    out = classify_const_general(family(1.0))
    assert out.verdict == "NotGH"
    assert isinstance(out.certificate, ZeroWitness)
    assert out.certificate.residual <= 1e-8


def test_general_growth_refuted_is_undecided():
    op = ConstSplit(ComplexPolynomial([1j, 1, -1j]),
                    ComplexPolynomial([0, -1, 1]))
    assert classify_const_general(op).verdict == "Undecided"


# ---------------------------------------------------------------------------
# sign changes and tube operators

def test_sign_change_labels():
    assert sign_change(TrigPolynomial.cosine()) == "changes_sign"
    one_plus_cos = TrigPolynomial.constant(1.0) + TrigPolynomial.cosine()
    assert sign_change(one_plus_cos) == "nonnegative"
    assert sign_change(one_plus_cos.scaled(-1.0)) == "nonpositive"
    assert sign_change(TrigPolynomial()) == "identically_zero"
    assert sign_change(TrigPolynomial.constant(2.0)) == "nonnegative"


def test_tube_constant_coefficients_delegate():
    a = TrigPolynomial.constant(1.0)
    b = TrigPolynomial.constant(1.0)
    q = TrigPolynomial.constant(1 + 0.5j)
    c = classify_tube(a, b, q)
    assert c.verdict == classify_first_order_t(1.0, 1.0, 1 + 0.5j).verdict
    assert c.notion == "F_mu"
    assert c.mu_validity == (0.5, True)


def test_tube_b_zero_averaged():
    a = TrigPolynomial.cosine()
    b = TrigPolynomial()
    q = TrigPolynomial.constant(0.5)
    c = classify_tube(a, b, q)
    assert c.verdict == "GH"


def test_tube_one_signed_gh():
    a = TrigPolynomial.constant(0.0)
    b = TrigPolynomial.constant(1.0) + TrigPolynomial.cosine()
    q = TrigPolynomial.constant(0.3j)
    c = classify_tube(a, b, q)
    assert c.verdict == "GH"
    assert c.mu_validity == (0.5, True)


def test_tube_sign_change_notgh_mu_above_one():
    a = TrigPolynomial.constant(0.0)
    b = TrigPolynomial.cosine()
    q = TrigPolynomial.constant(0.3j)
    c = classify_tube(a, b, q)
    assert c.verdict == "NotGH"
    assert c.mu_validity == (1.0, False)  # proven only for mu > 1


def test_tube_one_signed_integer_offset_witness():
    a = TrigPolynomial.constant(0.0)
    b = TrigPolynomial.constant(1.0) + TrigPolynomial.cosine()
    q = TrigPolynomial.constant(1.0)
    c = classify_tube(a, b, q)
    assert c.verdict == "NotGH"
    w = c.certificate
    assert isinstance(w, ZeroWitness)
    assert w.residual <= 1e-8
