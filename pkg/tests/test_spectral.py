"""Mixed transform, Parseval, decay fitting, membership reports."""

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylgh.spectral import (
    CylinderGrid,
    GridFunction,
    MixedSpectrum,
    SpectralError,
    fit_decay,
    forward_mixed,
    inverse_mixed,
    membership_report,
    parseval_defect,
)


def gaussian_sample(grid, k0=1, width=1.0):
    return GridFunction.sample(
        grid, lambda t, x: np.exp(1j * k0 * t) * np.exp(-x**2 / (2 * width**2))
    )


def test_grid_validation():
    with pytest.raises(SpectralError):
        CylinderGrid(M=63, N=512)
    with pytest.raises(SpectralError):
        CylinderGrid(M=64, N=512, X=-1.0)
    g = CylinderGrid()
    assert g.k_values()[0] == -g.M // 2
    assert np.isclose(g.xi_values()[1] - g.xi_values()[0], g.dxi)


def test_round_trip_identity():
    grid = CylinderGrid(M=32, N=128, X=10.0)
    f = gaussian_sample(grid)
    g = inverse_mixed(forward_mixed(f))
    assert np.abs(g.values - f.values).max() < 1e-10


@given(st.floats(0.5, 2.0), st.integers(-3, 3))
@settings(max_examples=20, deadline=None)
def test_parseval_identity(width, k0):
    grid = CylinderGrid(M=32, N=256, X=12.0)
    f = gaussian_sample(grid, k0=k0, width=width)
    F = forward_mixed(f)
    assert parseval_defect(f, F) < 1e-10


def test_derivative_duality():
    """d/dx on the grid corresponds to multiplication by i*xi."""
    grid = CylinderGrid(M=32, N=256, X=12.0)
    f = gaussian_sample(grid)
    F = forward_mixed(f)
    dF = MixedSpectrum(grid, 1j * grid.xi_values()[None, :] * F.values)
    df = inverse_mixed(dF)
    expected = GridFunction.sample(
        grid, lambda t, x: np.exp(1j * t) * (-x) * np.exp(-x**2 / 2)
    )
    assert np.abs(df.values - expected.values).max() < 1e-8


def test_poisson_gaussian_closed_form():
    grid = CylinderGrid(M=64, N=512, X=12.0)
    r = 0.5
    f = GridFunction.sample(
        grid,
        lambda t, x: (1 - r**2) / (1 - 2 * r * np.cos(t) + r**2)
        * np.exp(-x**2 / 2),
    )
    F = forward_mixed(f)
    ks = grid.k_values()
    xis = grid.xi_values()
    exact = (r ** np.abs(ks))[:, None] * (
        math.sqrt(2 * math.pi) * np.exp(-xis**2 / 2)
    )[None, :]
    assert np.abs(F.values - exact).max() < 1e-6


def test_fit_decay_recovers_planted_profile():
    grid = CylinderGrid(M=64, N=512, X=12.0)
    ks = grid.k_values()
    xis = grid.xi_values()
    vals = (np.exp(-0.7 * np.abs(ks, dtype=float))[:, None]
            * np.exp(-0.5 * np.abs(xis) ** 2)[None, :])
    F = MixedSpectrum(grid, vals.astype(complex))
    fk = fit_decay(F, "k")
    fx = fit_decay(F, "xi")
    assert abs(fk.order - 1.0) < 0.01 * 1.0 + 0.05
    assert abs(fk.rate - 0.7) < 0.01
    assert abs(fx.order - 0.5) < 0.05
    assert abs(fx.rate - 0.5) < 0.01


def test_fit_decay_flags_no_decay():
    grid = CylinderGrid(M=64, N=512, X=12.0)
    vals = np.ones((grid.M, grid.N), dtype=complex)
    F = MixedSpectrum(grid, vals)
    fit = fit_decay(F, "xi")
    assert fit.flag == "no decay"


def test_fit_decay_window_too_small():
    grid = CylinderGrid(M=8, N=16, X=2.0)
    F = forward_mixed(gaussian_sample(grid))
    with pytest.raises(SpectralError):
        fit_decay(F, "k")


def test_csv_round_trip_grid_function():
    grid = CylinderGrid(M=8, N=32, X=4.0)
    f = gaussian_sample(grid)
    text = f.to_csv()
    assert text.splitlines()[0] == "t,x,re,im"
    g = GridFunction.from_csv(text, grid)
    assert np.abs(g.values - f.values).max() < 1e-15


def test_csv_round_trip_spectrum():
    grid = CylinderGrid(M=8, N=32, X=4.0)
    F = forward_mixed(gaussian_sample(grid))
    text = F.to_csv()
    assert text.splitlines()[0] == "k,xi,re,im"
    G = MixedSpectrum.from_csv(text, grid)
    assert np.abs(G.values - F.values).max() < 1e-15


def test_truncation_defect_flags_wide_function():
    grid = CylinderGrid(M=16, N=128, X=8.0)
    wide = GridFunction.sample(grid, lambda t, x: np.exp(-x**2 / 200))
    narrow = GridFunction.sample(grid, lambda t, x: np.exp(-x**2))
    assert wide.truncation_defect() > 1e-3
    assert narrow.truncation_defect() < 1e-6


def test_membership_report_consistent_gaussian():
    grid = CylinderGrid(M=64, N=512, X=12.0)
    f = gaussian_sample(grid)
    rep = membership_report(f, sigma_claim=1.0, mu_claim=0.5)
    assert rep.consistent


def test_membership_report_rejects_slow_decay():
    grid = CylinderGrid(M=64, N=512, X=12.0)
    f = GridFunction.sample(grid, lambda t, x: np.ones_like(t) / (1.0 + x**2))
    rep = membership_report(f, sigma_claim=1.0, mu_claim=0.5)
    assert not rep.consistent
