"""Explicit solutions witnessing failure of global hypoellipticity.

Three families: plane waves attached to symbol zeros; periodic exponential
solutions of tube operators whose averaged symbol vanishes; and the
slow-decay solution built from a sign-changing b, whose partial transform
decays only like xi^(-1/2) although the right-hand side is super-
exponentially decaying.  Each construction is verified numerically against
its defining equation and decay claims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .spectral import (
    CylinderGrid,
    GridFunction,
    forward_mixed,
    fit_decay,
    membership_report,
    partial_x_inverse,
)
from .symbols import (
    ConstSplit,
    FirstOrderT,
    TrigPolynomial,
    average,
    symbol_at,
    zero_mean_antiderivative,
)
from .zeroset import ZeroWitness

WITNESS_TOL = 1e-8


# numpy renamed trapz to trapezoid in 2.0
_trapz = getattr(np, "trapezoid", np.trapz)


class CounterexampleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Gevrey cutoffs

def _profile(s, order):
    """h(s) = exp(-s^(-1/(order-1))) for s > 0, extended by 0; all
    derivatives vanish at 0, and h is Gevrey of the given order."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-s[pos] ** (-1.0 / (order - 1.0)))
    return out


def _smooth_step(s, order):
    """Monotone 0 -> 1 transition on [0, 1]: h(s) / (h(s) + h(1-s))."""
    a = _profile(s, order)
    b = _profile(1.0 - np.asarray(s, dtype=float), order)
    denom = a + b
    with np.errstate(invalid="ignore"):
        out = np.where(denom > 0, a / np.where(denom > 0, denom, 1.0), 0.0)
    return out


@dataclass(frozen=True)
class GevreyCutoff:
    """Cutoff of Gevrey order > 1: identically 1 on the plateau, 0 outside
    the support, glued with the standard sub-analytic transition.

    Either end of support/plateau may be infinite, giving one-sided cutoffs
    (e.g. support [0, inf), plateau [1, inf))."""

    order: float
    support: tuple
    plateau: tuple

    def __post_init__(self):
        if self.order <= 1:
            raise CounterexampleError("Gevrey cutoff order must exceed 1")
        s_lo, s_hi = self.support
        p_lo, p_hi = self.plateau
        if not (s_lo <= p_lo <= p_hi <= s_hi):
            raise CounterexampleError("plateau must sit inside the support")
        if math.isfinite(s_lo) != math.isfinite(p_lo) and s_lo == p_lo:
            raise CounterexampleError("degenerate rising edge")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s_lo, s_hi = self.support
        p_lo, p_hi = self.plateau
        out = np.ones_like(t)
        if math.isfinite(s_lo):
            if p_lo > s_lo:
                rising = _smooth_step((t - s_lo) / (p_lo - s_lo), self.order)
            else:
                rising = (t >= s_lo).astype(float)
            out = np.minimum(out, rising)
        if math.isfinite(s_hi):
            if s_hi > p_hi:
                falling = _smooth_step((s_hi - t) / (s_hi - p_hi), self.order)
            else:
                falling = (t <= s_hi).astype(float)
            out = np.minimum(out, falling)
        return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# Plane-wave witnesses for constant-coefficient operators

@dataclass
class PlaneWaveWitness:
    u: GridFunction
    witness: ZeroWitness
    residual_inf: float
    non_membership: bool
    xi_fit_note: str


def plane_wave_witness(op, w: ZeroWitness, grid: CylinderGrid = CylinderGrid()) -> PlaneWaveWitness:
    """u(t, x) = e^{i(k0 t + xi0 x)} for a symbol zero (k0, xi0).

    u is an exact eigenfunction of P with eigenvalue the (full) symbol at
    the witness, so the PDE residual equals |symbol| there.  The mixed
    spectrum of the windowed sample has an essentially flat xi-profile,
    certifying that u lies outside every Gelfand-Shilov class while
    Pu = 0 is as regular as it gets.
    """
    res = abs(symbol_at(op, w.k, w.xi))
    if res > WITNESS_TOL:
        raise CounterexampleError(
            f"witness rejected: |symbol| = {res:.3e} exceeds {WITNESS_TOL}"
        )
    u = GridFunction.sample(grid, lambda t, x: np.exp(1j * (w.k * t + w.xi * x)))
    report = membership_report(u, 1.0, 1.0)
    if report.xi_fit is None:
        note = "xi-axis fit degenerate (flagged non-decaying)"
        non_member = True
    else:
        note = (f"xi-fit order {report.xi_fit.order:.2f}, "
                f"rate {report.xi_fit.rate:.3g}, flag {report.xi_fit.flag or 'none'}")
        non_member = not report.consistent
    return PlaneWaveWitness(u, ZeroWitness(w.k, w.xi, res), res, non_member, note)


# ---------------------------------------------------------------------------
# Averaged-symbol zeros of tube operators

@dataclass
class TubeWitness:
    t_nodes: np.ndarray
    v_profile: np.ndarray  # v(t); full witness is v(t) e^{i xi0 x}
    k0: int
    xi0: float
    periodicity_defect: float
    residual_inf: float


def tube_zero_witness(c: TrigPolynomial, q0: complex, k0: int, xi0: float,
                      M: int = 256) -> TubeWitness:
    """v(t, x) = exp(-int_0^t (i xi0 c(s) + q0) ds) e^{i xi0 x}.

    Requires k0 + c0 xi0 - i q0 = 0 (within 1e-9), which makes v
    2*pi-periodic in t; then (dt + c(t) dx + q0) v = 0 identically.
    """
    c0 = average(c)
    defect0 = abs(k0 + c0 * xi0 - 1j * q0)
    if defect0 > 1e-9:
        raise CounterexampleError(
            f"periodicity condition violated: |k0 + c0 xi0 - i q0| = {defect0:.3e}"
        )
    C, _ = zero_mean_antiderivative(c)
    ts = 2 * np.pi * np.arange(M) / M
    integral = np.array([1j * xi0 * (C(t) + c0 * t) + q0 * t for t in ts])
    v = np.exp(-integral)
    v_end = np.exp(-(1j * xi0 * (C(2 * np.pi) + c0 * 2 * np.pi) + q0 * 2 * np.pi))
    per_defect = abs(v_end - v[0])
    if per_defect > 1e-8:
        raise CounterexampleError(
            f"periodicity defect {per_defect:.3e} exceeds 1e-8"
        )
    # residual of (d/dt + i xi0 c(t) + q0) v via spectral differentiation
    dv = np.fft.ifft(1j * np.fft.fftfreq(M, d=1.0 / M) * np.fft.fft(v))
    theta = np.array([1j * xi0 * c(t) + q0 for t in ts])
    resid = float(np.abs(dv + theta * v).max())
    return TubeWitness(ts, v, k0, xi0, per_defect, resid)


# ---------------------------------------------------------------------------
# Sign-change slow-decay construction

@dataclass
class SignChangeResult:
    t0: float
    s0: float
    B: float
    delta: float
    mirrored: bool
    phi: GevreyCutoff
    psi: GevreyCutoff
    xi_values: np.ndarray
    u_profile: np.ndarray       # |u-hat(t0, xi)| over xi_values
    slope: float                # log-log fit over the slope window
    slope_window: tuple
    ode_residual_max: float
    fhat_membership: object     # MembershipReport of the synthesized f
    notes: tuple = ()


def _min_G(b: TrigPolynomial, mirrored: bool):
    """Extremum of G(t,s) = int_t^{t+s} b (min) or of int_{t-s}^t b (max for
    the mirrored branch), by dense grid search plus local refinement."""
    Bp, b0 = zero_mean_antiderivative(b)
    b0 = b0.real

    def G(t, s):
        if mirrored:
            return (Bp(t) - Bp(t - s)).real + b0 * s
        return (Bp(t + s) - Bp(t)).real + b0 * s

    n = 512
    ts = np.linspace(0, 2 * np.pi, n, endpoint=False)
    ss = np.linspace(0, 2 * np.pi, n)
    sign = -1.0 if mirrored else 1.0
    vals = np.array([[sign * G(t, s) for s in ss] for t in ts])
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    res = minimize(lambda z: sign * G(z[0], z[1]), [ts[i], ss[j]],
                   method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14})
    t_star, s_star = res.x
    return float(t_star), float(s_star), float(G(t_star, s_star)), G, b0


def sign_change_construction(a0: float, b: TrigPolynomial, q0: complex,
                             sigma1: float = 2.0, mu: float = 2.0,
                             delta: float = 0.3,
                             xi_values=None,
                             M: int = 1024, n_s: int = 4096,
                             grid: CylinderGrid = None) -> SignChangeResult:
    """Slow-decay solution for dt + (a0 + i b(t)) dx + q0 with b changing sign.

    With G(t,s) the running integral of b and B its minimum at (t0, s0), the
    right-hand side transform is

        f-hat(t,xi) = (e^{2 pi i(xi c0 - i q0)} - 1) e^{B xi} phi(t)
                      e^{-i xi a0 (t - t0)} e^{-q0 (t - t0)} psi(xi)

    and the unique fiber solution collapses to

        u-hat(t,xi) = e^{-i xi a0 (t - t0)} e^{-q0 (t - t0)} psi(xi)
                      int_0^{2pi} e^{xi (B - G(t,s))} phi(t + s) ds.

    A Laplace-point argument at (t0, s0) gives |u-hat(t0, xi)| >= K/sqrt(xi),
    so u-hat decays only polynomially while f-hat decays like e^{B xi}:
    verified here by the log-log slope over xi in [50, 2000], the fiberwise
    ODE residual, and a membership fit of the synthesized f.  For b0 < 0 the
    mirrored construction (backward integral, maximum of the running
    integral) is used.  Refuses mu <= 1 (the cutoff psi requires it).
    """
    from .classifier import classify_first_order_t, sign_change

    if mu <= 1:
        raise CounterexampleError(
            "construction requires mu > 1 (compact Gevrey cutoff in xi)"
        )
    if sigma1 <= 1:
        raise CounterexampleError("sigma1 must exceed 1")
    sc = sign_change(b)
    if sc != "changes_sign":
        raise CounterexampleError(f"b must change sign (got {sc!r})")
    b0 = average(b).real
    pre = classify_first_order_t(a0, b0, q0)
    if pre.verdict != "GH":
        raise CounterexampleError(
            "averaged operator already fails the constant-coefficient "
            "criterion; use tube_zero_witness instead"
        )
    mirrored = b0 < 0
    t_star, s_star, B, G, _ = _min_G(b, mirrored)
    # center of the cutoff phi: t0+s0 (forward) or t1-s1 (mirrored), wrapped
    center = (t_star - s_star) if mirrored else (t_star + s_star)
    center %= 2 * np.pi
    delta = min(delta, 0.9 * center, 0.9 * (2 * np.pi - center))
    if delta <= 0:
        raise CounterexampleError("cutoff support collapsed; adjust delta")
    phi = GevreyCutoff(sigma1,
                       (center - delta, center + delta),
                       (center - delta / 2, center + delta / 2))
    psi = GevreyCutoff(mu, (0.0, math.inf), (1.0, math.inf))
    c0 = complex(a0, b0)

    if xi_values is None:
        xi_values = np.concatenate([
            np.linspace(1.0, 49.0, 25),
            np.geomspace(50.0, 2000.0, 40),
        ])
    xi_values = np.asarray(xi_values, dtype=float)

    ts = 2 * np.pi * np.arange(M) / M
    ss = np.linspace(0, 2 * np.pi, n_s + 1)
    ds = ss[1] - ss[0]

    # t-independent pieces of the s-integral, evaluated once:
    Bp, _ = zero_mean_antiderivative(b)

    def _em_trapz(F, ds):
        """Trapezoid over the last axis with the Euler-Maclaurin endpoint
        correction h^2/12 (f'(a) - f'(b)); the integrand is periodic times
        e^{theta0 s}, so its endpoint slopes do not match and the plain
        rule would stall at O(h^2)."""
        T = _trapz(F, dx=ds, axis=-1)
        d_lo = (-11 * F[..., 0] + 18 * F[..., 1]
                - 9 * F[..., 2] + 2 * F[..., 3]) / (6 * ds)
        d_hi = (11 * F[..., -1] - 18 * F[..., -2]
                + 9 * F[..., -3] - 2 * F[..., -4]) / (6 * ds)
        return T - ds**2 / 12.0 * (d_hi - d_lo)

    def _trig_arr(f, tarr):
        acc = np.zeros_like(tarr, dtype=complex)
        for n, cf in f.coeffs:
            acc += cf * np.exp(1j * n * tarr)
        return acc

    if mirrored:
        tau = ts[:, None] - ss[None, :]
        Gm = (_trig_arr(Bp, ts).real[:, None] - _trig_arr(Bp, tau).real
              + b0 * ss[None, :])
        expo_base = Gm - B           # <= 0 at the Laplace point structure
        wrap_mask = tau < 0          # f-hat argument wrapped up by 2*pi
        wrap_sign = -1.0
    else:
        tau = ts[:, None] + ss[None, :]
        Gm = (_trig_arr(Bp, tau).real - _trig_arr(Bp, ts).real[:, None]
              + b0 * ss[None, :])
        expo_base = B - Gm
        wrap_mask = tau >= 2 * np.pi
        wrap_sign = 1.0
    cut = phi(tau % (2 * np.pi))

    def u_hat_column(xi):
        """Samples of u-hat(., xi) on the M-point t-grid.

        The right-hand side is the periodic extension of a compactly
        supported profile; where the integration argument t +/- s leaves
        [0, 2*pi) the extension contributes an extra constant factor
        e^{+/- 2*pi (i xi a0 + q0)} relative to the literal formula.
        """
        wrap = np.exp(wrap_sign * 2 * np.pi * (1j * xi * a0 + q0))
        weight = cut * np.where(wrap_mask, wrap, 1.0)
        integral = _em_trapz(np.exp(xi * expo_base) * weight, ds)
        pref = np.exp(-1j * xi * a0 * (ts - t_star) - q0 * (ts - t_star))
        return pref * float(psi(xi)) * integral

    def f_hat_column(xi):
        # the exponential amplitude has nonpositive exponent on [0, inf):
        # B < 0 in the forward branch, B > 0 mirrored (it is a maximum)
        if mirrored:
            pref = 1.0 - np.exp(-2j * np.pi * (xi * c0 - 1j * q0))
            amp = np.exp(-B * xi)
        else:
            pref = np.exp(2j * np.pi * (xi * c0 - 1j * q0)) - 1.0
            amp = np.exp(B * xi)
        return (pref * amp * phi(ts) * float(psi(xi))
                * np.exp(-1j * xi * a0 * (ts - t_star) - q0 * (ts - t_star)))

    # fiberwise ODE residual: dt u-hat + (i xi c(t) + q0) u-hat - f-hat
    freqs = 1j * np.fft.fftfreq(M, d=1.0 / M)
    bt = np.array([b(t).real for t in ts])
    ode_residual = 0.0
    skipped = 0
    profile = np.empty(xi_values.size)
    for col, xi in enumerate(xi_values):
        # the column oscillates in t at frequency ~ xi*a0; columns beyond
        # the grid's spectral resolution would only measure aliasing
        if abs(xi * a0) > M / 4:
            skipped += 1
            continue
        u_col = u_hat_column(xi)
        du = np.fft.ifft(freqs * np.fft.fft(u_col))
        theta = 1j * xi * (a0 + 1j * bt) + q0
        resid = np.abs(du + theta * u_col - f_hat_column(xi)).max()
        ode_residual = max(ode_residual, float(resid))
    # the reported profile is taken at the refined t0, not a grid node
    if mirrored:
        tau0 = t_star - ss
        row = (_trig_arr(Bp, np.array([t_star])).real[0]
               - _trig_arr(Bp, tau0).real + b0 * ss) - B
    else:
        tau0 = t_star + ss
        row = B - (_trig_arr(Bp, tau0).real
                   - _trig_arr(Bp, np.array([t_star])).real[0] + b0 * ss)
    cut0 = phi(tau0 % (2 * np.pi))
    mask0 = (tau0 < 0) if mirrored else (tau0 >= 2 * np.pi)
    for col, xi in enumerate(xi_values):
        wrap = np.exp(wrap_sign * 2 * np.pi * (1j * xi * a0 + q0))
        w0 = cut0 * np.where(mask0, wrap, 1.0)
        profile[col] = float(psi(xi)) * abs(
            _em_trapz(np.exp(xi * row) * w0, ds)
        )

    window = (50.0, 2000.0)
    mask = (xi_values >= window[0]) & (xi_values <= window[1]) & (profile > 0)
    notes = []
    if skipped:
        notes.append(
            f"ODE residual checked on {xi_values.size - skipped} of "
            f"{xi_values.size} xi columns (|xi a0| <= M/4 resolvability)"
        )
    if mask.sum() >= 2:
        lx, ly = np.log(xi_values[mask]), np.log(profile[mask])
        slope = float(np.polyfit(lx, ly, 1)[0])
    else:
        slope = math.nan
        notes.append("too few xi samples in the slope window")

    # membership of the synthesized right-hand side on a physical grid
    if grid is None:
        grid = CylinderGrid(M=256, N=512, X=12.0)
    F = np.zeros((grid.M, grid.N), dtype=complex)
    gts = grid.t_nodes()
    for i, xi in enumerate(grid.xi_values()):
        if mirrored:
            pref = 1.0 - np.exp(-2j * np.pi * (xi * c0 - 1j * q0))
            amp = np.exp(-B * xi)
        else:
            pref = np.exp(2j * np.pi * (xi * c0 - 1j * q0)) - 1.0
            amp = np.exp(B * min(xi, 700.0 / max(-B, 1e-12)))
        F[:, i] = (pref * amp * phi(gts) * float(psi(xi))
                   * np.exp(-1j * xi * a0 * (gts - t_star) - q0 * (gts - t_star)))
    f_phys = partial_x_inverse(grid, F)
    fm = membership_report(f_phys, max(sigma1, mu), mu)

    return SignChangeResult(
        t0=t_star, s0=s_star, B=B, delta=delta, mirrored=mirrored,
        phi=phi, psi=psi, xi_values=xi_values, u_profile=profile,
        slope=slope, slope_window=window, ode_residual_max=ode_residual,
        fhat_membership=fm, notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Laplace lower bound

@dataclass
class LaplaceCheck:
    lambdas: np.ndarray
    integrals: np.ndarray
    bounds: np.ndarray
    ratios: np.ndarray
    M: float
    all_hold: bool


def laplace_lower_bound_check(psi, s0: float, delta: float, lambdas,
                              n: int = 20001) -> LaplaceCheck:
    """Check int_{s0-d}^{s0+d} e^{-lam psi} ds >= (int_{-d}^{d} e^{-s^2} ds)
    * lam^{-1/2} * M^{-1/2}, with M = max psi(s)/(s-s0)^2 over the window.

    psi must be nonnegative with a zero of order greater than one at s0
    (psi(s0) = psi'(s0) = 0, checked by central differences)."""
    lambdas = np.asarray(lambdas, dtype=float)
    h = 1e-6
    if abs(psi(s0)) > 1e-10:
        raise CounterexampleError("psi(s0) must vanish")
    d1 = (psi(s0 + h) - psi(s0 - h)) / (2 * h)
    if abs(d1) > 1e-6:
        raise CounterexampleError(
            f"zero of order one detected: psi'(s0) = {d1:.3e}"
        )
    ss = np.linspace(s0 - delta, s0 + delta, n)
    vals = np.array([psi(s) for s in ss])
    if vals.min() < -1e-12:
        raise CounterexampleError("psi must be nonnegative on the window")
    off = ss != s0
    M = float(np.max(vals[off] / (ss[off] - s0) ** 2))
    gauss = float(_trapz(np.exp(-np.linspace(-delta, delta, n) ** 2),
                           np.linspace(-delta, delta, n)))
    integrals = np.array(
        [float(_trapz(np.exp(-lam * vals), ss)) for lam in lambdas]
    )
    bounds = gauss / np.sqrt(lambdas * M)
    ratios = integrals / bounds
    return LaplaceCheck(lambdas, integrals, bounds, ratios, M,
                        bool(np.all(ratios >= 1.0 - 1e-9)))
