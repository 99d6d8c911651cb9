"""Executable combinatorial and analytic lemmas used as independent test oracles.

Everything here is deliberately simple and self-contained: enumeration over
partition multi-indices, log-domain factorial comparisons, and a fixed-step
Runge-Kutta integrator.  The rest of the library is validated against these.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .symbols import TrigPolynomial


@dataclass(frozen=True)
class PartitionMultiIndex:
    """Multi-index tau = (tau_1..tau_N) with sum_j j*tau_j = N."""

    N: int
    tau: tuple

    def __post_init__(self):
        if sum((j + 1) * t for j, t in enumerate(self.tau)) != self.N:
            raise ValueError(f"tau {self.tau} does not weight-sum to {self.N}")

    def size(self) -> int:
        """|tau| = sum of the entries."""
        return sum(self.tau)


def enumerate_delta(N: int):
    """All tau in N_0^N with tau_1 + 2 tau_2 + ... + N tau_N = N, lexicographic.

    The count equals the number of integer partitions of N.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    out = []

    def rec(j, remaining, prefix):
        # prefix holds tau_1..tau_{j-1}; part sizes j..N still available.
        if j > N:
            if remaining == 0:
                out.append(tuple(prefix) + (0,) * (N - len(prefix)))
            return
        for t in range(remaining // j + 1):
            rec(j + 1, remaining - j * t, prefix + [t])

    rec(1, N, [])
    out.sort()
    return [PartitionMultiIndex(N, tau) for tau in out]


def faa_di_bruno_exp(f: TrigPolynomial, N: int, t: float) -> complex:
    """N-th derivative of e^{f(t)} via the partition-sum formula."""
    if N < 1:
        raise ValueError("N must be >= 1")
    derivs = [f.derivative(ell)(t) for ell in range(N + 1)]
    total = 0j
    for idx in enumerate_delta(N):
        term = Fraction(math.factorial(N))
        prod = 1 + 0j
        for ell, tau_ell in enumerate(idx.tau, start=1):
            term /= math.factorial(tau_ell)
            if tau_ell:
                prod *= (derivs[ell] / math.factorial(ell)) ** tau_ell
        total += float(term) * prod
    return cmath.exp(f(t)) * total


def check_delta_identity(N: int, R):
    """sum over Delta(N) of (|tau|!/tau!) R^|tau| against R(1+R)^(N-1).

    Exact in rational arithmetic when R is a Fraction or int; floating
    comparison (1e-9) otherwise.  Returns (lhs, rhs, equal).
    """
    exact = isinstance(R, (int, Fraction)) and not isinstance(R, bool)
    Rv = Fraction(R) if exact else float(R)
    lhs = Fraction(0) if exact else 0.0
    for idx in enumerate_delta(N):
        coeff = Fraction(math.factorial(idx.size()))
        for tau_ell in idx.tau:
            coeff /= math.factorial(tau_ell)
        if exact:
            lhs += coeff * Rv ** idx.size()
        else:
            lhs += float(coeff) * Rv ** idx.size()
    rhs = Rv * (1 + Rv) ** (N - 1)
    if exact:
        return lhs, rhs, lhs == rhs
    return lhs, rhs, abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))


def check_factorial_bound(idx: PartitionMultiIndex, sigma: float) -> bool:
    """|tau|!^sigma * prod_l l!^((sigma-1) tau_l) <= |tau|! * N!^(sigma-1).

    Compared in log-gamma to stay finite up to N ~ 60.
    """
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    lfac = lambda n: math.lgamma(n + 1)
    size = idx.size()
    lhs = sigma * lfac(size) + (sigma - 1) * sum(
        tau_ell * lfac(ell) for ell, tau_ell in enumerate(idx.tau, start=1)
    )
    rhs = lfac(size) + (sigma - 1) * lfac(idx.N)
    return lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


def check_exp_bound(x: float, L: float, mu: float, s: int) -> bool:
    """e^{-L|x|^(1/mu)} |x|^s <= (mu/L)^(mu s) * s!^mu, in the log domain."""
    if L <= 0 or mu <= 0 or s < 0:
        raise ValueError("need L, mu > 0 and s >= 0")
    ax = abs(x)
    if ax == 0.0:
        return True
    lhs = -L * ax ** (1.0 / mu) + s * math.log(ax)
    rhs = mu * s * math.log(mu / L) + mu * math.lgamma(s + 1)
    return lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


def reciprocal_derivative(g: TrigPolynomial, n: int, t: float) -> complex:
    """n-th derivative of 1/g(t) via the binomial power-derivative identity.

    Requires g nonvanishing on the circle (checked on a sample grid).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    grid = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
    if min(abs(g(ti)) for ti in grid) < 1e-12:
        raise ValueError("g vanishes (or nearly vanishes) on the circle")
    gt = g(t)
    if n == 0:
        return 1.0 / gt
    total = 0j
    g_power = TrigPolynomial.constant(1.0)
    for k in range(1, n + 1):
        g_power = g_power * g  # g^k
        total += (
            (-1) ** k
            * math.comb(n + 1, k + 1)
            * g_power.derivative(n)(t)
            / gt ** (k + 1)
        )
    return total


def rk_ode_oracle(theta, g, u0: complex, steps: int = 4096):
    """Classical RK4 for u' + theta(t) u = g(t) on [0, 2pi], fixed step.

    ``theta`` and ``g`` are callables (trig polynomials evaluate exactly at
    the half-steps).  Returns (t_nodes, u_values) with steps+1 points.
    """
    h = 2 * math.pi / steps
    ts = np.arange(steps + 1) * h
    us = np.empty(steps + 1, dtype=complex)
    us[0] = u0
    rhs = lambda t, u: g(t) - theta(t) * u
    for i in range(steps):
        t, u = ts[i], us[i]
        k1 = rhs(t, u)
        k2 = rhs(t + h / 2, u + h / 2 * k1)
        k3 = rhs(t + h / 2, u + h / 2 * k2)
        k4 = rhs(t + h, u + h * k3)
        us[i + 1] = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return ts, us
