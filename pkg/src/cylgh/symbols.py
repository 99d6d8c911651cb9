"""Exact coefficient arithmetic: complex polynomials, trigonometric polynomials,
and operator descriptions on the cylinder T^1 x R.

Conventions
-----------
Operators are described through their symbols in the D-convention, D = -i*d/dx,
so that applying the operator to e^{i(k t + xi x)} multiplies it by the symbol
evaluated at (k, xi).  For split constant-coefficient operators the symbol is
p(xi) + q(k).  For the first-order operator c1*dx + c2*dt + c3 we work with the
normalized symbol c1*xi + c2*k - i*c3 (the full symbol is i times that).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field


class SymbolError(ValueError):
    """Raised when a symbol request is not well defined for the operator."""


def _trim(coeffs):
    c = list(map(complex, coeffs))
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class ComplexPolynomial:
    """Complex polynomial in one real variable, coefficients degree-ascending.

    The coefficient list is normalized on construction: trailing zeros are
    dropped, so ``degree()`` is the index of the last nonzero coefficient
    (-1 for the zero polynomial).
    """

    coeffs: tuple = ()

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", tuple(_trim(coeffs)))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> complex:
        # Horner evaluation.
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "ComplexPolynomial":
        return ComplexPolynomial([n * c for n, c in enumerate(self.coeffs)][1:])

    def real_part(self) -> "ComplexPolynomial":
        return ComplexPolynomial([c.real for c in self.coeffs])

    def imag_part(self) -> "ComplexPolynomial":
        return ComplexPolynomial([c.imag for c in self.coeffs])

    def shifted(self, constant) -> "ComplexPolynomial":
        """Return self + constant."""
        c = list(self.coeffs) or [0j]
        c[0] += constant
        return ComplexPolynomial(c)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def constant_value(self) -> complex:
        return self.coeffs[0] if self.coeffs else 0j


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite Fourier series sum_n c_n e^{i n t} on the circle.

    Stored as a map frequency -> complex amplitude; zero amplitudes are
    dropped on construction so equality of stored coefficients is exact.
    """

    coeffs: tuple = ()  # tuple of (n, complex) pairs, sorted by n

    def __init__(self, coeffs=()):
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = coeffs
        d = {}
        for n, c in items:
            c = complex(c)
            if c != 0:
                d[int(n)] = d.get(int(n), 0j) + c
        object.__setattr__(
            self, "coeffs", tuple(sorted((n, c) for n, c in d.items() if c != 0))
        )

    @classmethod
    def constant(cls, value) -> "TrigPolynomial":
        return cls({0: value})

    @classmethod
    def cosine(cls, n=1, amplitude=1.0) -> "TrigPolynomial":
        return cls({n: amplitude / 2, -n: amplitude / 2})

    @classmethod
    def sine(cls, n=1, amplitude=1.0) -> "TrigPolynomial":
        return cls({n: amplitude / (2j), -n: -amplitude / (2j)})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(n == 0 for n, _ in self.coeffs)

    def is_real_valued(self) -> bool:
        d = self.as_dict()
        return all(d.get(-n, 0j) == c.conjugate() for n, c in d.items())

    def bandwidth(self) -> int:
        return max((abs(n) for n, _ in self.coeffs), default=0)

    def __call__(self, t):
        acc = 0j
        for n, c in self.coeffs:
            acc += c * cmath.exp(1j * n * t)
        return acc

    def derivative(self, order: int = 1) -> "TrigPolynomial":
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        return TrigPolynomial({n: c * (1j * n) ** order for n, c in self.coeffs})

    def __add__(self, other):
        d = self.as_dict()
        for n, c in other.coeffs:
            d[n] = d.get(n, 0j) + c
        return TrigPolynomial(d)

    def __mul__(self, other):
        if isinstance(other, TrigPolynomial):
            d = {}
            for n1, c1 in self.coeffs:
                for n2, c2 in other.coeffs:
                    d[n1 + n2] = d.get(n1 + n2, 0j) + c1 * c2
            return TrigPolynomial(d)
        return TrigPolynomial({n: c * other for n, c in self.coeffs})

    __rmul__ = __mul__

    def scaled(self, factor) -> "TrigPolynomial":
        return TrigPolynomial({n: c * factor for n, c in self.coeffs})


@dataclass(frozen=True)
class ConstSplit:
    """Operator with symbol p(xi) + q(k); p, q in the D-convention."""

    p: ComplexPolynomial
    q: ComplexPolynomial

    def __post_init__(self):
        if not isinstance(self.p, ComplexPolynomial):
            object.__setattr__(self, "p", ComplexPolynomial(self.p))
        if not isinstance(self.q, ComplexPolynomial):
            object.__setattr__(self, "q", ComplexPolynomial(self.q))


@dataclass(frozen=True)
class FirstOrderT:
    """The operator c1*dx + c2*dt + c3 with constant complex coefficients."""

    c1: complex
    c2: complex
    c3: complex

    def __post_init__(self):
        object.__setattr__(self, "c1", complex(self.c1))
        object.__setattr__(self, "c2", complex(self.c2))
        object.__setattr__(self, "c3", complex(self.c3))


@dataclass(frozen=True)
class TubeT:
    """The tube-type operator dt + (a(t) + i b(t)) dx + q(t), a and b real-valued."""

    a: TrigPolynomial
    b: TrigPolynomial
    q: TrigPolynomial

    def __post_init__(self):
        if not self.a.is_real_valued():
            raise SymbolError("tube coefficient a(t) must be real-valued")
        if not self.b.is_real_valued():
            raise SymbolError("tube coefficient b(t) must be real-valued")


OperatorSpec = (ConstSplit, FirstOrderT, TubeT)


def first_order_t(a: float, b: float, c: complex) -> FirstOrderT:
    """dt + (a + i b) dx + c as a FirstOrderT (c1 = a+ib, c2 = 1, c3 = c)."""
    return FirstOrderT(complex(a, b), 1.0, c)


def first_order_x(a: float, b: float, c: complex) -> FirstOrderT:
    """dx + (a + i b) dt + c as a FirstOrderT (c1 = 1, c2 = a+ib, c3 = c)."""
    return FirstOrderT(1.0, complex(a, b), c)


def symbol_at(op, k: int, xi: float) -> complex:
    """Evaluate the operator's symbol at integer frequency k and real xi.

    ConstSplit -> p(xi) + q(k).  FirstOrderT -> c1*xi + c2*k - i*c3, the
    i^{-1}-normalized symbol whose real zeros on Z x R obstruct global
    hypoellipticity.  Tube operators with non-constant coefficients have no
    pointwise symbol; use the fiberwise solver instead.
    """
    if isinstance(op, ConstSplit):
        return op.p(xi) + op.q(k)
    if isinstance(op, FirstOrderT):
        return op.c1 * xi + op.c2 * k - 1j * op.c3
    if isinstance(op, TubeT):
        if op.a.is_constant() and op.b.is_constant() and op.q.is_constant():
            a0 = op.a(0.0).real
            b0 = op.b(0.0).real
            q0 = op.q(0.0)
            return complex(a0, b0) * xi + k - 1j * q0
        raise SymbolError(
            "symbol not pointwise-defined for tube operators with non-constant "
            "coefficients; solve fiberwise via the solver module"
        )
    raise TypeError(f"not a supported operator type: {op!r}")


def average(f: TrigPolynomial) -> complex:
    """Mean value over the circle: the zero-frequency coefficient, exact."""
    return f.as_dict().get(0, 0j)


def zero_mean_antiderivative(f: TrigPolynomial):
    """Periodic antiderivative of f minus its mean, pinned at zero at t=0.

    Returns (F, linear_coefficient) where F is the trig polynomial with
    F(0) = 0 and F'(t) = f(t) - average(f); the removed linear part is
    average(f) * t.  Coefficients are c_n / (i n) exactly.
    """
    f0 = average(f)
    d = {}
    for n, c in f.coeffs:
        if n != 0:
            d[n] = c / (1j * n)
    d[0] = -sum(d.values())
    return TrigPolynomial(d), f0


def eval_trig(f: TrigPolynomial, t: float) -> complex:
    return f(t)


def eval_deriv(f: TrigPolynomial, order: int, t: float) -> complex:
    return f.derivative(order)(t)
