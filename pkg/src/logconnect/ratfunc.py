"""Exact multivariate rational functions over the Gaussian rationals.

Entries of logarithmic connection matrices live here.  Coefficients are
always kept in sympy's ``QQ_I`` domain; floating-point inputs are converted
to their exact dyadic value and the fraction carries an ``exact`` flag so
comparisons can fall back to a tolerance when the provenance was inexact.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp
from sympy.polys.domains import QQ_I

__all__ = ["RationalFunction", "to_exact_scalar", "is_exact_input"]


def is_exact_input(value) -> bool:
    """True when ``value`` carries no floating-point contamination."""
    if isinstance(value, (int, Fraction)):
        return True
    if isinstance(value, (float, complex)):
        return float(value.real).is_integer() and float(getattr(value, "imag", 0.0)).is_integer()
    if isinstance(value, sp.Basic):
        return not value.has(sp.Float)
    return False


def to_exact_scalar(value) -> sp.Expr:
    """Convert a scalar to an exact sympy number (floats become dyadic rationals)."""
    if isinstance(value, sp.Basic):
        if value.has(sp.Float):
            c = complex(value)
            return sp.Rational(Fraction(c.real)) + sp.Rational(Fraction(c.imag)) * sp.I
        return value
    if isinstance(value, complex):
        return sp.Rational(Fraction(value.real)) + sp.Rational(Fraction(value.imag)) * sp.I
    if isinstance(value, float):
        return sp.Rational(Fraction(value))
    if isinstance(value, (int, Fraction)):
        return sp.Rational(value)
    raise TypeError(f"cannot interpret {value!r} as a complex scalar")


def _monic(num: sp.Poly, den: sp.Poly):
    dom = den.domain
    lc = dom.convert(den.LC())
    if lc != dom.one:
        inv = dom.quo(dom.one, lc)
        num = num.mul_ground(inv)
        den = den.mul_ground(inv)
    return num, den


class RationalFunction:
    """A normalized fraction of polynomials over QQ_I in shared chart variables."""

    __slots__ = ("num", "den", "gens", "exact")

    def __init__(self, num: sp.Poly, den: sp.Poly, exact: bool = True, _normalized: bool = False):
        if den.is_zero:
            raise ZeroDivisionError("denominator is identically zero")
        if not _normalized:
            if num.is_zero:
                den = sp.Poly(1, *den.gens, domain=den.domain)
            elif den.is_ground:
                lc = den.domain.convert(den.LC())
                if lc != den.domain.one:
                    num = num.mul_ground(den.domain.quo(den.domain.one, lc))
                den = sp.Poly(1, *den.gens, domain=den.domain)
            else:
                g = num.gcd(den)
                if not g.is_one:
                    num = num.quo(g)
                    den = den.quo(g)
                num, den = _monic(num, den)
        self.num = num
        self.den = den
        self.gens = num.gens
        self.exact = exact

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_expr(cls, expr, gens, exact=None) -> "RationalFunction":
        expr = sp.sympify(expr)
        if exact is None:
            exact = not expr.has(sp.Float)
        if expr.has(sp.Float):
            expr = expr.replace(
                lambda e: e.is_Float, lambda e: sp.Rational(Fraction(float(e)))
            )
        n, d = sp.fraction(sp.together(expr))
        num = sp.Poly(n, *gens, domain=QQ_I)
        den = sp.Poly(d, *gens, domain=QQ_I)
        return cls(num, den, exact=exact)

    @classmethod
    def constant(cls, value, gens, exact=None) -> "RationalFunction":
        if exact is None:
            exact = is_exact_input(value)
        c = to_exact_scalar(value)
        num = sp.Poly(c, *gens, domain=QQ_I)
        den = sp.Poly(1, *gens, domain=QQ_I)
        return cls(num, den, exact=exact, _normalized=True)

    @classmethod
    def zero(cls, gens) -> "RationalFunction":
        return cls.constant(0, gens)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction.constant(other, self.gens)

    def __add__(self, other):
        o = self._coerce(other)
        exact = self.exact and o.exact
        if self.num.is_zero:
            return o if o.exact == exact else \
                RationalFunction(o.num, o.den, exact=exact, _normalized=True)
        if o.num.is_zero:
            return self if self.exact == exact else \
                RationalFunction(self.num, self.den, exact=exact, _normalized=True)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den, exact=exact)
        return RationalFunction(
            self.num * o.den + o.num * self.den, self.den * o.den, exact=exact
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, exact=self.exact, _normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den,
                                exact=self.exact and o.exact)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num,
                                exact=self.exact and o.exact)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # -- calculus and substitution --------------------------------------

    def diff(self, var) -> "RationalFunction":
        """Exact partial derivative with respect to one chart variable."""
        dn = self.num.diff(var)
        dd = self.den.diff(var)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den,
                                exact=self.exact)

    def subst_power(self, var, nu: int) -> "RationalFunction":
        """Substitute ``var -> var**nu`` in numerator and denominator."""
        num = sp.Poly(self.num.as_expr().subs(var, var ** nu), *self.gens, domain=QQ_I)
        den = sp.Poly(self.den.as_expr().subs(var, var ** nu), *self.gens, domain=QQ_I)
        return RationalFunction(num, den, exact=self.exact)

    def eval(self, values: dict) -> complex:
        """Numeric evaluation; ``values`` maps chart symbols to complex numbers."""
        pt = [complex(values[g]) for g in self.gens]
        n = complex(self.num.as_expr().subs(dict(zip(self.gens, pt))))
        d = complex(self.den.as_expr().subs(dict(zip(self.gens, pt))))
        return n / d

    def as_expr(self) -> sp.Expr:
        return self.num.as_expr() / self.den.as_expr()

    # -- predicates -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_zero_within(self, tol: float) -> bool:
        """Zero test honoring inexact provenance: coefficient magnitudes below tol."""
        if self.num.is_zero:
            return True
        if self.exact:
            return False
        return max(abs(complex(c)) for c in self.num.coeffs()) < tol

    def equals(self, other, tol: float = 1e-12) -> bool:
        o = self._coerce(other)
        if self.exact and o.exact:
            # normalized form is canonical, so compare structurally
            return self.num == o.num and self.den == o.den
        return (self - o).is_zero_within(tol)

    def __eq__(self, other):
        if not isinstance(other, (RationalFunction, int, float, complex, sp.Basic)):
            return NotImplemented
        return (self - self._coerce(other)).is_zero

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.as_expr()})"
