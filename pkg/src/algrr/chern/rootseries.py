"""Lazy univariate power series with exact rational coefficients.

These are the per-root scalar series ``f(x)`` from which multiplicative
classes ``prod_i f(x_i)`` are built.  Coefficients are produced on demand,
so dividing out powers of ``x`` never loses precision at the top end.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable


class RootSeries:
    """A formal power series in one variable, evaluated lazily.

    ``rule(n, prefix)`` must return coefficient ``n`` given the already
    computed coefficients ``prefix[:n]``.  Coefficients are cached.
    """

    __slots__ = ("_rule", "_cache", "label")

    def __init__(self, rule: Callable[[int, list], Fraction], label: str = "?"):
        self._rule = rule
        self._cache: list[Fraction] = []
        self.label = label

    @classmethod
    def from_coefficients(cls, coeffs, label="poly"):
        fixed = [Fraction(c) for c in coeffs]
        return cls(lambda n, _: fixed[n] if n < len(fixed) else Fraction(0), label)

    @classmethod
    def from_function(cls, fn: Callable[[int], Fraction], label="?"):
        return cls(lambda n, _: Fraction(fn(n)), label)

    def coeff(self, n: int) -> Fraction:
        while len(self._cache) <= n:
            self._cache.append(Fraction(self._rule(len(self._cache), self._cache)))
        return self._cache[n]

    def coeffs(self, n: int) -> list[Fraction]:
        """First ``n`` coefficients (degrees 0..n-1)."""
        if n > 0:
            self.coeff(n - 1)
        return list(self._cache[:n])

    def valuation(self, bound: int) -> int | None:
        """Index of the first nonzero coefficient below ``bound``, else None."""
        for i in range(bound):
            if self.coeff(i) != 0:
                return i
        return None

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs(5))
        return f"RootSeries<{self.label}>[{head}, ...]"

    # ring operations -----------------------------------------------------

    def __mul__(self, other: RootSeries) -> RootSeries:
        if not isinstance(other, RootSeries):
            c = Fraction(other)
            return RootSeries(lambda n, _: c * self.coeff(n), f"{c}*{self.label}")
        a, b = self, other
        return RootSeries(
            lambda n, _: sum((a.coeff(i) * b.coeff(n - i) for i in range(n + 1)), Fraction(0)),
            f"({a.label})*({b.label})",
        )

    __rmul__ = __mul__

    def __add__(self, other: RootSeries) -> RootSeries:
        a, b = self, other
        return RootSeries(lambda n, _: a.coeff(n) + b.coeff(n), f"{a.label}+{b.label}")

    def __neg__(self) -> RootSeries:
        return self * -1

    def reflect(self) -> RootSeries:
        """The series ``f(-x)``."""
        src = self
        return RootSeries(lambda n, _: -src.coeff(n) if n % 2 else src.coeff(n), f"{src.label}(-x)")

    def shift(self, m: int) -> RootSeries:
        """``f(x) / x**m``; caller guarantees the first ``m`` coefficients vanish."""
        src = self
        return RootSeries(lambda n, _: src.coeff(n + m), f"{src.label}/x^{m}")

    def reciprocal(self) -> RootSeries:
        a0 = self.coeff(0)
        if a0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        src = self

        def rule(n, prev):
            if n == 0:
                return 1 / a0
            return -sum((src.coeff(i) * prev[n - i] for i in range(1, n + 1)), Fraction(0)) / a0

        return RootSeries(rule, f"1/({src.label})")

    def log(self) -> RootSeries:
        """``log(f / f(0))``, via ``(log f)' = f'/f``; constant term 0."""
        a0 = self.coeff(0)
        if a0 == 0:
            raise ZeroDivisionError("log needs a nonzero constant term")
        src = self
        inv = self.reciprocal()

        def rule(n, _):
            if n == 0:
                return Fraction(0)
            # n * b_n = sum_{i=1..n} i a_i * inv_{n-i}
            s = sum((i * src.coeff(i) * inv.coeff(n - i) for i in range(1, n + 1)), Fraction(0))
            return s / n

        return RootSeries(rule, f"log({src.label})")


# standard per-root series ------------------------------------------------


def bernoulli_plus(n: int, _cache: list = [Fraction(1)]) -> Fraction:
    """Bernoulli numbers with ``B_1 = +1/2``.

    Uses the recurrence ``sum_{j<=m} C(m+1, j) B_j = 0`` (which yields
    ``B_1 = -1/2``) and flips the sign of ``B_1`` at the end.
    """
    while len(_cache) <= n:
        m = len(_cache)
        s = sum((comb(m + 1, j) * _cache[j] for j in range(m)), Fraction(0))
        _cache.append(-s / (m + 1))
    return -_cache[1] if n == 1 else _cache[n]


def exp_series(scale=1) -> RootSeries:
    """``exp(scale * x)``."""
    s = Fraction(scale)
    return RootSeries.from_function(lambda n: s**n / factorial(n), f"exp({s}x)")


def todd_series() -> RootSeries:
    """``x / (1 - exp(-x)) = sum B_n^+ x^n / n!``."""
    return RootSeries.from_function(lambda n: bernoulli_plus(n) / factorial(n), "td")


def one_minus_exp() -> RootSeries:
    """``1 - exp(x)``; has a simple zero at the origin."""
    return RootSeries.from_function(
        lambda n: Fraction(0) if n == 0 else Fraction(-1, factorial(n)), "1-exp"
    )


def one_plus_x() -> RootSeries:
    return RootSeries.from_coefficients([1, 1], "1+x")


def identity_x() -> RootSeries:
    return RootSeries.from_coefficients([0, 1], "x")


def constant_one() -> RootSeries:
    return RootSeries.from_coefficients([1], "1")
