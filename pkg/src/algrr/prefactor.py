"""Exact arithmetic on monomials ``q * pi^e`` with Gaussian-rational ``q``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Gaussian:
    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, re=0, im=0) -> Gaussian:
        return cls(Fraction(re), Fraction(im))

    def __mul__(self, o: Gaussian) -> Gaussian:
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def inverse(self) -> Gaussian:
        n = self.re**2 + self.im**2
        if n == 0:
            raise ZeroDivisionError("zero Gaussian rational")
        return Gaussian(self.re / n, -self.im / n)

    def __truediv__(self, o: Gaussian) -> Gaussian:
        return self * o.inverse()

    def __pow__(self, k: int) -> Gaussian:
        base = self if k >= 0 else self.inverse()
        out = Gaussian.of(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return {1: "i", -1: "-i"}.get(self.im, f"{self.im}*i")
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


I = Gaussian.of(0, 1)


@dataclass(frozen=True)
class PiMonomial:
    """``coeff * pi**pi_power``."""

    coeff: Gaussian
    pi_power: int = 0

    @classmethod
    def constant(cls, re=0, im=0) -> PiMonomial:
        return cls(Gaussian.of(re, im))

    def __mul__(self, o: PiMonomial) -> PiMonomial:
        return PiMonomial(self.coeff * o.coeff, self.pi_power + o.pi_power)

    def __truediv__(self, o: PiMonomial) -> PiMonomial:
        return PiMonomial(self.coeff / o.coeff, self.pi_power - o.pi_power)

    def __pow__(self, k: int) -> PiMonomial:
        return PiMonomial(self.coeff**k, self.pi_power * k)

    def canonical(self) -> str:
        """Render as ``q*(2*pi)^e``, with ``q = 1`` and ``q = -1`` abbreviated."""
        e = self.pi_power
        q = self.coeff / Gaussian.of(Fraction(2) ** e)
        if e == 0:
            return str(q)
        body = f"(2*pi)^{e}"
        if q == Gaussian.of(1):
            return body
        if q == Gaussian.of(-1):
            return "-" + body
        return f"{q}*{body}"


def two_pi_i() -> PiMonomial:
    return PiMonomial(Gaussian.of(0, 2), 1)


def two_pi() -> PiMonomial:
    return PiMonomial(Gaussian.of(2), 1)


def algebroid_prefactor(k: int) -> PiMonomial:
    """``(-1)^k (2 pi i)^{-k}``."""
    return PiMonomial.constant((-1) ** k) * two_pi_i() ** (-k)
