"""Exact Gaussian rationals.

Real values stay plain ``Fraction`` objects so the common path pays no
overhead; ``Gaussian`` only appears once an imaginary part is nonzero.
"""
from fractions import Fraction
from numbers import Rational

__all__ = ["Gaussian", "I", "make", "as_coeff", "re_im", "render_coeff"]


def make(re, im=0):
    """Return the reduced coefficient ``re + im*i``."""
    re = Fraction(re)
    if not im:
        return re
    return Gaussian(re, Fraction(im))


def re_im(c):
    if isinstance(c, Gaussian):
        return c.re, c.im
    return Fraction(c), Fraction(0)


def as_coeff(x):
    if isinstance(x, (Gaussian, Fraction)):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, complex):
        raise TypeError("floating complex numbers are not exact coefficients")
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class Gaussian:
    """a + b i with a, b rational and b != 0 (otherwise a Fraction is used)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        return render_coeff(self)

    def __hash__(self):
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __bool__(self):
        return True

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, Gaussian):
            return make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return Gaussian(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Gaussian):
            return make(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            if not other:
                return Fraction(0)
            return Gaussian(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gaussian(self.re / other, self.im / other)
        if isinstance(other, Gaussian):
            n = other.re * other.re + other.im * other.im
            return self * other.conjugate() / n
        return NotImplemented

    def __rtruediv__(self, other):
        n = self.re * self.re + self.im * self.im
        return Fraction(other) * self.conjugate() / n


I = Gaussian(Fraction(0), Fraction(1))


def _frac(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_coeff(c):
    re, im = re_im(c)
    if not im:
        return _frac(re)
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    else:
        ims = _frac(im) + "*i"
    if not re:
        return ims
    sep = "-" if ims.startswith("-") else "+"
    return f"({_frac(re)}{sep}{ims.lstrip('-')})"
