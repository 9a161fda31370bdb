"""Gaussian-rational coefficients"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Union

Scalar = Union[int, Fraction, "Coefficient"]


@dataclass(frozen=True)
class Coefficient:
    """An exact value re + i·im with rational parts"""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value: Scalar) -> "Coefficient":
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(Fraction(value))
        raise TypeError(f"Cannot use {value!r} as an exact coefficient")

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: Scalar) -> "Coefficient":
        other = Coefficient.of(other)
        return Coefficient(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "Coefficient":
        return Coefficient(-self.re, -self.im)

    def __sub__(self, other: Scalar) -> "Coefficient":
        return self + (-Coefficient.of(other))

    def __mul__(self, other: Scalar) -> "Coefficient":
        other = Coefficient.of(other)
        return Coefficient(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "Coefficient":
        return Coefficient(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|c|² as an exact rational"""
        return self.re * self.re + self.im * self.im

    def to_json(self) -> List[List[int]]:
        return [
            [self.re.numerator, self.re.denominator],
            [self.im.numerator, self.im.denominator],
        ]

    @classmethod
    def from_json(cls, obj: Any) -> "Coefficient":
        re_part, im_part = obj
        return cls(Fraction(*re_part), Fraction(*im_part))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Coefficient()
ONE = Coefficient(Fraction(1))
IMAG = Coefficient(Fraction(0), Fraction(1))
