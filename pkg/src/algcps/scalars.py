"""
Exact commutative rings of scalar coefficients
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ScalarSyntaxError

RATIONAL_PATTERN = re.compile(r"^(-?\d+)(?:/(\d+))?$")


@dataclass(frozen=True)
class GaussianRational:
    """Complex number with rational real and imaginary parts"""
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def _coerce(self, other) -> "GaussianRational | None":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(Fraction(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        # A real Gaussian rational hashes like the rational it equals.
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, GaussianRational]

ZERO = Fraction(0)
ONE = Fraction(1)


class Ring:
    """A carrier for scalars: parsing, coercion and the two constants."""

    name = "abstract"

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    def coerce(self, value) -> Scalar:
        raise NotImplementedError

    def parse(self, text: str) -> Scalar:
        raise NotImplementedError

    def __repr__(self):
        return f"<Ring {self.name}>"


class RationalRing(Ring):
    """Arbitrary-precision rationals in lowest terms."""

    name = "rational"

    def coerce(self, value) -> Scalar:
        if isinstance(value, GaussianRational):
            if value.im != 0:
                raise ScalarSyntaxError(format_scalar(value), self.name)
            return value.re
        return Fraction(value)

    def parse(self, text: str) -> Scalar:
        match = RATIONAL_PATTERN.match(text.strip())
        if not match:
            raise ScalarSyntaxError(text, self.name)
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise ScalarSyntaxError(text, self.name)
        return Fraction(int(numerator), int(denominator or 1))


class GaussianRing(Ring):
    """Pairs of rationals read as real and imaginary parts."""

    name = "gaussian"

    def coerce(self, value) -> Scalar:
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value))

    def parse(self, text: str) -> Scalar:
        body = text.strip().replace(" ", "")
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        if not body:
            raise ScalarSyntaxError(text, self.name)
        if not body.endswith("i"):
            return GaussianRational(RATIONALS.parse(body))

        body = body[:-1]
        split = max(body.rfind("+"), body.rfind("-"))
        if split > 0:
            real_text, imag_text = body[:split], body[split:]
        else:
            real_text, imag_text = "0", body
        if imag_text.startswith("+"):
            imag_text = imag_text[1:]
        if imag_text in ("", "-"):
            imag_text += "1"
        try:
            return GaussianRational(RATIONALS.parse(real_text), RATIONALS.parse(imag_text))
        except ScalarSyntaxError:
            raise ScalarSyntaxError(text, self.name) from None


RATIONALS = RationalRing()
GAUSSIAN_RATIONALS = GaussianRing()

RINGS: dict[str, Ring] = {
    RATIONALS.name: RATIONALS,
    GAUSSIAN_RATIONALS.name: GAUSSIAN_RATIONALS,
}


def get_ring(name: str) -> Ring:
    """Look up a scalar carrier by name."""
    try:
        return RINGS[name]
    except KeyError:
        raise ScalarSyntaxError(name, "ring") from None


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def eq(a: Scalar, b: Scalar) -> bool:
    return a == b


def is_zero(a: Scalar) -> bool:
    return a == 0


def is_one(a: Scalar) -> bool:
    return a == 1


def is_complex(a: Scalar) -> bool:
    return isinstance(a, GaussianRational) and a.im != 0


def format_scalar(a: Scalar) -> str:
    """
    Render a scalar in its textual form.

    Rationals print as n or n/m; Gaussian rationals with a nonzero imaginary
    part print as a+bi (or bi when the real part is zero).
    """
    if isinstance(a, GaussianRational):
        if a.im == 0:
            return str(a.re)
        imag = "" if a.im == 1 else "-" if a.im == -1 else str(a.im)
        if a.re == 0:
            return f"{imag}i"
        sign = "" if a.im < 0 else "+"
        return f"{a.re}{sign}{imag}i"
    return str(Fraction(a))
