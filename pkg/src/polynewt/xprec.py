"""Extended-precision scalars: double-double, quad-double, and complex.

Values are immutable; all operations are pure functions, so scalars can be
shared freely across threads.  Double-double carries ~31 significant decimal
digits (unit roundoff 2^-104), quad-double ~63 digits (2^-209).

Text rendering is full-precision decimal: 32 significant digits for dd,
64 for qd.  Parsing goes through an exact rational value and peels off
binary64 components by repeated subtraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from . import _eft


class DomainError(ArithmeticError):
    """Raised for division by zero and square roots of negative values."""


def two_sum(a: float, b: float) -> tuple[float, float]:
    """s = fl(a+b), e such that s + e = a + b exactly."""
    return _eft.two_sum(a, b)


def two_prod(a: float, b: float) -> tuple[float, float]:
    """p = fl(a*b), e such that p + e = a * b exactly."""
    return _eft.two_prod(a, b)


def _coerce_dd(x):
    if isinstance(x, DoubleDouble):
        return x.comps
    if isinstance(x, (int, float)):
        return (float(x), 0.0)
    return None


def _coerce_qd(x):
    if isinstance(x, QuadDouble):
        return x.comps
    if isinstance(x, (int, float)):
        return (float(x), 0.0, 0.0, 0.0)
    return None


class DoubleDouble:
    """Unevaluated sum of two binary64 values, non-overlapping."""

    __slots__ = ("comps",)

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        self.comps = _eft.quick_two_sum(float(hi), float(lo))

    @classmethod
    def _raw(cls, comps) -> "DoubleDouble":
        self = object.__new__(cls)
        self.comps = comps
        return self

    @property
    def hi(self) -> float:
        return self.comps[0]

    @property
    def lo(self) -> float:
        return self.comps[1]

    def __add__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        return DoubleDouble._raw(_eft.dd_add(self.comps, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        return DoubleDouble._raw(_eft.dd_sub(self.comps, o))

    def __rsub__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        return DoubleDouble._raw(_eft.dd_sub(o, self.comps))

    def __mul__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        return DoubleDouble._raw(_eft.dd_mul(self.comps, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        if o[0] == 0.0 and o[1] == 0.0:
            raise DomainError("double-double division by zero")
        return DoubleDouble._raw(_eft.dd_div(self.comps, o))

    def __rtruediv__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        if self.comps[0] == 0.0 and self.comps[1] == 0.0:
            raise DomainError("double-double division by zero")
        return DoubleDouble._raw(_eft.dd_div(o, self.comps))

    def __neg__(self):
        return DoubleDouble._raw(_eft.dd_neg(self.comps))

    def __abs__(self):
        return -self if self.comps[0] < 0.0 else self

    def __eq__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        return self.comps == o

    def __lt__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        d = _eft.dd_sub(self.comps, o)
        return d[0] < 0.0

    def __le__(self, other):
        o = _coerce_dd(other)
        if o is None:
            return NotImplemented
        d = _eft.dd_sub(self.comps, o)
        return d[0] <= 0.0

    def __gt__(self, other):
        return not (self <= other)

    def __ge__(self, other):
        return not (self < other)

    def __hash__(self):
        return hash(self.comps)

    def __float__(self):
        return self.comps[0] + self.comps[1]

    def __repr__(self):
        return f"DoubleDouble({self.comps[0]!r}, {self.comps[1]!r})"

    def __str__(self):
        return render_decimal(self)

    def sqrt(self) -> "DoubleDouble":
        if self.comps[0] < 0.0:
            raise DomainError("square root of negative double-double")
        if self.comps[0] == 0.0:
            return DoubleDouble._raw((0.0, 0.0))
        return DoubleDouble._raw(_eft.dd_sqrt(self.comps))


class QuadDouble:
    """Unevaluated sum of four binary64 values, decreasing magnitude."""

    __slots__ = ("comps",)

    def __init__(self, c0: float = 0.0, c1: float = 0.0, c2: float = 0.0, c3: float = 0.0):
        self.comps = _eft.renorm5(float(c0), float(c1), float(c2), float(c3), 0.0)

    @classmethod
    def _raw(cls, comps) -> "QuadDouble":
        self = object.__new__(cls)
        self.comps = comps
        return self

    def __add__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        return QuadDouble._raw(_eft.qd_add(self.comps, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        return QuadDouble._raw(_eft.qd_sub(self.comps, o))

    def __rsub__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        return QuadDouble._raw(_eft.qd_sub(o, self.comps))

    def __mul__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        return QuadDouble._raw(_eft.qd_mul(self.comps, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        if all(c == 0.0 for c in o):
            raise DomainError("quad-double division by zero")
        return QuadDouble._raw(_eft.qd_div(self.comps, o))

    def __rtruediv__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        if all(c == 0.0 for c in self.comps):
            raise DomainError("quad-double division by zero")
        return QuadDouble._raw(_eft.qd_div(o, self.comps))

    def __neg__(self):
        return QuadDouble._raw(_eft.qd_neg(self.comps))

    def __abs__(self):
        return -self if self.comps[0] < 0.0 else self

    def __eq__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        return self.comps == o

    def __lt__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        return _eft.qd_sub(self.comps, o)[0] < 0.0

    def __le__(self, other):
        o = _coerce_qd(other)
        if o is None:
            return NotImplemented
        return _eft.qd_sub(self.comps, o)[0] <= 0.0

    def __gt__(self, other):
        return not (self <= other)

    def __ge__(self, other):
        return not (self < other)

    def __hash__(self):
        return hash(self.comps)

    def __float__(self):
        return math.fsum(self.comps)

    def __repr__(self):
        return f"QuadDouble{self.comps!r}"

    def __str__(self):
        return render_decimal(self)

    def sqrt(self) -> "QuadDouble":
        if self.comps[0] < 0.0:
            raise DomainError("square root of negative quad-double")
        if self.comps[0] == 0.0:
            return QuadDouble._raw((0.0, 0.0, 0.0, 0.0))
        return QuadDouble._raw(_eft.qd_sqrt(self.comps))


class Complex:
    """Complex number over binary64, DoubleDouble, or QuadDouble parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    def __add__(self, other):
        if not isinstance(other, Complex):
            return Complex(self.re + other, self.im)
        return Complex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Complex):
            return Complex(self.re - other, self.im)
        return Complex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Complex):
            return Complex(self.re * other, self.im * other)
        return Complex(self.re * other.re - self.im * other.im,
                       self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Complex):
            return Complex(self.re / other, self.im / other)
        den = other.re * other.re + other.im * other.im
        if is_zero(den):
            raise DomainError("complex division by zero")
        num = self * other.conj()
        return Complex(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        if not isinstance(other, Complex):
            other = Complex(other, zero_like(self.re))
        return other / self

    def __neg__(self):
        return Complex(-self.re, -self.im)

    def __abs__(self):
        return sqrt(self.re * self.re + self.im * self.im)

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return self.im == zero_like(self.im) and self.re == other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conj(self) -> "Complex":
        return Complex(self.re, -self.im)

    def __repr__(self):
        return f"Complex({self.re!r}, {self.im!r})"

    def __str__(self):
        return f"({render_decimal(self.re)},{render_decimal(self.im)})"


def sqrt(x):
    """Square root dispatching on the scalar field."""
    if isinstance(x, (DoubleDouble, QuadDouble)):
        return x.sqrt()
    if x < 0.0:
        raise DomainError("square root of negative value")
    return math.sqrt(x)


def conjugate(x):
    return x.conj() if isinstance(x, Complex) else x


def modulus(x):
    """Non-negative magnitude: |x| for real fields, complex modulus else."""
    return abs(x)


def zero_like(x):
    if isinstance(x, DoubleDouble):
        return DoubleDouble._raw((0.0, 0.0))
    if isinstance(x, QuadDouble):
        return QuadDouble._raw((0.0, 0.0, 0.0, 0.0))
    if isinstance(x, Complex):
        return Complex(zero_like(x.re), zero_like(x.im))
    return 0.0


def one_like(x):
    if isinstance(x, DoubleDouble):
        return DoubleDouble._raw((1.0, 0.0))
    if isinstance(x, QuadDouble):
        return QuadDouble._raw((1.0, 0.0, 0.0, 0.0))
    if isinstance(x, Complex):
        return Complex(one_like(x.re), zero_like(x.im))
    return 1.0


def is_zero(x) -> bool:
    if isinstance(x, DoubleDouble):
        return x.comps == (0.0, 0.0)
    if isinstance(x, QuadDouble):
        return x.comps == (0.0, 0.0, 0.0, 0.0)
    if isinstance(x, Complex):
        return is_zero(x.re) and is_zero(x.im)
    return x == 0.0


def to_float(x) -> float:
    return float(x)


# ---------------------------------------------------------------------------
# decimal rendering and parsing

_DIGITS = {float: 17, DoubleDouble: 32, QuadDouble: 64}


def render_decimal(x) -> str:
    """Full-precision decimal text for a real scalar."""
    if isinstance(x, (int, float)):
        return repr(float(x))
    comps = x.comps
    digits = _DIGITS[type(x)]
    fr = Fraction(0)
    for c in comps:
        fr += Fraction(c)
    if fr == 0:
        return "0.0"
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(fr.numerator) / Decimal(fr.denominator)
        return format(d, "E").replace("E", "e")


def _fraction_to_components(fr: Fraction, n: int) -> tuple[float, ...]:
    comps = []
    for _ in range(n):
        c = float(fr)
        comps.append(c)
        fr = fr - Fraction(c)
    return tuple(comps)


def parse_decimal(text: str, field: type):
    """Parse a decimal literal into the given real field.

    Components are split off by repeated exact subtraction, so the result
    is the correctly rounded field value of the literal.
    """
    fr = Fraction(Decimal(text))
    if field is float:
        return float(fr)
    if field is DoubleDouble:
        return DoubleDouble._raw(_fraction_to_components(fr, 2))
    if field is QuadDouble:
        c = _fraction_to_components(fr, 4)
        return QuadDouble._raw(_eft.renorm5(*c, 0.0))
    raise TypeError(f"unsupported field {field!r}")


@dataclass(frozen=True)
class PrecisionLevel:
    """Working precision tag: base in {'d','dd','qd'}, real or complex."""

    base: str
    cplx: bool = False

    _EPS = {"d": 2.0 ** -53, "dd": 2.0 ** -104, "qd": 2.0 ** -209}
    _NC = {"d": 1, "dd": 2, "qd": 4}
    _FIELD = {"d": float, "dd": DoubleDouble, "qd": QuadDouble}

    def __post_init__(self):
        if self.base not in self._EPS:
            raise ValueError(f"unknown precision base {self.base!r}")

    @property
    def eps(self) -> float:
        return self._EPS[self.base]

    @property
    def ncomp(self) -> int:
        return self._NC[self.base]

    @property
    def field(self) -> type:
        return self._FIELD[self.base]

    @property
    def name(self) -> str:
        return ("complex " if self.cplx else "real ") + self.base

    def from_float(self, v: float, im: float = 0.0):
        f = self.field
        x = float(v) if f is float else f(float(v))
        if not self.cplx:
            if im != 0.0:
                raise ValueError("imaginary part in a real-precision context")
            return x
        y = float(im) if f is float else f(float(im))
        return Complex(x, y)

    def from_int(self, v: int):
        # exact for |v| < 2^53, which covers all exponents and dimensions here
        return self.from_float(float(v))

    def from_fraction(self, fr: Fraction):
        f = self.field
        if f is float:
            x = float(fr)
        elif f is DoubleDouble:
            x = DoubleDouble._raw(_fraction_to_components(fr, 2))
        else:
            x = QuadDouble._raw(_eft.renorm5(*_fraction_to_components(fr, 4), 0.0))
        return Complex(x, self.real_zero()) if self.cplx else x

    def real_zero(self):
        f = self.field
        return 0.0 if f is float else f()

    def zero(self):
        return self.from_float(0.0)

    def one(self):
        return self.from_float(1.0)

    def parse(self, text: str):
        """Parse "1.25" or, for complex levels, "(re,im)"."""
        text = text.strip()
        if text.startswith("("):
            if not self.cplx:
                raise ValueError("complex literal in a real-precision context")
            body = text[1:text.index(")")]
            re_s, im_s = body.split(",")
            return Complex(parse_decimal(re_s, self.field),
                           parse_decimal(im_s, self.field))
        x = parse_decimal(text, self.field)
        return Complex(x, self.real_zero()) if self.cplx else x

    def render(self, x) -> str:
        if isinstance(x, Complex):
            return f"({render_decimal(x.re)},{render_decimal(x.im)})"
        return render_decimal(x)

    def to_components(self, x) -> list[float]:
        """Flat binary64 components: re components, then im for complex."""
        def comps(v):
            if isinstance(v, (int, float)):
                return [float(v)]
            return list(v.comps)
        if self.cplx:
            if not isinstance(x, Complex):
                x = Complex(x, self.real_zero())
            return comps(x.re) + comps(x.im)
        return comps(x)

    def from_components(self, comps):
        f = self.field

        def build(c):
            if f is float:
                return float(c[0])
            if f is DoubleDouble:
                return DoubleDouble._raw((c[0], c[1]))
            return QuadDouble._raw(tuple(c))
        nc = self.ncomp
        if self.cplx:
            return Complex(build(comps[:nc]), build(comps[nc:]))
        return build(comps)


def precision_level(base: str, cplx: bool) -> PrecisionLevel:
    return PrecisionLevel(base.lower(), cplx)
