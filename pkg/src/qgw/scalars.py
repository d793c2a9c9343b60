"""Scalar fields: exact Gaussian rationals and float complex numbers.

Exact arrays are numpy ``object`` arrays of :class:`ExactComplex`; float arrays
are ``complex128``.  Everything downstream dispatches on the dtype.
"""
from __future__ import annotations

import re
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

DEFAULT_TOL = 1e-9
_tolerance = DEFAULT_TOL


def get_tolerance() -> float:
    return _tolerance


def set_tolerance(tol: float) -> None:
    global _tolerance
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _tolerance = float(tol)


@contextmanager
def tolerance(tol: float):
    """Temporarily change the float comparison tolerance."""
    old = _tolerance
    set_tolerance(tol)
    try:
        yield
    finally:
        set_tolerance(old)


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def _new(re_, im_):
    z = object.__new__(ExactComplex)
    z.re = re_
    z.im = im_
    return z


_ZQ = mpq(0)


class ExactComplex:
    """A complex number with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, ExactComplex):
            self.re, self.im = re.re, re.im + _q(im)
            return
        if isinstance(re, complex):
            raise TypeError("use exact_from_float for float inputs")
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def coerce(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (int, Fraction, str)) or type(x).__name__ == "mpq":
            return _new(_q(x), _ZQ)
        raise TypeError(f"cannot coerce {type(x).__name__} to an exact scalar")

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        if type(o) is ExactComplex:
            return _new(self.re + o.re, self.im + o.im)
        if isinstance(o, int):
            return _new(self.re + o, self.im)
        try:
            o = ExactComplex.coerce(o)
        except TypeError:
            return NotImplemented
        return _new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        if type(o) is ExactComplex:
            return _new(self.re - o.re, self.im - o.im)
        try:
            o = ExactComplex.coerce(o)
        except TypeError:
            return NotImplemented
        return _new(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        try:
            o = ExactComplex.coerce(o)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, o):
        if type(o) is ExactComplex:
            if not self.im and not o.im:
                return _new(self.re * o.re, _ZQ)
            return _new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        if isinstance(o, int):
            return _new(self.re * o, self.im * o)
        try:
            o = ExactComplex.coerce(o)
        except TypeError:
            return NotImplemented
        return self * o

    __rmul__ = __mul__

    def __truediv__(self, o):
        if type(o) is not ExactComplex:
            try:
                o = ExactComplex.coerce(o)
            except TypeError:
                return NotImplemented
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("exact division by zero")
            return _new(self.re / o.re, self.im / o.re)
        n = o.re * o.re + o.im * o.im
        return _new((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, o):
        try:
            o = ExactComplex.coerce(o)
        except TypeError:
            return NotImplemented
        return o / self

    def __neg__(self):
        return _new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / (self ** (-k))
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return _new(self.re, -self.im)

    # comparisons ----------------------------------------------------------
    def __eq__(self, o):
        if type(o) is ExactComplex:
            return self.re == o.re and self.im == o.im
        if isinstance(o, int):
            return self.re == o and not self.im
        try:
            o = ExactComplex.coerce(o)
        except TypeError:
            if isinstance(o, (float, complex)):
                return complex(self) == o
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __ne__(self, o):
        r = self.__eq__(o)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if not self.im:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"ExactComplex({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 1)


def exact(x) -> ExactComplex:
    """Convert an int, Fraction, mpq, numeric string or ExactComplex to exact."""
    if isinstance(x, str):
        return parse_scalar(x, exact=True)
    return ExactComplex.coerce(x)


def exact_from_float(z, max_den: int = 10**6) -> ExactComplex:
    """Best rational approximation of a float/complex (used for certify-after-guess)."""
    z = complex(z)
    re_ = Fraction(z.real).limit_denominator(max_den)
    im_ = Fraction(z.imag).limit_denominator(max_den)
    return ExactComplex(re_, im_)


def is_exact(x) -> bool:
    return isinstance(x, ExactComplex)


def is_zero(x, tol: float | None = None) -> bool:
    if isinstance(x, ExactComplex):
        return not x
    return abs(x) <= (get_tolerance() if tol is None else tol)


def conj(x):
    return x.conjugate()


# arrays --------------------------------------------------------------------

def is_exact_array(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def zeros(shape, exact_mode: bool):
    if exact_mode:
        out = np.empty(shape, dtype=object)
        out.fill(ZERO)
        return out
    return np.zeros(shape, dtype=complex)


def identity(n: int, exact_mode: bool):
    out = zeros((n, n), exact_mode)
    for i in range(n):
        out[i, i] = ONE if exact_mode else 1.0
    return out


def as_exact_array(a):
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    flat_in = a.reshape(-1)
    flat_out = out.reshape(-1)
    for k, v in enumerate(flat_in):
        if isinstance(v, ExactComplex):
            flat_out[k] = v
        elif isinstance(v, (float, complex, np.floating, np.complexfloating)):
            raise TypeError("float entry in exact array; use exact_from_float explicitly")
        else:
            flat_out[k] = ExactComplex.coerce(int(v) if isinstance(v, np.integer) else v)
    return out


def to_float_array(a):
    if is_exact_array(a):
        flat = np.fromiter((complex(v) for v in a.reshape(-1)), dtype=complex, count=a.size)
        return flat.reshape(a.shape)
    return np.asarray(a, dtype=complex)


def array_is_zero(a, tol: float | None = None) -> bool:
    if is_exact_array(a):
        return not any(a.reshape(-1))
    tol = get_tolerance() if tol is None else tol
    return a.size == 0 or float(np.max(np.abs(a))) <= tol


def arrays_equal(a, b, tol: float | None = None) -> bool:
    if is_exact_array(a) and is_exact_array(b):
        return a.shape == b.shape and all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))
    return array_is_zero(to_float_array(a) - to_float_array(b), tol)


def max_abs(a) -> float:
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(to_float_array(a))))


# text formats ---------------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_EXACT_RE = re.compile(rf"^\s*(?:(?P<re>{_RAT})(?:\s*(?P<sgn>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?|(?P<imonly>[+-]?(?:\d+(?:/\d+)?)?)\s*\*?\s*i)\s*$")


def parse_scalar(s, exact: bool | None = None):
    """Parse ``"3"``, ``"-1/2"``, ``"1/2+3/4i"``, ``"i"`` (exact) or a JSON number/[re, im] pair (float).

    With ``exact=None`` the mode is inferred from the input type.
    """
    if isinstance(s, ExactComplex):
        return s if exact is not False else complex(s)
    if isinstance(s, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(s, (list, tuple)):
        if len(s) != 2:
            raise ValueError(f"complex pair must have two entries, got {s!r}")
        if exact:
            return parse_scalar(s[0], True) + I * parse_scalar(s[1], True)
        return complex(float(s[0]), float(s[1]))
    if isinstance(s, int):
        return ExactComplex(s) if exact is not False else complex(s)
    if isinstance(s, float):
        if exact:
            raise ValueError(f"float {s!r} given where an exact scalar is required")
        return complex(s)
    if isinstance(s, str):
        m = _EXACT_RE.match(s)
        if m is None:
            if exact:
                raise ValueError(f"cannot parse exact scalar {s!r}")
            return complex(s.replace("i", "j").replace(" ", ""))
        if m.group("re") is not None:
            z = ExactComplex(m.group("re"))
            if m.group("sgn"):
                im = mpq(m.group("im") or "1")
                z = z + ExactComplex(0, im if m.group("sgn") == "+" else -im)
        else:
            coeff = m.group("imonly") or "1"
            if coeff in "+-":
                coeff += "1"
            z = ExactComplex(0, coeff)
        return z if exact is not False else complex(z)
    raise ValueError(f"unsupported scalar literal {s!r}")


def _fmt_q(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(z):
    """Canonical text form: exact -> ``"p/q"`` or ``"a+bi"``; float -> [re, im] rounded to 12 digits."""
    if isinstance(z, ExactComplex):
        if not z.im:
            return _fmt_q(z.re)
        im = _fmt_q(abs(z.im))
        im = "" if im == "1" else im
        if not z.re:
            return ("-" if z.im < 0 else "") + im + "i"
        return f"{_fmt_q(z.re)}{'-' if z.im < 0 else '+'}{im}i"
    z = complex(z)
    return [float(f"{z.real:.12g}") + 0.0, float(f"{z.imag:.12g}") + 0.0]
