"""Exact scalar domains: rationals (with a classification mode) and small finite fields.

Rational scalars are plain :class:`fractions.Fraction` objects; finite field
scalars are :class:`FFElement` instances. Both support ``+ - * /`` and unary
minus, so the linear algebra in :mod:`evosquare.linalg` is written once.

F_{p^2} is F_p[i] with i^2 equal to the least non-square of F_p (for p = 3 this
is i^2 = -1).  F_4 is F_2[alpha] with alpha^2 = alpha + 1, so that the four
elements 0, 1, alpha, beta = 1 + alpha satisfy alpha^2 = beta, beta^2 = alpha and
alpha * beta = 1.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property

from .errors import BudgetExceeded, FieldMismatch, ParseError, UnsupportedField

ELEMENT_BUDGET = 1024
GROUP_FIELD_BUDGET = 16

REAL = "real"
QUADRATIC_CLOSURE = "quadratic-closure"
_MODES = (REAL, QUADRATIC_CLOSURE)


class SquareClass(str, enum.Enum):
    """Label of a scalar modulo nonzero squares."""

    ZERO = "0"
    ONE = "[1]"
    OMEGA = "[ω]"
    POSITIVE = "+"
    NEGATIVE = "-"
    NONZERO = "nonzero"

    def __mul__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        if SquareClass.ZERO in (self, other):
            return SquareClass.ZERO
        if self is SquareClass.NONZERO:
            return other
        if other is SquareClass.NONZERO:
            return self
        unit = {SquareClass.ONE, SquareClass.POSITIVE}
        if self in unit:
            return other
        if other in unit:
            return self
        # both are the non-trivial class of a group of order 2
        return SquareClass.ONE if self is SquareClass.OMEGA else SquareClass.POSITIVE

    def __str__(self):
        return self.value


_FIELD_TEXT = re.compile(r"^(?:F_?|GF_?\(?)?\s*(\d+)\)?$", re.IGNORECASE)


def _is_prime(n):
    return n >= 2 and all(n % k for k in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """A supported scalar domain.

    ``kind`` is ``"rational"`` or ``"finite"``.  Rational fields carry a
    ``mode`` selecting which classification of forms applies (``"real"`` or
    ``"quadratic-closure"``); ``mode=None`` is allowed for plain arithmetic
    but rejected by anything that classifies.
    """

    kind: str
    p: int = 0
    deg: int = 1
    mode: str | None = None
    budget: int = dc_field(default=ELEMENT_BUDGET, compare=False, repr=False)

    def __post_init__(self):
        if self.kind == "rational":
            if self.mode not in _MODES + (None,):
                raise UnsupportedField(f"unknown rational mode {self.mode!r}")
        elif self.kind == "finite":
            if not _is_prime(self.p):
                raise UnsupportedField(f"{self.p} is not prime")
            if self.deg not in (1, 2):
                raise UnsupportedField("only prime fields and quadratic extensions are supported")
            if self.p ** self.deg > self.budget:
                raise BudgetExceeded(f"field of order {self.p ** self.deg} exceeds budget {self.budget}")
        else:
            raise UnsupportedField(f"unknown field kind {self.kind!r}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, mode=None):
        return cls("rational", mode=mode)

    @classmethod
    def finite(cls, p, deg=1, budget=ELEMENT_BUDGET):
        return cls("finite", p=p, deg=deg, budget=budget)

    @classmethod
    def parse(cls, text):
        """Parse ``F9``, ``GF(4)``, ``R``/``real``, ``C``/``quadratic-closure`` or ``Q``."""
        t = text.strip()
        low = t.lower()
        if low in ("r", "real", "rr"):
            return cls.rational(REAL)
        if low in ("c", "cc", "complex", "quadratic-closure"):
            return cls.rational(QUADRATIC_CLOSURE)
        if low in ("q", "qq", "rational"):
            return cls.rational(None)
        m = _FIELD_TEXT.match(t)
        if not m:
            raise ParseError(f"unrecognised field {text!r}")
        q = int(m.group(1))
        for deg in (1, 2):
            p = round(q ** (1 / deg))
            for cand in (p - 1, p, p + 1):
                if cand >= 2 and cand ** deg == q and _is_prime(cand):
                    return cls.finite(cand, deg)
        raise ParseError(f"no supported field of order {q}")

    @classmethod
    def from_descriptor(cls, desc):
        """Build from the JSON descriptor used in algebra files."""
        if isinstance(desc, str):
            return cls.parse(desc)
        if not isinstance(desc, dict) or "kind" not in desc:
            raise ParseError("field descriptor must be an object with a 'kind' key")
        if desc["kind"] == "rational":
            return cls.rational(desc.get("mode"))
        if desc["kind"] == "finite":
            try:
                return cls.finite(int(desc["p"]), int(desc.get("deg", 1)))
            except KeyError:
                raise ParseError("finite field descriptor needs 'p'") from None
        raise ParseError(f"unknown field kind {desc['kind']!r}")

    def descriptor(self):
        if self.kind == "rational":
            return {"kind": "rational", "mode": self.mode}
        return {"kind": "finite", "p": self.p, "deg": self.deg}

    def __str__(self):
        if self.kind == "rational":
            return {REAL: "Q(real)", QUADRATIC_CLOSURE: "Q(quadratic-closure)", None: "Q"}[self.mode]
        return f"F{self.q}"

    # -- basic structure ----------------------------------------------------

    @property
    def is_finite(self):
        return self.kind == "finite"

    @property
    def q(self):
        return self.p ** self.deg if self.is_finite else None

    @property
    def characteristic(self):
        return self.p if self.is_finite else 0

    @property
    def is_perfect_char2(self):
        return self.is_finite and self.p == 2

    @cached_property
    def _ext(self):
        """(r, s) with i^2 = r + s*i for degree-2 fields."""
        if self.deg == 1:
            return (0, 0)
        if self.p == 2:
            return (1, 1)
        squares = {(x * x) % self.p for x in range(1, self.p)}
        r = next(x for x in range(2, self.p) if x not in squares)
        return (r, 0)

    @cached_property
    def zero(self):
        return Fraction(0) if not self.is_finite else FFElement(self, 0, 0)

    @cached_property
    def one(self):
        return Fraction(1) if not self.is_finite else FFElement(self, 1, 0)

    def __call__(self, value):
        """Embed an integer (or, for rationals, a Fraction) into the field."""
        if not self.is_finite:
            return Fraction(value)
        if isinstance(value, FFElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self}")
            return value
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no image in {self}")
            return self(value.numerator) / self(value.denominator)
        return FFElement(self, int(value) % self.p, 0)

    def contains(self, x):
        if self.is_finite:
            return isinstance(x, FFElement) and x.field == self
        return isinstance(x, Fraction)

    def check(self, x):
        if not self.contains(x):
            raise FieldMismatch(f"{x!r} is not an element of {self}")
        return x

    # -- enumeration --------------------------------------------------------

    def element(self, index):
        if not 0 <= index < self.q:
            raise IndexError(index)
        return FFElement(self, index % self.p, index // self.p)

    def index(self, x):
        """Position of ``x`` in the enumeration order (finite fields only)."""
        return x.a + x.b * self.p

    def elements(self, budget=None):
        """All elements, in a fixed order starting 0, 1."""
        if not self.is_finite:
            raise UnsupportedField("cannot enumerate an infinite field")
        limit = self.budget if budget is None else budget
        if self.q > limit:
            raise BudgetExceeded(f"|F| = {self.q} exceeds budget {limit}")
        return self._elements

    @cached_property
    def _elements(self):
        return tuple(self.element(k) for k in range(self.q))

    def sort_key(self, x):
        return self.index(x) if self.is_finite else x

    def vector_key(self, v):
        return tuple(self.sort_key(x) for x in v)

    # -- text ---------------------------------------------------------------

    def parse_scalar(self, text):
        return parse_scalar(text, self)

    def format(self, x):
        return format_scalar(x, self)

    # -- squares ------------------------------------------------------------

    @cached_property
    def _inverses(self):
        out = {}
        for x in self.elements()[1:]:
            y = x ** (self.q - 2)
            out[(x.a, x.b)] = y
        return out

    @cached_property
    def nonsquare(self):
        """The least non-square in enumeration order (odd finite fields)."""
        if not self.is_finite or self.p == 2:
            raise UnsupportedField(f"{self} has no distinguished non-square")
        return next(x for x in self._elements[1:] if self.square_class(x) is SquareClass.OMEGA)

    @cached_property
    def _root_table(self):
        table = {}
        for y in self._elements:
            table.setdefault(y * y, y)  # first root in enumeration order wins
        return table

    def square_class(self, x):
        self.check(x)
        if x == self.zero:
            return SquareClass.ZERO
        if self.is_finite:
            if self.p == 2:
                return SquareClass.NONZERO
            return SquareClass.ONE if x ** ((self.q - 1) // 2) == self.one else SquareClass.OMEGA
        if self.mode == REAL:
            return SquareClass.POSITIVE if x > 0 else SquareClass.NEGATIVE
        if self.mode == QUADRATIC_CLOSURE:
            return SquareClass.NONZERO
        raise UnsupportedField("square classes over Q itself are not supported; choose a mode")

    def sqrt(self, x):
        """A square root of ``x`` in this field, or None.

        Finite fields return the root that comes first in enumeration order;
        rationals return the non-negative root when ``x`` is a rational square.
        """
        self.check(x)
        if self.is_finite:
            return self._root_table.get(x)
        if x < 0:
            return None
        n, d = x.numerator, x.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return None

    def is_square(self, x):
        return self.sqrt(x) is not None

    def representatives(self):
        """Representatives of the nonzero square classes that matter for scaling."""
        if self.is_finite:
            return (self.one,) if self.p == 2 else (self.one, self.nonsquare)
        if self.mode == REAL:
            return (Fraction(1), Fraction(-1))
        return (Fraction(1),)


class FFElement:
    """Element a + b*i of a finite field; ``b`` is always 0 for prime fields."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field, a, b=0):
        self.field = field
        self.a = a
        self.b = b

    def _other(self, o):
        if type(o) is FFElement and o.field is self.field:
            return o
        if isinstance(o, FFElement):
            if o.field is not self.field and o.field != self.field:
                raise FieldMismatch(f"{self.field} vs {o.field}")
            return o
        if isinstance(o, int) and not isinstance(o, bool):
            return FFElement(self.field, o % self.field.p, 0)
        raise FieldMismatch(f"cannot combine {self!r} with {o!r}")

    def __add__(self, o):
        o = self._other(o)
        p = self.field.p
        return FFElement(self.field, (self.a + o.a) % p, (self.b + o.b) % p)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElement(self.field, -self.a % p, -self.b % p)

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        o = self._other(o)
        f = self.field
        p = f.p
        if f.deg == 1:
            return FFElement(f, self.a * o.a % p, 0)
        r, s = f._ext
        bd = self.b * o.b
        return FFElement(self.field, (self.a * o.a + bd * r) % p, (self.a * o.b + self.b * o.a + bd * s) % p)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        return self.field._inverses[(self.a, self.b)]

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self._other(o) * self.inverse()

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, o):
        if isinstance(o, FFElement):
            return o.a == self.a and o.b == self.b and (o.field is self.field or o.field == self.field)
        if isinstance(o, int) and not isinstance(o, bool):
            return self.b == 0 and self.a == o % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.deg, self.a, self.b))

    def __str__(self):
        return format_scalar(self, self.field)

    def __repr__(self):
        return f"FFElement({format_scalar(self, self.field)!r}, {self.field})"


# -- text grammar ---------------------------------------------------------

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_INTEGER = re.compile(r"^(-?\d+)$")
_EXTENSION = re.compile(r"^(?P<re>-?\d+)?(?:(?P<sign>[+-])?(?:(?P<im>\d+)\*)?i)?$")
_F4_TOKENS = {"0": (0, 0), "1": (1, 0), "a": (0, 1), "b": (1, 1),
              "alpha": (0, 1), "beta": (1, 1), "α": (0, 1), "β": (1, 1)}
_F4_NAMES = {(0, 0): "0", (1, 0): "1", (0, 1): "a", (1, 1): "b"}


def parse_scalar(text, field):
    """Parse a scalar written in the grammar of ``field``.

    rationals ``[-]digits[/digits]``; F_p ``digits``; F_{p^2} ``a``, ``b*i``,
    ``a+b*i``, ``a-b*i`` (``i`` alone means ``1*i``); F_4 ``0|1|a|b``.
    """
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            text = str(text)
        else:
            raise ParseError(f"scalar must be a string, got {text!r}")
    t = text.replace(" ", "")
    if not field.is_finite:
        m = _RATIONAL.match(t)
        if not m:
            raise ParseError(f"malformed rational {text!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    p = field.p
    if field.deg == 1:
        m = _INTEGER.match(t)
        if not m:
            raise ParseError(f"malformed element of {field}: {text!r}")
        return FFElement(field, int(m.group(1)) % p, 0)
    if p == 2:
        try:
            a, b = _F4_TOKENS[t.lower()]
        except KeyError:
            raise ParseError(f"malformed element of F4: {text!r} (use 0, 1, a, b)") from None
        return FFElement(field, a, b)
    m = _EXTENSION.match(t)
    if not t or not m:
        raise ParseError(f"malformed element of {field}: {text!r}")
    re_part, sign, im = m.group("re"), m.group("sign"), m.group("im")
    has_i = t.endswith("i")
    if re_part is not None and has_i and sign is None:
        raise ParseError(f"missing sign between parts of {text!r}")
    a = int(re_part) if re_part is not None else 0
    b = 0
    if has_i:
        b = int(im) if im is not None else 1
        if sign == "-":
            b = -b
    return FFElement(field, a % p, b % p)


def format_scalar(x, field):
    """Canonical text of ``x``; inverse of :func:`parse_scalar`."""
    if not field.is_finite:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if field.deg == 1:
        return str(x.a)
    if field.p == 2:
        return _F4_NAMES[(x.a, x.b)]
    if x.b == 0:
        return str(x.a)
    im = "i" if x.b == 1 else f"{x.b}*i"
    return im if x.a == 0 else f"{x.a}+{im}"


def arithmetic(x, y, op):
    """Apply ``op`` in {add, sub, mul, div, neg, inv}; ``y`` is ignored for unary ops."""
    if op == "neg":
        return -x
    if op == "inv":
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x if isinstance(x, Fraction) else x.inverse()
    if type(x) is not type(y) or (isinstance(x, FFElement) and x.field != y.field):
        raise FieldMismatch(f"{x!r} and {y!r} live in different fields")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if not y:
            raise ZeroDivisionError("division by zero")
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def enumerate_elements(field, budget=None):
    return field.elements(budget)


def square_class(x, field):
    return field.square_class(x)


def sqrt(x, field):
    return field.sqrt(x)
