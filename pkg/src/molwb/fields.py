"""Exact arithmetic for the coordinate fields: Q, Gaussian Q, and GF(p).

Elements are plain values with operator overloading: `fractions.Fraction`
for the rationals, :class:`GaussianRational` for Q(i), and :class:`GFElem`
for prime fields.  A :class:`Field` object bundles the constants, the
involution (conjugation on Q(i), identity elsewhere), parsing and printing
of the textual element forms used in model and assignment files ("3/4",
"1/2+3/4i", "3 mod 7"), and seeded random sampling for search.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class GaussianRational:
    real: Fraction
    imag: Fraction

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.real * o.real + o.imag * o.imag
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.real * o.real + self.imag * o.imag) / n,
            (self.imag * o.real - self.real * o.imag) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.real, -self.imag)


@dataclass(frozen=True)
class GFElem:
    value: int
    p: int

    def _coerce(self, other):
        if isinstance(other, GFElem):
            if other.p != self.p:
                raise FieldError(f"mixed moduli {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return GFElem(other % self.p, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElem((self.value + o.value) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElem((self.value - o.value) % self.p, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElem((self.value * o.value) % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return self * GFElem(pow(o.value, -1, self.p), self.p)

    def __neg__(self):
        return GFElem(-self.value % self.p, self.p)

    def __bool__(self):
        return self.value != 0


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface; concrete fields are singletons (see Q, QI, gf)."""

    name: str

    def conj(self, x):
        raise NotImplementedError

    def of(self, n: int):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def random(self, rng, lo: int = -3, hi: int = 3):
        raise NotImplementedError

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def is_zero(self, x) -> bool:
        return not x

    def __repr__(self):
        return f"<Field {self.name}>"


class RationalField(Field):
    name = "Q"

    def conj(self, x):
        return x

    def of(self, n):
        return Fraction(n)

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise FieldError(f"bad rational {text!r}: {e}") from None

    def format(self, x):
        return str(x)

    def random(self, rng, lo=-3, hi=3):
        return Fraction(rng.randint(lo, hi))


class GaussianField(Field):
    name = "Qi"

    def conj(self, x):
        return x.conjugate()

    def of(self, n):
        return GaussianRational(Fraction(n), Fraction(0))

    def of_parts(self, real, imag) -> GaussianRational:
        return GaussianRational(Fraction(real), Fraction(imag))

    def parse(self, text):
        s = text.replace(" ", "")
        try:
            if not s.endswith("i"):
                return GaussianRational(Fraction(s), Fraction(0))
            body = s[:-1]
            # Split off a leading real part at the last sign not in position 0.
            cut = max(body.rfind("+"), body.rfind("-"))
            if cut > 0:
                real, coef = Fraction(body[:cut]), body[cut:]
            else:
                real, coef = Fraction(0), body
            if coef in ("", "+"):
                imag = Fraction(1)
            elif coef == "-":
                imag = Fraction(-1)
            else:
                imag = Fraction(coef)
            return GaussianRational(real, imag)
        except (ValueError, ZeroDivisionError):
            raise FieldError(f"bad Gaussian rational {text!r}") from None

    def format(self, x):
        if not x.imag:
            return str(x.real)
        if x.imag == 1:
            istr = "i"
        elif x.imag == -1:
            istr = "-i"
        else:
            istr = f"{x.imag}i"
        if not x.real:
            return istr
        sign = "+" if x.imag > 0 else ""
        return f"{x.real}{sign}{istr}"

    def random(self, rng, lo=-3, hi=3):
        return GaussianRational(Fraction(rng.randint(lo, hi)), Fraction(rng.randint(lo, hi)))


_GF_RE = re.compile(r"^\s*(-?\d+)\s*(?:mod\s*(\d+))?\s*$")


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def conj(self, x):
        return x

    def of(self, n):
        return GFElem(n % self.p, self.p)

    def parse(self, text):
        m = _GF_RE.match(text)
        if not m:
            raise FieldError(f"bad GF({self.p}) element {text!r}")
        if m.group(2) and int(m.group(2)) != self.p:
            raise FieldError(f"modulus {m.group(2)} does not match GF({self.p})")
        return self.of(int(m.group(1)))

    def format(self, x):
        return f"{x.value} mod {self.p}"

    def random(self, rng, lo=-3, hi=3):
        return self.of(rng.randint(0, self.p - 1))


Q = RationalField()
QI = GaussianField()

_PRIME_FIELDS: dict = {}


def gf(p: int) -> PrimeField:
    """The prime field GF(p); instances are cached so fields compare by identity."""
    if p not in _PRIME_FIELDS:
        _PRIME_FIELDS[p] = PrimeField(p)
    return _PRIME_FIELDS[p]


_GF_NAME_RE = re.compile(r"^GF\((\d+)\)$")


def field_by_name(name: str) -> Field:
    """Resolve a field tag as used in files and on the command line."""
    if name == "Q":
        return Q
    if name in ("Qi", "QI", "Q(i)"):
        return QI
    m = _GF_NAME_RE.match(name)
    if m:
        return gf(int(m.group(1)))
    raise FieldError(f"unknown field {name!r}")
