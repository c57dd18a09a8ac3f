"""Exact coefficient arithmetic: rationals, polynomials in t, and Q(t).

Rationals are ``gmpy2.mpq`` values.  ``TPoly`` is a univariate polynomial in
the parameter ``t`` and ``TScalar`` an element of the rational function field
Q(t) with its t-adic valuation.  The local ring O (denominator nonzero at
t = 0) is exactly the set of scalars with valuation >= 0.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "ArithmeticError_",
    "NotIntegralError",
    "mpq",
    "Rat",
    "rat",
    "rat_inv",
    "TPoly",
    "TScalar",
    "T",
    "scalar",
    "parse_scalar",
    "parse_rat",
]

Rat = type(mpq(0))


class ArithmeticError_(ArithmeticError):
    """Exact arithmetic failure (division by zero, valuation of zero)."""


class NotIntegralError(ArithmeticError_):
    """Raised when a scalar of negative valuation is reduced modulo t."""


def rat(value, den=None) -> Rat:
    """Coerce ints, strings, fractions and mpq values to a canonical rational."""
    if den is not None:
        if den == 0:
            raise ArithmeticError_("zero denominator")
        return mpq(value, den)
    if isinstance(value, Rat):
        return value
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, TScalar):
        return value.to_rat()
    return mpq(value)


def rat_inv(a) -> Rat:
    a = rat(a)
    if not a:
        raise ArithmeticError_("inverse of zero")
    return 1 / a


def parse_rat(text: str) -> Rat:
    s = parse_scalar(text)
    return s.to_rat()


# ---------------------------------------------------------------------------
# Polynomials in t
# ---------------------------------------------------------------------------


class TPoly:
    """Polynomial in t with rational coefficients.

    Stored as ``(low, coeffs)``: ``coeffs[k]`` is the coefficient of
    ``t**(low + k)``; first and last stored coefficients are nonzero.  The
    zero polynomial has ``low == 0`` and no coefficients.
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable = (), low: int = 0):
        cs = [rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        k = 0
        while k < len(cs) and not cs[k]:
            k += 1
        cs = cs[k:]
        self.low = low + k if cs else 0
        if cs and self.low < 0:
            raise ValueError("TPoly exponents must be non-negative")
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple, low: int) -> "TPoly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        p.low = low if coeffs else 0
        p._hash = None
        return p

    @classmethod
    def monomial(cls, c, k: int) -> "TPoly":
        return cls([c], k)

    @classmethod
    def const(cls, c) -> "TPoly":
        return cls([c])

    def dense(self) -> list:
        """Coefficient list indexed from t^0."""
        return [mpq(0)] * self.low + list(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ArithmeticError_("degree of zero polynomial")
        return self.low + len(self.coeffs) - 1

    @property
    def val(self) -> int:
        if not self.coeffs:
            raise ArithmeticError_("valuation of zero is +infinity")
        return self.low

    def lc(self) -> Rat:
        return self.coeffs[-1]

    def coeff(self, k: int) -> Rat:
        j = k - self.low
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return mpq(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, TPoly):
            return self.low == other.low and self.coeffs == other.coeffs
        if isinstance(other, (int, Rat)):
            return self == TPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    def __neg__(self):
        return TPoly._raw(tuple(-c for c in self.coeffs), self.low)

    def __add__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly.const(other)
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.low, other.low)
        hi = max(self.degree, other.degree)
        out = [mpq(0)] * (hi - lo + 1)
        for k, c in enumerate(self.coeffs):
            out[self.low - lo + k] += c
        for k, c in enumerate(other.coeffs):
            out[other.low - lo + k] += c
        return TPoly(out, lo)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return TPoly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, TPoly):
            other = rat(other)
            if not other:
                return TPoly()
            return TPoly._raw(tuple(c * other for c in self.coeffs), self.low)
        if not self.coeffs or not other.coeffs:
            return TPoly()
        a, b = self.coeffs, other.coeffs
        out = [mpq(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return TPoly._raw(tuple(out), self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of TPoly")
        result = TPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "TPoly":
        """Multiply by t**k (k may be negative if divisibility allows)."""
        if not self.coeffs:
            return self
        if self.low + k < 0:
            raise ArithmeticError_("negative exponent in TPoly shift")
        return TPoly._raw(self.coeffs, self.low + k)

    def divmod(self, other: "TPoly"):
        if not other.coeffs:
            raise ArithmeticError_("polynomial division by zero")
        r = self.dense()
        d = other.dense()
        dd = len(d) - 1
        inv = 1 / d[-1]
        if len(r) - 1 < dd:
            return TPoly(), self
        q = [mpq(0)] * (len(r) - dd)
        for k in range(len(r) - 1, dd - 1, -1):
            c = r[k]
            if not c:
                continue
            c = c * inv
            q[k - dd] = c
            for j in range(dd + 1):
                r[k - dd + j] -= c * d[j]
        return TPoly(q), TPoly(r[:dd])

    def monic(self) -> "TPoly":
        if not self.coeffs:
            return self
        inv = 1 / self.coeffs[-1]
        return TPoly._raw(tuple(c * inv for c in self.coeffs), self.low)

    def gcd(self, other: "TPoly") -> "TPoly":
        """Monic gcd; gcd(0, 0) = 0."""
        # strip powers of t first, they are handled exactly
        if not self.coeffs:
            return other.monic()
        if not other.coeffs:
            return self.monic()
        k = min(self.low, other.low)
        a = TPoly._raw(self.coeffs, 0)
        b = TPoly._raw(other.coeffs, 0)
        if len(a.coeffs) > 1 and len(b.coeffs) > 1 and _coprime_mod_p(a.coeffs, b.coeffs):
            return TPoly._raw((mpq(1),), k)
        # monic remainders keep coefficient growth in check
        a, b = a.monic(), b.monic()
        if len(a.coeffs) < len(b.coeffs):
            a, b = b, a
        while b.coeffs:
            a, b = b, a.divmod(b)[1].monic()
        return a.shift(k)

    def lcm(self, other: "TPoly") -> "TPoly":
        """Monic least common multiple of two nonzero polynomials."""
        if not self.coeffs or not other.coeffs:
            raise ArithmeticError_("lcm with the zero polynomial")
        return _exact_div(self * other, self.gcd(other)).monic()

    def __call__(self, x):
        acc = mpq(0)
        for c in reversed(self.dense()):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"TPoly({format_tpoly(self)!r})"

    def __str__(self):
        return format_tpoly(self)


def _fmt_rat(c: Rat) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_tpoly(p: TPoly, var: str = "t") -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for k in range(p.degree, p.low - 1, -1):
        c = p.coeff(k)
        if not c:
            continue
        neg = c < 0
        a = -c if neg else c
        if k == 0:
            body = _fmt_rat(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class TScalar:
    """Element of Q(t) in canonical reduced form (coprime, monic denominator)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _canonical: bool = False):
        if not isinstance(num, TPoly):
            num = TPoly.const(num)
        if den is None:
            den = TPoly.const(1)
        elif not isinstance(den, TPoly):
            den = TPoly.const(den)
        if not den.coeffs:
            raise ArithmeticError_("division by zero in Q(t)")
        self._hash = None
        if _canonical:
            self.num, self.den = num, den
            return
        if not num.coeffs:
            self.num, self.den = num, TPoly.const(1)
            return
        if len(den.coeffs) == 1 and len(num.coeffs) >= 1:
            # monomial denominator: cancel t-powers directly
            k = min(num.low, den.low)
            c = den.coeffs[0]
            self.num = TPoly._raw(tuple(x / c for x in num.coeffs), num.low - k)
            self.den = TPoly._raw((mpq(1),), den.low - k)
            return
        g = num.gcd(den)
        if g.degree > 0 or g.low > 0:
            num = num.divmod(g)[0] if g.low == 0 else _exact_div(num, g)
            den = den.divmod(g)[0] if g.low == 0 else _exact_div(den, g)
        c = den.lc()
        if c != 1:
            inv = 1 / c
            num = num * inv
            den = den * inv
        self.num, self.den = num, den

    # constructors -------------------------------------------------------
    @classmethod
    def t_power(cls, k: int, c=1) -> "TScalar":
        c = rat(c)
        if not c:
            return cls(0)
        if k >= 0:
            return cls(TPoly._raw((c,), k), TPoly._raw((mpq(1),), 0), _canonical=True)
        return cls(TPoly._raw((c,), 0), TPoly._raw((mpq(1),), -k), _canonical=True)

    @classmethod
    def coerce(cls, x) -> "TScalar":
        if isinstance(x, TScalar):
            return x
        if isinstance(x, TPoly):
            return cls(x)
        if isinstance(x, str):
            return parse_scalar(x)
        return cls(TPoly.const(rat(x)), TPoly._raw((mpq(1),), 0), _canonical=True)

    # predicates ---------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.num.coeffs)

    def is_zero(self) -> bool:
        return not self.num.coeffs

    def is_rational(self) -> bool:
        return self.den.degree == 0 and (not self.num.coeffs or self.num.degree == 0)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def to_rat(self) -> Rat:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.coeff(0) / self.den.coeff(0)

    def val(self) -> int:
        """t-adic valuation; raises for zero (valuation +infinity)."""
        if not self.num.coeffs:
            raise ArithmeticError_("valuation of zero is +infinity")
        return self.num.low - self.den.low

    def is_integral(self) -> bool:
        return not self.num.coeffs or self.val() >= 0

    def is_unit(self) -> bool:
        return bool(self.num.coeffs) and self.val() == 0

    def reduce_mod_t(self) -> Rat:
        """Image in the residue field Q; requires valuation >= 0."""
        if not self.num.coeffs:
            return mpq(0)
        v = self.val()
        if v < 0:
            raise NotIntegralError(f"{self} is not integral (valuation {v})")
        if v > 0:
            return mpq(0)
        return self.num.coeffs[0] / self.den.coeffs[0]

    def subs(self, x) -> Rat:
        d = self.den(x)
        if not d:
            raise ArithmeticError_(f"pole at t = {x}")
        return self.num(x) / d

    def series(self, hi: int) -> dict:
        """Laurent coefficients {k: c} for all exponents k < hi."""
        if not self.num.coeffs:
            return {}
        v = self.val()
        if v >= hi:
            return {}
        # self = t^v * a/b with a(0), b(0) != 0
        a = self.num.dense()[self.num.low:]
        b = self.den.dense()[self.den.low:]
        n = hi - v
        out = {}
        q = []
        inv = 1 / b[0]
        for k in range(n):
            acc = a[k] if k < len(a) else mpq(0)
            for j in range(1, min(k, len(b) - 1) + 1):
                acc -= b[j] * q[k - j]
            c = acc * inv
            q.append(c)
            if c:
                out[v + k] = c
        return out

    # arithmetic ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, TScalar):
            if isinstance(other, (int, Rat, TPoly)):
                other = TScalar.coerce(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_rat())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self):
        return TScalar(-self.num, self.den, _canonical=True)

    def __add__(self, other):
        if not isinstance(other, TScalar):
            other = TScalar.coerce(other)
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if self.den == other.den:
            return TScalar(self.num + other.num, self.den)
        return TScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, TScalar):
            other = TScalar.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return TScalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TScalar):
            if isinstance(other, (int, Rat)):
                c = rat(other)
                if not c:
                    return TScalar(0)
                return TScalar(self.num * c, self.den, _canonical=True)
            other = TScalar.coerce(other)
        if not self.num.coeffs or not other.num.coeffs:
            return TScalar(0)
        return TScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "TScalar":
        if not self.num.coeffs:
            raise ArithmeticError_("inverse of zero in Q(t)")
        return TScalar(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, TScalar):
            other = TScalar.coerce(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return TScalar.coerce(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return TScalar(self.num ** n, self.den ** n)

    def canonical(self) -> "TScalar":
        return TScalar(self.num, self.den)

    def __repr__(self):
        return f"TScalar({str(self)!r})"

    def __str__(self):
        return format_scalar(self)


_P = (1 << 61) - 1  # Mersenne prime


def _mod_p(coeffs) -> list:
    """Integer-scaled coefficients mod _P (the common denominator is a unit mod _P or we give up)."""
    out = []
    for c in coeffs:
        den = int(c.denominator) % _P
        if not den:
            return None
        out.append(int(c.numerator) * pow(den, _P - 2, _P) % _P)
    return out


def _coprime_mod_p(a, b) -> bool:
    """True only if gcd(a, b) = 1 over Q.

    If the gcd modulo a prime not dividing either leading coefficient is
    constant, the rational gcd is constant too.  False means "unknown".
    """
    x, y = _mod_p(a), _mod_p(b)
    if x is None or y is None or not x[-1] or not y[-1]:
        return False
    while y:
        inv = pow(y[-1], _P - 2, _P)
        while len(x) >= len(y):
            c = x[-1] * inv % _P
            off = len(x) - len(y)
            for j, v in enumerate(y):
                x[off + j] = (x[off + j] - c * v) % _P
            while x and not x[-1]:
                x.pop()
            if not x:
                break
        if len(y) == 1:
            return True
        x, y = y, x
    return False


def _exact_div(a: TPoly, g: TPoly) -> TPoly:
    q, r = a.shift(-g.low).divmod(TPoly._raw(g.coeffs, 0))
    assert not r.coeffs
    return q


def _wrap(s: str, nterms: int) -> str:
    return f"({s})" if nterms > 1 else s


def format_scalar(s: TScalar) -> str:
    if not s.num.coeffs:
        return "0"
    if s.den == TPoly.const(1):
        return format_tpoly(s.num)
    nn = sum(1 for c in s.num.coeffs if c)
    dn = sum(1 for c in s.den.coeffs if c)
    if dn == 1:
        k = s.den.low
        if nn == 1:
            c = s.num.coeffs[0]
            e = s.num.low - k
            if c == 1:
                return f"t^{e}"
            if c == -1:
                return f"-t^{e}"
            return f"{_fmt_rat(c)}*t^{e}"
        return f"({format_tpoly(s.num)})*t^{-k}"
    return f"{_wrap(format_tpoly(s.num), nn)}/({format_tpoly(s.den)})"


T = TScalar.t_power(1)


def scalar(x) -> TScalar:
    return TScalar.coerce(x)


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Malformed exact-arithmetic expression."""


def tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at column {pos + 1} in {text!r}")
        pos = m.end()
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
    return out


class ExprParser:
    """Recursive-descent parser for ``+ - * / ^`` expressions.

    ``atom`` maps identifier names to values; ``const`` lifts integers.  The
    value type only needs ring operations, division, and integer powers.
    """

    def __init__(self, atom, const):
        self.atom = atom
        self.const = const

    def parse(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.text = text
        if not self.toks:
            raise ParseError("empty expression")
        v = self._sum()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {text!r}")
        return v

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _sum(self):
        kind, val = self._peek()
        sign = 1
        if kind == "op" and val in "+-":
            self._take()
            sign = -1 if val == "-" else 1
        v = self._product()
        if sign < 0:
            v = -v
        while True:
            kind, val = self._peek()
            if kind == "op" and val in "+-":
                self._take()
                w = self._product()
                v = v + w if val == "+" else v - w
            else:
                return v

    def _product(self):
        v = self._power()
        while True:
            kind, val = self._peek()
            if kind == "op" and val in "*/":
                self._take()
                w = self._power()
                v = v * w if val == "*" else v / w
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                # implicit multiplication, e.g. "3t" or "2(t+1)"
                v = v * self._power()
            else:
                return v

    def _power(self):
        base = self._atom()
        kind, val = self._peek()
        if kind == "op" and val == "^":
            self._take()
            sign = 1
            kind, val = self._peek()
            if kind == "op" and val in "+-":
                self._take()
                sign = -1 if val == "-" else 1
            kind, val = self._take()
            if kind == "op" and val == "(":
                kind, val = self._peek()
                if kind == "op" and val in "+-":
                    self._take()
                    sign = -sign if val == "-" else sign
                kind, val = self._take()
                if kind != "num" or self._take() != ("op", ")"):
                    raise ParseError(f"bad exponent in {self.text!r}")
            elif kind != "num":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            return base ** (sign * val)
        return base

    def _atom(self):
        kind, val = self._take()
        if kind == "num":
            return self.const(val)
        if kind == "name":
            return self.atom(val)
        if kind == "op" and val == "(":
            v = self._sum()
            if self._take() != ("op", ")"):
                raise ParseError(f"unbalanced parentheses in {self.text!r}")
            return v
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def _scalar_atom(name: str) -> TScalar:
    if name == "t":
        return T
    raise ParseError(f"unknown symbol {name!r} (only 't' is allowed in scalars)")


_SCALAR_PARSER = ExprParser(_scalar_atom, lambda n: TScalar.coerce(n))


def parse_scalar(text) -> TScalar:
    """Parse the scalar text syntax, e.g. ``"(2 + 3*t)/(1 - t)"``, ``"t^-1"``."""
    if isinstance(text, TScalar):
        return text
    if isinstance(text, (int, Rat)):
        return TScalar.coerce(text)
    if not isinstance(text, str):
        raise ParseError(f"cannot parse scalar from {type(text).__name__}")
    try:
        return _SCALAR_PARSER.parse(text)
    except ArithmeticError_ as exc:
        raise ParseError(f"{exc} in {text!r}") from exc


def as_matrix(rows: Sequence[Sequence]) -> list:
    return [[scalar(x) for x in row] for row in rows]
