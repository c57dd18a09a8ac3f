"""Sparse multivariate polynomials over Q or Q(t)."""

from __future__ import annotations

from typing import Dict, Mapping, Optional

from ..arith import ExprParser, ParseError, Rat, TScalar, mpq, rat
from .ring import GREVLEX, MonomialOrder, VarSpec


def _coerce_coeff(c):
    if isinstance(c, (Rat, TScalar)):
        return c
    if isinstance(c, str):
        from ..arith import parse_scalar

        s = parse_scalar(c)
        return s.to_rat() if s.is_rational() else s
    return rat(c)


def _unify(a, b):
    """Bring two coefficients into a common domain."""
    if type(a) is type(b):
        return a, b
    if isinstance(a, TScalar):
        return a, TScalar.coerce(b)
    if isinstance(b, TScalar):
        return TScalar.coerce(a), b
    return rat(a), rat(b)


class MultiPoly:
    """Polynomial as a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: VarSpec, terms: Optional[Mapping] = None, _clean: bool = False):
        self.ring = ring
        if _clean:
            self.terms = terms
            return
        out: Dict[tuple, object] = {}
        n = ring.nvars
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {n} variables")
            c = _coerce_coeff(c)
            if exp in out:
                a, b = _unify(out[exp], c)
                c = a + b
            if c:
                out[exp] = c
            else:
                out.pop(exp, None)
        self.terms = out

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, ring):
        return cls(ring, {}, _clean=True)

    @classmethod
    def const(cls, ring, c):
        c = _coerce_coeff(c)
        if not c:
            return cls.zero(ring)
        return cls(ring, {(0,) * ring.nvars: c}, _clean=True)

    @classmethod
    def var(cls, ring, name, power: int = 1):
        e = [0] * ring.nvars
        e[ring.index(name) if isinstance(name, str) else name] = power
        return cls(ring, {tuple(e): mpq(1)}, _clean=True)

    @classmethod
    def monomial(cls, ring, exp, c=1):
        return cls(ring, {tuple(exp): c})

    @classmethod
    def parse(cls, ring: VarSpec, text: str) -> "MultiPoly":
        """Parse a polynomial string over ``ring``; ``t`` may be a variable or a scalar."""

        def atom(name):
            if name in ring:
                return cls.var(ring, name)
            if name == "t":
                return cls.const(ring, TScalar.t_power(1))
            raise ParseError(f"unknown variable {name!r}")

        return ExprParser(atom, lambda n: cls.const(ring, n)).parse(text)

    # basic queries ----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def coeff_domain(self):
        for c in self.terms.values():
            return TScalar if isinstance(c, TScalar) else Rat
        return Rat

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def block_degrees(self, exp) -> tuple:
        out = [0] * self.ring.nfactors
        for v, e in enumerate(exp):
            f = self.ring.factor[v]
            if e and f is not None:
                out[f] += e
        return tuple(out)

    def multidegrees(self) -> set:
        return {self.block_degrees(e) for e in self.terms}

    def is_multihomogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    def variables(self) -> set:
        out = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def degree_in(self, name) -> int:
        v = self.ring.index(name) if isinstance(name, str) else name
        return max((e[v] for e in self.terms), default=-1)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        key = order.key_function(self.ring)
        exp = max(self.terms, key=key)
        return exp, self.terms[exp]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        c = self.leading_term(order)[1]
        return self * (1 / c)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # arithmetic -------------------------------------------------------------
    def _check(self, other):
        if other.ring != self.ring:
            raise ValueError("polynomials live in different rings")

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring or len(other.terms) != len(self.terms):
                return False
            for e, c in self.terms.items():
                d = other.terms.get(e)
                if d is None:
                    return False
                a, b = _unify(c, d)
                if a != b:
                    return False
            return True
        if isinstance(other, (int, Rat)):
            return self == MultiPoly.const(self.ring, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.ring, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                a, b = _unify(out[e], c)
                s = a + b
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return MultiPoly(self.ring, out, _clean=True)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.const(self.ring, other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _coerce_coeff(other)
            if not c:
                return MultiPoly.zero(self.ring)
            out = {}
            for e, d in self.terms.items():
                a, b = _unify(d, c)
                out[e] = a * b
            return MultiPoly(self.ring, out, _clean=True)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                a, b = _unify(c1, c2)
                p = a * b
                if e in out:
                    x, y = _unify(out[e], p)
                    s = x + y
                    if s:
                        out[e] = s
                    else:
                        del out[e]
                else:
                    out[e] = p
        return MultiPoly(self.ring, out, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            if not c.terms or len(c.terms) != 1 or any(next(iter(c.terms))):
                raise ParseError("division by a non-constant polynomial")
            c = next(iter(c.terms.values()))
        c = _coerce_coeff(c)
        return self * (1 / c)

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial() and not any(next(iter(self.terms))):
                return MultiPoly.const(self.ring, 1 / next(iter(self.terms.values())) ** (-n))
            raise ParseError("negative power of a non-constant polynomial")
        result = MultiPoly.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # transformations ---------------------------------------------------------
    def to_ring(self, ring: VarSpec) -> "MultiPoly":
        """Re-embed into a ring containing (or restricted to) the used variables."""
        pos = []
        for i, name in enumerate(self.ring.names):
            pos.append(ring.index(name) if name in ring else None)
        out = {}
        n = ring.nvars
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.ring.names[i]} not in target ring")
                    new[pos[i]] = k
            out[tuple(new)] = c
        return MultiPoly(ring, out, _clean=True)

    def map_coeffs(self, fn) -> "MultiPoly":
        return MultiPoly(self.ring, {e: fn(c) for e, c in self.terms.items()})

    def substitute(self, values: Mapping, ring: Optional[VarSpec] = None) -> "MultiPoly":
        """Substitute variables by polynomials (of ``ring``) or scalars."""
        ring = ring or self.ring
        images = []
        for i, name in enumerate(self.ring.names):
            if name in values:
                v = values[name]
                images.append(v if isinstance(v, MultiPoly) else MultiPoly.const(ring, v))
            elif name in ring:
                images.append(MultiPoly.var(ring, name))
            else:
                images.append(None)
        acc = MultiPoly.zero(ring)
        powers: dict = {}
        for e, c in self.terms.items():
            term = MultiPoly.const(ring, c)
            for i, k in enumerate(e):
                if not k:
                    continue
                if images[i] is None:
                    raise ValueError(f"no image for variable {self.ring.names[i]}")
                p = powers.get((i, k))
                if p is None:
                    p = images[i] ** k
                    powers[(i, k)] = p
                term = term * p
            acc = acc + term
        return acc

    def coefficients_in(self, name) -> dict:
        """Split by powers of one variable: {k: coefficient polynomial}."""
        v = self.ring.index(name)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[v]
            e2 = e[:v] + (0,) + e[v + 1:]
            out.setdefault(k, {})[e2] = c
        return {k: MultiPoly(self.ring, d, _clean=True) for k, d in out.items()}

    def divide_by_var_power(self, name, k: int) -> "MultiPoly":
        v = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[v] < k:
                raise ValueError(f"not divisible by {name}^{k}")
            out[e[:v] + (e[v] - k,) + e[v + 1:]] = c
        return MultiPoly(self.ring, out, _clean=True)

    def clear_denominators(self) -> "MultiPoly":
        """Scale a Q(t)-coefficient polynomial by the lcm of its denominators."""
        from ..arith import TPoly

        if self.coeff_domain() is not TScalar:
            return self
        den = TPoly.const(1)
        for c in self.terms.values():
            if isinstance(c, TScalar):
                den = den.lcm(c.den)
        return self * TScalar(den)

    # formatting -------------------------------------------------------------
    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list:
        key = order.key_function(self.ring)
        return sorted(self.terms.items(), key=lambda it: key(it[0]), reverse=True)

    def format(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                self.ring.names[i] if k == 1 else f"{self.ring.names[i]}^{k}" for i, k in enumerate(e) if k
            )
            neg, body = _coeff_str(c)
            if mono:
                body = mono if body == "1" else f"{body}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"MultiPoly({self.format()!r})"


def _coeff_str(c):
    if isinstance(c, TScalar):
        if c.is_rational():
            c = c.to_rat()
        else:
            s = str(c)
            if s.startswith("-") and "+" not in s[1:] and " - " not in s[1:]:
                return True, s[1:]
            return False, f"({s})"
    if c < 0:
        c = -c
        neg = True
    else:
        neg = False
    s = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return neg, s
