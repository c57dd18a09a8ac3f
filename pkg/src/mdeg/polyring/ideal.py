"""Ideals with cached reduced Groebner bases, and the derived operations."""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence

from ..arith import TScalar, mpq
from .groebner import DEFAULT_CAPS, Caps, buchberger, normal_form
from .poly import MultiPoly
from .ring import GREVLEX, MonomialOrder, VarSpec


class EmptySchemeError(ValueError):
    """The ideal is the unit ideal, so the scheme it defines is empty."""


class IdealHandle:
    """Generators plus lazily computed reduced Groebner bases (one per order)."""

    def __init__(self, ring: VarSpec, gens: Iterable[MultiPoly] = (), caps: Caps = DEFAULT_CAPS):
        self.ring = ring
        self.gens = [g for g in gens if g.terms]
        for g in self.gens:
            if g.ring != ring:
                raise ValueError("generator over a different ring")
        self.caps = caps
        self._gb: Dict[MonomialOrder, List[MultiPoly]] = {}
        self.stats: dict = {}

    @classmethod
    def parse(cls, ring: VarSpec, texts: Sequence[str], **kw) -> "IdealHandle":
        return cls(ring, [MultiPoly.parse(ring, s) for s in texts], **kw)

    @classmethod
    def from_basis(cls, ring, basis, order: MonomialOrder = GREVLEX, caps: Caps = DEFAULT_CAPS):
        """Wrap an already reduced Groebner basis for ``order``."""
        I = cls(ring, basis, caps)
        I._gb[order] = list(basis)
        return I

    def groebner(self, order: MonomialOrder = GREVLEX) -> List[MultiPoly]:
        gb = self._gb.get(order)
        if gb is None:
            stats: dict = {}
            gb = buchberger(self.gens, order, self.caps, stats=stats)
            self.stats[order.describe()] = stats
            self._gb[order] = gb
        return gb

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and not any(gb[0].leading_monomial())

    def reduce(self, f: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
        return normal_form(f, self.groebner(order), order)

    def contains_poly(self, f: MultiPoly) -> bool:
        return not self.reduce(f).terms

    def contains(self, other: "IdealHandle") -> bool:
        """True iff ``other`` is a subset of ``self``."""
        _same_ring(self, other)
        return all(self.contains_poly(g) for g in other.gens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def __add__(self, other: "IdealHandle") -> "IdealHandle":
        _same_ring(self, other)
        return IdealHandle(self.ring, self.gens + other.gens, self.caps)

    def to_ring(self, ring: VarSpec) -> "IdealHandle":
        return IdealHandle(ring, [g.to_ring(ring) for g in self.gens], self.caps)

    def strings(self, order: MonomialOrder = GREVLEX) -> List[str]:
        return [g.format(order) for g in self.groebner(order)]

    def to_json(self, order: MonomialOrder = GREVLEX) -> dict:
        return {"varspec": self.ring.to_json(), "generators": self.strings(order)}

    @classmethod
    def from_json(cls, data: dict) -> "IdealHandle":
        ring = VarSpec.from_json(data["varspec"])
        return cls.parse(ring, data["generators"])

    def __repr__(self):
        gens = ", ".join(g.format() for g in self.gens[:6])
        more = "" if len(self.gens) <= 6 else f", ... ({len(self.gens)} gens)"
        return f"<{gens}{more}>"

    def __str__(self):
        return "<" + ", ".join(self.strings()) + ">"


def _same_ring(I, J):
    if I.ring != J.ring:
        raise ValueError("ideals over different rings")


def ideal_equal(I: IdealHandle, J: IdealHandle) -> bool:
    _same_ring(I, J)
    a = I.groebner()
    b = J.groebner()
    if len(a) != len(b):
        return False
    return all(x == y for x, y in zip(a, b))


def ideal_contains(I: IdealHandle, J: IdealHandle) -> bool:
    """J is contained in I."""
    return I.contains(J)


def eliminate(I: IdealHandle, drop: Sequence[str], inner: str = "grevlex", wdeg=()) -> IdealHandle:
    """I intersected with the subring without the ``drop`` variables.

    ``wdeg`` assigns weighted degrees; for quasi-homogeneous inputs this
    keeps Buchberger degree-by-degree and is much faster.
    """
    ring = I.ring
    drop = list(drop)
    for name in drop:
        ring.index(name)
    sub = ring.drop(drop)
    if not I.gens:
        return IdealHandle(sub, [], I.caps)
    order = MonomialOrder.elimination(drop, inner, wdeg)
    gb = I.groebner(order)
    dropped = {ring.index(n) for n in drop}
    kept = [g.to_ring(sub) for g in gb if not any(v in dropped for v in g.variables())]
    # the retained elements form a reduced Groebner basis of the elimination
    # ideal for the induced order on the subring
    out = IdealHandle(sub, kept, I.caps)
    sub_order = order.restricted(sub)
    out._gb[sub_order] = _sorted_basis(kept, sub_order)
    return out


def _sorted_basis(basis, order):
    if not basis:
        return []
    key = order.key_function(basis[0].ring)
    return sorted(basis, key=lambda g: key(g.leading_monomial(order)))


def _fresh(ring: VarSpec, stem: str) -> str:
    name = stem
    k = 0
    while name in ring:
        k += 1
        name = f"{stem}{k}"
    return name


def _homogeneous_revlex_basis(I: IdealHandle, v: int):
    """A cached (order, basis) for which the t-division trick applies, if any.

    Needs a reverse-lexicographic order whose smallest variable is ``v`` and
    an ideal homogeneous for that order's (weighted) degree.  Then t divides
    the leading term of a homogeneous element only if it divides the element.
    """
    ring = I.ring
    if v != ring.nvars - 1:
        return None
    candidates = [o for o in I._gb if o.kind == "grevlex"]
    if GREVLEX not in candidates:
        candidates.append(GREVLEX)
    for order in candidates:
        dw = order.degree_weights(ring)

        def homogeneous(g):
            return len({sum(e * w for e, w in zip(exp, dw)) for exp in g.terms}) <= 1

        if order not in I._gb and not all(homogeneous(g) for g in I.gens):
            continue
        gb = I.groebner(order)
        if all(homogeneous(g) for g in gb):
            return order, gb
    return None


def _variable_index(f: MultiPoly):
    if len(f.terms) == 1:
        (e, c), = f.terms.items()
        if c == 1 and sum(e) == 1:
            return e.index(1)
    return None


def saturate(I: IdealHandle, f: MultiPoly) -> IdealHandle:
    """(I : f^infinity) computed as (I + <1 - w f>) intersected with the ring without w.

    When f is the smallest variable of a homogeneous reverse-lex basis the
    result is read off by dividing basis elements by powers of f.
    """
    if not f.terms:
        raise ValueError("saturation by the zero polynomial")
    ring = I.ring
    if not I.gens:
        return IdealHandle(ring, [], I.caps)
    v = _variable_index(f)
    if v is not None:
        found = _homogeneous_revlex_basis(I, v)
        if found is not None:
            order, gb = found
            divided = []
            changed = False
            for g in gb:
                k = min(e[v] for e in g.terms)
                if k:
                    changed = True
                    g = g.divide_by_var_power(ring.names[v], k)
                divided.append(g)
            out = IdealHandle(ring, divided, I.caps)
            out._gb[order] = gb if not changed else buchberger(divided, order, I.caps)
            return out
    w = _fresh(ring, "w")
    big = ring.with_vars(pre=(w,))
    wv = MultiPoly.var(big, w)
    base = I._gb.get(GREVLEX, I.gens)
    gens = [g.to_ring(big) for g in base] + [MultiPoly.const(big, 1) - wv * f.to_ring(big)]
    out = eliminate(IdealHandle(big, gens, I.caps), [w])
    return out.to_ring(ring) if out.ring != ring else out


def saturate_by_auxiliary(I: IdealHandle, f: MultiPoly) -> IdealHandle:
    """The plain (I + <1 - w f>) elimination route, without shortcuts."""
    ring = I.ring
    w = _fresh(ring, "w")
    big = ring.with_vars(pre=(w,))
    wv = MultiPoly.var(big, w)
    gens = [g.to_ring(big) for g in I.gens] + [MultiPoly.const(big, 1) - wv * f.to_ring(big)]
    out = eliminate(IdealHandle(big, gens, I.caps), [w])
    return out.to_ring(ring) if out.ring != ring else out


def intersect(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I cap J via the auxiliary-variable trick (s I + (1 - s) J) cap R."""
    _same_ring(I, J)
    ring = I.ring
    if not I.gens or not J.gens:
        return IdealHandle(ring, [], I.caps)
    s = _fresh(ring, "s")
    big = ring.with_vars(pre=(s,))
    sv = MultiPoly.var(big, s)
    one = MultiPoly.const(big, 1)
    gens = [sv * g.to_ring(big) for g in I.gens] + [(one - sv) * g.to_ring(big) for g in J.gens]
    out = eliminate(IdealHandle(big, gens, I.caps), [s])
    return out.to_ring(ring) if out.ring != ring else out


def intersect_all(ideals: Sequence[IdealHandle]) -> IdealHandle:
    acc = ideals[0]
    for J in ideals[1:]:
        acc = intersect(acc, J)
    return acc


def colon(I: IdealHandle, f: MultiPoly) -> IdealHandle:
    """(I : f) = (1/f) (I cap <f>)."""
    ring = I.ring
    if not I.gens:
        return IdealHandle(ring, [], I.caps)
    inter = intersect(I, IdealHandle(ring, [f], I.caps))
    gens = []
    for g in inter.groebner():
        q, r = _divide_exact(g, f)
        gens.append(q)
    return IdealHandle(ring, gens, I.caps)


def _divide_exact(g: MultiPoly, f: MultiPoly):
    """Exact division g / f (f divides g by construction)."""
    order = GREVLEX
    q = MultiPoly.zero(g.ring)
    r = g
    ef, cf = f.leading_term(order)
    while r.terms:
        er, cr = r.leading_term(order)
        if any(a < b for a, b in zip(er, ef)):
            raise ValueError("polynomial does not divide exactly")
        m = MultiPoly.monomial(g.ring, tuple(a - b for a, b in zip(er, ef)), cr / cf)
        q = q + m
        r = r - m * f
    return q, r


def is_saturated(I: IdealHandle, f: MultiPoly) -> bool:
    """Certificate (I : f) == I."""
    v = _variable_index(f)
    if v is not None and I.gens:
        found = _homogeneous_revlex_basis(I, v)
        if found is not None:
            return not any(g.leading_monomial(found[0])[v] for g in found[1])
    return ideal_equal(colon(I, f), I)


def specialize_t0(I: IdealHandle, t: str = "t", target: Optional[VarSpec] = None) -> IdealHandle:
    """Set the parameter t to 0 in every generator.

    ``t`` is either a ring variable (default route) or, when the ring has no
    variable of that name, the coefficients are Q(t) scalars reduced mod t.
    Zero images are dropped.
    """
    ring = I.ring
    if t in ring:
        sub = target or ring.drop([t])
        v = ring.index(t)
        gens = []
        for g in I.gens:
            terms = {e[:v] + e[v + 1:]: c for e, c in g.terms.items() if e[v] == 0}
            gens.append(MultiPoly(sub, terms))
        return IdealHandle(sub, gens, I.caps)
    gens = []
    for g in I.gens:
        terms = {}
        for e, c in g.terms.items():
            if isinstance(c, TScalar):
                c = c.reduce_mod_t()  # raises NotIntegralError
            if c:
                terms[e] = c
        gens.append(MultiPoly(ring, terms))
    return IdealHandle(target or ring, [g.to_ring(target) if target else g for g in gens], I.caps)


def initial_ideal(I: IdealHandle, order: MonomialOrder = GREVLEX) -> IdealHandle:
    ring = I.ring
    gens = [MultiPoly.monomial(ring, g.leading_monomial(order), 1) for g in I.groebner(order)]
    return IdealHandle.from_basis(ring, minimal_monomials(gens), GREVLEX, I.caps)


def minimal_monomials(monos: Sequence[MultiPoly]) -> List[MultiPoly]:
    """Minimal generators of a monomial ideal, sorted by grevlex."""
    exps = sorted({next(iter(m.terms)) for m in monos if m.terms}, key=lambda e: (sum(e), e))
    keep: list = []
    for e in exps:
        if not any(all(a <= b for a, b in zip(k, e)) for k in keep):
            keep.append(e)
    if not keep:
        return []
    ring = monos[0].ring
    out = [MultiPoly(ring, {e: mpq(1)}, _clean=True) for e in keep]
    return _sorted_basis(out, GREVLEX)


def is_monomial_ideal(I: IdealHandle) -> bool:
    return all(g.is_monomial() for g in I.groebner())
