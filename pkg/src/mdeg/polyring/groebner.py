"""Buchberger's algorithm with the Gebauer-Moeller criteria.

Internally a monomial is a pair of Python ints: an order key (a linear
functional of the exponent vector, so multiplication is addition and
comparison is integer comparison) and a packed exponent word with guard bits
for constant-time divisibility tests.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .poly import MultiPoly
from .ring import GREVLEX, MonomialOrder, VarSpec

log = logging.getLogger("mdeg.groebner")

FIELD = 16
FMASK = (1 << FIELD) - 1
MAX_EXP = (1 << (FIELD - 1)) - 1


class ResourceLimitExceeded(RuntimeError):
    """Raised when a Groebner computation exceeds its configured caps."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass
class Caps:
    max_degree: int = 40
    max_spairs: int = 200000


DEFAULT_CAPS = Caps()


class _Ctx:
    """Packing context for one (ring, order) pair."""

    def __init__(self, ring: VarSpec, order: MonomialOrder, degree_weights=None):
        self.ring = ring
        self.order = order
        self.n = ring.nvars
        self.w = order.weights(ring)
        self.place = [1 << (FIELD * i) for i in range(self.n)]
        self.guard = sum(1 << (FIELD * i + FIELD - 1) for i in range(self.n))
        self.dw = list(degree_weights) if degree_weights else order.degree_weights(ring)

    def pack(self, exp):
        k = 0
        p = 0
        for e, w, pl in zip(exp, self.w, self.place):
            if e:
                if e > MAX_EXP:
                    raise ResourceLimitExceeded(f"exponent {e} exceeds packing limit")
                k += e * w
                p += e * pl
        return k, p

    def unpack(self, p) -> tuple:
        out = []
        for _ in range(self.n):
            out.append(p & FMASK)
            p >>= FIELD
        return tuple(out)

    def divides(self, a, b) -> bool:
        return not ((b - a) & self.guard)

    def deg(self, exp) -> int:
        return sum(e * d for e, d in zip(exp, self.dw))

    def from_poly(self, f: MultiPoly) -> list:
        terms = []
        for e, c in f.terms.items():
            k, p = self.pack(e)
            terms.append((k, p, c))
        terms.sort(key=lambda t: t[0], reverse=True)
        return terms

    def to_poly(self, terms) -> MultiPoly:
        return MultiPoly(self.ring, {self.unpack(p): c for _, p, c in terms}, _clean=True)


class _Elem:
    __slots__ = ("lk", "lp", "lexp", "tail", "sugar", "terms", "active")

    def __init__(self, ctx: _Ctx, terms: list, sugar: int):
        self.terms = terms
        self.lk, self.lp, _ = terms[0]
        self.lexp = ctx.unpack(self.lp)
        self.tail = terms[1:]
        self.sugar = sugar
        self.active = True


def _make_monic(terms):
    lc = terms[0][2]
    if lc == 1:
        return terms
    inv = 1 / lc
    return [(k, p, c * inv) for k, p, c in terms]


def _reduce(ctx: _Ctx, acc: dict, pe: dict, heap: list, basis: List[_Elem], full: bool = True):
    """Reduce the accumulator polynomial by ``basis``; return sorted terms."""
    div = ctx.divides
    out = []
    cache_fail: set = set()
    while heap:
        k = -heapq.heappop(heap)
        c = acc.pop(k, None)
        if c is None:
            continue
        p = pe[k]
        red = None
        if p not in cache_fail:
            for g in basis:
                if div(g.lp, p):
                    red = g
                    break
        if red is None:
            out.append((k, p, c))
            if not full:
                # top-reduction only: the rest stays unreduced
                rest = sorted(((kk, pe[kk], cc) for kk, cc in acc.items()), key=lambda t: t[0], reverse=True)
                out.extend(rest)
                return out
            cache_fail.add(p)
            continue
        qk = k - red.lk
        qp = p - red.lp
        for tk, tp, tc in red.tail:
            nk = tk + qk
            v = acc.get(nk)
            if v is None:
                acc[nk] = -c * tc
                pe[nk] = tp + qp
                heapq.heappush(heap, -nk)
            else:
                v = v - c * tc
                if v:
                    acc[nk] = v
                else:
                    del acc[nk]
    return out


def _load(terms, scale=None, qk=0, qp=0, acc=None, pe=None, heap=None):
    if acc is None:
        acc, pe, heap = {}, {}, []
    for k, p, c in terms:
        nk = k + qk
        cc = c if scale is None else c * scale
        v = acc.get(nk)
        if v is None:
            acc[nk] = cc
            pe[nk] = p + qp
            heapq.heappush(heap, -nk)
        else:
            v = v + cc
            if v:
                acc[nk] = v
            else:
                del acc[nk]
    return acc, pe, heap


def reduce_terms(ctx, terms, basis, full=True):
    acc, pe, heap = _load(terms)
    return _reduce(ctx, acc, pe, heap, basis, full)


class GroebnerRun:
    """State of one Buchberger computation; ``stats`` summarises the run."""

    def __init__(self, ring: VarSpec, order: MonomialOrder, caps: Caps = DEFAULT_CAPS, degree_weights=None):
        self.ctx = _Ctx(ring, order, degree_weights)
        self.caps = caps
        self.G: List[_Elem] = []
        self.pairs: list = []
        self.counter = 0
        self.stats = {"spairs": 0, "zero_reductions": 0, "max_lcm_degree": 0}

    def _lcm(self, a: _Elem, b: _Elem):
        return tuple(max(x, y) for x, y in zip(a.lexp, b.lexp))

    def _update(self, h: _Elem):
        ctx = self.ctx
        hi = len(self.G)
        self.G.append(h)
        active = [i for i in range(hi) if self.G[i].active]
        # candidate pairs (h, g)
        cands = []
        for i in active:
            g = self.G[i]
            l = self._lcm(h, g)
            coprime = all(not (x and y) for x, y in zip(h.lexp, g.lexp))
            cands.append((i, l, ctx.pack(l)[1], coprime))
        kept = []
        for idx, (i, l, lp, coprime) in enumerate(cands):
            if coprime:
                kept.append((i, l, lp, coprime))
                continue
            dominated = False
            for j, (i2, l2, lp2, _) in enumerate(cands):
                if j > idx and ctx.divides(lp2, lp):
                    dominated = True
                    break
            if not dominated:
                for (i2, l2, lp2, _) in kept:
                    if ctx.divides(lp2, lp):
                        dominated = True
                        break
            if not dominated:
                kept.append((i, l, lp, coprime))
        # old pairs killed by the new leading term (chain criterion)
        if self.pairs:
            survivors = []
            for entry in self.pairs:
                _, _, _, i, j, lp = entry
                if ctx.divides(h.lp, lp):
                    lih = ctx.pack(self._lcm(self.G[i], h))[1]
                    ljh = ctx.pack(self._lcm(self.G[j], h))[1]
                    if lih != lp and ljh != lp:
                        continue
                survivors.append(entry)
            if len(survivors) != len(self.pairs):
                heapq.heapify(survivors)
                self.pairs = survivors
        for i, l, lp, coprime in kept:
            if coprime:
                continue
            g = self.G[i]
            dl = ctx.deg(l)
            sugar = max(h.sugar + dl - ctx.deg(h.lexp), g.sugar + dl - ctx.deg(g.lexp))
            lk = ctx.pack(l)[0]
            self.counter += 1
            heapq.heappush(self.pairs, (sugar, lk, self.counter, i, hi, lp))
        for i in active:
            if ctx.divides(h.lp, self.G[i].lp):
                self.G[i].active = False

    def _basis(self):
        return [g for g in self.G if g.active]

    def add(self, f: MultiPoly):
        terms = self.ctx.from_poly(f)
        if not terms:
            return
        sugar = max(self.ctx.deg(self.ctx.unpack(p)) for _, p, _ in terms)
        red = reduce_terms(self.ctx, terms, self._basis())
        if red:
            self._insert(red, sugar)

    def _insert(self, terms, sugar):
        terms = _make_monic(terms)
        self._update(_Elem(self.ctx, terms, sugar))

    def run(self):
        ctx = self.ctx
        caps = self.caps
        while self.pairs:
            sugar, lk, _, i, j, lp = heapq.heappop(self.pairs)
            self.stats["spairs"] += 1
            if self.stats["spairs"] > caps.max_spairs:
                raise ResourceLimitExceeded(
                    f"S-pair cap {caps.max_spairs} exceeded", self._diagnostics()
                )
            lexp = ctx.unpack(lp)
            d = sum(lexp)
            self.stats["max_lcm_degree"] = max(self.stats["max_lcm_degree"], d)
            if d > caps.max_degree:
                raise ResourceLimitExceeded(
                    f"degree cap {caps.max_degree} exceeded (S-pair of degree {d})", self._diagnostics()
                )
            a, b = self.G[i], self.G[j]
            acc, pe, heap = _load(a.tail, qk=lk - a.lk, qp=lp - a.lp)
            _load(b.tail, scale=-1, qk=lk - b.lk, qp=lp - b.lp, acc=acc, pe=pe, heap=heap)
            red = _reduce(ctx, acc, pe, heap, self._basis())
            if red:
                self._insert(red, sugar)
            else:
                self.stats["zero_reductions"] += 1
            if self.stats["spairs"] % 500 == 0:
                log.debug("spairs=%d basis=%d queue=%d sugar=%d", self.stats["spairs"], len(self._basis()), len(self.pairs), sugar)

    def _diagnostics(self):
        return {
            **self.stats,
            "basis_size": len(self._basis()),
            "pending_pairs": len(self.pairs),
            "leading_monomials": [self.ctx.unpack(g.lp) for g in self._basis()][:50],
        }

    def reduced(self) -> List[MultiPoly]:
        ctx = self.ctx
        basis = self._basis()
        basis.sort(key=lambda g: g.lk)
        out_terms = []
        for idx, g in enumerate(basis):
            others = basis[:idx] + basis[idx + 1:]
            tail = reduce_terms(ctx, g.tail, others)
            out_terms.append([g.terms[0]] + tail)
        return [ctx.to_poly(t) for t in out_terms]


def buchberger(gens: Sequence[MultiPoly], order: MonomialOrder = GREVLEX, caps: Caps = DEFAULT_CAPS,
               degree_weights=None, stats: Optional[dict] = None) -> List[MultiPoly]:
    """Reduced Groebner basis of ``gens`` (monic, sorted by increasing leading monomial)."""
    gens = [g for g in gens if g.terms]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators over different rings")
    run = GroebnerRun(ring, order, caps, degree_weights)
    # small leading terms first keeps early interreduction cheap
    key = order.key_function(ring)
    for g in sorted(gens, key=lambda f: key(f.leading_monomial(order))):
        run.add(g)
        if any(not any(g.lexp) for g in run._basis()):
            break
    if not any(not any(g.lexp) for g in run._basis()):
        run.run()
    if stats is not None:
        stats.update(run.stats)
    basis = run._basis()
    if any(not any(g.lexp) for g in basis):
        return [MultiPoly.const(ring, 1)]
    return run.reduced()


def normal_form(f: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> MultiPoly:
    """Remainder of ``f`` by ``basis``; no term is divisible by a leading term."""
    ctx = _Ctx(f.ring, order)
    elems = []
    for g in basis:
        if g.ring != f.ring:
            raise ValueError("basis and polynomial over different rings")
        t = ctx.from_poly(g)
        if t:
            elems.append(_Elem(ctx, _make_monic(t), 0))
    return ctx.to_poly(reduce_terms(ctx, ctx.from_poly(f), elems))


def spolynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    ef, cf = f.leading_term(order)
    eg, cg = g.leading_term(order)
    l = tuple(max(a, b) for a, b in zip(ef, eg))
    mf = MultiPoly.monomial(f.ring, tuple(a - b for a, b in zip(l, ef)), 1 / cf)
    mg = MultiPoly.monomial(f.ring, tuple(a - b for a, b in zip(l, eg)), 1 / cg)
    return mf * f - mg * g


def is_groebner(basis: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> bool:
    """Check Buchberger's criterion directly (every S-polynomial reduces to 0)."""
    basis = [b for b in basis if b.terms]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if normal_form(spolynomial(basis[i], basis[j], order), basis, order).terms:
                return False
    return True
