"""Dimension, K-polynomials and multidegrees of multihomogeneous ideals.

Everything here works on the monomial initial ideal; a Groebner
degeneration preserves both the Hilbert function and the Chow class.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Dict, List, Sequence

from .ideal import EmptySchemeError, IdealHandle, initial_ideal
from .ring import VarSpec


class ChowClass:
    """Integer combination of monomials in H_1..H_n modulo H_i^{l_i}."""

    __slots__ = ("ranks", "coeffs")

    def __init__(self, ranks: Sequence[int], coeffs: Dict[tuple, int] = None):
        self.ranks = tuple(ranks)
        out = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if len(e) != len(self.ranks):
                raise ValueError("exponent vector length differs from number of factors")
            if any(k >= l or k < 0 for k, l in zip(e, self.ranks)):
                continue
            if c:
                out[e] = out.get(e, 0) + int(c)
                if not out[e]:
                    del out[e]
        self.coeffs = out

    @classmethod
    def fundamental(cls, ranks):
        return cls(ranks, {(0,) * len(ranks): 1})

    def __add__(self, other: "ChowClass") -> "ChowClass":
        if self.ranks != other.ranks:
            raise ValueError("Chow classes of different ambient spaces")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return ChowClass(self.ranks, out)

    def __eq__(self, other):
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.ranks == other.ranks and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ranks, frozenset(self.coeffs.items())))

    def __le__(self, other: "ChowClass") -> bool:
        """Coefficientwise comparison."""
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(k, 0) <= other.coeffs.get(k, 0) for k in keys)

    def degree(self):
        degs = {sum(e) for e in self.coeffs}
        if len(degs) > 1:
            raise ValueError("inhomogeneous Chow class")
        return degs.pop() if degs else None

    def terms(self) -> int:
        return len(self.coeffs)

    def all_ones(self) -> bool:
        return all(c == 1 for c in self.coeffs.values())

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mono = "*".join(f"H{i + 1}" if k == 1 else f"H{i + 1}^{k}" for i, k in enumerate(e) if k)
            a = abs(c)
            body = mono if mono and a == 1 else (f"{a}*{mono}" if mono else str(a))
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    __repr__ = lambda self: f"ChowClass({str(self)!r})"

    @classmethod
    def parse(cls, ranks, text: str) -> "ChowClass":
        import re

        text = text.replace(" ", "")
        if text == "0":
            return cls(ranks)
        out: dict = {}
        for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
            c = 1
            e = [0] * len(ranks)
            for factor in body.split("*"):
                m = re.fullmatch(r"H(\d+)(?:\^(\d+))?", factor)
                if m:
                    e[int(m.group(1)) - 1] += int(m.group(2) or 1)
                else:
                    c *= int(factor)
            key = tuple(e)
            out[key] = out.get(key, 0) + (-c if sign == "-" else c)
        return cls(ranks, out)


# ---------------------------------------------------------------------------
# monomial combinatorics
# ---------------------------------------------------------------------------


def _monomial_exps(M: IdealHandle) -> List[tuple]:
    gb = M.groebner()
    exps = []
    for g in gb:
        if not g.is_monomial():
            raise ValueError("not a monomial ideal")
        exps.append(next(iter(g.terms)))
    return exps


def min_hitting_set(supports: Sequence[frozenset]) -> int:
    """Size of a smallest variable set meeting every support (branch and bound)."""
    supports = _minimal_sets(supports)
    best = [sum(1 for _ in set().union(*supports))] if supports else [0]

    def rec(sets, chosen):
        if chosen >= best[0]:
            return
        if not sets:
            best[0] = chosen
            return
        # branch on the smallest set
        s = min(sets, key=len)
        for v in sorted(s):
            rest = [x for x in sets if v not in x]
            rec(rest, chosen + 1)

    rec(list(supports), 0)
    return best[0]


def _minimal_sets(sets):
    sets = sorted({frozenset(s) for s in sets}, key=len)
    out = []
    for s in sets:
        if not any(o <= s for o in out):
            out.append(s)
    return out


def krull_dim_monomial(exps: Sequence[tuple], nvars: int) -> int:
    """Krull dimension of S/M: nvars minus a minimum vertex cover of supports."""
    if any(not any(e) for e in exps):
        return -1
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in exps]
    return nvars - min_hitting_set(supports)


def dimension(I: IdealHandle) -> int:
    """Projective dimension in the product of projective spaces.

    Auxiliary variables (no factor tag) count as affine directions, so the
    result is dim of the affine multicone minus the number of factors.
    """
    M = initial_ideal(I)
    exps = _monomial_exps(M)
    if any(not any(e) for e in exps):
        raise EmptySchemeError("unit ideal defines the empty scheme")
    return krull_dim_monomial(exps, I.ring.nvars) - I.ring.nfactors


def codimension(I: IdealHandle) -> int:
    M = initial_ideal(I)
    exps = _monomial_exps(M)
    if any(not any(e) for e in exps):
        raise EmptySchemeError("unit ideal defines the empty scheme")
    return I.ring.nvars - krull_dim_monomial(exps, I.ring.nvars)


# ---------------------------------------------------------------------------
# K-polynomials
# ---------------------------------------------------------------------------

Poly = Dict[tuple, int]


def _padd(a: Poly, b: Poly, s: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + s * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul_mono(a: Poly, m: tuple) -> Poly:
    return {tuple(x + y for x, y in zip(e, m)): c for e, c in a.items()}


def _minimalize(gens) -> tuple:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    keep = []
    for e in gens:
        if not any(all(a <= b for a, b in zip(k, e)) for k in keep):
            keep.append(e)
    return tuple(sorted(keep))


@lru_cache(maxsize=200000)
def _kpoly(gens: tuple, n: int) -> tuple:
    if not gens:
        return (((0,) * n, 1),)
    # pairwise coprime generators: product formula
    used = [0] * n
    coprime = True
    for g in gens:
        for i, k in enumerate(g):
            if k:
                if used[i]:
                    coprime = False
                    break
                used[i] = 1
        if not coprime:
            break
    if coprime:
        acc: Poly = {(0,) * n: 1}
        for g in gens:
            acc = _padd(acc, _pmul_mono(acc, g), -1)
        return tuple(sorted(acc.items()))
    # K(M' + <m>) = K(M') - z^m K(M' : m)
    m = gens[-1]
    rest = gens[:-1]
    colon = _minimalize(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest)
    k1 = dict(_kpoly(rest, n))
    k2 = dict(_kpoly(colon, n))
    return tuple(sorted(_padd(k1, _pmul_mono(k2, m), -1).items()))


def kpolynomial_exps(exps: Sequence[tuple], n: int) -> Poly:
    return dict(_kpoly(_minimalize(exps), n))


def kpolynomial(M: IdealHandle) -> Poly:
    """Finely graded K-polynomial of S/M: numerator of the Hilbert series over prod(1 - z_v)."""
    if not M.gens:
        return {(0,) * M.ring.nvars: 1}
    return kpolynomial_exps(_monomial_exps(M), M.ring.nvars)


def coarsen(K: Poly, ring: VarSpec) -> Poly:
    """Push the fine grading to the factor grading (aux variables get degree 0)."""
    out: Poly = {}
    for e, c in K.items():
        d = [0] * ring.nfactors
        for v, k in enumerate(e):
            f = ring.factor[v]
            if k and f is not None:
                d[f] += k
        d = tuple(d)
        out[d] = out.get(d, 0) + c
        if not out[d]:
            del out[d]
    return out


def _binom_expansion(kpoly_coarse: Poly, nf: int, maxdeg: int) -> Poly:
    """Substitute u_j -> 1 - H_j and keep terms of total H-degree <= maxdeg."""
    from math import comb

    out: Poly = {}
    for e, c in kpoly_coarse.items():
        # prod_j (1 - H_j)^{e_j}
        ranges = [range(0, min(k, maxdeg) + 1) for k in e]
        for a in product(*ranges):
            if sum(a) > maxdeg:
                continue
            coef = c
            for k, aj in zip(e, a):
                coef *= comb(k, aj) * (-1) ** aj
            if coef:
                out[a] = out.get(a, 0) + coef
                if not out[a]:
                    del out[a]
    return out


def multidegree(I: IdealHandle) -> ChowClass:
    """Chow class of the subscheme defined by I in prod P^{l_i - 1}.

    Only x-variables may occur (a multihomogeneous ideal of the product ring).
    """
    ring = I.ring
    if ring.aux_positions():
        raise ValueError("multidegree needs a pure x-variable ring")
    M = initial_ideal(I)
    exps = _monomial_exps(M)
    if any(not any(e) for e in exps):
        raise EmptySchemeError("unit ideal defines the empty scheme")
    codim = ring.nvars - krull_dim_monomial(exps, ring.nvars) if exps else 0
    K = coarsen(kpolynomial_exps(exps, ring.nvars) if exps else {(0,) * ring.nvars: 1}, ring)
    expanded = _binom_expansion(K, ring.nfactors, codim)
    low = {e: c for e, c in expanded.items() if sum(e) < codim}
    if low:
        raise AssertionError(f"K-polynomial has terms below the codimension: {low}")
    return ChowClass(ring.ranks, {e: c for e, c in expanded.items() if sum(e) == codim})


def hilbert_function(I_or_exps, ring: VarSpec, degree: tuple) -> int:
    """Number of standard monomials of the given multidegree (brute force)."""
    exps = I_or_exps if isinstance(I_or_exps, (list, tuple)) else _monomial_exps(initial_ideal(I_or_exps))
    count = 0
    for mono in monomials_of_multidegree(ring, degree):
        if not any(all(a <= b for a, b in zip(g, mono)) for g in exps):
            count += 1
    return count


def monomials_of_multidegree(ring: VarSpec, degree: tuple):
    blocks = [ring.block(j) for j in range(ring.nfactors)]
    per_block = [list(_compositions(d, len(b))) for d, b in zip(degree, blocks)]
    for choice in product(*per_block):
        e = [0] * ring.nvars
        for b, comp in zip(blocks, choice):
            for v, k in zip(b, comp):
                e[v] = k
        yield tuple(e)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for k in range(total, -1, -1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest
