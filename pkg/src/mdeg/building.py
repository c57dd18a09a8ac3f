"""Lattices over the local ring O = Q[t]_(t) and their homothety classes.

A lattice is stored by an invertible basis matrix ``g`` (rows of TScalar);
its columns span ``L = g O^d``.  All reductions below pivot on entries of
minimal t-adic valuation, so every row/column operation is invertible over O.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Optional, Tuple

from . import linalg
from .arith import TScalar, scalar


class LatticeError(ValueError):
    pass


def _mat(rows) -> Tuple[Tuple[TScalar, ...], ...]:
    return tuple(tuple(scalar(x) for x in r) for r in rows)


def from_columns(cols) -> tuple:
    """Column-major list (file format) to a row tuple matrix."""
    cols = [[scalar(x) for x in c] for c in cols]
    if not cols:
        return ()
    if len({len(c) for c in cols}) != 1:
        raise LatticeError("columns of different lengths")
    return tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))


def to_columns(rows) -> list:
    return [list(c) for c in zip(*rows)] if rows else []


def diag(*entries) -> tuple:
    n = len(entries)
    z = TScalar.coerce(0)
    return tuple(tuple(scalar(entries[i]) if i == j else z for j in range(n)) for i in range(n))


def identity(d: int) -> tuple:
    return diag(*([1] * d))


def min_val(rows) -> Optional[int]:
    vals = [x.val() for r in rows for x in r if x]
    return min(vals) if vals else None


# ---------------------------------------------------------------------------
# Smith reduction over the local ring
# ---------------------------------------------------------------------------


def smith_local(a, track_left: bool = False):
    """Diagonalise ``a`` (m x n) over O.

    Returns ``(exponents, U)`` where exponents are the valuations of the
    diagonal entries (length min(m, n), ``None`` for zero pivots) in pivot
    order, and ``U`` (only if requested) satisfies ``a = U D V`` for some unit
    matrices U, V over O.  Pivots are chosen with minimal valuation, so the
    exponents come out in non-decreasing order.
    """
    a = [list(map(scalar, r)) for r in a]
    m = len(a)
    n = len(a[0]) if m else 0
    U = [list(r) for r in identity(m)] if track_left else None
    exps: List[Optional[int]] = []
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                x = a[i][j]
                if x:
                    v = x.val()
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            exps.extend([None] * (min(m, n) - k))
            break
        v, pi, pj = best
        if pi != k:
            a[pi], a[k] = a[k], a[pi]
            if U is not None:
                for row in U:
                    row[pi], row[k] = row[k], row[pi]
        if pj != k:
            for row in a:
                row[pj], row[k] = row[k], row[pj]
        piv = a[k][k]
        inv = piv.inv()
        for i in range(k + 1, m):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                if U is not None:
                    # row_i -= f row_k on a  <=>  col_k += f col_i on U
                    for row in U:
                        row[k] = row[k] + f * row[i]
        for j in range(k + 1, n):
            if a[k][j]:
                f = a[k][j] * inv
                for row in a:
                    row[j] = row[j] - f * row[k]
        exps.append(v)
    if track_left:
        return exps, U
    return exps


def relative_matrix(g, h):
    """g^{-1} h, the coordinates of L' = h O^d in the basis of L = g O^d."""
    return linalg.matmul(linalg.inverse([list(r) for r in g]), [list(r) for r in h])


def _check_square(g):
    d = len(g)
    if any(len(r) != d for r in g):
        raise LatticeError("lattice basis must be square")
    if not linalg.det([list(r) for r in g]):
        raise LatticeError("lattice basis is singular")
    return d


# ---------------------------------------------------------------------------
# Lattices and classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """L = g O^d for an invertible d x d matrix g over Q(t)."""

    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "g", _mat(self.g))
        _check_square(self.g)

    @classmethod
    def standard(cls, d: int) -> "Lattice":
        return cls(identity(d))

    @classmethod
    def from_columns(cls, cols) -> "Lattice":
        return cls(from_columns(cols))

    @property
    def d(self) -> int:
        return len(self.g)

    def rows(self) -> list:
        return [list(r) for r in self.g]

    def columns(self) -> list:
        return to_columns(self.g)

    def scale(self, k: int) -> "Lattice":
        """t^k L."""
        s = TScalar.t_power(k)
        return Lattice(tuple(tuple(x * s for x in r) for r in self.g))

    def transform(self, m) -> "Lattice":
        """m L for a matrix m over Q(t)."""
        return Lattice(linalg.matmul([list(r) for r in m], self.rows()))

    def rebase(self, u) -> "Lattice":
        """Same lattice, basis g u (u a unit matrix over O)."""
        return Lattice(linalg.matmul(self.rows(), [list(map(scalar, r)) for r in u]))

    def contains_vector(self, v) -> bool:
        x = linalg.matvec(linalg.inverse(self.rows()), [scalar(c) for c in v])
        return all(c.is_integral() for c in x)

    def contains(self, other: "Lattice") -> bool:
        return all(x.is_integral() for r in relative_matrix(self.g, other.g) for x in r)

    def hermite(self) -> tuple:
        """Canonical basis: lower triangular, diagonal t^{k_i}, reduced off-diagonal."""
        return hermite_form(self.g)

    def same_lattice(self, other: "Lattice") -> bool:
        return self.hermite() == other.hermite()

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in c) + "]" for c in self.columns()) + "]"


def hermite_form(g) -> tuple:
    """Column Hermite normal form over O (unique for the lattice g O^d)."""
    a = [list(map(scalar, r)) for r in g]
    d = len(a)
    for i in range(d):
        best = None
        for j in range(i, d):
            x = a[i][j]
            if x:
                v = x.val()
                if best is None or v < best[0]:
                    best = (v, j)
        if best is None:
            raise LatticeError("singular lattice basis")
        v, pj = best
        if pj != i:
            for row in a:
                row[pj], row[i] = row[i], row[pj]
        # scale pivot column to make the pivot exactly t^v
        u = a[i][i] * TScalar.t_power(-v)
        uinv = u.inv()
        for row in a:
            row[i] = row[i] * uinv
        for j in range(i + 1, d):
            if a[i][j]:
                f = a[i][j] * TScalar.t_power(-v)
                for row in a:
                    row[j] = row[j] - f * row[i]
    # reduce entries left of the diagonal modulo t^{k_i}
    for i in range(1, d):
        k = a[i][i].val()
        for j in range(i):
            x = a[i][j]
            if not x:
                continue
            ser = x.series(k)
            trunc = TScalar.coerce(0)
            for e, c in ser.items():
                trunc = trunc + TScalar.t_power(e, c)
            q = (x - trunc) * TScalar.t_power(-k)
            if q:
                for row in a:
                    row[j] = row[j] - q * row[i]
    return tuple(tuple(r) for r in a)


@dataclass(frozen=True)
class LatticeClass:
    """Homothety class [L]; ``rep`` is the canonical representative."""

    rep: Lattice

    @classmethod
    def of(cls, L: Lattice) -> "LatticeClass":
        h = hermite_form(L.g)
        k = min(h[i][i].val() for i in range(len(h)))
        if k:
            h = hermite_form(tuple(tuple(x * TScalar.t_power(-k) for x in r) for r in h))
        return cls(Lattice(h))

    @property
    def d(self) -> int:
        return self.rep.d

    def __str__(self):
        return str(self.rep)


def as_class(x) -> LatticeClass:
    if isinstance(x, LatticeClass):
        return x
    if isinstance(x, Lattice):
        return LatticeClass.of(x)
    return LatticeClass.of(Lattice(x))


def _lattice(x) -> Lattice:
    if isinstance(x, LatticeClass):
        return x.rep
    if isinstance(x, Lattice):
        return x
    return Lattice(x)


def invariant_factors(L, Lp) -> List[int]:
    """Exponents a_1 >= ... >= a_d of the elementary divisors of g^{-1} h."""
    L, Lp = _lattice(L), _lattice(Lp)
    if L.d != Lp.d:
        raise LatticeError("lattices of different ambient dimension")
    exps = smith_local(relative_matrix(L.g, Lp.g))
    if any(e is None for e in exps):
        raise LatticeError("singular relative matrix")
    return sorted(exps, reverse=True)


def spread(L, Lp) -> int:
    a = invariant_factors(L, Lp)
    return a[0] - a[-1]


def adjacent(c1, c2) -> bool:
    """Representatives with t M < L < M exist (a class is adjacent to itself)."""
    return spread(c1, c2) <= 1


def lattice_intersection(L, Lp, a: int = 0, b: int = 0) -> Lattice:
    """t^a L intersect t^b L'."""
    L, Lp = _lattice(L), _lattice(Lp)
    if L.d != Lp.d:
        raise LatticeError("lattices of different ambient dimension")
    exps, U = smith_local(relative_matrix(L.g, Lp.g), track_left=True)
    if any(e is None for e in exps):
        raise LatticeError("singular relative matrix")
    f = linalg.matmul(L.rows(), U)
    d = L.d
    cols = []
    for i in range(d):
        k = max(exps[i] + b - a, 0) + a
        s = TScalar.t_power(k)
        cols.append([f[r][i] * s for r in range(d)])
    return Lattice(tuple(tuple(cols[j][i] for j in range(d)) for i in range(d)))


def class_intersection(c1, c2, a: int, b: int) -> LatticeClass:
    return LatticeClass.of(lattice_intersection(_lattice(c1), _lattice(c2), a, b))


def convex_hull(classes: Iterable, bound: Optional[int] = None) -> List[LatticeClass]:
    """Closure under [t^a L cap t^b L'] for a, b in [-S, S], iterated to a fixed point.

    ``S`` defaults to the largest invariant-factor spread among input pairs.
    Before intersecting, the second representative is shifted so its
    invariant factors relative to the first start at 0; with that
    normalisation every distinct intersection class arises for a, b in range.
    """
    hull = []
    for c in classes:
        c = as_class(c)
        if c not in hull:
            hull.append(c)
    if not hull:
        raise ValueError("convex hull of an empty set")
    if bound is None:
        bound = max((spread(x, y) for x, y in combinations(hull, 2)), default=0)
    done = set()
    changed = True
    while changed:
        changed = False
        for x, y in list(combinations(hull, 2)):
            if (x, y) in done:
                continue
            done.add((x, y))
            c = invariant_factors(x.rep, y.rep)
            yrep = y.rep.scale(-c[-1])
            # [t^a L cap t^b L'] only depends on b - a
            for k in range(-2 * bound, 2 * bound + 1):
                z = class_intersection(x.rep, yrep, 0, k)
                if z not in hull:
                    hull.append(z)
                    changed = True
    return hull


def brute_force_hull(classes: Iterable, width: int) -> List[LatticeClass]:
    """Closure over all a, b in [-width, width] on canonical representatives, no shifting."""
    hull = []
    for c in classes:
        c = as_class(c)
        if c not in hull:
            hull.append(c)
    done = set()
    changed = True
    while changed:
        changed = False
        for x, y in list(combinations(hull, 2)):
            if (x, y) in done:
                continue
            done.add((x, y))
            for a in range(-width, width + 1):
                for b in range(-width, width + 1):
                    z = class_intersection(x.rep, y.rep, a, b)
                    if z not in hull:
                        hull.append(z)
                        changed = True
    return hull


# ---------------------------------------------------------------------------
# Quotient lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientLatticeDatum:
    """[L / M]: a lattice and columns spanning a free direct summand M."""

    lattice: Lattice
    sub: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sub", tuple(tuple(scalar(x) for x in col) for col in self.sub))

    @property
    def d(self) -> int:
        return self.lattice.d

    @property
    def rank(self) -> int:
        """l = d - rank(M)."""
        if not self.sub:
            return self.d
        return self.d - linalg.rank([list(c) for c in self.sub])

    def sub_coordinates(self) -> list:
        """Columns of M in the basis of L (d x k matrix, rows)."""
        if not self.sub:
            return []
        ginv = linalg.inverse(self.lattice.rows())
        cols = [linalg.matvec(ginv, list(c)) for c in self.sub]
        return [[cols[j][i] for j in range(len(cols))] for i in range(self.d)]

    def scale(self, k: int) -> "QuotientLatticeDatum":
        s = TScalar.t_power(k)
        return QuotientLatticeDatum(self.lattice.scale(k), tuple(tuple(x * s for x in c) for c in self.sub))

    def rebase(self, u) -> "QuotientLatticeDatum":
        return QuotientLatticeDatum(self.lattice.rebase(u), self.sub)

    def quotient_map(self) -> list:
        """Rows of an O-surjection O^d -> O^l (L-coordinates) with kernel M.

        Columns of M are processed in order; each pivots on its first unit
        entry among unused rows, which is eliminated from the other rows.
        The surviving identity rows, in original order, give the map.  When
        M is spanned by standard basis vectors this just drops those rows.
        """
        c = self.sub_coordinates()
        d = self.d
        one, zero = TScalar.coerce(1), TScalar.coerce(0)
        aug = [list(c[i]) + [one if i == j else zero for j in range(d)] for i in range(d)] if c else None
        if aug is None:
            return [list(r) for r in identity(d)]
        k = len(c[0])
        used = []
        for j in range(k):
            piv = None
            for i in range(d):
                if i not in used and aug[i][j] and aug[i][j].val() == 0:
                    piv = i
                    break
            if piv is None:
                if all(not aug[i][j] for i in range(d) if i not in used):
                    continue  # dependent generator
                raise LatticeError("M is not a direct summand of L")
            inv = aug[piv][j].inv()
            for i in range(d):
                if i != piv and aug[i][j]:
                    f = aug[i][j] * inv
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[piv])]
            used.append(piv)
        return [aug[i][k:] for i in range(d) if i not in used]


@dataclass
class Violation:
    code: str
    message: str


def validate_quotient(q: QuotientLatticeDatum) -> List[Violation]:
    """Structured check that M lies in L and L/M is free; empty list means ok."""
    out: List[Violation] = []
    try:
        _check_square(q.lattice.g)
    except LatticeError as exc:
        return [Violation("bad_lattice", str(exc))]
    d = q.d
    for col in q.sub:
        if len(col) != d:
            return [Violation("bad_shape", f"generator of M has length {len(col)}, expected {d}")]
    if not q.sub:
        return out
    c = q.sub_coordinates()
    bad = [(i, j) for i in range(d) for j in range(len(c[0])) if not c[i][j].is_integral()]
    if bad:
        out.append(Violation("not_contained", f"M is not contained in L (non-integral coordinates at {bad})"))
        return out
    exps = smith_local(c)
    if any(e is None for e in exps):
        out.append(Violation("rank_deficient", "generators of M are linearly dependent"))
    nonzero = [e for e in exps if e is not None and e != 0]
    if nonzero:
        out.append(Violation("not_direct_summand", f"not a direct summand: invariant-factor exponents {exps}"))
    if d - linalg.rank([list(col) for col in q.sub]) < 1:
        out.append(Violation("rank", "quotient rank must be at least 1"))
    return out


@dataclass
class GammaConfig:
    """A finite set of quotient lattices in a common d-dimensional space."""

    d: int
    data: List[QuotientLatticeDatum]
    reference: Optional[Lattice] = None

    def __post_init__(self):
        if not self.data:
            raise ValueError("Gamma must be nonempty")
        for q in self.data:
            if q.d != self.d:
                raise LatticeError(f"quotient lattice of dimension {q.d} in a d={self.d} configuration")
        if self.reference is not None and self.reference.d != self.d:
            raise LatticeError("reference lattice has the wrong dimension")

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def ranks(self) -> tuple:
        return tuple(q.rank for q in self.data)

    def validate(self) -> List[Tuple[int, Violation]]:
        return [(i, v) for i, q in enumerate(self.data) for v in validate_quotient(q)]

    def lattices(self) -> List[Lattice]:
        return [q.lattice for q in self.data]
