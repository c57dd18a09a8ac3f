"""Generalised multi-view varieties: vision ideals, the combinatorial
dimension/class formula, and component candidates X_[L],Gamma."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import linalg
from .arith import Rat, TScalar, mpq, scalar
from .building import GammaConfig, Lattice, LatticeError, QuotientLatticeDatum
from .polyring import ChowClass, IdealHandle, MultiPoly, VarSpec, eliminate, ideal_equal
from .polyring.groebner import DEFAULT_CAPS, Caps

log = logging.getLogger(__name__)


class EmptyImageError(ValueError):
    """A camera matrix is zero, so its factor of the vision map is undefined."""


def _entry(x):
    if isinstance(x, (TScalar, Rat)):
        return x
    s = scalar(x)
    return s.to_rat() if s.is_rational() else s


@dataclass
class CameraTuple:
    """Matrices B_1..B_n (rows) of shape l_i x d over Q or Q(t)."""

    mats: List[list]
    d: int = 0

    def __post_init__(self):
        self.mats = [[[_entry(x) for x in row] for row in m] for m in self.mats]
        if not self.mats:
            raise ValueError("camera tuple must be nonempty")
        d = len(self.mats[0][0]) if self.mats[0] else 0
        self.d = self.d or d
        for m in self.mats:
            if not m or any(len(r) != self.d for r in m):
                raise ValueError(f"every camera needs {self.d} columns")

    @property
    def n(self) -> int:
        return len(self.mats)

    @property
    def ranks(self) -> tuple:
        """Row counts l_i (the ambient projective spaces are P^{l_i - 1})."""
        return tuple(len(m) for m in self.mats)

    def matrix_ranks(self) -> tuple:
        return tuple(linalg.rank(m) for m in self.mats)

    def over_tscalar(self) -> bool:
        return any(isinstance(x, TScalar) for m in self.mats for r in m for x in r)

    def substitute_t(self, c) -> "CameraTuple":
        """Value at t = c (a rational)."""
        out = []
        for m in self.mats:
            out.append([[x.subs(c) if isinstance(x, TScalar) else x for x in r] for r in m])
        return CameraTuple(out, self.d)

    def to_json(self) -> list:
        return [[[str(x) for x in r] for r in m] for m in self.mats]


# ---------------------------------------------------------------------------
# kernel profile and admissible tuples
# ---------------------------------------------------------------------------


@dataclass
class KernelProfile:
    """d and d_I = dim of the common kernel of the B_i, i in I (0-based subsets)."""

    d: int
    n: int
    dims: Dict[FrozenSet[int], int]

    def __getitem__(self, I) -> int:
        return self.dims[frozenset(I)]

    def singles(self) -> tuple:
        return tuple(self.dims[frozenset([i])] for i in range(self.n))

    def to_json(self) -> dict:
        return {
            ",".join(str(i + 1) for i in sorted(I)): v
            for I, v in sorted(self.dims.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        }


def kernel_dims(B: CameraTuple) -> KernelProfile:
    if B.n > 12:
        raise ValueError("kernel profile enumerates all subsets; n <= 12 supported")
    dims = {}
    for k in range(1, B.n + 1):
        for I in combinations(range(B.n), k):
            stacked = [row for i in I for row in B.mats[i]]
            dims[frozenset(I)] = B.d - linalg.rank(stacked)
    return KernelProfile(B.d, B.n, dims)


@dataclass
class AdmissibleSet:
    r0: int
    tuples: List[tuple]


def _satisfies(m, profile: KernelProfile) -> bool:
    d = profile.d
    return all(sum(m[i] for i in I) < d - v for I, v in profile.dims.items())


def admissible_tuples(profile: KernelProfile, n: Optional[int] = None) -> AdmissibleSet:
    """Maximal r with some m, sum(m) = r, sum_{i in I} m_i < d - d_I for all nonempty I."""
    n = profile.n if n is None else n
    d = profile.d
    caps = [d - 1 - profile[[i]] for i in range(n)]
    if any(c < 0 for c in caps):
        raise ValueError("a camera has full kernel (d_i = d)")
    found: Dict[int, List[tuple]] = {}
    subsets = sorted(profile.dims.items(), key=lambda kv: max(kv[0]))

    def rec(prefix):
        k = len(prefix)
        # check every constraint whose subset is fully decided
        for I, v in subsets:
            if max(I) == k - 1 and sum(prefix[i] for i in I) >= d - v:
                return
        if k == n:
            found.setdefault(sum(prefix), []).append(tuple(prefix))
            return
        for x in range(caps[k] + 1):
            rec(prefix + [x])

    rec([])
    r0 = max(found)
    return AdmissibleSet(r0, sorted(found[r0]))


def brute_force_admissible(profile: KernelProfile) -> AdmissibleSet:
    """Independent oracle: scan the full box 0 <= m_i <= d - 1."""
    from itertools import product

    best: Dict[int, List[tuple]] = {}
    for m in product(range(profile.d), repeat=profile.n):
        if _satisfies(m, profile):
            best.setdefault(sum(m), []).append(m)
    r0 = max(best)
    return AdmissibleSet(r0, sorted(best[r0]))


def dim_and_chow(profile: KernelProfile, ranks: Sequence[int]) -> Tuple[int, ChowClass]:
    """(p_0, sum over admissible m of prod H_i^{l_i - 1 - m_i})."""
    ranks = tuple(ranks)
    if len(ranks) != profile.n:
        raise ValueError("one rank per camera expected")
    for i, l in enumerate(ranks):
        if l != profile.d - profile[[i]]:
            raise ValueError(f"rank l_{i + 1} = {l} inconsistent with kernel dimension {profile[[i]]}")
    adm = admissible_tuples(profile)
    coeffs = {}
    for m in adm.tuples:
        e = tuple(l - 1 - mi for l, mi in zip(ranks, m))
        assert all(0 <= x <= l - 1 for x, l in zip(e, ranks))
        coeffs[e] = coeffs.get(e, 0) + 1
    return adm.r0, ChowClass(ranks, coeffs)


# ---------------------------------------------------------------------------
# vision ideals
# ---------------------------------------------------------------------------


def vision_ring(ranks: Sequence[int], d: int, t_variable: bool = False) -> Tuple[VarSpec, list, list]:
    ys = [f"y{k + 1}" for k in range(d)]
    lams = [f"lam{i + 1}" for i in range(1, len(ranks))]
    ring = VarSpec.multiview(ranks, pre=ys + lams, post=("t",) if t_variable else ())
    return ring, ys, lams


def _t_poly_terms(x) -> Dict[int, Rat]:
    """{exponent: coefficient} of a polynomial in t."""
    if not x:
        return {}
    if isinstance(x, TScalar):
        if not x.is_polynomial():
            raise ValueError(f"camera entry {x} is not a polynomial in t")
        c = x.den.coeff(0)
        return {k: x.num.coeff(k) / c for k in range(x.num.low, x.num.degree + 1) if x.num.coeff(k)}
    return {0: mpq(x)} if x else {}


def _auto_weights(B: CameraTuple, ring: VarSpec, ys, lams, t_variable: bool) -> Optional[dict]:
    """Positive weights making every parametrisation generator homogeneous, if any exist."""
    if not t_variable:
        wd = {y: 1 for y in ys}
        wd.update({lam: 1 for lam in lams})
        for i, m in enumerate(B.mats):
            for j in range(len(m)):
                wd[ring.names[ring.x(j + 1, i + 1)]] = 1 if i == 0 else 2
        return wd
    # u_{ji} - y_k = e_{jk} for every nonzero monomial entry c t^e
    adj: Dict[tuple, list] = {}
    for i, m in enumerate(B.mats):
        for j, row in enumerate(m):
            for k, x in enumerate(row):
                terms = _t_poly_terms(x)
                if not terms:
                    continue
                if len(terms) > 1:
                    return None
                (e,) = terms
                adj.setdefault(("u", i, j), []).append((("y", k), -e))
                adj.setdefault(("y", k), []).append((("u", i, j), e))
    pot: Dict[tuple, int] = {}
    for start in adj:
        if start in pot:
            continue
        comp = [start]
        pot[start] = 0
        stack = [start]
        while stack:
            a = stack.pop()
            for b, e in adj[a]:
                want = pot[a] + e
                if b in pot:
                    if pot[b] != want:
                        return None
                else:
                    pot[b] = want
                    comp.append(b)
                    stack.append(b)
        low = min(pot[c] for c in comp if c[0] == "y")
        for c in comp:
            pot[c] += 1 - low
    wd = {"t": 1}
    for k, y in enumerate(ys):
        wd[y] = pot.get(("y", k), 1)
    for lam in lams:
        wd[lam] = 1
    for i, m in enumerate(B.mats):
        for j in range(len(m)):
            u = pot.get(("u", i, j), 1)
            wd[ring.names[ring.x(j + 1, i + 1)]] = u + (1 if i else 0)
    return wd


def parametrisation(B: CameraTuple, t_variable: bool = False):
    """Generators x_{j1} - (B_1 y)_j and x_{ji} - lam_i (B_i y)_j, plus the ring data."""
    ring, ys, lams = vision_ring(B.ranks, B.d, t_variable)
    yv = [MultiPoly.var(ring, y) for y in ys]
    tv = MultiPoly.var(ring, "t") if t_variable else None
    gens = []
    for i, m in enumerate(B.mats):
        if all(not x for row in m for x in row):
            raise EmptyImageError(f"camera {i + 1} is zero: empty image factor")
        for j, row in enumerate(m):
            lin = MultiPoly.zero(ring)
            for k, x in enumerate(row):
                if not x:
                    continue
                if t_variable:
                    for e, c in _t_poly_terms(x).items():
                        lin = lin + yv[k] * tv ** e * c
                else:
                    lin = lin + yv[k] * x
            if i:
                lin = lin * MultiPoly.var(ring, lams[i - 1])
            gens.append(MultiPoly.var(ring, ring.names[ring.x(j + 1, i + 1)]) - lin)
    return ring, ys, lams, gens


def vision_ideal(B: CameraTuple, t_variable: bool = False, caps: Caps = DEFAULT_CAPS,
                 weights="auto") -> IdealHandle:
    """Prime ideal of the closure of the image of y -> (B_1 y, ..., B_n y).

    Each factor after the first carries its own scaling variable lam_i, so
    the elimination ideal is multihomogeneous.  With ``t_variable`` the
    entries must be polynomials in t, which becomes the smallest ring
    variable of the result.
    """
    ring, ys, lams, gens = parametrisation(B, t_variable)
    wd = _auto_weights(B, ring, ys, lams, t_variable) if weights == "auto" else (weights or {})
    if wd:
        log.debug("vision ideal weights %s", wd)
    I = IdealHandle(ring, gens, caps)
    out = eliminate(I, ys + lams, wdeg=wd or ())
    out.stats.update(I.stats)
    return out


def vanishes_on_image(I: IdealHandle, B: CameraTuple) -> bool:
    """Every generator becomes the zero polynomial after x_{.i} -> lam_i B_i y."""
    t_variable = "t" in I.ring
    big, ys, lams, _ = parametrisation(B, t_variable)
    images = {}
    yv = [MultiPoly.var(big, y) for y in ys]
    for i, m in enumerate(B.mats):
        for j, row in enumerate(m):
            lin = MultiPoly.zero(big)
            for k, x in enumerate(row):
                if not x:
                    continue
                if t_variable:
                    for e, c in _t_poly_terms(x).items():
                        lin = lin + yv[k] * MultiPoly.var(big, "t") ** e * c
                else:
                    lin = lin + yv[k] * x
            if i:
                lin = lin * MultiPoly.var(big, lams[i - 1])
            images[I.ring.names[I.ring.x(j + 1, i + 1)]] = lin
    for g in I.gens:
        if g.substitute(images, big).terms:
            return False
    return True


# ---------------------------------------------------------------------------
# factor matrices and component candidates
# ---------------------------------------------------------------------------


def factor_matrix(q: QuotientLatticeDatum, reference: Lattice) -> list:
    """G_i: the composite L -> L_i -> L_i/M_i in the bases of L and of the quotient."""
    hinv = linalg.inverse(q.lattice.rows())
    phi = q.quotient_map()
    return linalg.matmul(linalg.matmul(phi, hinv), reference.rows())


def factor_matrices(cfg: GammaConfig, reference: Optional[Lattice] = None) -> List[list]:
    ref = reference or cfg.reference or cfg.data[0].lattice
    return [factor_matrix(q, ref) for q in cfg.data]


def min_valuation(m) -> int:
    vals = [x.val() for r in m for x in r if x]
    if not vals:
        raise EmptyImageError("zero factor matrix")
    return min(vals)


def reduced_factor_matrix(G) -> Tuple[int, list]:
    """(s, H) with s the minimal entry valuation and H = (t^{-s} G) mod t."""
    s = min_valuation(G)
    scale = TScalar.t_power(-s)
    H = [[(x * scale).reduce_mod_t() for x in r] for r in G]
    assert any(x for r in H for x in r), "reduced factor matrix vanished"
    return s, H


@dataclass
class Candidate:
    reference: Lattice
    valuations: List[int]
    reduced: List[list]
    ranks: List[int]
    ideal: IdealHandle

    def to_json(self) -> dict:
        return {
            "reference": [[str(x) for x in c] for c in self.reference.columns()],
            "valuations": self.valuations,
            "reduced_factor_matrices": [[[str(x) for x in r] for r in H] for H in self.reduced],
            "reduced_ranks": self.ranks,
            "ideal": self.ideal.strings(),
        }


def component_candidate(cfg: GammaConfig, reference: Lattice, caps: Caps = DEFAULT_CAPS) -> Candidate:
    """X_[L],Gamma: the multi-view variety of the reduced factor matrices over Q."""
    bad = cfg.validate()
    if bad:
        raise LatticeError("; ".join(f"lattice {i + 1}: {v.message}" for i, v in bad))
    vals, Hs = [], []
    for q in cfg.data:
        s, H = reduced_factor_matrix(factor_matrix(q, reference))
        vals.append(s)
        Hs.append(H)
    ideal = vision_ideal(CameraTuple(Hs, cfg.d), caps=caps)
    return Candidate(reference, vals, Hs, [linalg.rank(H) for H in Hs], ideal)


# ---------------------------------------------------------------------------
# change of the g-choice
# ---------------------------------------------------------------------------


def target_change(G_old, G_new) -> list:
    """W over O with G_new = W G_old, for two factor matrices of one quotient.

    The factor matrices of the same quotient under two choices of g differ
    by an O-automorphism of the target; W is recovered from a set of pivot
    columns of G_old and checked to be a unit matrix.
    """
    l = len(G_old)
    cols, basis = [], []
    for c in range(len(G_old[0])):
        trial = basis + [[G_old[r][c] for r in range(l)]]
        if linalg.rank(trial) == len(trial):
            basis, cols = trial, cols + [c]
        if len(cols) == l:
            break
    if len(cols) < l:
        raise ValueError("factor matrix does not have full row rank")
    sub_old = [[G_old[r][c] for c in cols] for r in range(l)]
    sub_new = [[G_new[r][c] for c in cols] for r in range(l)]
    W = linalg.matmul(sub_new, linalg.inverse(sub_old))
    if linalg.matmul(W, G_old) != [list(r) for r in G_new]:
        raise ValueError("factor matrices are not related by a target change")
    if any(x and x.val() < 0 for r in W for x in r) or linalg.det(W).val() != 0:
        raise ValueError("target change is not a unit over O")
    return W


def pull_back(I: IdealHandle, changes: Sequence[list]) -> IdealHandle:
    """{f(W_1 x_1, ..., W_n x_n) : f in I} for matrices W_i over Q."""
    ring = I.ring
    blocks: Dict[int, list] = {}
    for name, tag in zip(ring.names, ring.factor):
        if tag is not None:
            blocks.setdefault(tag, []).append(name)
    images = {}
    for i, names in blocks.items():
        W = changes[i]
        for j, name in enumerate(names):
            acc = MultiPoly.zero(ring)
            for k, other in enumerate(names):
                if W[j][k]:
                    acc = acc + MultiPoly.var(ring, other) * W[j][k]
            images[name] = acc
    return IdealHandle(ring, [g.substitute(images) for g in I.gens], I.caps)


def candidate_change(cfg: GammaConfig, other: GammaConfig, reference: Lattice) -> List[list]:
    """Residue matrices W_i mod t relating the candidates of two g-choices.

    ``other`` must present the same quotient lattices; the candidate of
    ``other`` is then the pull-back of the candidate of ``cfg`` along the
    returned matrices.
    """
    out = []
    for q, p in zip(cfg.data, other.data):
        W = target_change(factor_matrix(q, reference), factor_matrix(p, reference))
        out.append([[x.reduce_mod_t() for x in r] for r in W])
    return out


@dataclass
class ChoiceComparison:
    """Candidates of one reference under two g-choices."""

    reference: Lattice
    first: IdealHandle
    second: IdealHandle
    changes: List[list]
    literal_equal: bool
    isomorphic: bool

    def to_json(self) -> dict:
        return {
            "reference": [[str(x) for x in c] for c in self.reference.columns()],
            "first": self.first.strings(),
            "second": self.second.strings(),
            "residue_changes": [[[str(x) for x in r] for r in W] for W in self.changes],
            "literal_equal": self.literal_equal,
            "isomorphic": self.isomorphic,
        }


def compare_g_choices(cfg: GammaConfig, other: GammaConfig, reference: Lattice,
                      caps: Caps = DEFAULT_CAPS) -> ChoiceComparison:
    """Compare the candidates of ``cfg`` and of a re-based copy ``other``.

    Literal equality in the fixed coordinates is reported separately from
    the isomorphism given by the explicit residue coordinate change, so a
    mismatch shows up as a diagnostic instead of being identified away.
    """
    a = component_candidate(cfg, reference, caps).ideal
    b = component_candidate(other, reference, caps).ideal
    W = candidate_change(cfg, other, reference)
    literal = ideal_equal(a, b)
    iso = literal or ideal_equal(pull_back(b, W), a)
    if not literal:
        log.warning("g-choices give different candidate ideals for reference %s (isomorphic=%s)", reference, iso)
    return ChoiceComparison(reference, a, b, W, literal, iso)
