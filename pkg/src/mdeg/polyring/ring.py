"""Variable specifications and monomial orders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


def x_name(i: int, j: int, wide: bool = False) -> str:
    """Name of coordinate ``i`` (1-based) of factor ``j`` (1-based)."""
    return f"x{i}_{j}" if wide else f"x{i}{j}"


@dataclass(frozen=True)
class VarSpec:
    """Ordered variables with factor tags.

    ``factor[v]`` is the 0-based factor index of an x-variable and ``None``
    for auxiliary variables (y-block, t, w, ...).  ``ranks`` lists the block
    size of every factor.
    """

    names: tuple
    factor: tuple
    ranks: tuple = ()
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.names) != len(self.factor):
            raise ValueError("names and factor tags differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        counts = [0] * len(self.ranks)
        for f in self.factor:
            if f is not None:
                if not 0 <= f < len(self.ranks):
                    raise ValueError(f"factor tag {f} out of range")
                counts[f] += 1
        if tuple(counts) != tuple(self.ranks):
            raise ValueError(f"block sizes {counts} do not match ranks {self.ranks}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def multiview(cls, ranks: Sequence[int], pre: Sequence[str] = (), post: Sequence[str] = ()):
        """x-blocks ``x{i}{j}`` for factors j = 1..n, with auxiliaries around them."""
        ranks = tuple(int(r) for r in ranks)
        wide = max(ranks + (len(ranks),), default=0) >= 10
        names = list(pre)
        tags: list = [None] * len(pre)
        for j, l in enumerate(ranks):
            for i in range(l):
                names.append(x_name(i + 1, j + 1, wide))
                tags.append(j)
        names += list(post)
        tags += [None] * len(post)
        return cls(tuple(names), tuple(tags), ranks)

    @classmethod
    def plain(cls, names: Sequence[str]):
        return cls(tuple(names), (None,) * len(names), ())

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def nfactors(self) -> int:
        return len(self.ranks)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def x(self, i: int, j: int) -> int:
        """Position of coordinate i (1-based) in factor j (1-based)."""
        k = 0
        for v, f in enumerate(self.factor):
            if f == j - 1:
                k += 1
                if k == i:
                    return v
        raise KeyError(f"no coordinate {i} in factor {j}")

    def block(self, j: int) -> list:
        """Variable positions of factor j (0-based)."""
        return [v for v, f in enumerate(self.factor) if f == j]

    def x_positions(self) -> list:
        return [v for v, f in enumerate(self.factor) if f is not None]

    def aux_positions(self) -> list:
        return [v for v, f in enumerate(self.factor) if f is None]

    def drop(self, names: Sequence[str]) -> "VarSpec":
        drop = set(names)
        for n in drop:
            self.index(n)
        keep = [i for i, n in enumerate(self.names) if n not in drop]
        return self.restrict(keep)

    def restrict(self, keep: Sequence[int]) -> "VarSpec":
        keep = list(keep)
        old = sorted({self.factor[i] for i in keep if self.factor[i] is not None})
        remap = {f: k for k, f in enumerate(old)}
        tags = tuple(None if self.factor[i] is None else remap[self.factor[i]] for i in keep)
        ranks = tuple(sum(1 for i in keep if self.factor[i] == f) for f in old)
        return VarSpec(tuple(self.names[i] for i in keep), tags, ranks)

    def with_vars(self, pre: Sequence[str] = (), post: Sequence[str] = ()) -> "VarSpec":
        return VarSpec(
            tuple(pre) + self.names + tuple(post),
            (None,) * len(pre) + self.factor + (None,) * len(post),
            self.ranks,
        )

    def to_json(self) -> dict:
        return {"names": list(self.names), "factor": list(self.factor), "ranks": list(self.ranks)}

    @classmethod
    def from_json(cls, data: dict) -> "VarSpec":
        return cls(tuple(data["names"]), tuple(data["factor"]), tuple(data.get("ranks", ())))


# packed-key layout: signed base-2**KEY_BITS digits
KEY_BITS = 24


@dataclass(frozen=True)
class MonomialOrder:
    """Term order: ``grevlex``, ``lex`` or ``block``.

    A block order is an ordered partition of variable names; earlier blocks
    dominate and each block is compared by ``inner`` (grevlex by default).
    Any variable not listed joins the last block.  ``wdeg`` optionally gives
    positive integer degrees ``((name, weight), ...)`` refining grevlex
    blocks by weighted degree (unlisted variables weigh 1).
    """

    kind: str = "grevlex"
    blocks: tuple = ()
    inner: str = "grevlex"
    wdeg: tuple = ()

    @classmethod
    def grevlex(cls, wdeg=()):
        return cls("grevlex", wdeg=_wdeg(wdeg))

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def block(cls, *blocks: Sequence[str], inner: str = "grevlex", wdeg=()):
        return cls("block", tuple(tuple(b) for b in blocks), inner, _wdeg(wdeg))

    @classmethod
    def elimination(cls, drop: Sequence[str], inner: str = "grevlex", wdeg=()):
        """Two-block order with ``drop`` much larger than everything else."""
        return cls("block", (tuple(drop),), inner, _wdeg(wdeg))

    def degree_weights(self, spec: VarSpec) -> list:
        d = dict(self.wdeg)
        return [d.get(name, 1) for name in spec.names]

    def restricted(self, spec: VarSpec) -> "MonomialOrder":
        """The induced order on the retained block, for a ring ``spec``."""
        wd = tuple((n, w) for n, w in self.wdeg if n in spec)
        if self.inner == "grevlex":
            return MonomialOrder("grevlex", wdeg=wd)
        return MonomialOrder("lex")

    def partition(self, spec: VarSpec) -> list:
        n = spec.nvars
        if self.kind in ("grevlex", "lex"):
            return [list(range(n))]
        seen = set()
        parts = []
        for b in self.blocks:
            idx = [spec.index(name) for name in b]
            seen.update(idx)
            parts.append(sorted(idx))
        rest = [i for i in range(n) if i not in seen]
        if rest:
            parts.append(rest)
        return [p for p in parts if p]

    def weights(self, spec: VarSpec) -> list:
        """Integer weights w with key(m) = sum(e_i * w_i) order-isomorphic."""
        base = 1 << KEY_BITS
        inner = self.kind if self.kind != "block" else self.inner
        w = [0] * spec.nvars
        dw = self.degree_weights(spec)
        off = 0
        for part in reversed(self.partition(spec)):
            k = len(part)
            if inner == "grevlex":
                top = base ** (off + k)
                for j, v in enumerate(part):
                    w[v] = dw[v] * top - base ** (off + j)
                off += k + 1
            elif inner == "lex":
                for j, v in enumerate(part):
                    w[v] = base ** (off + k - 1 - j)
                off += k
            else:
                raise ValueError(f"unknown order {inner!r}")
        return w

    def key_function(self, spec: VarSpec):
        w = self.weights(spec)

        def key(exp):
            return sum(e * x for e, x in zip(exp, w) if e)

        return key

    def describe(self) -> str:
        wd = ""
        if self.wdeg:
            wd = " wdeg(" + ",".join(f"{n}:{w}" for n, w in self.wdeg) + ")"
        if self.kind != "block":
            return self.kind + wd
        return f"block[{' > '.join('(' + ','.join(b) + ')' for b in self.blocks)}; {self.inner}]{wd}"


def _wdeg(wdeg) -> tuple:
    items = tuple(sorted(dict(wdeg).items()))
    for name, w in items:
        if int(w) != w or w < 1:
            raise ValueError(f"weight of {name} must be a positive integer")
    return tuple((n, int(w)) for n, w in items if w != 1)


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()
