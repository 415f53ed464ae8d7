"""Blurred permutations: a permutation of partition blocks, each block
expanded into the full product of source and target blocks."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _bits
from .errors import CapExceeded, DimensionError, NotBlurred
from .relcore import (Multipermutation, Permutation, Relation, bits_of, inverse,
                      is_sub, then)

COMPLETE_REGULAR_CAP = 4


@dataclass(frozen=True)
class Partition:
    """Blocks as bitmasks over [n], ordered by least element."""

    n: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        acc = 0
        for b in self.blocks:
            if b == 0 or acc & b:
                raise ValueError("blocks must be nonempty and disjoint")
            acc |= b
        if acc != (1 << self.n) - 1:
            raise ValueError("blocks do not cover the domain")
        if list(self.blocks) != sorted(self.blocks, key=lambda b: b & -b):
            raise ValueError("blocks not in canonical order; use Partition.of")

    @classmethod
    def of(cls, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        """From 1-based blocks in any order."""
        masks = [sum(1 << (x - 1) for x in b) for b in blocks]
        return cls(n, tuple(sorted(masks, key=lambda b: b & -b)))

    @classmethod
    def discrete(cls, n: int) -> Partition:
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def single(cls, n: int) -> Partition:
        return cls(n, ((1 << n) - 1,))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Partition:
        body = text.strip().strip("{}")
        blocks = [[int(x) for x in re.findall(r"\d+", seg)] for seg in body.split("|")]
        if not any("," in seg for seg in body.split("|")):
            blocks = [[int(c) for c in seg.strip()] for seg in body.split("|")]
        if n is None:
            n = max(max(b) for b in blocks)
        return cls.of(n, blocks)

    @property
    def m(self) -> int:
        return len(self.blocks)

    def block_of(self, x: int) -> int:
        """Index of the block holding the 0-based element ``x``."""
        for k, b in enumerate(self.blocks):
            if b >> x & 1:
                return k
        raise ValueError(x)

    def block_sets(self) -> list[list[int]]:
        return [[j + 1 for j in bits_of(b)] for b in self.blocks]

    def refines(self, other: Partition) -> bool:
        return all(any(b & ~c == 0 for c in other.blocks) for b in self.blocks)

    def __str__(self):
        return "{" + "|".join(",".join(map(str, b)) for b in self.block_sets()) + "}"

    @classmethod
    def all(cls, n: int) -> list[Partition]:
        out = []

        def rec(x, blocks):
            if x == n:
                out.append(cls.of(n, blocks))
                return
            for b in blocks:
                b.append(x + 1)
                rec(x + 1, blocks)
                b.pop()
            blocks.append([x + 1])
            rec(x + 1, blocks)
            blocks.pop()

        rec(0, [])
        return out


@dataclass(frozen=True)
class BlurredStructure:
    partition: Partition
    perm: Permutation

    def __post_init__(self):
        if self.perm.n != self.partition.m:
            raise DimensionError("permutation size differs from block count")

    def __str__(self):
        return f"{self.partition} {self.perm.cycles()}"


def blur(g: Permutation, P: Partition) -> Multipermutation:
    """Send every element of block i onto the whole block g(i)."""
    if g.n != P.m:
        raise DimensionError(f"permutation on {g.n} points, partition has {P.m} blocks")
    rows = [0] * P.n
    for i, b in enumerate(P.blocks):
        for x in bits_of(b):
            rows[x] = P.blocks[g.image[i]]
    return Multipermutation(P.n, tuple(rows))


def recognize_blur(f: Relation) -> BlurredStructure | None:
    """Partition and block permutation of ``f``, or None if ``f`` is not blurred."""
    n = f.n
    classes: dict[int, int] = {}
    for x, r in enumerate(f.rows):
        classes[r] = classes.get(r, 0) | 1 << x
    blocks = sorted(classes.values(), key=lambda b: b & -b)
    # the distinct rows must be exactly the preimage classes
    if set(classes) != set(blocks):
        return None
    P = Partition(n, tuple(blocks))
    where = {b: k for k, b in enumerate(blocks)}
    g = tuple(where[f.rows[(b & -b).bit_length() - 1]] for b in blocks)
    return BlurredStructure(P, Permutation(P.m, g))


def is_blurred(f: Relation) -> bool:
    return recognize_blur(f) is not None


def respects(f: Relation, g: Relation) -> bool:
    """Same block never splits across blocks; distinct blocks never merge."""
    st = recognize_blur(g)
    if st is None:
        raise NotBlurred(f"{g} is not a blurred permutation")
    P = st.partition
    # blocks hit by the image of each block
    hits = []
    for b in P.blocks:
        img = 0
        for x in bits_of(b):
            img |= f.rows[x]
        hits.append({k for k, c in enumerate(P.blocks) if img & c})
    if any(len(h) > 1 for h in hits):
        return False
    seen: set[int] = set()
    for h in hits:
        if h & seen:
            return False
        seen |= h
    return True


def riguet_form(f: Relation) -> list[tuple[frozenset[int], frozenset[int]]] | None:
    """``[(A_1, B_1), ...]`` with f the union of the A_i x B_i, if difunctional."""
    if then(then(f, inverse(f)), f) != f:
        return None
    groups: dict[int, int] = {}
    for x, r in enumerate(f.rows):
        groups[r] = groups.get(r, 0) | 1 << x
    out = []
    for r, a in sorted(groups.items(), key=lambda kv: kv[1] & -kv[1]):
        if r == 0:
            continue
        out.append((frozenset(j + 1 for j in bits_of(a)), frozenset(j + 1 for j in bits_of(r))))
    return out


def is_completely_regular(f: Relation, table=None, cap: int = COMPLETE_REGULAR_CAP) -> bool:
    """Exists x in M_n with fxf = f, xfx = x and fx = xf (exhaustive search)."""
    if f.n > cap:
        raise CapExceeded(f"complete-regularity search at n={f.n} exceeds cap {cap}", "--cap")
    if table is None:
        from .monoid import monoid_table
        table = monoid_table(f.n)
    n, codes = f.n, table.codes
    fx = _bits.left_mul(f.rows, codes, n)
    xf = _bits.right_mul(codes, f.rows, n)
    keep = fx == xf
    if not keep.any():
        return False
    xs, fx = codes[keep], fx[keep]
    ok = _bits.right_mul(fx, f.rows, n) == np.uint32(f.code)
    if not ok.any():
        return False
    xs, fx = xs[ok], fx[ok]
    # x f x = (x f) x, with x f = f x on the survivors
    return bool(np.any(_bits.mul(fx, xs, n) == xs))


def symmetric_part(P: Partition) -> Multipermutation:
    return blur(Permutation.identity(P.m), P)


def all_blurred(n: int) -> list[Multipermutation]:
    return sorted({blur(g, P) for P in Partition.all(n) for g in Permutation.all(P.m)})


def quotient(f: Relation, P: Partition) -> Permutation | None:
    """Block permutation of ``f`` if ``f`` is the blur of one over ``P``."""
    st = recognize_blur(f)
    if st is None or st.partition != P:
        return None
    return st.perm


def blur_in(f: Relation, P: Partition) -> list[Multipermutation]:
    """Blurred permutations over ``P`` lying above ``f``."""
    return [h for h in (blur(g, P) for g in Permutation.all(P.m)) if is_sub(f, h)]
