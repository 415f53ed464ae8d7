"""Down-shop-monoids (DSMs): sets of multipermutations holding the identity,
closed under composition and under surjective subrelations."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _bits
from .blurred import Partition, blur, recognize_blur
from .errors import CapExceeded, DimensionError, InvariantViolation
from .monoid import monoid_table
from .relcore import (Multipermutation, Permutation, Relation, identity, inverse,
                      is_reflexive, is_sub, is_symmetric, sub_multipermutations, then)

LATTICE_CAP = 3
TABLE_CAP = 3  # dense product tables are built up to this n


@dataclass(frozen=True)
class Dsm:
    n: int
    elements: tuple[Multipermutation, ...]

    @classmethod
    def of(cls, n: int, elements: Iterable[Relation]) -> Dsm:
        return cls(n, tuple(sorted({e.as_multipermutation() for e in elements})))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, f) -> bool:
        return f in self._set

    def __le__(self, other: Dsm) -> bool:
        return self._set <= other._set

    def __lt__(self, other: Dsm) -> bool:
        return self._set < other._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", s)
        return s

    def is_group(self) -> bool:
        return all(e.is_permutation() for e in self.elements)

    def label(self) -> str:
        gens = [x for x in self.elements if not any(
            x != y and is_sub(x, y) for y in self.elements)]
        return "<" + ", ".join(str(g) for g in gens) + ">"

    def strings(self) -> list[str]:
        return [str(e) for e in self.elements]


def is_dsm(elements: Iterable[Relation], n: int | None = None) -> bool:
    els = {e.as_multipermutation() for e in elements}
    if n is None:
        n = next(iter(els)).n
    if identity(n) not in els:
        return False
    if any(not sub_multipermutations(e) <= els for e in els):
        return False
    return all(then(a, b) in els for a in els for b in els)


# ---------------------------------------------------------------------------
# closure


class _Dense:
    """Index-level product and down-set tables over M_n (small n)."""

    def __init__(self, n: int):
        t = monoid_table(n)
        self.table, self.N = t, len(t)
        rows = [_bits.right_mul(t.codes, e.rows, n) for e in t.elements]  # x . e
        prod_codes = np.stack(rows, axis=1)  # [x, e] = x . e
        lookup = np.vectorize(t.index.__getitem__, otypes=[np.int32])
        self.mult = lookup(prod_codes)
        self.down = np.zeros((self.N, self.N), dtype=bool)
        codes = t.codes
        for k, c in enumerate(codes):
            self.down[k] = (codes & ~c) == 0
        self.id = t.index[identity(n).code]

    def close(self, seeds: Iterable[int], base: np.ndarray | None = None) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool) if base is None else base.copy()
        frontier = [s for s in set(seeds) | ({self.id} if base is None else set())
                    if not mask[s]]
        mask[frontier] = True
        while frontier:
            f = np.asarray(frontier)
            new = self.down[f].any(0)
            idx = np.flatnonzero(mask)
            new[self.mult[np.ix_(f, idx)].ravel()] = True
            new[self.mult[np.ix_(idx, f)].ravel()] = True
            new &= ~mask
            frontier = np.flatnonzero(new).tolist()
            mask |= new
        return mask

    def to_dsm(self, mask: np.ndarray) -> Dsm:
        els = self.table.elements
        return Dsm(self.table.n, tuple(els[k] for k in np.flatnonzero(mask)))


@lru_cache(maxsize=None)
def _dense(n: int) -> _Dense:
    return _Dense(n)


def dsm_closure(gens: Iterable[Relation], n: int | None = None) -> Dsm:
    """Least DSM containing ``gens``."""
    gens = [g.as_multipermutation() for g in gens]
    ns = {g.n for g in gens} | ({n} if n is not None else set())
    if len(ns) != 1:
        raise DimensionError(f"generators of mixed dimensions {sorted(ns)}")
    n = ns.pop()
    if n <= TABLE_CAP:
        d = _dense(n)
        return d.to_dsm(d.close(d.table.index[g.code] for g in gens))
    return _down_of_monoid(gens, n)


def _down_of_monoid(gens, n: int) -> Dsm:
    """Down-closure of the submonoid generated by ``gens``.

    x <= x' and y <= y' give xy <= x'y', and products of multipermutations are
    multipermutations, so this down-set is already closed under products.
    """
    from .monoid import closure
    mon = sorted(closure(gens, n), key=lambda e: -sum(bin(r).count("1") for r in e.rows))
    tops: list[Multipermutation] = []
    for e in mon:
        if not any(is_sub(e, t) for t in tops):
            tops.append(e)
    if n <= 4:
        t = monoid_table(n)
        mask = np.zeros(len(t), dtype=bool)
        for e in tops:
            mask |= (t.codes & ~_bits.DTYPE(e.code)) == 0
        return Dsm(n, tuple(t.elements[k] for k in np.flatnonzero(mask)))
    els: set[Multipermutation] = set()
    for e in tops:
        els |= sub_multipermutations(e)
    return Dsm.of(n, els)


def dsm_inverse(M: Dsm) -> Dsm:
    return Dsm.of(M.n, (inverse(f) for f in M))


def conjugate(f: Relation, p: Permutation) -> Relation:
    """Rename each point x of the domain to p(x)."""
    P = p.to_relation()
    return then(then(inverse(P), f), P)


def relabel(M: Dsm, p: Permutation) -> Dsm:
    if p.n != M.n:
        raise DimensionError("permutation size differs from domain")
    return Dsm.of(M.n, (conjugate(f, p) for f in M))


def maximal_reflexive_symmetric(M: Dsm) -> Multipermutation:
    cands = [f for f in M if is_reflexive(f) and is_symmetric(f)]
    tops = [f for f in cands if not any(f != g and is_sub(f, g) for g in cands)]
    if len(tops) != 1:
        raise InvariantViolation(f"{len(tops)} maximal reflexive symmetric elements")
    g = tops[0]
    if recognize_blur(g) is None:
        raise InvariantViolation(f"maximal reflexive symmetric {g} is not blurred")
    return g


# ---------------------------------------------------------------------------
# blurred permutation subgroups


def group_closure(perms: Iterable[Permutation], n: int | None = None) -> frozenset[Permutation]:
    perms = list(perms)
    if n is None:
        n = perms[0].n
    out = {Permutation.identity(n)}
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for g in perms:
                y = x.then(g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


@lru_cache(maxsize=None)
def subgroups(m: int) -> tuple[frozenset[Permutation], ...]:
    """Every subgroup of S_m (each is generated by at most two elements for m <= 4)."""
    if m > 4:
        raise CapExceeded(f"subgroup enumeration of S_{m}", "--force")
    elems = Permutation.all(m)
    found = {group_closure([], m)}
    for a in elems:
        found.add(group_closure([a], m))
    for a, b in combinations(elems, 2):
        found.add(group_closure([a, b], m))
    return tuple(sorted(found, key=lambda g: (len(g), sorted(p.image for p in g))))


@dataclass(frozen=True)
class BpsStructure:
    partition: Partition
    group: frozenset[Permutation]

    def __post_init__(self):
        m = self.partition.m
        if any(g.n != m for g in self.group):
            raise DimensionError("group acts on the wrong number of blocks")
        if Permutation.identity(m) not in self.group:
            raise ValueError("group lacks the identity")
        if any(a.then(b) not in self.group for a in self.group for b in self.group):
            raise ValueError("group not closed under composition")

    @property
    def is_full_symmetric(self) -> bool:
        return len(self.group) == _factorial(self.partition.m)

    def to_dict(self) -> dict:
        return {"partition": str(self.partition),
                "group": sorted(g.cycles() for g in self.group),
                "full_symmetric": self.is_full_symmetric}


def _factorial(m):
    out = 1
    for k in range(2, m + 1):
        out *= k
    return out


def bps_construct(B: BpsStructure) -> Dsm:
    n = B.partition.n
    tops = [blur(g, B.partition) for g in B.group]
    els: set[Multipermutation] = set()
    for t in tops:
        els |= sub_multipermutations(t)
    M = Dsm.of(n, els)
    if n <= TABLE_CAP and not is_dsm(M.elements, n):
        raise InvariantViolation(f"blurring of {B.to_dict()} is not a DSM")
    return M


def is_bps(M: Dsm) -> BpsStructure | None:
    if dsm_inverse(M) != M:
        return None
    g = maximal_reflexive_symmetric(M)
    P = recognize_blur(g).partition
    group = set()
    for f in M:
        st = recognize_blur(f)
        if st is not None and st.partition == P:
            group.add(st.perm)
    try:
        B = BpsStructure(P, frozenset(group))
    except ValueError as e:
        raise InvariantViolation(f"block permutations do not form a group: {e}")
    if bps_construct(B) != M:
        raise InvariantViolation(f"self-inverse DSM is not rebuilt from {B.to_dict()}")
    return B


def all_bps(n: int) -> set[Dsm]:
    """Distinct blurrings over every partition of [n] and subgroup of S_m."""
    return {bps_construct(BpsStructure(P, G)) for P in Partition.all(n)
            for G in subgroups(P.m)}


# ---------------------------------------------------------------------------
# the lattice


@dataclass
class DsmLattice:
    n: int
    dsms: list[Dsm]
    hasse: list[tuple[int, int]]

    def __len__(self):
        return len(self.dsms)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "dsms": [d.strings() for d in self.dsms],
                           "hasse": [list(e) for e in self.hasse]})

    @classmethod
    def from_json(cls, text: str) -> DsmLattice:
        from .relcore import Relation as _R
        data = json.loads(text)
        n = data["n"]
        dsms = [Dsm.of(n, (_R.parse(s) for s in els)) for els in data["dsms"]]
        return cls(n, dsms, [tuple(e) for e in data["hasse"]])

    def to_dot(self, label: str = "generators") -> str:
        lines = ["digraph F {", "  rankdir=BT;", "  node [shape=box];"]
        for k, d in enumerate(self.dsms):
            text = d.label() if label == "generators" else str(len(d))
            lines.append(f'  d{k} [label="{text}"];')
        lines += [f"  d{a} -> d{b};" for a, b in self.hasse]
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse_edges(sets: Sequence[int]) -> list[tuple[int, int]]:
    """Covering pairs (i, j), i below j, for subsets given as int masks."""
    k = len(sets)
    below = [[i for i in range(k) if i != j and sets[i] & ~sets[j] == 0
              and sets[i] != sets[j]] for j in range(k)]
    edges = []
    for j in range(k):
        lower = set(below[j])
        for i in below[j]:
            if not any(sets[i] & ~sets[c] == 0 and sets[i] != sets[c] for c in lower if c != i):
                edges.append((i, j))
    return sorted(edges)


def enumerate_lattice(n: int, force: bool = False) -> DsmLattice:
    if n > LATTICE_CAP and not force:
        raise CapExceeded(f"lattice of DSMs on [{n}]", "--force")
    if n > TABLE_CAP:
        return _enumerate_generic(n)
    d = _dense(n)
    start = d.close([])
    seen = {start.tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for C in frontier:
            # a minimal new element has every proper sub-multipermutation in C
            minimal = ~C & ((d.down & ~C).sum(1) == 1)
            for x in np.flatnonzero(minimal):
                D = d.close([x], base=C)
                key = D.tobytes()
                if key not in seen:
                    seen[key] = D
                    nxt.append(D)
        frontier = nxt
    masks = list(seen.values())
    order = sorted(range(len(masks)), key=lambda k: (int(masks[k].sum()),
                   [i for i in np.flatnonzero(masks[k])]))
    masks = [masks[k] for k in order]
    ints = [int("".join("1" if b else "0" for b in m[::-1]), 2) for m in masks]
    return DsmLattice(n, [d.to_dsm(m) for m in masks], hasse_edges(ints))


def _enumerate_generic(n: int) -> DsmLattice:
    table = monoid_table(n)
    start = dsm_closure([], n)
    seen = {start.elements: start}
    frontier = [start]
    while frontier:
        nxt = []
        for C in frontier:
            for x in table:
                if x in C:
                    continue
                D = dsm_closure([*C.elements, x], n)
                if D.elements not in seen:
                    seen[D.elements] = D
                    nxt.append(D)
        frontier = nxt
    dsms = sorted(seen.values(), key=lambda D: (len(D), [e.sort_key() for e in D]))
    pos = {e: k for k, e in enumerate(table)}
    ints = [sum(1 << pos[e] for e in D) for D in dsms]
    return DsmLattice(n, dsms, hasse_edges(ints))
