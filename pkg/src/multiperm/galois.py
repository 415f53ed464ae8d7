"""Surjective hyper-endomorphisms (shes) of finite structures and the
invariant relations of sets of multipermutations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _bits
from .dsm import BpsStructure, Dsm, dsm_inverse, is_bps, is_dsm
from .errors import CapExceeded, DimensionError, InvariantViolation
from .monoid import ENUM_CAP, monoid_table
from .relcore import (Multipermutation, Permutation, Relation, bits_of, inverse,
                      then)

WITNESS_CAP = 3
INV_CAP = 16  # n**r bound for exhaustive invariant-relation enumeration


@dataclass(frozen=True)
class FiniteRelation:
    name: str
    arity: int
    tuples: frozenset[tuple[int, ...]]  # 1-based

    def array(self, n: int) -> np.ndarray:
        a = np.zeros((n,) * self.arity, dtype=bool)
        for t in self.tuples:
            a[tuple(x - 1 for x in t)] = True
        return a


@dataclass(frozen=True)
class FiniteStructure:
    n: int
    relations: tuple[FiniteRelation, ...] = ()

    def __post_init__(self):
        names = [r.name for r in self.relations]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be unique")
        for r in self.relations:
            if r.arity < 1:
                raise ValueError(f"{r.name}: arity must be positive")
            for t in r.tuples:
                if len(t) != r.arity or any(not 1 <= x <= self.n for x in t):
                    raise ValueError(f"{r.name}: bad tuple {t}")

    @classmethod
    def of(cls, n: int, **relations: Iterable[Sequence[int]]) -> FiniteStructure:
        rels = []
        for name, tuples in relations.items():
            ts = frozenset(tuple(t) for t in tuples)
            arity = len(next(iter(ts))) if ts else 1
            rels.append(FiniteRelation(name, arity, ts))
        return cls(n, tuple(rels))

    @classmethod
    def from_dict(cls, data: dict) -> FiniteStructure:
        rels = tuple(FiniteRelation(r["name"], int(r["arity"]),
                                    frozenset(tuple(t) for t in r["tuples"]))
                     for r in data.get("relations", []))
        return cls(int(data["n"]), rels)

    @classmethod
    def from_json(cls, text: str) -> FiniteStructure:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"n": self.n, "relations": [
            {"name": r.name, "arity": r.arity, "tuples": [list(t) for t in sorted(r.tuples)]}
            for r in self.relations]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def image_of(f: Relation, R: np.ndarray) -> np.ndarray:
    """Tuples reachable from ``R`` by moving every coordinate along ``f``."""
    n = f.n
    if any(s != n for s in R.shape):
        raise DimensionError("relation and multipermutation live on different domains")
    fm = np.array([[r >> j & 1 for j in range(n)] for r in f.rows], dtype=np.int32)
    out = R.astype(np.int32)
    for axis in range(R.ndim):
        out = np.moveaxis(np.tensordot(out, fm, axes=([axis], [0])), -1, axis)
        out = (out > 0).astype(np.int32)
    return out.astype(bool)


def preserves(f: Relation, R) -> bool:
    """Every box f(x_1) x ... x f(x_r) over a tuple x of ``R`` stays inside ``R``."""
    if isinstance(R, FiniteRelation):
        R = R.array(f.n)
    return not np.any(image_of(f, R) & ~R)


def she_set(B: FiniteStructure, cap: int = ENUM_CAP, check: bool = True) -> Dsm:
    if B.n > cap:
        raise CapExceeded(f"she search over M_{B.n} exceeds cap {cap}", "--cap")
    arrays = [r.array(B.n) for r in B.relations]
    els = [f for f in monoid_table(B.n) if all(preserves(f, a) for a in arrays)]
    out = Dsm(B.n, tuple(els))
    if check and B.n <= 3 and not is_dsm(els, B.n):
        raise InvariantViolation("set of shes is not a DSM")
    return out


def complement_structure(B: FiniteStructure) -> FiniteStructure:
    rels = []
    for r in B.relations:
        everything = set(product(range(1, B.n + 1), repeat=r.arity))
        rels.append(FiniteRelation(r.name, r.arity, frozenset(everything - r.tuples)))
    return FiniteStructure(B.n, tuple(rels))


def is_she_complementative(B: FiniteStructure) -> bool:
    S = she_set(B)
    return dsm_inverse(S) == S


# ---------------------------------------------------------------------------
# witness relations


def _box(images: Sequence[int], n: int) -> np.ndarray:
    """Indicator of the product of the given image sets (one per position)."""
    out = np.ones((), dtype=bool)
    for img in images:
        vec = np.array([img >> j & 1 for j in range(n)], dtype=bool)
        out = np.multiply.outer(out, vec)
    return out


def coding_box(f: Relation) -> np.ndarray:
    """Tuples whose positions (i, 1..n) all carry elements of f(i)."""
    return _box([r for r in f.rows for _ in range(f.n)], f.n)


def coding_tuples(f: Relation) -> list[tuple[int, ...]]:
    return sorted(tuple(int(x) + 1 for x in t) for t in zip(*np.nonzero(coding_box(f))))


def is_full_coding(t: Sequence[int], f: Relation) -> bool:
    n = f.n
    return all({t[i * n + j] for j in range(n)} == f.image(i + 1) for i in range(n))


def witness_relation(N: Iterable[Relation], n: int | None = None) -> FiniteRelation:
    """n^2-ary relation listing the codings of every member of ``N``."""
    N = list(N)
    n = n if n is not None else N[0].n
    if n > WITNESS_CAP:
        raise CapExceeded(f"witness relation of arity {n * n} on [{n}]", "--cap")
    arr = witness_array(N, n)
    tuples = frozenset(tuple(int(x) + 1 for x in t) for t in zip(*np.nonzero(arr)))
    return FiniteRelation("W", n * n, tuples)


def witness_array(N: Iterable[Relation], n: int) -> np.ndarray:
    arr = np.zeros((n,) * (n * n), dtype=bool)
    for f in N:
        arr |= coding_box(f)
    return arr


def witness_structure(N: Iterable[Relation], n: int | None = None) -> FiniteStructure:
    return FiniteStructure(n if n is not None else next(iter(N)).n,
                           (witness_relation(N, n),))


def she_set_of_array(R: np.ndarray, n: int) -> list[Multipermutation]:
    return [f for f in monoid_table(n) if preserves(f, R)]


def _box_inside(W: np.ndarray, images: Sequence[int]) -> bool:
    return bool(W[np.ix_(*[list(bits_of(m)) for m in images])].all())


def witness_shes(N: Iterable[Relation], n: int) -> list[Multipermutation]:
    """she_set of the witness structure of ``N``.

    The witness relation is a union of coding boxes, and the image of the box
    of g under f is the box of g.f, so f is a she iff every g.f has its box
    inside the relation.
    """
    N = list(N)
    if n > WITNESS_CAP:
        raise CapExceeded(f"witness relation of arity {n * n} on [{n}]", "--cap")
    W = witness_array(N, n)
    table = monoid_table(n)
    inside = {int(c): _box_inside(W, [r for r in e.rows for _ in range(n)])
              for c, e in zip(table.codes, table)}
    ok = np.ones(len(table), dtype=bool)
    for g in N:
        gf = _bits.left_mul(g.rows, table.codes, n)
        ok &= np.array([inside[int(c)] for c in gf])
    return [table.elements[k] for k in np.flatnonzero(ok)]


# ---------------------------------------------------------------------------
# invariant relations


def _tuple_boxes(f: Relation, r: int) -> list[int]:
    """For each tuple index (base n), the bitmask of its image box."""
    n = f.n
    idx = {t: k for k, t in enumerate(product(range(n), repeat=r))}
    out = []
    for t in idx:
        m = 0
        for y in product(*[list(bits_of(f.rows[x])) for x in t]):
            m |= 1 << idx[y]
        out.append(m)
    return out


def invariant_relations(F: Iterable[Relation], r: int, n: int | None = None,
                        cap: int = INV_CAP) -> set[frozenset[tuple[int, ...]]]:
    """All r-ary relations on [n] preserved by every member of ``F``."""
    F = list(F)
    n = n if n is not None else F[0].n
    size = n ** r
    if size > cap:
        raise CapExceeded(f"{n}^{r} tuples exceeds {cap}", "--cap")
    tuples = list(product(range(1, n + 1), repeat=r))
    boxes = [_tuple_boxes(f, r) for f in F]
    out = set()
    for R in range(1 << size):
        ok = True
        for bx in boxes:
            for k in bits_of(R):
                if bx[k] & ~R:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(frozenset(tuples[k] for k in bits_of(R)))
    return out


# ---------------------------------------------------------------------------
# groups


def group_witness(G: Iterable[Permutation]) -> FiniteRelation:
    """n-ary relation whose tuples are the image lists of the group elements."""
    G = list(G)
    return FiniteRelation("G", G[0].n, frozenset(tuple(x + 1 for x in g.image) for g in G))


def automorphisms(B: FiniteStructure) -> set[Permutation]:
    arrays = [r.array(B.n) for r in B.relations]
    return {p for p in Permutation.all(B.n)
            if all(preserves(p.to_relation(), a) for a in arrays)}


# ---------------------------------------------------------------------------
# complexity classification


@dataclass
class ComplexityVerdict:
    verdict: str  # "Logspace" | "PspaceComplete" | "NotSheComplementative"
    witness: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"verdict": self.verdict, "witness": self.witness})


def classify(B: FiniteStructure) -> ComplexityVerdict:
    S = she_set(B)
    S_set = set(S)
    for f in S:
        if inverse(f) not in S_set:
            return ComplexityVerdict("NotSheComplementative",
                                     {"she": str(f), "inverse_missing": str(inverse(f))})
    st: BpsStructure | None = is_bps(S)
    if st is None:
        raise InvariantViolation("self-inverse she set is not a BPS")
    if st.partition.m == 1:
        return ComplexityVerdict("Logspace", st.to_dict())
    return ComplexityVerdict("PspaceComplete", st.to_dict())
