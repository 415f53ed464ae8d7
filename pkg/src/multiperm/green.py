"""Green's relations on M_n.

Vector sets (row spaces, bounded spans) are held internally as ints over the
2^n vectors: bit ``v`` is set iff the vector with bit pattern ``v`` belongs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded, DimensionError
from .monoid import ENUM_CAP, MonoidTable
from .relcore import BoolVec, Relation, bits_of, inverse


@lru_cache(maxsize=1 << 17)
def span_mask(rows: tuple[int, ...]) -> int:
    """All OR-sums of ``rows`` (zero included) as a vector-set mask."""
    space = {0}
    for r in set(rows):
        space |= {s | r for s in space}
    mask = 0
    for v in space:
        mask |= 1 << v
    return mask


@lru_cache(maxsize=1 << 17)
def bounded_mask(rows: tuple[int, ...]) -> int:
    """Nonzero span elements lying below at least one of ``rows``."""
    mask = 0
    for v in bits_of(span_mask(rows) & ~1):
        if any(v & ~r == 0 for r in rows):
            mask |= 1 << v
    return mask


def _vecs(n: int, mask: int) -> frozenset[BoolVec]:
    return frozenset(BoolVec(n, v) for v in bits_of(mask))


@dataclass(frozen=True)
class RowSpace:
    n: int
    vectors: frozenset[BoolVec]

    def __contains__(self, v: BoolVec) -> bool:
        return v in self.vectors

    def __len__(self):
        return len(self.vectors)

    def sorted(self) -> list[str]:
        return sorted(str(v) for v in self.vectors)


def row_space(alpha: Relation) -> RowSpace:
    return RowSpace(alpha.n, _vecs(alpha.n, span_mask(alpha.rows)))


def col_space(alpha: Relation) -> RowSpace:
    return row_space(inverse(alpha))


def bounded_span(alpha: Relation) -> frozenset[BoolVec]:
    return _vecs(alpha.n, bounded_mask(alpha.rows))


def bounded_col_span(alpha: Relation) -> frozenset[BoolVec]:
    return bounded_span(inverse(alpha))


def _same(a, b):
    if a.n != b.n:
        raise DimensionError(f"dimensions {a.n} and {b.n} differ")


def green_L(alpha: Relation, beta: Relation) -> bool:
    _same(alpha, beta)
    return bounded_mask(alpha.rows) == bounded_mask(beta.rows)


def green_R(alpha: Relation, beta: Relation) -> bool:
    _same(alpha, beta)
    return bounded_mask(inverse(alpha).rows) == bounded_mask(inverse(beta).rows)


def green_H(alpha: Relation, beta: Relation) -> bool:
    return green_L(alpha, beta) and green_R(alpha, beta)


def green_D(alpha: Relation, beta: Relation, table: MonoidTable) -> bool:
    """Exists gamma in M_n with alpha L gamma and gamma R beta."""
    _same(alpha, beta)
    la = bounded_mask(alpha.rows)
    rb = bounded_mask(inverse(beta).rows)
    return any(bounded_mask(g.rows) == la and bounded_mask(inverse(g).rows) == rb
               for g in table)


# ---------------------------------------------------------------------------
# search oracles


class Ideals:
    """Principal one-sided ideals of a monoid table, computed on demand."""

    def __init__(self, table: MonoidTable):
        self.table = table
        self._left: dict[int, frozenset[int]] = {}
        self._right: dict[int, frozenset[int]] = {}

    def left(self, alpha: Relation) -> frozenset[int]:
        """Codes of {rho . alpha : rho in M_n}."""
        c = alpha.code
        if c not in self._left:
            self._left[c] = frozenset(self.table.left_products(alpha).tolist())
        return self._left[c]

    def right(self, alpha: Relation) -> frozenset[int]:
        c = alpha.code
        if c not in self._right:
            self._right[c] = frozenset(self.table.right_products(alpha).tolist())
        return self._right[c]


_IDEALS: dict[int, Ideals] = {}


def _ideals(table: MonoidTable) -> Ideals:
    key = id(table)
    if key not in _IDEALS or _IDEALS[key].table is not table:
        _IDEALS[key] = Ideals(table)
    return _IDEALS[key]


def green_L_oracle(alpha, beta, table: MonoidTable) -> bool:
    ide = _ideals(table)
    return beta.code in ide.left(alpha) and alpha.code in ide.left(beta)


def green_R_oracle(alpha, beta, table: MonoidTable) -> bool:
    ide = _ideals(table)
    return beta.code in ide.right(alpha) and alpha.code in ide.right(beta)


def green_H_oracle(alpha, beta, table: MonoidTable) -> bool:
    return green_L_oracle(alpha, beta, table) and green_R_oracle(alpha, beta, table)


def green_D_oracle(alpha, beta, table: MonoidTable) -> bool:
    ide = _ideals(table)
    for c in ide.left(alpha):
        g = table.elements[table.index[c]]
        if green_L_oracle(alpha, g, table) and green_R_oracle(g, beta, table):
            return True
    return False


# ---------------------------------------------------------------------------
# batch classification


@dataclass
class GreenClassification:
    n: int
    elements: list[Relation]
    L: list[int]
    R: list[int]
    H: list[int]
    D: list[int]

    def classes(self, relation: str) -> list[list[Relation]]:
        ids = getattr(self, relation)
        groups: dict[int, list[Relation]] = {}
        for el, k in zip(self.elements, ids):
            groups.setdefault(k, []).append(el)
        return [groups[k] for k in sorted(groups)]

    def counts(self) -> dict[str, int]:
        return {r: len(set(getattr(self, r))) for r in "LRHD"}

    def eggbox(self) -> list[dict]:
        """Per D-class: numbers of R- and L-classes and the H-class size."""
        out = []
        for cls in self.classes("D"):
            pos = [self._pos[e] for e in cls]
            out.append({
                "size": len(cls),
                "R_classes": len({self.R[p] for p in pos}),
                "L_classes": len({self.L[p] for p in pos}),
                "H_size": len(cls) // (len({self.H[p] for p in pos})),
                "example": str(cls[0]),
            })
        return out

    def report(self, relation: str) -> dict:
        return {"relation": relation,
                "classes": [[str(e) for e in c] for c in self.classes(relation)]}

    def to_json(self, relation: str) -> str:
        return json.dumps(self.report(relation))

    def __post_init__(self):
        self._pos = {e: k for k, e in enumerate(self.elements)}

    def class_of(self, relation: str, el: Relation) -> int:
        return getattr(self, relation)[self._pos[el]]


def _label(keys) -> list[int]:
    ids: dict = {}
    return [ids.setdefault(k, len(ids)) for k in keys]


def _components(a_ids, b_ids) -> list[int]:
    parent = list(range(len(a_ids)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ids in (a_ids, b_ids):
        first: dict[int, int] = {}
        for k, c in enumerate(ids):
            if c in first:
                ra, rb = find(first[c]), find(k)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                first[c] = k
    return _label(find(k) for k in range(len(a_ids)))


def classify(table: MonoidTable, cap: int = ENUM_CAP) -> GreenClassification:
    """L, R, H by the bounded-span characterisation; D as L o R."""
    if table.n > cap:
        raise CapExceeded(f"classifying M_{table.n} exceeds cap {cap}", "--cap")
    els = table.elements
    lk = [bounded_mask(e.rows) for e in els]
    rk = [bounded_mask(inverse(e).rows) for e in els]
    L, R = _label(lk), _label(rk)
    H = _label(zip(L, R))
    D = _components(L, R)
    return GreenClassification(table.n, els, L, R, H, D)


def classify_oracle(table: MonoidTable) -> GreenClassification:
    """Same partitions from principal ideals (mutual divisibility)."""
    ide = _ideals(table)
    els = table.elements
    lk = [frozenset(ide.left(e)) for e in els]
    rk = [frozenset(ide.right(e)) for e in els]
    L, R = _label(lk), _label(rk)
    H = _label(zip(L, R))
    D = _components(L, R)
    return GreenClassification(table.n, els, L, R, H, D)
