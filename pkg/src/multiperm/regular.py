"""Regular elements and their inverses in B_n and M_n.

Three routes are provided: Schein's containment test and greatest inverse
(for B_n), the row-basis algorithm of Kim and Roush adapted to
multipermutations, and exhaustive search over M_n.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _bits
from .errors import CapExceeded
from .green import span_mask
from .monoid import ENUM_CAP, MonoidTable, monoid_table
from .relcore import (BoolVec, Multipermutation, Relation, bits_of, complement,
                      inverse, is_sub, then)


def _t(a, b):
    return then(a, b)


def _guard(rho: Relation) -> Relation:
    return complement(_t(_t(inverse(rho), complement(rho)), inverse(rho)))


def schein_regular(rho: Relation) -> bool:
    g = _guard(rho)
    return is_sub(rho, _t(_t(rho, g), rho))


def greatest_inverse(rho: Relation) -> Relation:
    g = _guard(rho)
    return _t(_t(g, rho.as_relation()), g).as_relation()


def is_inverse(alpha: Relation, x: Relation) -> bool:
    return then(then(alpha, x), alpha) == alpha


# ---------------------------------------------------------------------------
# row basis machinery


@dataclass(frozen=True)
class RowBasis:
    n: int
    basis: frozenset[BoolVec]
    row_set: frozenset[BoolVec]

    @property
    def equals_row_set(self) -> bool:
        return self.basis == self.row_set


def _basis_masks(rows) -> list[int]:
    distinct = sorted(set(rows))
    out = []
    for v in distinct:
        if v == 0:
            continue
        below = 0
        for w in distinct:
            if w != v and w & ~v == 0:
                below |= w
        if below != v:
            out.append(v)
    return out


def row_basis(alpha: Relation) -> RowBasis:
    n = alpha.n
    return RowBasis(n, frozenset(BoolVec(n, v) for v in _basis_masks(alpha.rows)),
                    frozenset(BoolVec(n, v) for v in set(alpha.rows) if v))


def _ident_masks(basis, v, n) -> list[int]:
    out = []
    for j in range(n):
        u = 1 << j
        if all((u & w != 0) == (v & ~w == 0) for w in basis):
            out.append(u)
    return out


def identification_vectors(alpha: Relation, v: BoolVec) -> set[BoolVec]:
    basis = _basis_masks(alpha.rows)
    if v.bits not in basis:
        raise ValueError(f"{v} is not a row-basis vector of {alpha}")
    return {BoolVec(alpha.n, u) for u in _ident_masks(basis, v.bits, alpha.n)}


def _p_mask(rows, t: int, n: int) -> int:
    space = list(bits_of(span_mask(tuple(rows))))
    above = [w for w in space if t & ~w == 0]
    p = 0
    for x in space:
        if all(x & ~w == 0 for w in above):
            p |= x
    return p


def p_value(alpha: Relation, t: BoolVec) -> BoolVec:
    """Meet, inside the row space, of the row-space vectors above ``t``."""
    if t.weight() != 1:
        raise ValueError(f"{t} must have exactly one 1")
    return BoolVec(alpha.n, _p_mask(alpha.rows, t.bits, alpha.n))


def _s_choices(rows, v) -> list[int]:
    """Row selections s whose rows all lie below v and sum to v."""
    below = [i for i, r in enumerate(rows) if r & ~v == 0]
    out = []
    for k in range(1, 1 << len(below)):
        s, acc = 0, 0
        for b, i in enumerate(below):
            if k >> b & 1:
                s |= 1 << i
                acc |= rows[i]
        if acc == v:
            out.append(s)
    return out


def _subvectors(mask: int, with_zero: bool) -> list[int]:
    out, sub = [], mask
    while sub:
        out.append(sub)
        sub = (sub - 1) & mask
    if with_zero:
        out.append(0)
    return out


@dataclass
class KimRoushTrace:
    basis: list[str]
    identification: dict[str, list[str]]
    s_candidates: dict[str, list[str]]
    t_values: dict[str, str] = field(default_factory=dict)
    emitted: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2)


def kim_roush_inverses(alpha: Relation, within: str = "M", trace: bool = False):
    """Inverses of ``alpha`` assembled over every admissible choice.

    ``within="M"`` keeps multipermutation inverses; ``within="B"`` keeps every
    boolean-matrix inverse the assembly produces (zero rows allowed).
    """
    n, rows = alpha.n, alpha.rows
    vs = lambda m: str(BoolVec(n, m))
    basis = _basis_masks(rows)
    idents = {v: _ident_masks(basis, v, n) for v in basis}
    s_opts = {v: _s_choices(rows, v) for v in basis}
    tr = KimRoushTrace([vs(v) for v in basis],
                       {vs(v): [vs(u) for u in us] for v, us in idents.items()},
                       {vs(v): [vs(s) for s in ss] for v, ss in s_opts.items()})
    found: set[Relation] = set()
    if all(idents.values()) and all(s_opts.values()):
        for us in product(*(idents[v] for v in basis)):
            if len(set(us)) < len(us):
                continue
            chosen = 0
            for u in us:
                chosen |= u
            ts = [1 << j for j in range(n) if not chosen >> j & 1]
            b_opts = []
            for t in ts:
                p = _p_mask(rows, t, n)
                tr.t_values[vs(t)] = vs(p)
                bmax = sum(1 << i for i, r in enumerate(rows) if r & ~p == 0) if p else 0
                b_opts.append(_subvectors(bmax, within == "B"))
            for ss in product(*(s_opts[v] for v in basis)):
                for bs in product(*b_opts):
                    x = [0] * n
                    for u, s in zip(us, ss):
                        x[u.bit_length() - 1] = s
                    for t, b in zip(ts, bs):
                        x[t.bit_length() - 1] = b
                    cand = Relation(n, tuple(x))
                    if within == "M" and not cand.is_multipermutation():
                        continue
                    if is_inverse(alpha, cand):
                        found.add(cand.as_multipermutation() if within == "M" else cand)
    tr.emitted = sorted(str(x) for x in found)
    return (found, tr) if trace else found


def kim_roush_inverse(alpha: Relation) -> Multipermutation | None:
    """One inverse: least identification vector, all rows below v, maximal b."""
    n, rows = alpha.n, alpha.rows
    basis = _basis_masks(rows)
    x = [0] * n
    chosen = 0
    for v in basis:
        us = _ident_masks(basis, v, n)
        if not us:
            return None
        u = min(us)
        chosen |= u
        x[u.bit_length() - 1] = sum(1 << i for i, r in enumerate(rows) if r & ~v == 0)
    for j in range(n):
        if not chosen >> j & 1:
            p = _p_mask(rows, 1 << j, n)
            x[j] = sum(1 << i for i, r in enumerate(rows) if r & ~p == 0) if p else 0
    cand = Relation(n, tuple(x))
    if cand.is_multipermutation() and is_inverse(alpha, cand):
        return cand.as_multipermutation()
    return None


@dataclass(frozen=True)
class InverseVerdict:
    exists: bool
    reason: str

    def __bool__(self):
        return self.exists


def has_inverse_in_Mn(alpha: Relation) -> InverseVerdict:
    """Row-basis criterion for the existence of a multipermutation inverse."""
    n, rows = alpha.n, alpha.rows
    basis = _basis_masks(rows)
    if set(basis) != {r for r in rows if r}:
        return InverseVerdict(False, "row basis differs from row set")
    idents = {v: _ident_masks(basis, v, n) for v in basis}
    empty = [v for v in basis if not idents[v]]
    if empty:
        return InverseVerdict(False, f"no identification vector for {BoolVec(n, empty[0])}")
    # some choice of identification vectors must leave no t with p(t) = 0
    for us in product(*(idents[v] for v in basis)):
        chosen = 0
        for u in us:
            chosen |= u
        if len(set(us)) == len(us) and all(
                _p_mask(rows, 1 << j, n) for j in range(n) if not chosen >> j & 1):
            return InverseVerdict(True, "all conditions hold")
    return InverseVerdict(False, "p(t) = 0 for an unavoidable t")


def brute_inverses(alpha: Relation, table: MonoidTable | None = None,
                   cap: int = ENUM_CAP) -> set[Multipermutation]:
    if table is None:
        if alpha.n > cap:
            raise CapExceeded(f"M_{alpha.n} exceeds cap {cap}", "--cap")
        table = monoid_table(alpha.n)
    n = alpha.n
    ax = _bits.left_mul(alpha.rows, table.codes, n)
    axa = _bits.right_mul(ax, alpha.rows, n)
    hits = table.codes[axa == np.uint32(alpha.code)]
    return {Multipermutation.from_code(n, int(c)) for c in hits}


def brute_inverses_bn(alpha: Relation) -> set[Relation]:
    """Every x in B_n with alpha x alpha = alpha (n <= 4)."""
    n = alpha.n
    if n > 4:
        raise CapExceeded(f"B_{n} search", "--force")
    codes = np.arange(1 << (n * n), dtype=_bits.DTYPE)
    ax = _bits.left_mul(alpha.rows, codes, n)
    axa = _bits.right_mul(ax, alpha.rows, n)
    return {Relation.from_code(n, int(c)) for c in codes[axa == np.uint32(alpha.code)]}
