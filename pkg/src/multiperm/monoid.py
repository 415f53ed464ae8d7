"""The full monoid M_n: enumeration, generated submonoids, prime elements."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import _bits
from .errors import CapExceeded, DimensionError
from .relcore import Multipermutation, Relation, identity

ENUM_CAP = 5
PRIME_CAP = 4


@dataclass
class MonoidTable:
    n: int
    elements: list[Multipermutation]
    codes: np.ndarray
    index: dict[int, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {int(c): k for k, c in enumerate(self.codes)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, rel: Relation) -> bool:
        return rel.n == self.n and rel.code in self.index

    def position(self, rel: Relation) -> int:
        return self.index[rel.code]

    @classmethod
    def from_codes(cls, n: int, codes) -> MonoidTable:
        codes = np.asarray(codes, dtype=_bits.DTYPE)
        codes = codes[np.argsort(_bits.sort_keys(codes, n), kind="stable")]
        elements = [Multipermutation.from_code(n, int(c)) for c in codes]
        return cls(n, elements, codes)

    def left_products(self, alpha: Relation) -> np.ndarray:
        """Codes of rho . alpha for every rho in the table."""
        return _bits.right_mul(self.codes, alpha.rows, self.n)

    def right_products(self, alpha: Relation) -> np.ndarray:
        """Codes of alpha . rho for every rho in the table."""
        return _bits.left_mul(alpha.rows, self.codes, self.n)


def count_closed_form(n: int) -> int:
    """Inclusion-exclusion over empty columns of matrices with nonzero rows."""
    return sum((-1) ** j * comb(n, j) * (2 ** (n - j) - 1) ** n for j in range(n + 1))


def count_by_filter(n: int) -> int:
    if n > 4:
        raise CapExceeded(f"direct filter of all 2^{n * n} matrices", "--force")
    codes = np.arange(1 << (n * n), dtype=_bits.DTYPE)
    return int(_bits.is_multiperm(codes, n).sum())


def enumerate_multipermutations(n: int, cap: int = ENUM_CAP) -> MonoidTable:
    if n > cap:
        raise CapExceeded(f"enumerating M_{n} exceeds cap {cap}", "--cap")
    rowvals = np.arange(1, 1 << n, dtype=_bits.DTYPE)
    codes = np.zeros(1, dtype=_bits.DTYPE)
    for i in range(n):
        codes = (codes[:, None] | (rowvals[None, :] << _bits.DTYPE(n * i))).ravel()
    codes = codes[_bits.is_multiperm(codes, n)]
    return MonoidTable.from_codes(n, codes)


_TABLES: dict[int, MonoidTable] = {}


def monoid_table(n: int) -> MonoidTable:
    """Shared table of M_n, built on first use."""
    if n not in _TABLES:
        _TABLES[n] = enumerate_multipermutations(n)
    return _TABLES[n]


def install_table(table: MonoidTable):
    """Make ``table`` the shared M_n (e.g. one loaded from disk)."""
    _TABLES[table.n] = table


# ---------------------------------------------------------------------------
# closure and generating sets


def _gens_n(gens: Sequence[Relation]) -> int:
    ns = {g.n for g in gens}
    if len(ns) != 1:
        raise DimensionError(f"generators of mixed dimensions {sorted(ns)}")
    return ns.pop()


def closure(gens: Sequence[Relation], n: int | None = None) -> set[Multipermutation]:
    """Submonoid generated by ``gens``: the identity plus all finite products."""
    gens = list(gens)
    if n is None:
        n = _gens_n(gens)
    elif gens and _gens_n(gens) != n:
        raise DimensionError("generator dimension mismatch")
    top = (1 << n) - 1
    # x . g row by row through a lookup of g's row combinations
    tables = []
    for g in gens:
        t = [0] * (1 << n)
        for v in range(1, 1 << n):
            low = v & -v
            t[v] = t[v ^ low] | g.rows[low.bit_length() - 1]
        tables.append(t)
    start = identity(n).rows
    seen = {start} | {tuple(g.rows) for g in gens}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for t in tables:
                y = tuple(t[r] for r in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return {Multipermutation(n, rows) for rows in seen if all(rows)
            and _cols(rows) == top}


def _cols(rows):
    acc = 0
    for r in rows:
        acc |= r
    return acc


def is_generating_set(gens: Sequence[Relation], table: MonoidTable | None = None,
                      cap: int = ENUM_CAP):
    """``(True, None)`` or ``(False, element of M_n missed by the closure)``."""
    n = _gens_n(gens)
    if table is None:
        if n > cap:
            raise CapExceeded(f"M_{n} exceeds cap {cap}", "--cap")
        table = monoid_table(n)
    got = closure(gens)
    for el in table:
        if el not in got:
            return False, el
    return True, None


# ---------------------------------------------------------------------------
# primes


@lru_cache(maxsize=None)
def _all_bn(n):
    codes = np.arange(1 << (n * n), dtype=_bits.DTYPE)
    rows = _bits.unpack(codes, n)
    sel = np.stack([np.stack([((rows[i] >> _bits.DTYPE(j)) & 1).astype(bool)
                              for j in range(n)]) for i in range(n)])
    return codes, sel, ~_bits.is_perm(codes, n)


def left_residual(beta: Relation, alpha: Relation) -> Relation:
    """Largest gamma with beta . gamma <= alpha."""
    n, top = alpha.n, (1 << alpha.n) - 1
    rows = []
    for j in range(n):
        acc = top
        for i in range(n):
            if beta.rows[i] >> j & 1:
                acc &= alpha.rows[i]
        rows.append(acc)
    return Relation(n, tuple(rows))


def _factor_mask(alpha: Relation) -> np.ndarray:
    """Over all beta in B_n: beta . (beta \\ alpha) == alpha and the residual is
    not a permutation."""
    n = alpha.n
    codes, sel, _ = _all_bn(n)
    top = _bits.DTYPE((1 << n) - 1)
    gam = [np.full(codes.shape, top, dtype=_bits.DTYPE) for _ in range(n)]
    for i in range(n):
        a_i = _bits.DTYPE(alpha.rows[i])
        for j in range(n):
            gam[j] = np.where(sel[i][j], gam[j] & a_i, gam[j])
    eq = np.ones(codes.shape, dtype=bool)
    for i in range(n):
        prod = np.zeros(codes.shape, dtype=_bits.DTYPE)
        for j in range(n):
            prod |= np.where(sel[i][j], gam[j], _bits.DTYPE(0))
        eq &= prod == _bits.DTYPE(alpha.rows[i])
    gam_codes = _bits.pack(np.stack(gam), n)
    return eq & ~_bits.is_perm(gam_codes, n)


@lru_cache(maxsize=None)
def _nonperm_products(n: int) -> frozenset[int]:
    """Codes of every product of two non-permutations in B_n (full double loop)."""
    if n > 3:
        raise CapExceeded(f"double loop over B_{n} x B_{n}", "--force")
    codes, _, nonperm = _all_bn(n)
    np_codes = codes[nonperm]
    out = set()
    for b in np_codes:
        out.update(_bits.right_mul(np_codes, Relation.from_code(n, int(b)).rows, n).tolist())
    return frozenset(out)


def is_prime(alpha: Relation, method: str = "residual", cap: int = PRIME_CAP) -> bool:
    """Not a permutation, and every factorisation in B_n has a permutation factor."""
    if alpha.n > cap:
        raise CapExceeded(f"prime test at n={alpha.n} exceeds cap {cap}", "--cap")
    if alpha.is_permutation():
        return False
    if method == "naive":
        return alpha.code not in _nonperm_products(alpha.n)
    if method != "residual":
        raise ValueError(f"unknown method {method!r}")
    if not alpha.is_multipermutation():
        # the residual shortcut needs alpha to have no zero column
        return alpha.code not in _nonperm_products(alpha.n)
    _, _, nonperm = _all_bn(alpha.n)
    return not bool(np.any(_factor_mask(alpha) & nonperm))


def primes_in_bn(n: int) -> list[Relation]:
    """All primes of B_n by the full double loop (n <= 3)."""
    products = _nonperm_products(n)
    codes, _, nonperm = _all_bn(n)
    return sorted(Relation.from_code(n, int(c)) for c in codes[nonperm]
                  if int(c) not in products)


@lru_cache(maxsize=None)
def _column_maps(n):
    maps = []
    for q in permutations(range(n)):
        m = [0] * (1 << n)
        for v in range(1 << n):
            m[v] = sum(1 << q[j] for j in range(n) if v >> j & 1)
        maps.append(m)
    return list(permutations(range(n))), maps


def two_sided_orbit(alpha: Relation) -> set[Relation]:
    """{P alpha Q : P, Q permutation matrices}."""
    n = alpha.n
    perms, cmaps = _column_maps(n)
    cls = type(alpha)
    out = set()
    for p in perms:
        rows = [alpha.rows[p[i]] for i in range(n)]
        for m in cmaps:
            out.add(cls(n, tuple(m[r] for r in rows)))
    return out


@dataclass(frozen=True)
class PrimeClass:
    representative: Multipermutation
    members: tuple[Multipermutation, ...]


def prime_elements(n: int, cap: int = PRIME_CAP) -> list[PrimeClass]:
    """Primes of M_n grouped into two-sided permutation orbits."""
    if n > cap:
        raise CapExceeded(f"prime search at n={n} exceeds cap {cap}", "--cap")
    table = monoid_table(n)
    seen: set[int] = set()
    out = []
    for el in table:
        if el.code in seen:
            continue
        orbit = two_sided_orbit(el)
        seen.update(x.code for x in orbit)
        if is_prime(el):
            members = tuple(sorted(orbit))
            out.append(PrimeClass(members[0], members))
    return out


def equivalent(alpha: Relation, beta: Relation) -> bool:
    return beta in two_sided_orbit(alpha)


# Generating sets checked in the literature for small n.
M3_GENERATORS = ["2|1|3", "2|3|1", "12|23|13", "1|12|3", "1|1|23"]
M4_GENERATORS = ["2|1|3|4", "2|3|4|1", "234|12|13|14", "14|12|23|34",
                 "1|12|3|4", "1|2|2|34", "12|13|23|4"]


def parse_gens(texts: Iterable[str]) -> list[Multipermutation]:
    from .relcore import parse
    out = []
    for t in texts:
        rel = parse(t)
        if not isinstance(rel, Multipermutation):
            raise ValueError(f"{t!r} is not a multipermutation")
        out.append(rel)
    return out
