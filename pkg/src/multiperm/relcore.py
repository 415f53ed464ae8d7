"""Boolean relations on [n] stored as bit-packed rows.

Row ``i`` of a relation is an int whose bit ``j`` is set iff ``(i, j)`` is in
the relation (0-based internally, 1-based in every text form).  Composition
is left to right: ``then(a, b)`` is the boolean matrix product ``a . b``, so
the hyper-operation ``g o f`` (apply ``f`` first) is ``then(f, g)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations as _itperms
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, InvariantViolation

MAX_N = 16

__all__ = [
    "BoolVec", "Relation", "Multipermutation", "Permutation",
    "then", "inverse", "complement", "is_sub", "sub_multipermutations",
    "union", "power", "join", "is_symmetric", "is_reflexive",
    "is_difunctional", "is_transitive", "is_hall", "identity", "full",
    "parse", "to_dot",
]


def _check_n(n):
    if not 1 <= n <= MAX_N:
        raise DimensionError(f"dimension {n} outside 1..{MAX_N}")


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def or_rows(rows: Sequence[int], mask: int) -> int:
    acc = 0
    for j in bits_of(mask):
        acc |= rows[j]
    return acc


@dataclass(frozen=True)
class BoolVec:
    """A 0/1 vector of length ``n``; ``bits`` has bit j set iff coordinate j+1 is 1."""

    n: int
    bits: int

    @classmethod
    def parse(cls, text: str) -> BoolVec:
        text = text.replace(" ", "").strip("()")
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"bad vector {text!r}")
        return cls(len(text), sum(1 << j for j, c in enumerate(text) if c == "1"))

    @classmethod
    def unit(cls, n: int, j: int) -> BoolVec:
        return cls(n, 1 << j)

    def __le__(self, other: BoolVec) -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: BoolVec) -> bool:
        return self <= other and self.bits != other.bits

    def __add__(self, other: BoolVec) -> BoolVec:
        if self.n != other.n:
            raise DimensionError("vector dimensions differ")
        return BoolVec(self.n, self.bits | other.bits)

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def __str__(self):
        return "".join("1" if self.bits >> j & 1 else "0" for j in range(self.n))

    def __repr__(self):
        return f"BoolVec({str(self)!r})"


@dataclass(frozen=True, eq=False)
class Relation:
    """An arbitrary binary relation on [n] (an element of B_n)."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        if len(self.rows) != self.n:
            raise DimensionError(f"expected {self.n} rows, got {len(self.rows)}")
        top = (1 << self.n) - 1
        if any(r & ~top for r in self.rows):
            raise ValueError("row entry outside the domain")

    # -- identity / ordering ------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def sort_key(self) -> int:
        """The matrix read row by row as one binary numeral."""
        key = 0
        for r in self.rows:
            for j in range(self.n):
                key = key << 1 | (r >> j & 1)
        return key

    def __lt__(self, other: Relation) -> bool:
        return (self.n, self.sort_key()) < (other.n, other.sort_key())

    def __le__(self, other: Relation) -> bool:
        return is_sub(self, other)

    def __matmul__(self, other: Relation) -> Relation:
        return then(self, other)

    def __or__(self, other: Relation) -> Relation:
        return union(self, other)

    # -- encodings -----------------------------------------------------------
    @property
    def code(self) -> int:
        c = 0
        for i, r in enumerate(self.rows):
            c |= r << (self.n * i)
        return c

    @classmethod
    def from_code(cls, n: int, code: int):
        top = (1 << n) - 1
        return cls(n, tuple(code >> (n * i) & top for i in range(n)))

    @classmethod
    def from_sets(cls, images: Sequence[Iterable[int]]):
        """Build from 1-based image sets, e.g. ``[{1, 2}, {2}, {1, 3}]``."""
        n = len(images)
        rows = []
        for img in images:
            r = 0
            for y in img:
                if not 1 <= y <= n:
                    raise ValueError(f"element {y} outside [1, {n}]")
                r |= 1 << (y - 1)
            rows.append(r)
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]):
        rows = tuple(sum(1 << j for j, v in enumerate(row) if v) for row in matrix)
        if any(len(row) != len(matrix) for row in matrix):
            raise DimensionError("matrix is not square")
        return cls(len(matrix), rows)

    @classmethod
    def parse(cls, text: str):
        return cls(*_parse_rows(text))

    def image(self, x: int) -> frozenset[int]:
        """1-based image set of the 1-based element ``x``."""
        return frozenset(j + 1 for j in bits_of(self.rows[x - 1]))

    def images(self) -> list[frozenset[int]]:
        return [self.image(x) for x in range(1, self.n + 1)]

    def pairs(self) -> set[tuple[int, int]]:
        return {(i + 1, j + 1) for i, r in enumerate(self.rows) for j in bits_of(r)}

    def row_vec(self, i: int) -> BoolVec:
        return BoolVec(self.n, self.rows[i])

    def columns(self) -> tuple[int, ...]:
        return inverse(self).rows

    def matrix_lines(self) -> list[str]:
        return [str(BoolVec(self.n, r)) for r in self.rows]

    def matrix_str(self) -> str:
        return "\n".join(self.matrix_lines())

    def __str__(self):
        sep = "," if self.n > 9 else ""
        return "|".join(sep.join(str(j + 1) for j in bits_of(r)) for r in self.rows)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    # -- structure -----------------------------------------------------------
    def is_multipermutation(self) -> bool:
        top = (1 << self.n) - 1
        if not all(self.rows):
            return False
        acc = 0
        for r in self.rows:
            acc |= r
        return acc == top

    def is_permutation(self) -> bool:
        top = (1 << self.n) - 1
        acc = 0
        for r in self.rows:
            if r == 0 or r & (r - 1):
                return False
            acc |= r
        return acc == top

    def as_multipermutation(self) -> Multipermutation:
        return Multipermutation(self.n, self.rows)

    def as_relation(self) -> Relation:
        return Relation(self.n, self.rows)


class Multipermutation(Relation):
    """A relation with no empty row and no empty column (an element of M_n)."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_multipermutation():
            raise ValueError(f"{Relation.__str__(self)!r} has an empty row or column")


@dataclass(frozen=True)
class Permutation:
    """A bijection of [n]; ``image`` is 0-based."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(self.n)):
            raise ValueError(f"{self.image} is not a permutation of {self.n} points")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(n, tuple(range(n)))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> Permutation:
        """From a 1-based image list: ``[2, 1, 3]`` is 1->2, 2->1, 3->3."""
        return cls(len(images), tuple(x - 1 for x in images))

    @classmethod
    def from_cycles(cls, n: int, text: str) -> Permutation:
        image = list(range(n))
        for cyc in re.findall(r"\(([^()]*)\)", text):
            pts = [int(x) - 1 for x in re.split(r"[\s,]+", cyc.strip()) if x]
            if any(not 0 <= p < n for p in pts):
                raise ValueError(f"cycle {cyc!r} leaves [1, {n}]")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                image[a] = b
        return cls(n, tuple(image))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Permutation:
        text = text.strip()
        if text.startswith("("):
            if n is None:
                nums = [int(x) for x in re.findall(r"\d+", text)]
                n = max(nums, default=1)
            return cls.from_cycles(n, text)
        if "," in text or " " in text:
            return cls.from_images([int(x) for x in re.split(r"[\s,]+", text) if x])
        return cls.from_images([int(c) for c in text])

    @classmethod
    def from_relation(cls, rel: Relation) -> Permutation:
        if not rel.is_permutation():
            raise ValueError(f"{rel} is not a permutation")
        return cls(rel.n, tuple(r.bit_length() - 1 for r in rel.rows))

    @classmethod
    def all(cls, n: int) -> list[Permutation]:
        return [cls(n, p) for p in _itperms(range(n))]

    def then(self, other: Permutation) -> Permutation:
        """Apply ``self`` first, then ``other``."""
        return Permutation(self.n, tuple(other.image[x] for x in self.image))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation(self.n, tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.image))

    def to_relation(self) -> Multipermutation:
        return Multipermutation(self.n, tuple(1 << y for y in self.image))

    def cycles(self) -> str:
        seen, out = set(), []
        for s in range(self.n):
            if s in seen or self.image[s] == s:
                continue
            cyc, x = [], s
            while x not in seen:
                seen.add(x)
                cyc.append(str(x + 1))
                x = self.image[x]
            out.append("(" + " ".join(cyc) + ")")
        return "".join(out) or "()"

    def __str__(self):
        return "".join(str(y + 1) for y in self.image) if self.n <= 9 else \
            ",".join(str(y + 1) for y in self.image)


# ---------------------------------------------------------------------------
# parsing

_EMPTY = {"", "-", "∅", "{}"}


def _parse_rows(text: str) -> tuple[int, tuple[int, ...]]:
    text = text.strip()
    if "|" in text or not re.fullmatch(r"[01\s;]+", text):
        body = text.strip("[]() ")
        segs = body.split("|")
        n = len(segs)
        comma = "," in body
        rows = []
        for seg in segs:
            seg = seg.strip().strip("{}")
            if seg in _EMPTY:
                rows.append(0)
                continue
            elems = [int(x) for x in seg.split(",")] if comma else [int(c) for c in seg]
            r = 0
            for y in elems:
                if not 1 <= y <= n:
                    raise ValueError(f"element {y} outside [1, {n}] in {text!r}")
                r |= 1 << (y - 1)
            rows.append(r)
        return n, tuple(rows)
    lines = [ln for ln in re.split(r"[\s;]+", text) if ln]
    n = len(lines)
    if any(len(ln) != n for ln in lines):
        raise DimensionError(f"matrix {text!r} is not square")
    return n, tuple(BoolVec.parse(ln).bits for ln in lines)


def parse(text: str) -> Relation:
    """Parse pipe (``12|2|13``) or matrix (``110 010 101``) notation.

    Returns a :class:`Multipermutation` when the invariants hold, otherwise a
    plain :class:`Relation`.
    """
    rel = Relation.parse(text)
    return rel.as_multipermutation() if rel.is_multipermutation() else rel


# ---------------------------------------------------------------------------
# algebra


def _same_n(a: Relation, b: Relation):
    if a.n != b.n:
        raise DimensionError(f"dimensions {a.n} and {b.n} differ")


def _wrap(rows, n, *operands) -> Relation:
    if all(isinstance(x, Multipermutation) for x in operands):
        return Multipermutation(n, tuple(rows))
    return Relation(n, tuple(rows))


def identity(n: int) -> Multipermutation:
    return Multipermutation(n, tuple(1 << i for i in range(n)))


def full(n: int) -> Multipermutation:
    top = (1 << n) - 1
    return Multipermutation(n, (top,) * n)


def then(a: Relation, b: Relation) -> Relation:
    """Relational product: apply ``a`` then ``b`` (matrix product ``a . b``)."""
    _same_n(a, b)
    brows = b.rows
    return _wrap((or_rows(brows, r) for r in a.rows), a.n, a, b)


def inverse(f: Relation) -> Relation:
    n = f.n
    cols = [0] * n
    for i, r in enumerate(f.rows):
        for j in bits_of(r):
            cols[j] |= 1 << i
    return _wrap(cols, n, f)


def complement(f: Relation) -> Relation:
    top = (1 << f.n) - 1
    return Relation(f.n, tuple(top & ~r for r in f.rows))


def is_sub(f: Relation, g: Relation) -> bool:
    _same_n(f, g)
    return all(a & ~b == 0 for a, b in zip(f.rows, g.rows))


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def sub_multipermutations(g: Relation) -> set[Multipermutation]:
    """Every multipermutation below ``g``, ``g`` itself included when it is one."""
    n, top = g.n, (1 << g.n) - 1
    out = set()

    def rec(i, acc_rows, cols):
        if i == n:
            if cols == top:
                out.add(Multipermutation(n, tuple(acc_rows)))
            return
        # columns still uncovered must be reachable from the remaining rows
        rest = 0
        for r in g.rows[i:]:
            rest |= r
        if (cols | rest) != top:
            return
        for sub in _submasks(g.rows[i]):
            acc_rows.append(sub)
            rec(i + 1, acc_rows, cols | sub)
            acc_rows.pop()

    rec(0, [], 0)
    return out


def union(f: Relation, g: Relation) -> Relation:
    _same_n(f, g)
    return _wrap((a | b for a, b in zip(f.rows, g.rows)), f.n, f, g)


def power(f: Relation, k: int) -> Relation:
    if k < 0:
        raise ValueError("power needs k >= 0")
    result = identity(f.n) if isinstance(f, Multipermutation) else identity(f.n).as_relation()
    if k <= f.n:
        for _ in range(k):
            result = then(result, f)
        return result
    base = f
    while k:
        if k & 1:
            result = then(result, base)
        base = then(base, base)
        k >>= 1
    return result


def is_symmetric(f: Relation) -> bool:
    return inverse(f) == f


def is_reflexive(f: Relation) -> bool:
    return all(r >> i & 1 for i, r in enumerate(f.rows))


def is_transitive(f: Relation) -> bool:
    return is_sub(then(f, f), f)


def is_difunctional(f: Relation) -> bool:
    return is_sub(then(then(f, inverse(f)), f), f)


def join(f: Multipermutation, g: Multipermutation) -> Multipermutation:
    """Equivalence-relation join of two reflexive symmetric multipermutations."""
    for x in (f, g):
        if not (is_symmetric(x) and is_reflexive(x)):
            raise ValueError(f"join needs symmetric reflexive operands, got {x}")
    h = power(union(f, g), f.n)
    if not (is_symmetric(h) and is_transitive(h) and is_sub(f, h) and is_sub(g, h)):
        raise InvariantViolation(f"join of {f} and {g} is not an equivalence above both")
    return h


def is_hall(f: Relation) -> bool:
    """True iff ``f`` contains a permutation (perfect matching in its digraph)."""
    n = f.n
    match_col = [-1] * n

    def augment(i, seen):
        for j in bits_of(f.rows[i]):
            if seen >> j & 1:
                continue
            seen |= 1 << j
            if match_col[j] < 0:
                match_col[j] = i
                return True, seen
            ok, seen = augment(match_col[j], seen)
            if ok:
                match_col[j] = i
                return True, seen
        return False, seen

    for i in range(n):
        ok, _ = augment(i, 0)
        if not ok:
            return False
    return True


def to_dot(f: Relation, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f"  {x};" for x in range(1, f.n + 1)]
    lines += [f"  {x} -> {y};" for x, y in sorted(f.pairs())]
    lines.append("}")
    return "\n".join(lines) + "\n"
