"""Perfect matchings, partitions, Young tableaux, tabloids and polytabloids.

Permutations are passed in one-line notation, ``g[i - 1] == g(i)`` on
``{1..d}``, or as a mapping that fixes every key it does not mention.
Partitions are plain weakly decreasing tuples of positive integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence, Union

Pair = tuple[int, int]
Perm = Union[Sequence[int], Mapping[int, int]]


# --- permutations ---------------------------------------------------------

def perm_map(g: Perm) -> dict[int, int]:
    if isinstance(g, Mapping):
        return dict(g)
    return {i + 1: v for i, v in enumerate(g)}


def _image(g: Mapping[int, int], i: int) -> int:
    return g.get(i, i)


def sgn(g: Perm) -> int:
    """Signature, computed from the cycle decomposition."""
    g = perm_map(g)
    seen = set()
    sign = 1
    for start in g:
        if start in seen:
            continue
        length = 0
        i = start
        while i not in seen:
            seen.add(i)
            i = _image(g, i)
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def compose(g: Perm, h: Perm) -> dict[int, int]:
    """``(g h)(i) = g(h(i))``."""
    g, h = perm_map(g), perm_map(h)
    keys = set(g) | set(h)
    return {i: _image(g, _image(h, i)) for i in keys}


# --- perfect matchings ----------------------------------------------------

@dataclass(frozen=True, order=True)
class PerfectMatching:
    """Pairs ``(i, j)``, ``i < j``, sorted; they partition the ground set."""

    pairs: tuple[Pair, ...]

    @classmethod
    def make(cls, pairs: Iterable[Sequence[int]]) -> "PerfectMatching":
        canon = tuple(sorted((min(a, b), max(a, b)) for a, b in pairs))
        flat = [i for p in canon for i in p]
        if len(flat) != len(set(flat)) or any(a == b for a, b in canon):
            raise ValueError(f"not a perfect matching: {pairs}")
        return cls(canon)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(i for p in self.pairs for i in p)

    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def relabel(self, g: Perm) -> "PerfectMatching":
        g = perm_map(g)
        return PerfectMatching.make((_image(g, a), _image(g, b)) for a, b in self.pairs)

    def __str__(self):
        return "".join(f"({a},{b})" for a, b in self.pairs) or "()"


def _matchings(items: list[int]) -> Iterator[tuple[Pair, ...]]:
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in _matchings(remaining):
            yield ((first, partner),) + tail


def enumerate_matchings(d: int | Iterable[int]) -> list[PerfectMatching]:
    """All perfect matchings of ``{1..d}`` (or of a given ground set).

    The order is the recursive one: the smallest element is paired with each
    other element in increasing order. That coincides with sorted order.
    """
    items = list(range(1, d + 1)) if isinstance(d, int) else sorted(d)
    if len(items) % 2:
        raise ValueError(f"no perfect matching on {len(items)} points")
    return [PerfectMatching(pairs) for pairs in _matchings(items)]


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


# --- partitions -----------------------------------------------------------

def check_partition(shape: Sequence[int]) -> tuple[int, ...]:
    shape = tuple(shape)
    if any(p <= 0 for p in shape) or any(a < b for a, b in zip(shape, shape[1:])):
        raise ValueError(f"not a partition: {shape}")
    return shape


def enumerate_partitions(d: int, largest: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of d in reverse lexicographic order."""
    if largest is None:
        largest = d
    if d == 0:
        return [()]
    out = []
    for first in range(min(d, largest), 0, -1):
        for tail in enumerate_partitions(d - first, first):
            out.append((first,) + tail)
    return out


def enumerate_even_partitions(d: int) -> list[tuple[int, ...]]:
    if d % 2:
        return []
    return [tuple(2 * p for p in mu) for mu in enumerate_partitions(d // 2)]


def conjugate(shape: Sequence[int]) -> tuple[int, ...]:
    shape = check_partition(shape)
    if not shape:
        return ()
    return tuple(sum(1 for p in shape if p > c) for c in range(shape[0]))


def hook_length_dim(shape: Sequence[int]) -> int:
    """Number of standard tableaux of the shape, by the hook length formula."""
    shape = check_partition(shape)
    cols = conjugate(shape)
    hooks = 1
    for r, row_len in enumerate(shape):
        for c in range(row_len):
            hooks *= (row_len - c - 1) + (cols[c] - r - 1) + 1
    return factorial(sum(shape)) // hooks


# --- tableaux -------------------------------------------------------------

@dataclass(frozen=True)
class YoungTableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        check_partition(len(r) for r in rows)
        entries = sorted(i for r in rows for i in r)
        if entries != list(range(1, len(entries) + 1)):
            raise ValueError("tableau entries must be exactly 1..d")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    @property
    def size(self) -> int:
        return sum(self.shape)

    @property
    def columns(self) -> list[tuple[int, ...]]:
        return [
            tuple(row[c] for row in self.rows if len(row) > c)
            for c in range(len(self.rows[0]) if self.rows else 0)
        ]

    def is_standard(self) -> bool:
        rows_ok = all(a < b for r in self.rows for a, b in zip(r, r[1:]))
        cols_ok = all(a < b for col in self.columns for a, b in zip(col, col[1:]))
        return rows_ok and cols_ok

    def relabel(self, g: Perm) -> "YoungTableau":
        g = perm_map(g)
        return YoungTableau(tuple(tuple(_image(g, i) for i in r) for r in self.rows))

    def tabloid(self) -> "Tabloid":
        return Tabloid(self.rows)


def enumerate_standard_tableaux(shape: Sequence[int]) -> list[YoungTableau]:
    """Place 1, 2, ..., d in turn at the end of any row that can take it."""
    shape = check_partition(shape)
    d = sum(shape)
    out: list[YoungTableau] = []
    rows: list[list[int]] = [[] for _ in shape]

    def fill(v: int) -> None:
        if v > d:
            out.append(YoungTableau(tuple(tuple(r) for r in rows)))
            return
        for r, target in enumerate(shape):
            if len(rows[r]) < target and (r == 0 or len(rows[r - 1]) > len(rows[r])):
                rows[r].append(v)
                fill(v + 1)
                rows[r].pop()

    fill(1)
    return out


# --- tabloids -------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Tabloid:
    """Rows as sorted tuples, kept in shape order."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(sorted(r)) for r in self.rows))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)


TabloidVector = dict  # Tabloid -> Fraction, zero coefficients pruned


def act_on_tabloid(g: Perm, t: Tabloid) -> Tabloid:
    g = perm_map(g)
    return Tabloid(tuple(tuple(_image(g, i) for i in r) for r in t.rows))


@dataclass(frozen=True)
class ColumnStabilizer:
    """Direct product of the symmetric groups on the columns of a tableau."""

    columns: tuple[tuple[int, ...], ...]

    @cached_property
    def order(self) -> int:
        out = 1
        for col in self.columns:
            out *= factorial(len(col))
        return out

    def __len__(self):
        return self.order

    def __iter__(self) -> Iterator[tuple[dict[int, int], int]]:
        """Yields ``(g, sgn(g))`` with g as a mapping on the tableau entries."""
        per_col = []
        for col in self.columns:
            choices = []
            for img in permutations(col):
                g = dict(zip(col, img))
                choices.append((g, sgn(g)))
            per_col.append(choices)
        for combo in product(*per_col):
            g: dict[int, int] = {}
            sign = 1
            for part, s in combo:
                g.update(part)
                sign *= s
            yield g, sign


def column_stabilizer(T: YoungTableau) -> ColumnStabilizer:
    return ColumnStabilizer(tuple(T.columns))


def polytabloid(T: YoungTableau) -> TabloidVector:
    """Signed sum of {g T} over the column stabilizer of T."""
    vec: dict[Tabloid, Fraction] = {}
    for g, sign in column_stabilizer(T):
        t = act_on_tabloid(g, T.tabloid())
        vec[t] = vec.get(t, 0) + sign
    return {t: Fraction(c) for t, c in vec.items() if c != 0}
