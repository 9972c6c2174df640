"""Finite multisets of naturals under the multiset order.

This is the heat monoid: the free commutative monoid on the naturals, where
any number of copies of ``n`` lies below a single ``n + 1``.  For a total
order on elements the multiset extension coincides with comparing the
descending-sorted element sequences lexicographically, which is what
:func:`mcompare` does.
"""
from __future__ import annotations

import enum
from collections import Counter
from functools import total_ordering
from typing import Iterable, Mapping


class Order(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def reverse(self) -> "Order":
        return Order(-self.value)


@total_ordering
class Multiset:
    """Immutable multiset of non-negative integers.

    >>> Multiset([3, 1]) + Multiset([1])
    Multiset({3,1,1})
    >>> Multiset([1, 1, 1]) < Multiset([2])
    True
    """

    __slots__ = ("_items",)

    def __init__(self, elements: Iterable[int] = ()):
        items = []
        for e in elements:
            e = int(e)
            if e < 0:
                raise ValueError(f"multiset elements are naturals, got {e}")
            items.append(e)
        items.sort(reverse=True)
        self._items = tuple(items)

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "Multiset":
        for k, c in counts.items():
            if c <= 0:
                raise ValueError(f"multiplicity of {k} must be positive, got {c}")
        return cls(e for e, c in counts.items() for _ in range(c))

    @classmethod
    def _sorted(cls, items: tuple) -> "Multiset":
        m = cls.__new__(cls)
        m._items = items
        return m

    @property
    def elements(self) -> tuple[int, ...]:
        """Elements in descending order, multiplicities expanded."""
        return self._items

    @property
    def counts(self) -> dict[int, int]:
        return dict(Counter(self._items))

    def count(self, e: int) -> int:
        return self._items.count(e)

    def weight(self) -> int:
        """Sum of the elements."""
        return sum(self._items)

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __bool__(self):
        return bool(self._items)

    def __add__(self, other: "Multiset") -> "Multiset":
        return msum(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._items == other._items

    def __lt__(self, other: "Multiset"):
        if not isinstance(other, Multiset):
            return NotImplemented
        return mcompare(self, other) is Order.LESS

    def __hash__(self):
        return hash(self._items)

    def __str__(self):
        return "{" + ",".join(map(str, self._items)) + "}"

    def __repr__(self):
        return f"Multiset({self})"


def msum(a: Multiset, b: Multiset) -> Multiset:
    if not a:
        return b
    if not b:
        return a
    # merge two descending runs
    x, y = a.elements, b.elements
    i = j = 0
    out = []
    while i < len(x) and j < len(y):
        if x[i] >= y[j]:
            out.append(x[i])
            i += 1
        else:
            out.append(y[j])
            j += 1
    out.extend(x[i:])
    out.extend(y[j:])
    return Multiset._sorted(tuple(out))


def msum_all(parts: Iterable[Multiset]) -> Multiset:
    items = []
    for p in parts:
        items.extend(p.elements)
    items.sort(reverse=True)
    return Multiset._sorted(tuple(items))


def mcompare(a: Multiset, b: Multiset) -> Order:
    x, y = a.elements, b.elements
    if x == y:
        return Order.EQUAL
    # tuples compare lexicographically, and a proper prefix is smaller
    return Order.GREATER if x > y else Order.LESS


def parse_multiset(text: str) -> Multiset:
    """Inverse of ``str``: ``{3,1,1}`` or ``{}``."""
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"not a multiset literal: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return Multiset()
    return Multiset(int(t) for t in body.split(","))
