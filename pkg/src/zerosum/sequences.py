"""Sequences over a finite abelian group, treated as multisets."""

from __future__ import annotations

import json
from collections import Counter
from typing import Iterable, Mapping

import numpy as np

from .errors import GroupMismatchError, ValidationError
from .groups import Group, GroupElement


class Sequence:
    """An immutable multiset of elements of ``group``.

    Zero-count keys are never stored. Iteration yields elements with
    repetition in canonical index order.
    """

    __slots__ = ("group", "_counts", "_hash")

    def __init__(self, group: Group, counts: Mapping[GroupElement, int] | None = None):
        self.group = group
        clean: dict[GroupElement, int] = {}
        for g, v in (counts or {}).items():
            if g.group != group:
                raise GroupMismatchError(f"element {g} does not belong to {group}")
            if v < 0:
                raise ValueError(f"negative multiplicity {v} for {g}")
            if v:
                clean[g] = int(v)
        self._counts = dict(sorted(clean.items(), key=lambda kv: kv[0].coords))
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_elements(cls, group: Group, elements: Iterable[GroupElement]) -> Sequence:
        return cls(group, Counter(elements))

    @classmethod
    def from_coords(cls, group: Group, coords: Iterable[Iterable[int]]) -> Sequence:
        return cls(group, Counter(group.element(c) for c in coords))

    @classmethod
    def from_count_vector(cls, group: Group, counts) -> Sequence:
        return cls(group, {group.element_at(i): int(v) for i, v in enumerate(counts) if v})

    @classmethod
    def empty(cls, group: Group) -> Sequence:
        return cls(group)

    @classmethod
    def power(cls, g: GroupElement, k: int) -> Sequence:
        """``g^[k]``."""
        return cls(g.group, {g: k})

    # -- vocabulary ---------------------------------------------------------

    def __len__(self) -> int:
        return sum(self._counts.values())

    @property
    def length(self) -> int:
        return len(self)

    def sigma(self) -> GroupElement:
        total = [0] * self.group.rank
        for g, v in self._counts.items():
            for i, x in enumerate(g.coords):
                total[i] += v * x
        return self.group.element(total)

    def multiplicity(self, g: GroupElement) -> int:
        return self._counts.get(g, 0)

    def items(self) -> list[tuple[GroupElement, int]]:
        """``(element, count)`` pairs sorted by canonical index."""
        return list(self._counts.items())

    def support(self) -> list[GroupElement]:
        return list(self._counts)

    def __iter__(self):
        for g, v in self._counts.items():
            for _ in range(v):
                yield g

    def _same_group(self, other: Sequence):
        if other.group != self.group:
            raise GroupMismatchError(f"sequences over {self.group} and {other.group}")

    def is_subsequence_of(self, other: Sequence) -> bool:
        self._same_group(other)
        return all(other._counts.get(g, 0) >= v for g, v in self._counts.items())

    def remove(self, other: Sequence) -> Sequence:
        """``self * other^{-1}``; ``other`` must divide ``self``."""
        if not other.is_subsequence_of(self):
            raise ValidationError("cannot remove a sequence that is not a subsequence")
        out = dict(self._counts)
        for g, v in other._counts.items():
            out[g] -= v
        return Sequence(self.group, out)

    def concat(self, other: Sequence) -> Sequence:
        self._same_group(other)
        out = Counter(self._counts)
        out.update(other._counts)
        return Sequence(self.group, out)

    __mul__ = concat

    def repeat(self, k: int) -> Sequence:
        """``self^[k]``."""
        return Sequence(self.group, {g: v * k for g, v in self._counts.items()})

    def map(self, fn, group: Group) -> Sequence:
        out: Counter = Counter()
        for g, v in self._counts.items():
            out[fn(g)] += v
        return Sequence(group, out)

    def count_vector(self) -> np.ndarray:
        vec = np.zeros(self.group.order, dtype=np.int64)
        for g, v in self._counts.items():
            vec[g.index] = v
        return vec

    def __eq__(self, other):
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.group == other.group and self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group, tuple(self._counts.items())))
        return self._hash

    def __repr__(self):
        if not self._counts:
            return f"Sequence({self.group.descriptor}: empty)"
        body = " . ".join(f"{g!r}^[{v}]" for g, v in self._counts.items())
        return f"Sequence({self.group.descriptor}: {body})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "group": self.group.descriptor,
            "items": [{"coords": list(g.coords), "count": v} for g, v in self._counts.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> Sequence:
        group = Group.parse(str(data["group"]))
        counts: Counter = Counter()
        for item in data.get("items", []):
            count = int(item["count"])
            if count < 0:
                raise ValidationError(f"negative count in {item}")
            counts[group.element(item["coords"])] += count
        return cls(group, counts)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> Sequence:
        return cls.from_json(json.loads(text))


def length(S: Sequence) -> int:
    return len(S)


def sigma(S: Sequence) -> GroupElement:
    return S.sigma()


def is_subsequence(T: Sequence, S: Sequence) -> bool:
    return T.is_subsequence_of(S)


def remove(S: Sequence, T: Sequence) -> Sequence:
    return S.remove(T)


def concat(S: Sequence, T: Sequence) -> Sequence:
    return S.concat(T)


def random_sequence(group: Group, length: int, rng) -> Sequence:
    """Uniform random sequence of the given length; ``rng`` is a ``random.Random``."""
    counts = [0] * group.order
    for _ in range(length):
        counts[rng.randrange(group.order)] += 1
    return Sequence.from_count_vector(group, counts)
