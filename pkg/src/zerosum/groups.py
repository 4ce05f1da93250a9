"""Finite abelian groups in invariant-factor form and their elements."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence as Seq

import numpy as np

from .errors import DomainError, GroupMismatchError, ResourceCapError

DEFAULT_ENUMERATION_CAP = 10**6


def _factor_small(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Normalize a direct product of cyclic groups to invariant factors.

    >>> invariant_factors([2, 3])
    (6,)
    >>> invariant_factors([4, 2, 2])
    (2, 2, 4)
    """
    powers: dict[int, list[int]] = {}
    for n in orders:
        if n < 1:
            raise ValueError(f"cyclic factor order must be positive, got {n}")
        for p, a in _factor_small(n).items():
            powers.setdefault(p, []).append(p**a)
    if not powers:
        return ()
    rank = max(len(v) for v in powers.values())
    factors = [1] * rank
    for p, pp in powers.items():
        pp.sort()
        # largest prime powers go to the last (largest) invariant factor
        for i, q in enumerate(reversed(pp)):
            factors[rank - 1 - i] *= q
    return tuple(factors)


@dataclass(frozen=True)
class Group:
    """A finite abelian group ``C_{d1} + ... + C_{dr}`` with ``d1 | d2 | ... | dr``.

    The trivial group has no invariant factors.
    """

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", d)
        for x in d:
            if x < 2:
                raise ValueError(f"invariant factors must be >= 2, got {d}")
        for a, b in zip(d, d[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain, got {d}")

    @classmethod
    def cyclic_power(cls, n: int, r: int) -> Group:
        """``C_n^r``; ``n == 1`` or ``r == 0`` gives the trivial group."""
        if n < 1 or r < 0:
            raise ValueError("need n >= 1 and r >= 0")
        return cls(() if n == 1 else (n,) * r)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> Group:
        return cls(invariant_factors(orders))

    @classmethod
    def parse(cls, text: str) -> Group:
        """Parse ``"n^r"`` or ``"d1,d2,...,dr"``; any list of cyclic orders is normalized."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty group descriptor")
        try:
            if "^" in s:
                base, _, exp = s.partition("^")
                return cls.cyclic_power(int(base), int(exp))
            return cls.from_orders(int(x) for x in s.split(","))
        except ValueError as exc:
            raise ValueError(f"bad group descriptor {text!r}: {exc}") from None

    @property
    def descriptor(self) -> str:
        d = self.invariant_factors
        if not d:
            return "1"
        if len(d) > 1 and len(set(d)) == 1:
            return f"{d[0]}^{len(d)}"
        return ",".join(map(str, d))

    def __str__(self):
        if not self.invariant_factors:
            return "C_1"
        return " + ".join(f"C_{d}" for d in self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def is_cyclic_power(self) -> bool:
        """True for ``C_n^r`` (all invariant factors equal)."""
        return len(set(self.invariant_factors)) <= 1

    def prime(self) -> int | None:
        """The prime ``p`` if this is a non-trivial p-group, else None."""
        primes = set()
        for d in self.invariant_factors:
            primes.update(_factor_small(d))
        return primes.pop() if len(primes) == 1 else None

    # -- elements -----------------------------------------------------------

    def element(self, coords: Iterable[int]) -> GroupElement:
        c = tuple(int(x) for x in coords)
        if len(c) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates for {self}, got {len(c)}")
        return GroupElement(self, tuple(x % d for x, d in zip(c, self.invariant_factors)))

    @property
    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def basis(self) -> list[GroupElement]:
        """Standard generators ``e_i``."""
        return [self.element([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]

    def index(self, coords: Seq[int]) -> int:
        """Lexicographic rank of a reduced coordinate vector."""
        i = 0
        for x, d in zip(coords, self.invariant_factors):
            i = i * d + x
        return i

    def coords_at(self, index: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.invariant_factors):
            index, x = divmod(index, d)
            out.append(x)
        return tuple(reversed(out))

    def element_at(self, index: int) -> GroupElement:
        if not 0 <= index < self.order:
            raise IndexError(index)
        return GroupElement(self, self.coords_at(index))

    def check_enumerable(self, cap: int | None = None):
        cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
        if self.order > cap:
            raise ResourceCapError(
                f"{self} has {self.order} elements, above the enumeration cap of {cap}"
            )

    def elements(self, cap: int | None = None) -> list[GroupElement]:
        """All elements in lexicographic coordinate order."""
        self.check_enumerable(cap)
        ranges = [range(d) for d in self.invariant_factors]
        return [GroupElement(self, c) for c in itertools.product(*ranges)]

    # -- index tables used by the solver -----------------------------------

    @cached_property
    def coord_array(self) -> np.ndarray:
        """(order, rank) array of coordinates in canonical index order."""
        self.check_enumerable()
        if not self.invariant_factors:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(d) for d in self.invariant_factors], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def index_array(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`index` for an (..., rank) array (reduces first)."""
        d = np.asarray(self.invariant_factors, dtype=np.int64)
        c = np.mod(coords, d) if self.rank else coords
        idx = np.zeros(c.shape[:-1], dtype=np.int64)
        for i, di in enumerate(self.invariant_factors):
            idx = idx * di + c[..., i]
        return idx

    @cached_property
    def addition_table(self) -> np.ndarray:
        """``table[a, b] = index(a + b)``."""
        c = self.coord_array
        return self.index_array(c[:, None, :] + c[None, :, :])

    @cached_property
    def negation(self) -> np.ndarray:
        return self.index_array(-self.coord_array)

    def multiple_index(self, k: int) -> np.ndarray:
        """``out[g] = index(k * g)``."""
        return self.index_array(k * self.coord_array)

    def automorphisms(self) -> np.ndarray:
        """Index permutations for a subgroup of Aut(G).

        Generated by coordinate permutations among equal invariant factors and
        by multiplication with units modulo the exponent. ``perm[t, g]`` is the
        index of the image of ``g``. The identity comes first.
        """
        c = self.coord_array
        d = self.invariant_factors
        blocks: list[list[int]] = []
        for i, x in enumerate(d):
            if blocks and d[blocks[-1][0]] == x:
                blocks[-1].append(i)
            else:
                blocks.append([i])
        block_perms = [list(itertools.permutations(b)) for b in blocks]
        col_orders = [sum(choice, ()) for choice in itertools.product(*block_perms)]
        units = [u for u in range(1, self.exponent + 1) if math.gcd(u, self.exponent) == 1]
        if self.exponent == 1:
            units = [1]
        perms = []
        for u in units:
            for cols in col_orders:
                perms.append(self.index_array(u * c[:, list(cols)]))
        return _identity_first(np.unique(np.asarray(perms, dtype=np.int64), axis=0))


def _identity_first(perms: np.ndarray) -> np.ndarray:
    ident = np.arange(perms.shape[1])
    is_id = np.all(perms == ident, axis=1)
    return np.concatenate([perms[is_id], perms[~is_id]])


@dataclass(frozen=True)
class GroupElement:
    """An element of ``group`` as a reduced residue vector."""

    group: Group
    coords: tuple[int, ...]

    def _check(self, other: GroupElement):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group != self.group:
            raise GroupMismatchError(f"cannot combine elements of {self.group} and {other.group}")
        return None

    def __add__(self, other: GroupElement) -> GroupElement:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.group.element(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: GroupElement) -> GroupElement:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.group.element(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> GroupElement:
        return self.group.element(-a for a in self.coords)

    def __rmul__(self, k: int) -> GroupElement:
        if not isinstance(k, int):
            return NotImplemented
        return self.group.element(k * a for a in self.coords)

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def index(self) -> int:
        return self.group.index(self.coords)

    def order(self) -> int:
        return reduce(
            lambda acc, cd: math.lcm(acc, cd[1] // math.gcd(cd[0], cd[1])),
            zip(self.coords, self.group.invariant_factors),
            1,
        )

    def __lt__(self, other: GroupElement) -> bool:
        return self.coords < other.coords

    def __repr__(self):
        return f"({','.join(map(str, self.coords))})"


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def enumerate_elements(group: Group, cap: int | None = None) -> list[GroupElement]:
    return group.elements(cap)


def davenport_formula_p_group(group: Group) -> int:
    """``D(G) = sum(d_i - 1) + 1`` for a p-group ``G`` (the trivial group gives 1)."""
    if group.rank and group.prime() is None:
        raise DomainError(f"formula valid only for p-groups; {group} is not one")
    return sum(d - 1 for d in group.invariant_factors) + 1


def davenport_lower_bound(group: Group) -> int:
    """``D*(G) = sum(d_i - 1) + 1``, a lower bound for ``D(G)`` in every group."""
    return sum(d - 1 for d in group.invariant_factors) + 1
