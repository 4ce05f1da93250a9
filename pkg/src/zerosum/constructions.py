"""Extremal lower-bound sequences and their verification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ValidationError
from .groups import Group
from .sequences import Sequence
from .solver import find_fixed_length_zero_sum, is_zero_sum_free

# Caps (no three collinear points) in AG(r, 3) of the largest possible size.
# Doubling every point gives a sequence with no zero-sum subsequence of length 3,
# so s(C_3^r) >= 2 * |cap| + 1.
MAX_CAPS_F3 = {
    1: [(0,), (1,)],
    2: [(0, 0), (1, 0), (0, 1), (1, 1)],
    3: [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1),
        (1, 0, 1), (1, 1, 2), (1, 2, 2), (2, 1, 2)],
    4: [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
        (0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0), (0, 1, 1, 1), (1, 0, 0, 1),
        (1, 0, 1, 2), (1, 0, 2, 2), (1, 1, 0, 2), (1, 2, 0, 2), (2, 0, 1, 2),
        (2, 1, 0, 2), (2, 1, 1, 0), (2, 1, 1, 1), (2, 1, 2, 2), (2, 2, 1, 2)],
}


@dataclass(frozen=True)
class Construction:
    """A sequence together with the claim that it has no zero-sum subsequence of length ``L``."""

    sequence: Sequence
    no_zero_sum_of_length: int

    @property
    def certified_lower_bound(self) -> int:
        """The constant this certifies a lower bound for: ``s_L(G) >= len + 1``."""
        return len(self.sequence) + 1

    def verify(self) -> bool:
        return find_fixed_length_zero_sum(self.sequence, self.no_zero_sum_of_length) is None

    def to_json(self, verified: bool | None = None) -> dict:
        out = self.sequence.to_json()
        claim = {"no_zero_sum_of_length": self.no_zero_sum_of_length}
        if verified is not None:
            claim["verified"] = verified
        out["claim"] = claim
        return out


def kubertin_lower_bound(n: int, r: int, k: int) -> Sequence:
    """``0^[kn-1] . e_1^[n-1] ... e_r^[n-1]`` over ``C_n^r``, of length ``(k+r)n - r - 1``."""
    if n < 2 or r < 1 or k < 1:
        raise ValidationError(f"need n >= 2, r >= 1, k >= 1; got n={n}, r={r}, k={k}")
    G = Group.cyclic_power(n, r)
    counts = {G.zero: k * n - 1}
    for e in G.basis():
        counts[e] = n - 1
    return Sequence(G, counts)


def kubertin_construction(n: int, r: int, k: int) -> Construction:
    return Construction(kubertin_lower_bound(n, r, k), k * n)


def general_lower_bound(group: Group, k: int, T: Sequence) -> Sequence:
    """``T . 0^[k exp(G) - 1]`` for a zero-sum free ``T``.

    With ``|T| = D(G) - 1`` this has length ``k exp(G) + D(G) - 2`` and no
    zero-sum subsequence of length ``k exp(G)``.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    if T.group != group:
        raise ValidationError(f"T lives in {T.group}, expected {group}")
    if not is_zero_sum_free(T):
        raise ValidationError("T is not zero-sum free")
    return T.concat(Sequence.power(group.zero, k * group.exponent - 1))


def general_construction(group: Group, k: int, T: Sequence) -> Construction:
    return Construction(general_lower_bound(group, k, T), k * group.exponent)


def doubled_cap_sequence(r: int) -> Sequence:
    """Each point of a maximum cap in ``F_3^r`` twice (r <= 4).

    Over ``C_3^r`` three terms sum to zero only if they are equal or
    collinear, so this has no zero-sum subsequence of length 3.
    """
    if r not in MAX_CAPS_F3:
        raise ValidationError(f"no stored cap for r={r}; available: {sorted(MAX_CAPS_F3)}")
    G = Group.cyclic_power(3, r)
    return Sequence(G, {G.element(p): 2 for p in MAX_CAPS_F3[r]})


def all_elements_sequence(r: int) -> Sequence:
    """Every element of ``C_2^r`` once; no zero-sum subsequence of length 2."""
    G = Group.cyclic_power(2, r)
    return Sequence(G, {g: 1 for g in G.elements()})


def egz_extremal_construction(group: Group) -> Construction:
    """Known longest sequences without a zero-sum subsequence of length ``exp(G)``.

    Covers ``C_n`` (the EGZ example), ``C_2^r`` and ``C_3^r`` for r <= 4.
    """
    d = group.invariant_factors
    if len(d) == 1:
        return kubertin_construction(d[0], 1, 1)
    if group.is_cyclic_power and d and d[0] == 2:
        return Construction(all_elements_sequence(len(d)), 2)
    if group.is_cyclic_power and d and d[0] == 3:
        return Construction(doubled_cap_sequence(len(d)), 3)
    raise ValidationError(f"no stored extremal EGZ example for {group}")


def verify_all_kubertin(n_max: int, r_max: int, k_max: int):
    """Yield ``(n, r, k, length_ok, verified)`` for the whole parameter box."""
    for n, r, k in itertools.product(range(2, n_max + 1), range(1, r_max + 1), range(1, k_max + 1)):
        c = kubertin_construction(n, r, k)
        yield n, r, k, len(c.sequence) == (k + r) * n - r - 1, c.verify()
