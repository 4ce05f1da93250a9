"""Peel-off extraction over ``C_q^r`` with ``q`` a prime power.

To find a zero-sum subsequence of length ``kq`` take one of length ``q`` out
(the EGZ guarantee makes this possible while the sequence is long enough) and
look for one of length ``(k-1)q`` in the rest, down to a base case solved
directly.
"""

from __future__ import annotations

import logging

from .errors import AssumptionViolationError, ConfigurationError, ValidationError
from .groups import Group
from .ntheory import factorize
from .registry import ConstantRecord, Registry, default_registry
from .sequences import Sequence
from .solver import Certificate, find_fixed_length_zero_sum

log = logging.getLogger(__name__)


def _prime_power_group(group: Group) -> tuple[int, int, int]:
    """``(q, p, r)`` for ``C_q^r``."""
    d = group.invariant_factors
    if not d or not group.is_cyclic_power:
        raise ValidationError(f"peel-off needs a group C_q^r, got {group}")
    f = factorize(d[0]).factors
    if len(f) != 1:
        raise ValidationError(f"peel-off needs q a prime power, got q={d[0]}")
    return d[0], f[0][0], len(d)


def registry_precondition(q: int, r: int, k: int, registry: Registry | None = None) -> ConstantRecord:
    """The length ``s_kq(C_q^r)`` that guarantees a zero-sum subsequence of length ``kq``.

    Returns the registry record when it is exact. Otherwise the conjectured
    value ``(k+r)q - r`` is returned with status ``conjecture``.
    """
    reg = registry or default_registry()
    G = Group.cyclic_power(q, r)
    rec = reg.predict(G, k * q)
    if rec.exact:
        return rec
    v = (k + r) * q - r
    trace = rec.trace + [f"no exact value; using conjectured (k+r)q - r = {v}" + ("" if k >= r else " (k < r, outside the conjecture)")]
    return ConstantRecord(G.descriptor, k * q, v, v, "conjecture", "Kubertin's conjecture", v, trace)


def peel_find(S: Sequence, k: int, base_k: int | None = None, registry: Registry | None = None) -> Certificate:
    """Zero-sum subsequence of ``S`` of length ``kq`` by peeling ``k - base_k`` blocks of length ``q``."""
    reg = registry or default_registry()
    q, p, r = _prime_power_group(S.group)
    if base_k is None:
        base_k = reg.base_case(p, r)
        if base_k is None:
            raise ConfigurationError(f"no recorded base case for p={p}, r={r}; pass base_k")
    if k < base_k:
        raise ValidationError(f"k={k} is below the base case k={base_k}")
    need = registry_precondition(q, r, k, reg)
    if len(S) < need.lo:
        raise ValidationError(
            f"sequence has length {len(S)}; s_{k * q}(C_{q}^{r}) needs length {need.lo} ({need.status})"
        )
    rest = S
    pieces = []
    for step in range(k - base_k):
        T = find_fixed_length_zero_sum(rest, q)
        if T is None:
            raise AssumptionViolationError(
                f"no zero-sum subsequence of length {q} in a remainder of length {len(rest)}; "
                f"assumed s(C_{q}^{r}) <= {len(rest)}"
            )
        pieces.append(T.witness)
        rest = rest.remove(T.witness)
        log.debug("peel %d: removed %s, %d left", step + 1, T.witness, len(rest))
    base = find_fixed_length_zero_sum(rest, base_k * q)
    if base is None:
        raise AssumptionViolationError(
            f"base case failed: no zero-sum subsequence of length {base_k * q} in length {len(rest)}; "
            f"assumed s_{base_k * q}(C_{q}^{r}) = {(base_k + r) * q - r}"
        )
    witness = base.witness
    for T in pieces:
        witness = witness.concat(T)
    return Certificate(S, witness, k * q)
