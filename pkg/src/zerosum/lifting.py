"""Quotient lifting over ``C_{n p^m}^r``.

Project a sequence onto ``C_n^r`` by reducing coordinates mod ``n``, pull out
blocks of length ``n`` that are zero-sum in the quotient, and read each
block's true sum as an element of the kernel ``n C_{n p^m}^r = C_{p^m}^r``.
A zero-sum subsequence of length ``k p^m`` among those kernel elements picks
blocks whose union is zero-sum of length ``k n p^m`` in the original group.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .cache import ResultCache
from .errors import (
    AssumptionViolationError,
    InternalContradictionError,
    ResourceCapError,
    ValidationError,
)
from .groups import Group, GroupElement
from .ntheory import factorize, largest_prime_power_divisor
from .registry import Registry, a_r, alon_dubiner_bound, default_registry
from .sequences import Sequence
from .solver import Certificate, compute_s_exact, find_fixed_length_zero_sum

log = logging.getLogger(__name__)

# Quotients with at most this many elements may have s(C_n^r) computed on the fly.
SOLVER_QUOTIENT_ORDER = 16


@dataclass(frozen=True)
class LiftingPlan:
    n: int
    p: int
    m: int
    r: int
    k: int

    def __post_init__(self):
        f = factorize(self.p).factors
        if f != ((self.p, 1),):
            raise ValidationError(f"p={self.p} is not prime")
        if self.n < 1 or self.m < 1 or self.r < 1 or self.k < 1:
            raise ValidationError("need n >= 1, m >= 1, r >= 1, k >= 1")

    @property
    def pm(self) -> int:
        return self.p**self.m

    @property
    def required_blocks(self) -> int:
        return (self.k + self.r) * self.pm - self.r

    @property
    def block_length(self) -> int:
        return self.n

    @property
    def target_length(self) -> int:
        return self.k * self.n * self.pm

    @property
    def group(self) -> Group:
        return Group.cyclic_power(self.n * self.pm, self.r)

    @property
    def quotient(self) -> Group:
        return Group.cyclic_power(self.n, self.r)

    @property
    def kernel(self) -> Group:
        return Group.cyclic_power(self.pm, self.r)

    def min_length(self, s_quot: int) -> int:
        """Shortest input for which greedy extraction is guaranteed ``required_blocks`` blocks."""
        return (self.required_blocks - 1) * self.n + s_quot

    def kernel_assumption(self, registry: Registry | None = None):
        """Registry record for ``s_{k p^m}(C_{p^m}^r)``; the plan needs it to be at most ``required_blocks``."""
        return (registry or default_registry()).predict(self.kernel, self.k * self.pm)


def _check_shape(group: Group, n: int):
    d = group.invariant_factors
    if not d or not group.is_cyclic_power or d[0] % n:
        raise ValidationError(f"expected C_N^r with n | N, got {group} and n={n}")


def project(S: Sequence, n: int) -> Sequence:
    """Reduce every coordinate mod ``n``: ``C_{nq}^r -> C_n^r``."""
    _check_shape(S.group, n)
    Q = Group.cyclic_power(n, S.group.rank)
    return S.map(lambda g: Q.element(g.coords[: Q.rank]), Q)


def kernel_divide(g: GroupElement, n: int) -> GroupElement:
    """``n x -> x``: identifies the kernel of reduction mod ``n`` with ``C_q^r``."""
    _check_shape(g.group, n)
    if any(c % n for c in g.coords):
        raise ValidationError(f"{g!r} is not in the kernel of reduction mod {n}")
    q = g.group.exponent // n
    return Group.cyclic_power(q, g.group.rank).element([c // n for c in g.coords])


def quotient_constant(
    n: int,
    r: int,
    registry: Registry | None = None,
    c: float = 1.0,
    cache: ResultCache | None = None,
) -> tuple[int, str, bool]:
    """``(value, source, heuristic)`` for ``s(C_n^r)`` or an upper bound for it.

    Sources in order: registry exact value, solver when ``n^r`` is tiny, the
    Alon-Dubiner form with parameter ``c`` (heuristic, ``c`` is unknown).
    """
    if n == 1:
        return 1, "trivial quotient", False
    reg = registry or default_registry()
    rec = reg.predict(Group.cyclic_power(n, r), n)
    if rec.exact:
        return rec.lo, f"registry ({rec.status}): {rec.source}", False
    if n**r <= SOLVER_QUOTIENT_ORDER:
        res = compute_s_exact(Group.cyclic_power(n, r), n)
        if cache is not None:
            cache.put("s", res.group.descriptor, n, res.value, source="compute_s_exact")
        return res.value, "exact search", False
    if rec.hi is not None:
        return rec.hi, f"registry upper bound: {rec.source}", False
    if r < 2:  # pragma: no cover - cyclic quotients are always exact
        raise ValidationError("no bound for s(C_n)")
    v = alon_dubiner_bound(n, r, c)
    return v, f"Alon-Dubiner form with c={c} (heuristic: the constant is not known)", True


def _preimages(remaining: dict[GroupElement, int], wanted: Sequence, n: int, Q: Group) -> dict:
    """Pick original elements realizing a quotient witness, smallest index first."""
    picked: dict[GroupElement, int] = {}
    for h, need in wanted.items():
        for g in remaining:
            if need == 0:
                break
            if Q.element(g.coords) != h:
                continue
            take = min(need, remaining[g] - picked.get(g, 0))
            if take > 0:
                picked[g] = picked.get(g, 0) + take
                need -= take
        if need:  # pragma: no cover - projection counts guarantee preimages
            raise InternalContradictionError(f"ran out of preimages of {h!r}")
    return picked


def lift_zero_sum(
    S: Sequence,
    plan: LiftingPlan,
    s_quot: int | None = None,
    registry: Registry | None = None,
    c: float = 1.0,
) -> Certificate:
    """Zero-sum subsequence of ``S`` of length ``k n p^m`` built from quotient blocks."""
    reg = registry or default_registry()
    G = plan.group
    if S.group != G:
        raise ValidationError(f"plan expects a sequence over {G}, got {S.group}")
    if s_quot is None:
        s_quot, source, heuristic = quotient_constant(plan.n, plan.r, reg, c)
        if heuristic:
            log.warning("s(C_%d^%d) taken as %d from %s", plan.n, plan.r, s_quot, source)
    need = plan.min_length(s_quot)
    if len(S) < need:
        raise ValidationError(f"sequence has length {len(S)}; lifting needs length {need}")

    n = plan.n
    Q = plan.quotient if n > 1 else Group(())
    K = plan.kernel
    remaining = dict(S.items())
    blocks: list[Sequence] = []
    while len(blocks) < plan.required_blocks:
        rest = Sequence(G, remaining)
        if n == 1:
            g = next(iter(rest))
            block = {g: 1}
        else:
            proj = project(rest, n)
            cert = find_fixed_length_zero_sum(proj, n)
            if cert is None:
                raise InternalContradictionError(
                    f"no quotient zero-sum block of length {n} in {len(rest)} remaining terms "
                    f"although s(C_{n}^{plan.r}) <= {s_quot} was assumed"
                )
            block = _preimages(remaining, cert.witness, n, Q)
        B = Sequence(G, block)
        assert all(c % n == 0 for c in B.sigma().coords), "block sum escaped the kernel"
        for g, v in block.items():
            remaining[g] -= v
        blocks.append(B)

    sums = [kernel_divide(B.sigma(), n) if n > 1 else K.element(B.sigma().coords) for B in blocks]
    kseq = Sequence.from_elements(K, sums)
    L = plan.k * plan.pm
    try:
        kcert = find_fixed_length_zero_sum(kseq, L)
    except ResourceCapError:
        from .induction import peel_find

        kcert = peel_find(kseq, plan.k, registry=reg)
    if kcert is None:
        raise AssumptionViolationError(
            f"kernel step failed: {len(kseq)} elements of {K} have no zero-sum subsequence of length {L}; "
            f"assumed s_{L}(C_{plan.pm}^{plan.r}) = {plan.required_blocks}"
        )

    wanted = dict(kcert.witness.items())
    witness = Sequence.empty(G)
    for B, s in zip(blocks, sums):
        if wanted.get(s, 0) > 0:
            wanted[s] -= 1
            witness = witness.concat(B)
    return Certificate(S, witness, plan.target_length)


# -- bound evaluation -------------------------------------------------------


def upper_bound_value(n: int, r: int, k: int, s_quot: int, pm: int) -> int:
    """``((k+r) p^m - r) n + s(C_n^r)``."""
    return ((k + r) * pm - r) * n + s_quot


def corollary3_value(N: int, r: int, k: int, c: float = 1.0) -> float:
    """``(k+r) N + a_r N / M(N)``, the closed form with the unknown constant ``c``."""
    return (k + r) * N + a_r(r, c) * N / largest_prime_power_divisor(N) if r >= 2 else float((k + r) * N)


def evaluate_bound(N: int, r: int, k: int, c: float = 1.0, registry: Registry | None = None) -> dict:
    """Lifting bound for ``s_{kN}(C_N^r)`` with ``p^m = M(N)`` as the kernel."""
    reg = registry or default_registry()
    if N < 2:
        raise ValidationError("N must be >= 2")
    M = largest_prime_power_divisor(N)
    (p, m), = factorize(M).factors
    n = N // M
    s_quot, source, heuristic = quotient_constant(n, r, reg, c)
    plan = LiftingPlan(n, p, m, r, k)
    kern = plan.kernel_assumption(reg)
    holds = kern.hi is not None and kern.hi <= plan.required_blocks
    return {
        "N": N,
        "r": r,
        "k": k,
        "c": c,
        "M": M,
        "p": p,
        "m": m,
        "quotient_n": n,
        "exact_sources": {
            "s_quot": {"value": s_quot, "source": source, "heuristic": heuristic},
            "kernel": {
                "statement": f"s_{k * M}(C_{M}^{r}) = {plan.required_blocks}",
                "holds": holds,
                "record": kern.to_json(),
            },
        },
        "bound_value": upper_bound_value(n, r, k, s_quot, M),
        "corollary3_value": corollary3_value(N, r, k, c),
        "a_r": a_r(r, c) if r >= 2 else None,
        "conditional": not holds or heuristic,
        "registry": reg.predict(Group.cyclic_power(N, r), k * N).to_json(),
    }
