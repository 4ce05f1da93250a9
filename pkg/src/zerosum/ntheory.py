"""Largest prime-power divisors, prime counting, and the census of E(x, y).

Bulk work goes through numpy sieves; single queries use trial division,
which is deterministic and comfortably fast up to about 10**12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceCapError

DEFAULT_SIEVE_BUDGET = 10**7


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]  # (prime, exponent), sorted by prime

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def largest_prime(self) -> int:
        return self.factors[-1][0] if self.factors else 1

    @property
    def largest_prime_power(self) -> tuple[int, int]:
        """``(p, a)`` with ``p**a`` the largest prime power dividing n; ``(1, 0)`` for n = 1."""
        if not self.factors:
            return (1, 0)
        return max(self.factors, key=lambda pa: pa[0] ** pa[1])

    def to_json(self) -> list[list[int]]:
        return [[p, a] for p, a in self.factors]


def factorize(n: int) -> Factorization:
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    m = n
    out = []
    for p in (2, 3):
        a = 0
        while m % p == 0:
            m //= p
            a += 1
        if a:
            out.append((p, a))
    p = 5
    while p * p <= m:
        for q in (p, p + 2):
            a = 0
            while m % q == 0:
                m //= q
                a += 1
            if a:
                out.append((q, a))
        p += 6
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n).factors == ((n, 1),)


def largest_prime_power_divisor(n: int) -> int:
    """``M(n)``, with ``M(1) = 1``."""
    p, a = factorize(n).largest_prime_power
    return p**a


def largest_prime_divisor(n: int) -> int:
    """``P(n)``; 1 for n = 1."""
    return factorize(n).largest_prime


def omega(n: int) -> int:
    return factorize(n).omega


def p_n_r(n: int, r: int) -> int:
    """Least power ``p**t`` with ``t >= 1`` and ``p**t >= r``, where ``M(n) = p**a``.

    ``t = 0`` is never used, so ``p_n_r(n, 1) == p``.
    """
    if r < 1:
        raise DomainError("r must be >= 1")
    if n == 1:
        raise DomainError("p(n, r) is undefined for n = 1 (M(1) has no prime)")
    p, _ = factorize(n).largest_prime_power
    q = p
    while q < r:
        q *= p
    return q


# -- sieves -----------------------------------------------------------------


def _check_budget(limit: int, budget: int | None):
    budget = DEFAULT_SIEVE_BUDGET if budget is None else budget
    if limit > budget:
        raise ResourceCapError(f"sieve limit {limit} exceeds budget {budget}")


def prime_mask(limit: int) -> np.ndarray:
    """``mask[k]`` is True iff k is prime, for ``0 <= k <= limit``."""
    mask = np.ones(max(limit + 1, 2), dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask[: limit + 1]


def primes_up_to(limit: int) -> np.ndarray:
    return np.nonzero(prime_mask(limit))[0]


def smallest_prime_factor(limit: int) -> np.ndarray:
    """``spf[k]`` for ``2 <= k <= limit`` (0 at 0 and 1)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.arange(limit + 1)
    unset = spf == 0
    spf[unset] = rest[unset]
    spf[:2] = 0
    return spf


def prime_pi(x: int) -> int:
    if x < 2:
        return 0
    return int(prime_mask(int(x)).sum())


def chebyshev_theta(x: int) -> float:
    if x < 2:
        return 0.0
    return float(np.log(primes_up_to(int(x)).astype(np.float64)).sum())


def prime_pi_table(limit: int) -> np.ndarray:
    """``table[k] = pi(k)`` for ``0 <= k <= limit``."""
    return np.cumsum(prime_mask(limit)).astype(np.int64)


@dataclass
class MTables:
    """``M(n)`` and ``omega(n)`` for every ``n <= limit`` (index 0 unused)."""

    limit: int
    M: np.ndarray
    omega: np.ndarray


def m_tables(limit: int, budget: int | None = None) -> MTables:
    """Sieve M(n) and omega(n) for all n up to ``limit``.

    Primes up to sqrt(limit) are handled power by power; what remains of n
    after dividing them out is 1 or a single large prime.
    """
    _check_budget(limit, budget)
    n = limit + 1
    M = np.ones(n, dtype=np.int64)
    om = np.zeros(n, dtype=np.int8)
    rem = np.arange(n, dtype=np.int64)
    for p in primes_up_to(math.isqrt(limit)):
        p = int(p)
        om[p::p] += 1
        q = p
        while q <= limit:
            rem[q::q] //= p
            view = M[q::q]
            np.maximum(view, q, out=view)
            q *= p
    big = rem > 1
    om[big] += 1
    np.maximum(M, rem, out=M)
    M[0] = 0
    return MTables(limit, M, om)


# -- lower bounds for M(n) --------------------------------------------------


@dataclass
class LowerBoundReport:
    limit: int
    log_bound_holds: bool  # M(n) >= ln(n) / 2
    log_bound_min_slack: float
    log_bound_argmin: int
    root_bound_holds: bool  # M(n) >= n ** (1 / omega(n))
    root_bound_min_ratio: float  # min of M(n) / n ** (1 / omega(n)), n >= 2
    root_bound_argmin: int
    violations: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def check_M_lower_bounds(limit: int, tables: MTables | None = None) -> LowerBoundReport:
    """Check ``M(n) >= ln(n)/2`` and ``M(n) >= n**(1/omega(n))`` for all ``1 <= n <= limit``."""
    t = tables if tables is not None and tables.limit >= limit else m_tables(limit)
    ns = np.arange(1, limit + 1, dtype=np.int64)
    M = t.M[1 : limit + 1]
    om = t.omega[1 : limit + 1].astype(np.int64)
    logn = np.log(ns.astype(np.float64))

    slack = M - 0.5 * logn
    i = int(np.argmin(slack))
    log_ok = bool(np.all(slack >= 0))

    # n = 1 has omega = 0; M(1) = 1 = 1^(anything), so it is skipped
    body = slice(1, None)
    logM = np.log(M[body].astype(np.float64))
    gap = om[body] * logM - logn[body]  # >= 0 iff M^omega >= n
    violations = []
    # float noise can only matter near equality; settle those with integers
    for j in np.nonzero(gap < 1e-9)[0]:
        nn, mm, ww = int(ns[body][j]), int(M[body][j]), int(om[body][j])
        if mm**ww < nn:
            violations.append(nn)
    ratio = np.exp(logM - logn[body] / om[body])
    k = int(np.argmin(ratio))
    return LowerBoundReport(
        limit=limit,
        log_bound_holds=log_ok,
        log_bound_min_slack=float(slack[i]),
        log_bound_argmin=int(ns[i]),
        root_bound_holds=not violations,
        root_bound_min_ratio=float(ratio[k]),
        root_bound_argmin=int(ns[body][k]),
        violations=violations[:20],
    )


def check_prime_pi_bound(limit: int) -> tuple[bool, int, float]:
    """Check ``pi(x) <= 2x/ln x`` for integers ``2 <= x <= limit``.

    Returns ``(holds, argmin, min_slack)`` where slack is ``2x/ln x - pi(x)``.
    """
    pi = prime_pi_table(limit)
    xs = np.arange(2, limit + 1, dtype=np.float64)
    slack = 2 * xs / np.log(xs) - pi[2:]
    i = int(np.argmin(slack))
    return bool(np.all(slack >= 0)), int(xs[i]), float(slack[i])


# -- census -----------------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    x: int
    y: float
    count_E: int
    ratio: float | None = None  # count_E / x**exponent when an exponent is given
    exponent: float | None = None

    def to_row(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "count_E": self.count_E,
            "ratio": self.ratio,
            "exponent": self.exponent,
        }


def census_E(x: int, y: float, *, exponent: float | None = None, tables: MTables | None = None,
             budget: int | None = None) -> CensusRow:
    """``|{n <= x : M(n) <= y}|`` by direct evaluation."""
    if x < 0:
        raise DomainError("x must be non-negative")
    if x == 0:
        return CensusRow(0, y, 0)
    t = tables if tables is not None and tables.limit >= x else m_tables(x, budget)
    count = int(np.count_nonzero(t.M[1 : x + 1] <= y))
    ratio = count / float(x) ** exponent if exponent is not None else None
    return CensusRow(x, float(y), count, ratio, exponent)


def census_table(xs, A: float, eps: float, budget: int | None = None,
                 tables: MTables | None = None) -> list[CensusRow]:
    """Rows for ``y = (ln x)**A`` with ratio exponent ``1 - 1/A + eps``."""
    if A < 1:
        raise DomainError("A must be >= 1")
    xs = sorted(int(x) for x in xs)
    if tables is None or tables.limit < xs[-1]:
        tables = m_tables(xs[-1], budget)
    exponent = 1 - 1 / A + eps
    return [census_E(x, math.log(x) ** A, exponent=exponent, tables=tables) for x in xs]


def primorial_liminf_table(kmax: int) -> list[dict]:
    """Rows ``(k, p_k, ln n_k, M(n_k)/ln n_k)`` for primorials ``n_k = p_1 ... p_k``.

    ``M(n_k) = p_k`` and ``ln n_k = theta(p_k)``; logs are summed directly.
    """
    if kmax < 1:
        return []
    bound = max(15, int(kmax * (math.log(kmax + 1) + math.log(math.log(kmax + 2)) + 2)))
    primes = primes_up_to(bound)
    while len(primes) < kmax:
        bound *= 2
        primes = primes_up_to(bound)
    rows = []
    theta = 0.0
    for k, p in enumerate(primes[:kmax], start=1):
        theta += math.log(int(p))
        rows.append({"k": k, "p_k": int(p), "ln_n_k": theta, "ratio": int(p) / theta})
    return rows
