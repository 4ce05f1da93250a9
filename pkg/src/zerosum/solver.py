"""Exact zero-sum search.

Everything here is exact: a ``None`` from :func:`find_fixed_length_zero_sum`
is a proof that no witness exists, and the extremal searches explore the
whole (symmetry-reduced) space.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import GroupMismatchError, ResourceCapError
from .groups import Group, davenport_lower_bound
from .sequences import Sequence

log = logging.getLogger(__name__)

DEFAULT_MAX_CELLS = 50_000_000
DAVENPORT_ORDER_CAP = 64
S_EXACT_ORDER_CAP = 64
DEFAULT_MAX_STATES = 2_000_000
DAVENPORT_MAX_STATES = 20_000_000


@dataclass(frozen=True)
class Certificate:
    """``witness`` is claimed to be a zero-sum subsequence of ``base`` of length ``target_length``."""

    base: Sequence
    witness: Sequence
    target_length: int

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "witness": self.witness.to_json(),
            "target_length": self.target_length,
            "verified": bool(verify_certificate(self)),
        }

    @classmethod
    def from_json(cls, data: dict) -> Certificate:
        return cls(
            Sequence.from_json(data["base"]),
            Sequence.from_json(data["witness"]),
            int(data["target_length"]),
        )


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_certificate(cert: Certificate) -> CheckResult:
    """Re-check a certificate from scratch, without touching the search code."""
    base, wit = cert.base, cert.witness
    if base.group != wit.group:
        return CheckResult(False, "witness and base live in different groups")
    if len(wit) != cert.target_length:
        return CheckResult(False, f"witness has length {len(wit)}, expected {cert.target_length}")
    for g, v in wit.items():
        if base.multiplicity(g) < v:
            return CheckResult(False, f"{g!r} used {v} times but occurs {base.multiplicity(g)} times")
    total = [0] * base.group.rank
    for g, v in wit.items():
        for i, x in enumerate(g.coords):
            total[i] += v * x
    if any(t % d for t, d in zip(total, base.group.invariant_factors)):
        return CheckResult(False, "witness sum is not zero")
    return CheckResult(True, "ok")


# -- fixed-length dynamic program ------------------------------------------


def _shift_index(group: Group, idx: int) -> np.ndarray:
    """``out[x] = index(x - g)`` for the element with index ``idx``."""
    return group.addition_table[group.negation[idx]]


def find_fixed_length_zero_sum(
    S: Sequence, L: int, *, max_cells: int = DEFAULT_MAX_CELLS
) -> Certificate | None:
    """Return a zero-sum subsequence of ``S`` of length exactly ``L``, or None.

    Scans distinct elements in canonical order keeping the table
    ``reach[c, x]`` (some sub-multiset of size ``c`` sums to ``x``), then walks
    the stored layers backwards. Later elements are taken as rarely as
    possible, so the witness leans on small canonical indices.
    """
    if L < 0:
        raise ValueError("L must be non-negative")
    group = S.group
    if L == 0:
        return Certificate(S, Sequence.empty(group), 0)
    if L > len(S):
        return None
    group.check_enumerable()
    items = [(g.index, v, g) for g, v in S.items()]
    cells = (L + 1) * group.order * (len(items) + 1)
    if cells > max_cells:
        raise ResourceCapError(
            f"dynamic program needs {cells} table cells (cap {max_cells}); "
            f"group order {group.order}, L={L}, {len(items)} distinct elements"
        )

    reach = np.zeros((L + 1, group.order), dtype=bool)
    reach[0, 0] = True
    layers = []
    for idx, v, _ in items:
        layers.append(reach)
        sub = _shift_index(group, idx)
        new = reach.copy()
        cur = reach
        for _ in range(min(v, L)):
            shifted = np.zeros_like(cur)
            shifted[1:] = cur[:-1, sub]
            if not shifted.any():
                break
            new |= shifted
            cur = shifted
        reach = new
    if not reach[L, 0]:
        return None

    chosen = {}
    c, x = L, 0
    for (idx, v, g), prev in zip(reversed(items), reversed(layers)):
        sub = _shift_index(group, idx)
        y = x
        for j in range(min(v, c) + 1):
            if prev[c - j, y]:
                break
            y = sub[y]
        else:  # pragma: no cover - table guarantees a predecessor
            raise AssertionError("witness reconstruction failed")
        if j:
            chosen[g] = j
        c, x = c - j, int(y)
    assert c == 0 and x == 0
    return Certificate(S, Sequence(group, chosen), L)


def has_short_zero_sum(S: Sequence) -> Certificate | None:
    """First zero-sum subsequence with length in ``[1, exp(G)]``, shortest first."""
    for L in range(1, S.group.exponent + 1):
        cert = find_fixed_length_zero_sum(S, L)
        if cert is not None:
            return cert
    return None


def subset_sums(S: Sequence) -> np.ndarray:
    """Boolean mask of the sums of all non-empty sub-multisets."""
    group = S.group
    sums = np.zeros(group.order, dtype=bool)
    for g, v in S.items():
        sub = _shift_index(group, g.index)
        for _ in range(v):
            sums = sums | sums[sub]
            sums[g.index] = True
    return sums


def is_zero_sum_free(S: Sequence) -> bool:
    return not subset_sums(S)[0]


def has_zero_sum_of_length(S: Sequence, L: int) -> bool:
    return find_fixed_length_zero_sum(S, L) is not None


# -- extremal searches -----------------------------------------------------


@dataclass
class ExtremalResult:
    """``value`` is the constant; ``extremal_example`` has length ``value - 1`` and no witness.

    ``target_length`` is None for the Davenport constant (any non-empty length).
    """

    group: Group
    target_length: int | None
    value: int
    extremal_example: Sequence
    exact: bool = True
    states: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "group": self.group.descriptor,
            "target_length": self.target_length,
            "value": self.value,
            "extremal_example": self.extremal_example.to_json(),
            "exact": self.exact,
            "states": self.states,
            "notes": list(self.notes),
        }


def _min_row_key(rows: np.ndarray) -> bytes:
    """Lexicographically smallest packed row of a 2-D boolean array."""
    packed = np.packbits(rows, axis=1)
    width = packed.shape[1]
    if width <= 8:
        padded = np.zeros((packed.shape[0], 8), dtype=np.uint8)
        padded[:, :width] = packed
        as_int = padded.view(">u8").ravel()
        return packed[int(np.argmin(as_int))].tobytes()
    order = np.lexsort(packed.T[::-1])
    return packed[order[0]].tobytes()


def _inverse_perms(perms: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perms)
    rows = np.arange(perms.shape[0])[:, None]
    inv[rows, perms] = np.arange(perms.shape[1])[None, :]
    return inv


def compute_davenport(
    group: Group,
    *,
    cap: int = DAVENPORT_ORDER_CAP,
    symmetry: bool = True,
    max_states: int = DAVENPORT_MAX_STATES,
) -> ExtremalResult:
    """Exact ``D(G)`` by depth-first search over zero-sum free sequences.

    The future of a zero-sum free sequence depends only on its set of subset
    sums, so the search memoizes on that set (up to the automorphisms from
    :meth:`Group.automorphisms`). Each new element grows the subset-sum set
    by at least one, which gives the bound used for pruning.
    """
    n = group.order
    if n > cap:
        hint = " (p-group: use davenport_formula_p_group)" if group.prime() else ""
        raise ResourceCapError(f"|G| = {n} exceeds the exact-search cap {cap}{hint}")
    if n == 1:
        return ExtremalResult(group, None, 1, Sequence.empty(group))

    add = group.addition_table
    neg = group.negation
    perms = group.automorphisms() if symmetry else np.arange(n)[None, :]
    if n <= _kernels.MAX_BITS:
        length, path, states, capped = _kernels.davenport_dfs(
            n, _kernels.byte_luts(add), _kernels.byte_luts(perms), neg, max_states
        )
        if capped:
            raise ResourceCapError(
                f"Davenport search exceeded {max_states} states", partial_lower_bound=length + 1
            )
        example = Sequence.from_elements(group, [group.element_at(int(i)) for i in path])
        return ExtremalResult(group, None, length + 1, example, states=int(states))

    sub_all = add[neg]  # sub_all[g, x] = x - g
    inv = _inverse_perms(perms)

    best_len = 0
    best_path: list[int] = []
    seen: dict[bytes, int] = {}
    path: list[int] = []

    def key(sums: np.ndarray) -> bytes:
        return _min_row_key(sums[inv])

    def dfs(sums: np.ndarray, depth: int):
        nonlocal best_len, best_path
        if depth > best_len:
            best_len, best_path = depth, list(path)
        size = int(sums.sum())
        if depth + (n - 1 - size) <= best_len:
            return
        k = key(sums)
        if seen.get(k, -1) >= depth:
            return
        if len(seen) >= max_states:
            raise ResourceCapError(
                f"Davenport search exceeded {max_states} states",
                partial_lower_bound=best_len + 1,
            )
        seen[k] = depth
        allowed = ~sums[neg]
        allowed[0] = False
        cand = np.nonzero(allowed)[0]
        if cand.size == 0:
            return
        children = sums[None, :] | sums[sub_all[cand]]
        children[np.arange(cand.size), cand] = True
        sizes = children.sum(axis=1)
        for i in np.lexsort((cand, sizes)):
            if depth + 1 + (n - 1 - int(sizes[i])) <= best_len:
                continue
            path.append(int(cand[i]))
            dfs(children[i], depth + 1)
            path.pop()

    dfs(np.zeros(n, dtype=bool), 0)
    example = Sequence.from_elements(group, [group.element_at(i) for i in best_path])
    return ExtremalResult(group, None, best_len + 1, example, states=len(seen))


def _s_transforms(group: Group, L: int, symmetry: bool) -> np.ndarray:
    """Index maps ``idx[t, c, y]`` with ``image[t][c][y] = R[c][idx[t, c, y]]``.

    Transforms are ``S -> a(S) + tau`` for automorphisms ``a`` and, when
    ``exp(G) | L``, translations ``tau`` (a translation moves the sum of a
    size-``c`` sub-multiset by ``c * tau``).
    """
    n = group.order
    rows = L  # rows 0 .. L-1 of the reach table are the state
    if not symmetry:
        return np.broadcast_to(np.arange(n), (1, rows, n)).copy()
    inv = _inverse_perms(group.automorphisms())
    add, neg = group.addition_table, group.negation
    taus = range(n) if L % group.exponent == 0 else [0]
    out = []
    for pinv in inv:
        for tau in taus:
            m = np.empty((rows, n), dtype=np.int64)
            for c in range(rows):
                shift = neg[group.multiple_index(c)[tau]]
                m[c] = pinv[add[shift]]
            out.append(m)
    return np.asarray(out)


def compute_s_exact(
    group: Group,
    L: int,
    *,
    symmetry: bool = True,
    cap: int = S_EXACT_ORDER_CAP,
    max_states: int = DEFAULT_MAX_STATES,
    max_length: int | None = None,
) -> ExtremalResult:
    """Exact ``s_L(G)``: one more than the longest sequence with no zero-sum subsequence of length L.

    Witness-free sequences are enumerated level by level (by length). A
    sequence is represented by its reach table restricted to sizes
    ``0..L-1``, which is all that decides its future, and deduplicated up
    to automorphisms and translations. A ``ResourceCapError`` carries the
    largest lower bound established before the cap was hit.

    When ``exp(G)`` does not divide ``L`` the constant is infinite, so the
    search stops at ``max_length`` (default ``L + 2|G|``).
    """
    if L < 1:
        raise ValueError("L must be positive")
    n = group.order
    if n > cap:
        raise ResourceCapError(f"|G| = {n} exceeds the exact-search cap {cap}")
    if L % group.exponent:
        warnings.warn(
            f"L={L} is not a multiple of exp(G)={group.exponent}; s_L(G) is infinite "
            "and the search will stop at the state cap",
            stacklevel=2,
        )
    lower = L + davenport_lower_bound(group) - 1 if L % group.exponent == 0 else 1
    if max_length is None and L % group.exponent:
        max_length = L + 2 * n
    if n == 1:
        # every sequence of length L is 0^[L]
        return ExtremalResult(group, L, L, Sequence.power(group.zero, L - 1))

    add, neg = group.addition_table, group.negation
    sub_all = add[neg]
    idx = _s_transforms(group, L, symmetry)
    crow = np.arange(L)[None, :, None]

    def keys(tables: np.ndarray) -> list[bytes]:
        # tables: (m, L, n)
        out = []
        for R in tables:
            img = R[crow, idx].reshape(idx.shape[0], -1)
            out.append(_min_row_key(img))
        return out

    start = np.zeros((L, n), dtype=bool)
    start[0, 0] = True
    level = {keys(start[None])[0]: (start, ())}
    length = 0
    total = 1
    while True:
        nxt: dict[bytes, tuple[np.ndarray, tuple[int, ...]]] = {}
        for R, path in level.values():
            allowed = ~R[L - 1][neg]
            cand = np.nonzero(allowed)[0]
            if cand.size == 0:
                continue
            shifted = R[:-1][:, sub_all[cand]]  # (L-1, m, n)
            children = np.repeat(R[None], cand.size, axis=0)
            children[:, 1:] |= shifted.transpose(1, 0, 2)
            for k, child, g in zip(keys(children), children, cand):
                if k not in nxt:
                    nxt[k] = (child, path + (int(g),))
            if len(nxt) > max_states:
                raise ResourceCapError(
                    f"s_{L}({group}) search exceeded {max_states} states at length {length + 1}",
                    partial_lower_bound=max(length + 1, lower),
                )
        if not nxt:
            break
        level = nxt
        length += 1
        if max_length is not None and length >= max_length:
            raise ResourceCapError(
                f"s_{L}({group}) search reached the length cap {max_length} with witness-free sequences left",
                partial_lower_bound=length + 1,
            )
        total += len(nxt)
        log.debug("s_%d(%s): length %d has %d classes", L, group, length, len(nxt))

    _, path = next(iter(level.values()))
    example = Sequence.from_elements(group, [group.element_at(i) for i in path])
    result = ExtremalResult(group, L, length + 1, example, states=total)
    if L % group.exponent == 0 and result.value < lower:  # pragma: no cover
        raise AssertionError(f"search value {result.value} below the theorem lower bound {lower}")
    return result


def check_same_group(*seqs: Sequence):
    groups = {s.group for s in seqs}
    if len(groups) > 1:
        raise GroupMismatchError(f"mixed groups: {groups}")
