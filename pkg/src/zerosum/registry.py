"""Known values, bounds and conjectures for D(G) and s_L(G).

Theorem families live in ``data/registry.json``; this module decides which of
them apply to a query and reports every applicability check in a trace.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .cache import ResultCache
from .groups import Group, davenport_lower_bound
from .ntheory import factorize

log = logging.getLogger(__name__)

STATUSES = ("theorem", "computed", "bound", "conjecture")


@dataclass
class ConstantRecord:
    """A value (``lo == hi``) or interval for ``D(G)`` (``L is None``) or ``s_L(G)``.

    ``hi is None`` means no finite upper bound is known.
    """

    group: str
    L: int | None
    lo: int
    hi: int | None
    status: str
    source: str
    conjectured: int | None = None
    trace: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.status in ("theorem", "computed") and self.lo != self.hi:
            raise ValueError(f"{self.status} record must be exact")
        if not self.source:
            raise ValueError("every record needs a source")

    @property
    def kind(self) -> str:
        return "D" if self.L is None else "s"

    @property
    def value(self) -> int | None:
        return self.lo if self.lo == self.hi else None

    @property
    def exact(self) -> bool:
        return self.status in ("theorem", "computed")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.group,
            "L": self.L,
            "value": self.value,
            "lo": self.lo,
            "hi": self.hi,
            "status": self.status,
            "source": self.source,
            "conjectured": self.conjectured,
            "trace": list(self.trace),
        }

    @classmethod
    def from_json(cls, data: dict) -> ConstantRecord:
        lo = data.get("lo", data.get("value"))
        hi = data.get("hi", data.get("value"))
        return cls(
            group=Group.parse(str(data["group"])).descriptor,
            L=data.get("L"),
            lo=int(lo),
            hi=None if hi is None else int(hi),
            status=data["status"],
            source=data["source"],
            conjectured=data.get("conjectured"),
        )


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    f = factorize(q).factors
    return f[0] if len(f) == 1 else None


def alon_dubiner_bound(n: int, r: int, c: float) -> int:
    """``floor((c r log2 r)^r n)``; ``c`` is not known, so this is heuristic."""
    if r < 2:
        raise ValueError("the Alon-Dubiner form is only meaningful for r >= 2")
    return math.floor((c * r * math.log2(r)) ** r * n)


def a_r(r: int, c: float) -> float:
    """``(c r log2 r)^r - r``."""
    return (c * r * math.log2(r)) ** r - r


class Registry:
    def __init__(self, data: dict, cache: ResultCache | None = None):
        self.data = data
        self.version = data.get("version")
        self.cache = cache if cache is not None else ResultCache(None)
        self.records = [ConstantRecord.from_json(r) for r in data.get("records", [])]

    @classmethod
    def load(cls, path: str | Path | None = None, cache: ResultCache | None = None) -> Registry:
        if path is None:
            text = resources.files("zerosum").joinpath("data/registry.json").read_text()
        else:
            text = Path(path).read_text()
        return cls(json.loads(text), cache)

    # -- Davenport --------------------------------------------------------

    def davenport(self, group: Group) -> ConstantRecord:
        desc = group.descriptor
        trace = []
        d = group.invariant_factors
        for fam in self.data["davenport"]:
            rule = fam["rule"]
            value = None
            if rule == "trivial" and not d:
                value = 1
            elif rule == "cyclic" and len(d) == 1:
                value = d[0]
            elif rule == "p_group" and d and group.prime() is not None:
                value = davenport_lower_bound(group)
            elif rule == "rank_two" and len(d) == 2:
                value = d[0] + d[1] - 1
            trace.append(f"D/{fam['id']}: {'applies' if value is not None else 'n/a'}")
            if value is not None:
                return ConstantRecord(desc, None, value, value, "theorem", fam["source"], trace=trace)
        for rec in self.records:
            if rec.L is None and rec.group == desc:
                trace.append(f"D/record: {rec.source}")
                rec.trace = trace
                return rec
        hit = self.cache.get("D", desc, None)
        if hit:
            trace.append("D/cache: computed value")
            v = hit["value"]
            return ConstantRecord(desc, None, v, v, "computed", "exact search (cache)", trace=trace)
        lo = davenport_lower_bound(group)
        hi = group.order
        trace.append("D: no exact source; D*(G) <= D(G) <= |G|")
        return ConstantRecord(desc, None, lo, hi, "bound", "D*(G) <= D(G) <= |G|", trace=trace)

    def _exact_D(self, group: Group) -> int | None:
        rec = self.davenport(group)
        return rec.value if rec.exact else None

    # -- s_L --------------------------------------------------------------

    def _homocyclic(self, group: Group):
        """``(q, p, e, r)`` for ``C_q^r`` with ``q = p^e``, else None."""
        d = group.invariant_factors
        if not d or not group.is_cyclic_power:
            return None
        pp = _prime_power(d[0])
        if pp is None:
            return None
        return d[0], pp[0], pp[1], len(d)

    def _theorem(self, fam: dict, group: Group, L: int, trace: list[str]) -> int | None:
        rule = fam["rule"]
        d = group.invariant_factors
        m = group.exponent
        k = L // m
        tag = f"s/{fam['id']}"
        if rule == "cyclic":
            if len(d) == 1:
                trace.append(f"{tag}: cyclic, k={k} -> applies")
                return L + d[0] - 1
            trace.append(f"{tag}: not cyclic")
            return None
        if rule == "elementary_2":
            if d and d[-1] == 2 and L == 2:
                trace.append(f"{tag}: G = C_2^{len(d)}, L = 2 -> applies")
                return group.order + 1
            trace.append(f"{tag}: needs C_2^r with L = 2")
            return None
        if rule == "egz_prime_power":
            h = self._homocyclic(group)
            if h and h[1] == fam["p"] and h[3] == fam["r"] and k == 1:
                trace.append(f"{tag}: G = C_{{{fam['p']}^{h[2]}}}^{fam['r']}, L = exp(G) -> applies")
                return fam["a"] * h[0] + fam["b"]
            trace.append(f"{tag}: needs C_{{{fam['p']}^n}}^{fam['r']} with L = exp(G)")
            return None
        if rule == "kubertin_exact":
            h = self._homocyclic(group)
            if h and h[3] == fam["r"] and (fam["p"] is None or h[1] == fam["p"]):
                if k >= fam["k_min"]:
                    trace.append(f"{tag}: k={k} >= {fam['k_min']} -> applies")
                    return (k + fam["r"]) * h[0] - fam["r"]
                trace.append(f"{tag}: k={k} < {fam['k_min']}")
                return None
            trace.append(f"{tag}: needs C_q^{fam['r']}" + (f" with p={fam['p']}" if fam["p"] else ""))
            return None
        if rule == "p_group_lift":
            p = group.prime()
            if p is None:
                trace.append(f"{tag}: not a p-group")
                return None
            D = davenport_lower_bound(group)
            e = 0
            kk = k
            while kk % p == 0:
                kk //= p
                e += 1
            if e >= 1 and p**e * m >= D:
                trace.append(f"{tag}: L = {kk}*{p}^{e}*exp(G), {p}^{e}*{m} >= D(G)={D} -> applies")
                return L + D - 1
            trace.append(f"{tag}: need p^m | L/exp(G) with m >= 1 and p^m exp(G) >= D(G) (v_p(k)={e})")
            return None
        if rule == "gao":
            D = self._exact_D(group)
            if L >= group.order and D is not None:
                trace.append(f"{tag}: km={L} >= |G|={group.order} -> applies")
                return L + D - 1
            trace.append(f"{tag}: km={L} < |G|={group.order}" if L < group.order else f"{tag}: D(G) unknown")
            return None
        if rule == "rank_two":
            if len(d) == 2 and k >= 2:
                trace.append(f"{tag}: rank two, k={k} >= 2 -> applies")
                return L + d[0] + d[1] - 2
            trace.append(f"{tag}: needs rank two and k >= 2")
            return None
        raise ValueError(f"unknown rule {rule!r}")

    def _upper_bound(self, fam: dict, group: Group, L: int, trace: list[str], depth: int) -> int | None:
        rule = fam["rule"]
        tag = f"bound/{fam['id']}"
        k = L // group.exponent
        h = self._homocyclic(group)
        if rule in ("he_bound", "kubertin_bound"):
            if not h:
                trace.append(f"{tag}: needs C_q^r with q a prime power")
                return None
            q, p, _, r = h
            if rule == "he_bound":
                if 2 * p >= 7 * r - 3 and k >= r:
                    trace.append(f"{tag}: 2p={2 * p} >= 7r-3={7 * r - 3}, k={k} >= r -> applies")
                    return (k + 5 * r - 2) * q - 3 * r
                trace.append(f"{tag}: needs 2p >= 7r - 3 and k >= r")
                return None
            if p > min(2 * k, 2 * r):
                trace.append(f"{tag}: p={p} > min(2k, 2r) -> applies")
                return math.floor((k + 3 * r * r / 8 + 3 * r / 2 - 3 / 8) * q) - r
            trace.append(f"{tag}: needs p > min(2k, 2r)")
            return None
        if rule == "lifting":
            if not group.is_cyclic_power or not group.invariant_factors or depth > 3:
                trace.append(f"{tag}: needs C_N^r")
                return None
            N, r = group.exponent, group.rank
            best = None
            for p, a in factorize(N).factors:
                for e in range(1, a + 1):
                    q = p**e
                    n = N // q
                    if n == 1:
                        continue
                    kern = self.predict(Group.cyclic_power(q, r), k * q, _depth=depth + 1)
                    if not (kern.exact and kern.value == (k + r) * q - r):
                        continue
                    quot = self.predict(Group.cyclic_power(n, r), n, _depth=depth + 1)
                    if quot.hi is None:
                        continue
                    val = ((k + r) * q - r) * n + quot.hi
                    if best is None or val < best:
                        best = val
            trace.append(f"{tag}: " + (f"best value {best}" if best is not None else "no usable split"))
            return best
        raise ValueError(f"unknown bound rule {rule!r}")

    def predict(self, group: Group, L: int, *, _depth: int = 0) -> ConstantRecord:
        """Best available statement about ``s_L(G)``; every check is recorded in ``trace``."""
        desc = group.descriptor
        m = group.exponent
        trace: list[str] = []
        if L < 1:
            raise ValueError("L must be positive")
        if L % m:
            trace.append(f"exp(G)={m} does not divide L={L}: an element of order exp(G) repeated forever never gives a length-L zero sum")
            hit = self.cache.get("s", desc, L)
            if hit:
                v = hit["value"]
                return ConstantRecord(desc, L, v, v, "computed", "exact search (cache)", trace=trace)
            return ConstantRecord(desc, L, L, None, "bound", "s_L(G) is infinite when exp(G) does not divide L", trace=trace)

        found = []
        for fam in self.data["s_families"]:
            v = self._theorem(fam, group, L, trace)
            if v is not None:
                found.append((v, fam["source"]))
        for rec in self.records:
            if rec.L == L and rec.group == desc:
                found.append((rec.lo, rec.source)) if rec.exact else None
        if found:
            values = {v for v, _ in found}
            if len(values) > 1:  # pragma: no cover - data error
                trace.append(f"INCONSISTENT theorem values {sorted(values)}")
                log.error("registry theorems disagree for s_%d(%s): %s", L, desc, found)
            v, src = found[0]
            rec = ConstantRecord(desc, L, v, v, "theorem", src, trace=trace)
            rec.conjectured = self._conjecture(group, L, trace)
            return rec

        hit = self.cache.get("s", desc, L)
        if hit:
            trace.append("cache: solver-computed value")
            v = hit["value"]
            rec = ConstantRecord(desc, L, v, v, "computed", "exact search (cache)", trace=trace)
            rec.conjectured = self._conjecture(group, L, trace)
            return rec

        D = self._exact_D(group)
        lo = L + (D if D is not None else davenport_lower_bound(group)) - 1
        trace.append(f"lower: s_L(G) >= L + D(G) - 1 = {lo}" + ("" if D is not None else " (with D*(G))"))
        his = []
        for fam in self.data["s_bounds"]:
            v = self._upper_bound(fam, group, L, trace, _depth)
            if v is not None:
                his.append((v, fam["source"]))
        hi, hi_src = min(his) if his else (None, "no upper bound known")
        conj = self._conjecture(group, L, trace)
        if hi is not None and hi == lo:
            trace.append("upper bound meets the lower bound")
            return ConstantRecord(desc, L, lo, hi, "theorem", f"lower bound + {hi_src}", conj, trace)
        src = f"lower: L + D(G) - 1; upper: {hi_src}"
        return ConstantRecord(desc, L, lo, hi, "bound", src, conj, trace)

    def _conjecture(self, group: Group, L: int, trace: list[str]) -> int | None:
        m = group.exponent
        k = L // m
        out = None
        for fam in self.data["conjectures"]:
            tag = f"conj/{fam['id']}"
            if fam["rule"] == "kubertin":
                if group.is_cyclic_power and group.rank >= 1 and k >= group.rank:
                    out = (k + group.rank) * m - group.rank
                    trace.append(f"{tag}: k >= r -> conjectured {out}")
                else:
                    trace.append(f"{tag}: needs C_n^r with k >= r")
            elif fam["rule"] == "ghps":
                D = self._exact_D(group)
                if D is not None and k >= -(-D // m):
                    trace.append(f"{tag}: k >= ceil(D/m) = {-(-D // m)} -> conjectured {L + D - 1}")
                    out = out if out is not None else L + D - 1
                else:
                    trace.append(f"{tag}: k below ceil(D(G)/exp(G)) or D unknown")
        return out

    # -- induction support -------------------------------------------------

    def base_case(self, p: int, r: int) -> int | None:
        """Smallest k for which ``s_kq(C_q^r) = (k+r)q - r`` is recorded (q a power of p)."""
        specific = [b["k"] for b in self.data["induction_base_cases"] if b["p"] == p and b["r"] == r]
        if specific:
            return min(specific)
        generic = [b["k"] for b in self.data["induction_base_cases"] if b["p"] is None and b["r"] == r]
        return min(generic) if generic else None


_default: Registry | None = None


def default_registry() -> Registry:
    global _default
    if _default is None:
        _default = Registry.load()
    return _default


def predict(group: Group, L: int, registry: Registry | None = None) -> ConstantRecord:
    return (registry or default_registry()).predict(group, L)


# -- cross-validation against the solver --------------------------------------

SELF_CHECK_S = [
    *[(f"{n}", n) for n in range(2, 7)],
    ("2", 4), ("2", 6), ("2^2", 4), ("3", 6), ("2^2", 2),
    ("2^3", 2), ("2^4", 2), ("2^3", 4), ("2^3", 8),
]
SELF_CHECK_S_DEEP = [("3^3", 3)]
SELF_CHECK_D = ["2", "6", "2^2", "2^3", "2^4", "3^2", "4^2", "2,4", "3,6", "2,2,4"]


@dataclass
class SelfCheckReport:
    checks: list[dict] = field(default_factory=list)

    @property
    def contradictions(self) -> list[dict]:
        return [c for c in self.checks if c["status"] == "contradiction"]

    @property
    def ok(self) -> bool:
        return not self.contradictions

    def add(self, name: str, registry_value, solver_value, status: str, note: str = ""):
        self.checks.append({
            "check": name,
            "registry": registry_value,
            "solver": solver_value,
            "status": status,
            "note": note,
        })

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "contradictions": len(self.contradictions),
            "checks": list(self.checks),
        }


def _compare(report: SelfCheckReport, name: str, rec: ConstantRecord, value: int, note: str = ""):
    if rec.exact:
        status = "match" if rec.value == value else "contradiction"
    elif rec.lo <= value and (rec.hi is None or value <= rec.hi):
        status = "consistent"
    else:
        status = "contradiction"
    report.add(name, rec.to_json() | {"trace": []}, value, status, note)


def self_check(registry: Registry | None = None, cache: ResultCache | None = None, deep: bool = False) -> SelfCheckReport:
    """Compare registry statements with exact solver values wherever the solver reaches.

    Solver values already in ``cache`` are reused; fresh ones are written to
    it. ``deep`` adds searches that take minutes.
    """
    from .constructions import doubled_cap_sequence
    from .solver import compute_davenport, compute_s_exact, find_fixed_length_zero_sum

    reg = registry or default_registry()
    cache = cache if cache is not None else reg.cache
    report = SelfCheckReport()

    def solved(kind: str, group: Group, L: int | None) -> int:
        hit = cache.get(kind, group.descriptor, L)
        if hit:
            return hit["value"]
        res = compute_davenport(group) if kind == "D" else compute_s_exact(group, L)
        cache.put(kind, group.descriptor, L, res.value, source="solver")
        return res.value

    seen = set()
    for desc in SELF_CHECK_D:
        G = Group.parse(desc)
        _compare(report, f"D({desc})", reg.davenport(G), solved("D", G, None))
        seen.add(("D", G.descriptor, None))
    for desc, L in SELF_CHECK_S + (SELF_CHECK_S_DEEP if deep else []):
        G = Group.parse(desc)
        _compare(report, f"s_{L}({desc})", reg.predict(G, L), solved("s", G, L))
        seen.add(("s", G.descriptor, L))

    # Only the lower side is in reach for C_3^3 and C_3^4 without a long search.
    for r in (3, 4):
        G = Group.cyclic_power(3, r)
        rec = reg.predict(G, 3)
        T = doubled_cap_sequence(r)
        free = find_fixed_length_zero_sum(T, 3) is None
        status = "partial" if free and len(T) + 1 <= rec.lo else "contradiction"
        report.add(f"s_3({G.descriptor}) lower side", rec.lo, len(T) + 1, status,
                   "construction of length %d has no zero-sum subsequence of length 3: %s" % (len(T), free))

    for entry in cache.entries():
        G = Group.parse(entry["group"])
        rec = reg.davenport(G) if entry["kind"] == "D" else reg.predict(G, entry["L"])
        if rec.status == "computed" or (entry["kind"], entry["group"], entry["L"]) in seen:
            continue
        name = f"cache {entry['kind']}({entry['group']}" + (f", L={entry['L']})" if entry["L"] else ")")
        _compare(report, name, rec, entry["value"], "cached solver value")
    return report
