"""Exhaustive invariant computation with extremal witnesses.

The smallest length forcing a constrained product-one subsequence is found by
expanding only constraint-free multisets, level by level: freeness is
downward-closed, so a free multiset of length L+1 always sits above a free one
of length L, and the first empty level is the invariant.  Orbit pruning keeps
one representative per automorphism orbit; it changes node counts, never
values.  Results are independent of the thread count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .groups import (
    AutomorphismCapError,
    FiniteGroup,
    automorphisms,
)
from .products import find_subsequence, rmul_mask
from .sequences import Sequence

_SHIFT = 6  # packed search keys: 6 bits of multiplicity per element


@dataclass(frozen=True)
class FreenessRule:
    """Which subsequence lengths a product-one hit is forbidden at."""

    kind: str  # "dn" | "exact" | "leq" | "any"
    param: int = 0
    signed: bool = False

    def allows(self, k: int) -> bool:
        if k < 1:
            return False
        if self.kind == "dn":
            return k % self.param == 0
        if self.kind == "exact":
            return k == self.param
        if self.kind == "leq":
            return k <= self.param
        if self.kind == "any":
            return True
        raise ValueError(f"unknown rule kind {self.kind!r}")

    def query_kwargs(self) -> dict:
        out: dict = {"signed": self.signed}
        if self.kind == "dn":
            out["modulus"] = self.param
        elif self.kind == "exact":
            out["length"] = self.param
        elif self.kind == "leq":
            out["max_length"] = self.param
        return out

    def describe(self) -> str:
        base = {"dn": f"dN-free(d={self.param})", "exact": f"exact-free(k={self.param})",
                "leq": f"leq-free(k={self.param})", "any": "product-free"}[self.kind]
        return ("pm-" + base) if self.signed else base


def dn_rule(d: int) -> FreenessRule:
    return FreenessRule("dn", d)


def product_free_rule() -> FreenessRule:
    return FreenessRule("any")


def pm_free_rule() -> FreenessRule:
    return FreenessRule("any", signed=True)


def exact_rule(k: int) -> FreenessRule:
    return FreenessRule("exact", k)


def leq_rule(k: int) -> FreenessRule:
    return FreenessRule("leq", k)


class _Engine:
    """Incremental product tables over packed multiplicity keys.

    A node's table holds the product mask of every sub-multiset; checking a
    child (node plus one element) only computes the states that contain the
    new copy, reading everything else from the parent table.
    """

    def __init__(self, group: FiniteGroup, signed: bool):
        self.order = group.order
        self.identity = group.identity
        self.inv = group.inv
        self.rbits = group.rmul_bits
        self.signed = signed

    def build(self, counts: tuple[int, ...]):
        """All sub-multiset states of ``counts``: returns (ordered, states)
        where ordered lists (length, key) ascending by length."""
        id_mask = 1 << self.identity
        states: dict[int, int] = {0: id_mask}
        ordered: list[tuple[int, int]] = [(0, 0)]
        frontier: dict[int, int] = {0: id_mask}
        support = [g for g in range(self.order) if counts[g]]
        rbits = self.rbits
        inv = self.inv
        signed = self.signed
        length = 0
        while frontier:
            length += 1
            nxt: dict[int, int] = {}
            get = nxt.get
            for key, mask in frontier.items():
                for g in support:
                    sh = 6 * g
                    if (key >> sh) & 63 < counts[g]:
                        ck = key + (1 << sh)
                        contrib = rmul_mask(mask, rbits[g])
                        if signed:
                            contrib |= rmul_mask(mask, rbits[inv[g]])
                        prev = get(ck)
                        nxt[ck] = contrib if prev is None else prev | contrib
            states.update(nxt)
            ordered.extend((length, k) for k in nxt)
            frontier = nxt
        return ordered, states

    def child_violates(
        self,
        counts: tuple[int, ...],
        ordered: list[tuple[int, int]],
        states: dict[int, int],
        g: int,
        allowed: list[bool],
    ) -> bool:
        """True if counts + g has a product-one sub-multiset at an allowed
        length.  Only states containing the new copy of g are computed."""
        pv = counts[g]
        sh_g = 6 * g
        pv_key = pv << sh_g
        id_mask = 1 << self.identity
        rbits = self.rbits
        inv = self.inv
        signed = self.signed
        rb_g = rbits[g]
        rb_gi = rbits[inv[g]] if signed else None
        new_len_base = pv + 1
        new_tbl: dict[int, int] = {}
        for blen, base in ordered:
            if (base >> sh_g) & 63:
                continue
            src = states[base + pv_key]
            m = rmul_mask(src, rb_g)
            if signed:
                m |= rmul_mask(src, rb_gi)
            bb = base
            h = 0
            while bb:
                c = bb & 63
                if c:
                    prev = new_tbl[base - (1 << (6 * h))]
                    m |= rmul_mask(prev, rbits[h])
                    if signed:
                        m |= rmul_mask(prev, rbits[inv[h]])
                bb >>= 6
                h += 1
            if m & id_mask and allowed[blen + new_len_base]:
                return True
            new_tbl[base] = m
        return False


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    free_found: int = 0
    orbits_merged: int = 0
    levels: int = 0
    orbit_maps: int = 1
    pruned: bool = False
    shortcut: str | None = None
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "nodes_expanded": self.nodes_expanded,
            "free_found": self.free_found,
            "orbits_merged": self.orbits_merged,
            "levels": self.levels,
            "orbit_maps": self.orbit_maps,
            "pruned": self.pruned,
        }
        if self.shortcut:
            d["shortcut"] = self.shortcut
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


@dataclass
class InvariantResult:
    """Computed invariant with its extremal witness.

    ``value is None`` means free multisets still exist at the cap: either the
    cap is too small or the invariant is infinite; never a silent wrong
    answer.  The witness is always a free multiset (length value-1 when
    determined, length cap otherwise), re-checked by the reference engine.
    """

    kind: str
    group: FiniteGroup
    params: dict
    value: int | None
    witness: Sequence | None
    cap: int
    stats: SearchStats

    @property
    def determined(self) -> bool:
        return self.value is not None

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "invariant": self.kind,
            "group": self.group.describe_short(),
            "params": dict(sorted(self.params.items())),
            "value": self.value,
            "determined": self.determined,
            "witness": self.witness.to_text() if self.witness is not None else None,
            "witness_length": self.witness.length if self.witness is not None else None,
            "cap": self.cap,
            "stats": self.stats.to_dict(include_timing=include_timing),
        }


def _orbit_images(group: FiniteGroup, prune_orbits: bool) -> list[tuple[int, ...]]:
    if prune_orbits:
        try:
            return [m.image for m in automorphisms(group)]
        except AutomorphismCapError:
            pass
    return [tuple(group.elements())]


def _canon(counts: tuple[int, ...], images: list[tuple[int, ...]]) -> tuple[int, ...]:
    if len(images) == 1:
        return counts
    order = len(counts)
    best = None
    for img in images:
        t = [0] * order
        for g, v in enumerate(counts):
            if v:
                t[img[g]] = v
        t = tuple(t)
        if best is None or t < best:
            best = t
    return best


def _expand_chunk(engine: _Engine, parents: list[tuple[int, ...]], allowed: list[bool]):
    order = engine.order
    found: set[tuple[int, ...]] = set()
    seen: set[tuple[int, ...]] = set()
    for counts in parents:
        ordered, states = engine.build(counts)
        for g in range(order):
            child = counts[:g] + (counts[g] + 1,) + counts[g + 1 :]
            if child in seen:
                continue
            seen.add(child)
            if not engine.child_violates(counts, ordered, states, g, allowed):
                found.add(child)
    return found


@dataclass
class _SearchOutcome:
    value: int | None
    witness_counts: tuple[int, ...] | None
    frontier: list[tuple[int, ...]]
    stats: SearchStats


def _run_levels(
    group: FiniteGroup,
    rule: FreenessRule,
    cap: int,
    *,
    prune_orbits: bool = True,
    threads: int = 1,
    stop_level: int | None = None,
) -> _SearchOutcome:
    t0 = time.monotonic()
    images = _orbit_images(group, prune_orbits)
    stats = SearchStats(orbit_maps=len(images), pruned=len(images) > 1)
    engine = _Engine(group, rule.signed)
    allowed = [rule.allows(k) for k in range(cap + 2)]
    frontier: list[tuple[int, ...]] = [(0,) * group.order]
    threads = max(1, threads)
    for level in range(1, cap + 1):
        stats.levels = level
        stats.nodes_expanded += len(frontier)
        if threads == 1 or len(frontier) < 4:
            raw = _expand_chunk(engine, frontier, allowed)
        else:
            chunks = [frontier[i::threads] for i in range(threads)]
            raw = set()
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for part in pool.map(
                    lambda ch: _expand_chunk(engine, ch, allowed), chunks
                ):
                    raw |= part
        stats.free_found += len(raw)
        canon = {_canon(c, images) for c in raw}
        stats.orbits_merged += len(raw) - len(canon)
        if not canon:
            stats.wall_time = time.monotonic() - t0
            return _SearchOutcome(level, min(frontier), [], stats)
        frontier = sorted(canon)
        if stop_level is not None and level == stop_level:
            stats.wall_time = time.monotonic() - t0
            return _SearchOutcome(None, min(frontier), frontier, stats)
    stats.wall_time = time.monotonic() - t0
    return _SearchOutcome(None, min(frontier), frontier, stats)


def _verify_witness(witness: Sequence, rule: FreenessRule) -> None:
    # independent re-check through the reference engine
    if find_subsequence(witness, **rule.query_kwargs()) is not None:
        raise AssertionError("search produced a witness that is not free; engine bug")


def _finish(
    kind: str,
    group: FiniteGroup,
    params: dict,
    rule: FreenessRule,
    outcome: _SearchOutcome,
    cap: int,
) -> InvariantResult:
    witness = (
        Sequence(group, outcome.witness_counts)
        if outcome.witness_counts is not None
        else None
    )
    if witness is not None and witness.length > 0:
        _verify_witness(witness, rule)
    return InvariantResult(kind, group, params, outcome.value, witness, cap, outcome.stats)


# ---------------------------------------------------------------------------
# Closed-form predictions (used for default caps and the verification suites)


def predicted_sdn(group: FiniteGroup, d: int) -> int | None:
    if group.family in ("cyclic", "abelian-product"):
        inv = group.canonical_invariants
        if len(inv) == 0:
            return d
        if len(inv) == 1:
            n = inv[0]
            return math.lcm(n, d) + math.gcd(n, d) - 1
        if len(inv) == 2:
            m, n = inv
            return math.lcm(n, d) + math.gcd(n, math.lcm(m, d)) + math.gcd(m, d) - 2
        return None
    if group.family == "dihedral":
        (n,) = group.family_params
        if d % 2 == 1 and d % n == 0:
            return 2 * d + (n.bit_length() - 1)
        if math.gcd(n, d) == 1:
            return n * d + 1
        return None
    if group.family == "metacyclic":
        p, q, _ = group.family_params
        if d % p == 0:
            return math.lcm(d, q) + p - 2 + math.gcd(d, q)
        return None
    return None


def predicted_s_exact(group: FiniteGroup, k: int) -> int | float | None:
    if group.family == "cyclic":
        (n,) = group.family_params
        if k % n == 0 and k >= n:
            return k + n - 1
    if group.family == "dihedral":
        (n,) = group.family_params
        if k == 2 * n:
            return 3 * n
        if k % 2 == 1:
            return math.inf  # reflection powers are free at every length
    return None


def predicted_s_leq(group: FiniteGroup, k: int) -> int | None:
    if group.family == "cyclic" and k == group.family_params[0]:
        return k
    if group.family == "dihedral" and k == group.family_params[0]:
        return k + 1
    return None


def _default_cap(group: FiniteGroup, prediction: int | float | None) -> int:
    if prediction is not None and prediction != math.inf:
        return int(prediction) + 2
    return 2 * group.order


# ---------------------------------------------------------------------------
# Public invariant computations


def compute_sdn(
    group: FiniteGroup,
    d: int,
    *,
    cap: int | None = None,
    prune_orbits: bool = True,
    threads: int = 1,
    kind: str = "sdn",
) -> InvariantResult:
    """Smallest length forcing a product-one subsequence of length divisible
    by d; witness is a free multiset of length value-1."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rule = dn_rule(d)
    if cap is None:
        cap = _default_cap(group, predicted_sdn(group, d))
    outcome = _run_levels(group, rule, cap, prune_orbits=prune_orbits, threads=threads)
    return _finish(kind, group, {"d": d}, rule, outcome, cap)


def compute_davenport(
    group: FiniteGroup, *, cap: int | None = None, prune_orbits: bool = True, threads: int = 1
) -> InvariantResult:
    res = compute_sdn(
        group, 1, cap=cap, prune_orbits=prune_orbits, threads=threads, kind="davenport"
    )
    res.params = {}
    return res


def compute_dpm(
    group: FiniteGroup, *, cap: int | None = None, prune_orbits: bool = True, threads: int = 1
) -> InvariantResult:
    """Signed Davenport constant: plus-minus products allowed."""
    rule = pm_free_rule()
    if cap is None:
        cap = 2 * group.order
        if group.family == "dihedral":
            n = group.family_params[0]
            cap = min(cap, 2 * (n.bit_length() - 1) + 4)
    outcome = _run_levels(group, rule, cap, prune_orbits=prune_orbits, threads=threads)
    return _finish("dpm", group, {}, rule, outcome, cap)


def compute_s_exact(
    group: FiniteGroup,
    k: int,
    *,
    cap: int | None = None,
    prune_orbits: bool = True,
    threads: int = 1,
) -> InvariantResult:
    """Smallest length forcing a product-one subsequence of length exactly k;
    value None with a full-cap witness when free sequences exist at the cap
    (known-infinite dihedral odd-k instances shortcut to the reflection-power
    witness)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rule = exact_rule(k)
    prediction = predicted_s_exact(group, k)
    if cap is None:
        cap = _default_cap(group, prediction)
    if prediction == math.inf:
        counts = [0] * group.order
        x = group.element("x")
        counts[x] = cap
        witness = Sequence(group, counts)
        _verify_witness(witness, rule)
        stats = SearchStats(shortcut="infinite-witness", levels=0)
        return InvariantResult("s-exact", group, {"k": k}, None, witness, cap, stats)
    outcome = _run_levels(group, rule, cap, prune_orbits=prune_orbits, threads=threads)
    return _finish("s-exact", group, {"k": k}, rule, outcome, cap)


def compute_s_leq(
    group: FiniteGroup,
    k: int,
    *,
    cap: int | None = None,
    prune_orbits: bool = True,
    threads: int = 1,
) -> InvariantResult:
    """Smallest length forcing a nonempty product-one subsequence of length at
    most k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rule = leq_rule(k)
    if cap is None:
        cap = _default_cap(group, predicted_s_leq(group, k))
    outcome = _run_levels(group, rule, cap, prune_orbits=prune_orbits, threads=threads)
    return _finish("s-leq", group, {"k": k}, rule, outcome, cap)


# ---------------------------------------------------------------------------
# Classification of extremal free sequences


def classify_free(
    group: FiniteGroup,
    length: int,
    rule: FreenessRule | None = None,
    *,
    prune_orbits: bool = True,
    threads: int = 1,
    node_limit: int = 2_000_000,
) -> list[tuple[Sequence, int]]:
    """All free multisets of exactly the given length, as canonical orbit
    representatives with orbit sizes, sorted by counts vector."""
    if rule is None:
        rule = product_free_rule()
    if length < 0:
        raise ValueError("length must be nonnegative")
    est = math.comb(group.order + length - 1, length) if length else 1
    if est > node_limit:
        raise ValueError(
            f"classification at length {length} over order {group.order} needs "
            f"~{est} multisets; refusing (limit {node_limit})"
        )
    if length == 0:
        return [(Sequence.empty(group), 1)]
    outcome = _run_levels(
        group, rule, length, prune_orbits=prune_orbits, threads=threads, stop_level=length
    )
    images = _orbit_images(group, prune_orbits)
    out = []
    for counts in outcome.frontier:
        orbit = {_apply_image(counts, img) for img in images}
        out.append((Sequence(group, counts), len(orbit)))
    return out


def _apply_image(counts: tuple[int, ...], img: tuple[int, ...]) -> tuple[int, ...]:
    t = [0] * len(counts)
    for g, v in enumerate(counts):
        if v:
            t[img[g]] = v
    return tuple(t)


# ---------------------------------------------------------------------------
# Closed-form verification harness


@dataclass
class FormulaRow:
    family: str
    group_text: str
    params: dict
    predicted: int
    mode: str  # "computed-exhaustive" | "witness-only"
    computed: int | None
    witness_length: int | None
    witness_free: bool | None
    match: bool

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "group": self.group_text,
            "params": dict(sorted(self.params.items())),
            "predicted": self.predicted,
            "computed": self.computed,
            "witness_length": self.witness_length,
            "witness_free": self.witness_free,
            "match": self.match,
            "provenance": self.mode,
        }


def _formula_instance(family: str, inst: tuple) -> tuple[FiniteGroup, int, dict]:
    from .groups import make_abelian, make_cyclic, make_dihedral, make_metacyclic

    if family == "cyclic":
        n, d = inst
        return make_cyclic(n), d, {"n": n, "d": d}
    if family == "rank2":
        m, n, d = inst
        if n % m != 0:
            raise ValueError("rank2 instances need m | n")
        return make_abelian((m, n)), d, {"m": m, "n": n, "d": d}
    if family == "dihedral-odd":
        n, d = inst
        return make_dihedral(n), d, {"n": n, "d": d}
    if family == "dihedral-coprime":
        n, d = inst
        return make_dihedral(n), d, {"n": n, "d": d}
    if family == "metacyclic":
        p, q, s, k = inst
        return make_metacyclic(p, q, s), k * p, {"p": p, "q": q, "s": s, "k": k}
    raise ValueError(f"unknown formula family {family!r}")


def _formula_witness(family: str, group: FiniteGroup, inst: tuple) -> Sequence:
    from . import witnesses

    if family == "cyclic":
        n, d = inst
        counts = [0] * group.order
        if n == 1:
            counts[0] = d - 1
        else:
            counts[1] = math.lcm(n, d) - 1
            counts[0] = math.gcd(n, d) - 1
        return Sequence(group, counts)
    if family == "rank2":
        m, n, d = inst
        counts = [0] * group.order
        counts[1] += math.lcm(n, d) - 1  # generator of the C_n factor
        counts[n] += math.gcd(m, d) - 1  # generator of the C_m factor
        counts[0] += math.gcd(n, math.lcm(m, d)) - 1
        return Sequence(group, counts)
    if family == "dihedral-odd":
        n, d = inst
        return witnesses.dihedral_main_witness(n, d, group=group)
    if family == "dihedral-coprime":
        n, d = inst
        return witnesses.dihedral_coprime_witness(n, d, group=group)
    if family == "metacyclic":
        p, q, s, k = inst
        return witnesses.metacyclic_witness(p, q, s, k, group=group)
    raise ValueError(f"unknown formula family {family!r}")


def verify_formula(
    family: str,
    instances: list[tuple],
    *,
    mode: str = "auto",
    prune_orbits: bool = True,
    threads: int = 1,
    exhaustive_budget: int = 3_000_000,
) -> list[FormulaRow]:
    """Compare computed s_dN values (or witness lower bounds when exhaustive
    search is infeasible) against the closed forms, one row per instance."""
    if mode not in ("auto", "exhaustive", "witness"):
        raise ValueError("mode must be auto, exhaustive or witness")
    rows = []
    for inst in instances:
        group, d, params = _formula_instance(family, inst)
        predicted = predicted_sdn(group, d)
        if predicted is None:
            raise ValueError(f"no closed form for {family} instance {inst}")
        est = math.comb(group.order + predicted - 1, predicted - 1)
        run_mode = mode
        if mode == "auto":
            run_mode = "exhaustive" if est <= exhaustive_budget else "witness"
        if run_mode == "exhaustive":
            res = compute_sdn(
                group, d, cap=predicted + 2, prune_orbits=prune_orbits, threads=threads
            )
            rows.append(
                FormulaRow(
                    family,
                    group.describe_short(),
                    params,
                    predicted,
                    "computed-exhaustive",
                    res.value,
                    res.witness.length if res.witness else None,
                    True if res.witness is not None else None,
                    res.value == predicted,
                )
            )
        else:
            try:
                witness = _formula_witness(family, group, inst)
                free = find_subsequence(witness, modulus=d) is None
            except Exception:
                witness, free = None, False
            wlen = witness.length if witness is not None else None
            rows.append(
                FormulaRow(
                    family,
                    group.describe_short(),
                    params,
                    predicted,
                    "witness-only",
                    None,
                    wlen,
                    free,
                    bool(free and wlen == predicted - 1),
                )
            )
    return rows
