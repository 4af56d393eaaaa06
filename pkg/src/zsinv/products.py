"""Exact product-set computation over sub-multisets, with certificates.

The table maps a sub-multiset key (multiplicity vector) to the set of group
elements achievable as the product of some ordering of that sub-multiset,
stored as a bitmask.  The last-element recursion

    products(T) = union over g in supp(T) of products(T - g) * g

covers every permutation without factorial blowup; the signed variant also
multiplies by g^-1.  Layers are computed lazily by sub-multiset size so that
existence queries can stop at the first hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .groups import FiniteGroup
from .sequences import OrderedTuple, Sequence

STATE_LIMIT = 1 << 26
LENGTH_LIMIT = 40


class EngineLimitError(RuntimeError):
    """The engine is exact, not approximate; oversize inputs are refused."""


def rmul_mask(mask: int, bits: tuple[int, ...]) -> int:
    """Apply right multiplication by a fixed element to a set-of-elements
    bitmask, where bits[e] is the bit of e*g."""
    out = 0
    while mask:
        lsb = mask & -mask
        out |= bits[lsb.bit_length() - 1]
        mask ^= lsb
    return out


def mask_to_set(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        lsb = mask & -mask
        out.add(lsb.bit_length() - 1)
        mask ^= lsb
    return frozenset(out)


@dataclass(frozen=True)
class Certificate:
    """An explicitly ordered (and possibly signed) tuple whose product equals
    ``target``; re-verifiable in O(length) table lookups."""

    group: FiniteGroup
    ordered: OrderedTuple
    target: int
    kind: str  # "product" | "signed-product"

    def verify(self) -> bool:
        if self.kind not in ("product", "signed-product"):
            return False
        if self.kind == "product" and self.ordered.signs is not None:
            return False
        if self.kind == "signed-product" and self.ordered.signs is None:
            return False
        return self.ordered.product(self.group) == self.target

    @property
    def length(self) -> int:
        return len(self.ordered)

    def multiset(self) -> Sequence:
        return self.ordered.as_sequence(self.group)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "length": self.length,
            "elements": [self.group.label(g) for g in self.ordered.elements],
            "target": self.group.label(self.target),
        }
        if self.ordered.signs is not None:
            d["signs"] = ["+" if s == 1 else "-" for s in self.ordered.signs]
        return d


class ProductTable:
    """Memoized product sets for all sub-multisets of a base sequence."""

    def __init__(self, seq: Sequence, signed: bool = False):
        group = seq.group
        if seq.length > LENGTH_LIMIT:
            raise EngineLimitError(f"|S| = {seq.length} exceeds the limit {LENGTH_LIMIT}")
        states = math.prod(c + 1 for c in seq.counts)
        if states > STATE_LIMIT:
            raise EngineLimitError(
                f"state-count estimate {states} exceeds the limit {STATE_LIMIT}"
            )
        self.seq = seq
        self.group = group
        self.signed = signed
        self.support = seq.support
        self._rbits = group.rmul_bits
        self._inv = group.inv
        empty = (0,) * group.order
        self._layers: list[dict[tuple[int, ...], int]] = [{empty: 1 << group.identity}]
        self._unions: list[int] = [1 << group.identity]

    def _extend(self) -> None:
        cur = self._layers[-1]
        base = self.seq.counts
        rbits = self._rbits
        inv = self._inv
        signed = self.signed
        nxt: dict[tuple[int, ...], int] = {}
        for key, mask in cur.items():
            for g in self.support:
                if key[g] < base[g]:
                    child = key[:g] + (key[g] + 1,) + key[g + 1 :]
                    contrib = rmul_mask(mask, rbits[g])
                    if signed:
                        contrib |= rmul_mask(mask, rbits[inv[g]])
                    prev = nxt.get(child)
                    nxt[child] = contrib if prev is None else prev | contrib
        self._layers.append(nxt)
        acc = 0
        for m in nxt.values():
            acc |= m
        self._unions.append(acc)

    def ensure(self, k: int) -> None:
        k = min(k, self.seq.length)
        while len(self._layers) <= k:
            self._extend()

    def layer(self, k: int) -> dict[tuple[int, ...], int]:
        self.ensure(k)
        return self._layers[k]

    def union_mask(self, k: int) -> int:
        """All products achievable by sub-multisets of size exactly k."""
        if k > self.seq.length:
            return 0
        self.ensure(k)
        return self._unions[k]

    def find_state(self, k: int, target: int) -> tuple[int, ...] | None:
        """Smallest state key at layer k whose product set contains target."""
        bit = 1 << target
        hits = [key for key, m in self.layer(k).items() if m & bit]
        return min(hits) if hits else None

    def backtrack(self, key: tuple[int, ...], target: int) -> Certificate:
        """Walk memo back-pointers: repeatedly pick the lowest-index element g
        (sign +1 preferred) with target * g_eff^-1 achievable by the state
        minus g."""
        group = self.group
        mul = group.mul
        inv = group.inv
        elems: list[int] = []
        signs: list[int] = []
        cur = key
        tgt = target
        k = sum(cur)
        for layer_idx in range(k, 0, -1):
            prev_layer = self._layers[layer_idx - 1]
            found = None
            for g in self.support:
                if cur[g] == 0:
                    continue
                pkey = cur[:g] + (cur[g] - 1,) + cur[g + 1 :]
                pmask = prev_layer.get(pkey)
                if pmask is None:
                    continue
                for sign in ((1, -1) if self.signed else (1,)):
                    g_eff = g if sign == 1 else inv[g]
                    prev_t = mul[tgt][inv[g_eff]]
                    if pmask >> prev_t & 1:
                        found = (g, sign, pkey, prev_t)
                        break
                if found:
                    break
            if found is None:  # cannot happen when target bit was set
                raise AssertionError("backtrack lost the target; engine bug")
            g, sign, cur, tgt = found
            elems.append(g)
            signs.append(sign)
        if tgt != group.identity:
            raise AssertionError("backtrack did not reach the empty state; engine bug")
        elems.reverse()
        signs.reverse()
        ordered = OrderedTuple(tuple(elems), tuple(signs) if self.signed else None)
        kind = "signed-product" if self.signed else "product"
        cert = Certificate(group, ordered, target, kind)
        if not cert.verify():
            raise AssertionError("reconstructed certificate failed verification")
        return cert


# ---------------------------------------------------------------------------
# Product-set queries


def full_products(seq: Sequence) -> frozenset[int]:
    """All products of the full multiset over all orderings."""
    if not seq:
        raise ValueError("products of the empty sequence are not defined")
    t = ProductTable(seq)
    return mask_to_set(t.union_mask(seq.length))


def full_signed_products(seq: Sequence) -> frozenset[int]:
    if not seq:
        raise ValueError("products of the empty sequence are not defined")
    t = ProductTable(seq, signed=True)
    return mask_to_set(t.union_mask(seq.length))


def subset_products(seq: Sequence, signed: bool = False) -> dict[int, frozenset[int]]:
    """Map from sub-multiset size k >= 1 to the product set over size-k
    sub-multisets."""
    t = ProductTable(seq, signed=signed)
    return {k: mask_to_set(t.union_mask(k)) for k in range(1, seq.length + 1)}


def _union_over(seq: Sequence, lengths: Iterable[int], signed: bool = False) -> frozenset[int]:
    t = ProductTable(seq, signed=signed)
    acc = 0
    for k in lengths:
        if 1 <= k <= seq.length:
            acc |= t.union_mask(k)
    return mask_to_set(acc)


def sigma(seq: Sequence) -> frozenset[int]:
    return _union_over(seq, range(1, seq.length + 1))


def sigma_pm(seq: Sequence) -> frozenset[int]:
    return _union_over(seq, range(1, seq.length + 1), signed=True)


def sigma_k(seq: Sequence, k: int) -> frozenset[int]:
    return _union_over(seq, [k])


def sigma_le(seq: Sequence, k: int) -> frozenset[int]:
    return _union_over(seq, range(1, k + 1))


def sigma_even(seq: Sequence) -> frozenset[int]:
    return _union_over(seq, range(2, seq.length + 1, 2))


def sigma_odd(seq: Sequence) -> frozenset[int]:
    return _union_over(seq, range(1, seq.length + 1, 2))


def sigma_dn(seq: Sequence, d: int) -> frozenset[int]:
    if d < 1:
        raise ValueError("d must be >= 1")
    return _union_over(seq, range(d, seq.length + 1, d))


def find_subsequence(
    seq: Sequence,
    *,
    target: int | None = None,
    length: int | None = None,
    max_length: int | None = None,
    modulus: int | None = None,
    parity: str | None = None,
    signed: bool = False,
) -> Certificate | None:
    """Find a nonempty sub-multiset and an ordering (with signs when signed)
    whose product equals ``target`` (identity by default) under the length
    constraints.  Returns None only when no such subsequence exists; the
    engine is exact.
    """
    group = seq.group
    if target is None:
        target = group.identity
    if parity not in (None, "odd", "even"):
        raise ValueError("parity must be 'odd', 'even' or None")
    if modulus is not None and modulus < 1:
        raise ValueError("modulus must be >= 1")

    def ok(k: int) -> bool:
        if length is not None and k != length:
            return False
        if modulus is not None and k % modulus != 0:
            return False
        if parity == "odd" and k % 2 == 0:
            return False
        if parity == "even" and k % 2 == 1:
            return False
        return True

    upper = seq.length if length is None else min(length, seq.length)
    if max_length is not None:
        upper = min(upper, max_length)
    if upper < 1:
        return None
    table = ProductTable(seq, signed=signed)
    bit = 1 << target
    for k in range(1, upper + 1):
        if not ok(k):
            continue
        if table.union_mask(k) & bit:
            key = table.find_state(k, target)
            return table.backtrack(key, target)
    return None


# -- freeness predicates ----------------------------------------------------


def is_product_free(seq: Sequence) -> bool:
    """No nonempty sub-multiset has a product-one ordering."""
    return find_subsequence(seq) is None


def is_k_product_free(seq: Sequence, k: int) -> bool:
    return find_subsequence(seq, length=k) is None


def is_dn_free(seq: Sequence, d: int) -> bool:
    return find_subsequence(seq, modulus=d) is None


def is_pm_product_free(seq: Sequence) -> bool:
    return find_subsequence(seq, signed=True) is None


def is_minimal_product_sequence(seq: Sequence, signed: bool = False) -> bool:
    """Nonempty, the full multiset multiplies to the identity under some
    ordering (signs allowed when signed), and every proper nonempty
    sub-multiset is free."""
    n = seq.length
    if n == 0:
        raise ValueError("the empty sequence is not a minimal product sequence")
    table = ProductTable(seq, signed=signed)
    bit = 1 << seq.group.identity
    for k in range(1, n):
        if table.union_mask(k) & bit:
            return False
    return bool(table.union_mask(n) & bit)


# -- independent abelian cross-check ----------------------------------------


def abelian_subset_products(seq: Sequence) -> dict[int, frozenset[int]]:
    """Subset-sum style engine for abelian groups: per-length reachable sets
    built one element at a time.  Used as an internal cross-check of the
    generic engine on abelian inputs."""
    group = seq.group
    if not group.is_abelian:
        raise ValueError("abelian engine requires an abelian group")
    reach: list[set[int]] = [set() for _ in range(seq.length + 1)]
    reach[0].add(group.identity)
    for g in seq.elements_list():
        for k in range(seq.length - 1, -1, -1):
            if reach[k]:
                reach[k + 1].update(group.op(v, g) for v in reach[k])
    return {k: frozenset(reach[k]) for k in range(1, seq.length + 1)}


def product_set(group: FiniteGroup, a: Iterable[int], b: Iterable[int]) -> frozenset[int]:
    """The set {x*y : x in a, y in b}."""
    bs = list(b)
    return frozenset(group.op(x, y) for x in a for y in bs)
