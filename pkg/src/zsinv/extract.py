"""Constructive extraction procedures.

Everything here builds explicit certificates: a signed pigeonhole subset over
the integers mod n, the dihedral pairing tricks that turn reflection pairs
into rotations, the rearrangement that removes inverses from a signed product
once a reflection is present, greedy block decomposition, and a
Cauchy-Davenport checker.  Every output re-verifies by direct multiplication,
independent of the construction path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence as Seq

from .groups import FiniteGroup, is_prime
from .products import Certificate, find_subsequence
from .sequences import OrderedTuple, Sequence


class ExtractionPreconditionError(ValueError):
    """The stated hypothesis of the extraction is not met."""


class NotApplicableError(ValueError):
    pass


@dataclass(frozen=True)
class SignedSubset:
    """A nonempty subset of input positions (0-based) with signs whose signed
    sum vanishes mod ``modulus``."""

    indices: tuple[int, ...]
    signs: tuple[int, ...]
    modulus: int

    def check(self, ys: Seq[int]) -> bool:
        total = sum(s * ys[i] for i, s in zip(self.indices, self.signs))
        return len(self.indices) > 0 and total % self.modulus == 0

    def to_dict(self) -> dict:
        return {
            "positions": [i + 1 for i in self.indices],  # 1-based for display
            "signs": ["+" if s == 1 else "-" for s in self.signs],
            "modulus": self.modulus,
        }


def signed_zero_mod(ys: Seq[int], n: int) -> SignedSubset:
    """Nonempty J and signs with sum_{j in J} eps_j * ys[j] = 0 mod n.

    Requires 2^len(ys) > n; then two subsets share a sum mod n and the signed
    symmetric difference vanishes.  Subsets are visited in increasing popcount
    and the first collision wins, so the returned J is small in practice
    (signs are +1 on the later subset, -1 on the earlier one).
    """
    if n < 1:
        raise ValueError("modulus must be >= 1")
    s = len(ys)
    if 2**s <= n:
        raise ExtractionPreconditionError(
            f"need 2^len(ys) > n, got len(ys)={s} and n={n}"
        )
    seen: dict[int, tuple[int, ...]] = {0: ()}
    for popcount in range(1, s + 1):
        for comb in itertools.combinations(range(s), popcount):
            total = sum(ys[i] for i in comb) % n
            earlier = seen.get(total)
            if earlier is not None:
                later_only = set(comb) - set(earlier)
                earlier_only = set(earlier) - set(comb)
                indices = tuple(sorted(later_only | earlier_only))
                signs = tuple(1 if i in later_only else -1 for i in indices)
                return SignedSubset(indices, signs, n)
            seen[total] = comb
    raise AssertionError("pigeonhole failed; unreachable when 2^s > n")


def _dihedral_n(group: FiniteGroup) -> int:
    if group.family != "dihedral":
        raise ValueError("a dihedral group is required")
    return group.family_params[0]


def _exponents(group: FiniteGroup, seq: Sequence, coset: int) -> list[int]:
    n = _dihedral_n(group)
    out = []
    for g, v in enumerate(seq.counts):
        if v:
            if group.coset_class(g) != coset:
                raise ValueError("sequence contains elements outside the expected coset")
            out.extend([g % n] * v)
    return out


def _log2_floor(n: int) -> int:
    return n.bit_length() - 1


def dihedral_even_extract(t1: Sequence) -> Certificate:
    """Product-one certificate of even length <= 2*floor(log2 n) + 2 from a
    reflection sequence with floor(|T1|/2) > floor(log2 n).

    Consecutive reflections are paired; each pair multiplies to a rotation
    whose exponent is the pair difference, and a signed zero subset of the
    differences picks the pairs (the in-pair order realizes the sign).
    """
    group = t1.group
    n = _dihedral_n(group)
    alphas = sorted(_exponents(group, t1, 1))
    k = len(alphas)
    bound = _log2_floor(n)
    if k // 2 <= bound:
        raise ExtractionPreconditionError(
            f"need floor(|T1|/2) > floor(log2 {n}) = {bound}, got |T1| = {k}"
        )
    pairs = [(alphas[2 * i], alphas[2 * i + 1]) for i in range(bound + 1)]
    diffs = [a - b for a, b in pairs]
    chosen = signed_zero_mod(diffs, n)
    elems: list[int] = []
    for i, sign in zip(chosen.indices, chosen.signs):
        a, b = pairs[i]
        # (x y^a)(x y^b) = y^(b-a); reverse the pair to realize +(a-b)
        first, second = (a, b) if sign == -1 else (b, a)
        elems.append(n + first)
        elems.append(n + second)
    cert = Certificate(group, OrderedTuple(tuple(elems)), group.identity, "product")
    if not cert.verify():
        raise AssertionError("even-extract certificate failed verification")
    return cert


def dihedral_equal_pairs(t2: Sequence) -> tuple[Sequence, Sequence]:
    """Two disjoint subsequences of a rotation sequence with equal lengths in
    [1, floor(log2 n) + 1] and equal products."""
    group = t2.group
    n = _dihedral_n(group)
    betas = sorted(_exponents(group, t2, 0))
    k = len(betas)
    bound = _log2_floor(n)
    if k // 2 <= bound:
        raise ExtractionPreconditionError(
            f"need floor(|T2|/2) > floor(log2 {n}) = {bound}, got |T2| = {k}"
        )
    pairs = [(betas[2 * i], betas[2 * i + 1]) for i in range(bound + 1)]
    diffs = [a - b for a, b in pairs]
    chosen = signed_zero_mod(diffs, n)
    w1: list[int] = []
    w2: list[int] = []
    for i, sign in zip(chosen.indices, chosen.signs):
        a, b = pairs[i]
        if sign == 1:
            w1.append(a)
            w2.append(b)
        else:
            w1.append(b)
            w2.append(a)
    s1 = Sequence.from_elements(group, w1)
    s2 = Sequence.from_elements(group, w2)
    if sum(w1) % n != sum(w2) % n:
        raise AssertionError("equal-pairs products differ; construction bug")
    return s1, s2


def signed_to_product(cert: Certificate) -> Certificate:
    """Rearrange a signed product-one certificate over D_2n containing at
    least one reflection into an unsigned one over the same multiset.

    Reflections are involutions so their signs are normalized to +1; each
    inverted rotation is then marched toward the nearest reflection (rotations
    commute along the way) and crossing the reflection flips it upright.
    """
    group = cert.group
    n = _dihedral_n(group)
    if cert.kind != "signed-product":
        raise ValueError("a signed certificate is required")
    if cert.target != group.identity:
        raise ValueError("only product-one certificates are rearranged")
    signs = cert.ordered.signs or tuple([1] * len(cert.ordered))
    work = [
        [g, 1 if group.coset_class(g) == 1 else s]
        for g, s in zip(cert.ordered.elements, signs)
    ]
    if not any(group.coset_class(g) == 1 for g, _ in work):
        raise NotApplicableError("no reflection present; rearrangement needs |S_N| > 0")

    def swap_left(i: int) -> None:
        """Move the inverted rotation at i one slot left, preserving product."""
        g, s = work[i]
        h, hs = work[i - 1]
        if group.coset_class(h) == 1:
            # z * y^-b  ==  y^b * z
            work[i - 1] = [g, 1]
            work[i] = [h, hs]
        else:
            work[i - 1], work[i] = [g, s], [h, hs]

    def swap_right(i: int) -> None:
        g, s = work[i]
        h, hs = work[i + 1]
        if group.coset_class(h) == 1:
            # y^-b * z  ==  z * y^b
            work[i + 1] = [g, 1]
            work[i] = [h, hs]
        else:
            work[i + 1], work[i] = [g, s], [h, hs]

    reflections = [i for i, (g, _) in enumerate(work) if group.coset_class(g) == 1]
    while True:
        neg = [i for i, (_, s) in enumerate(work) if s == -1]
        if not neg:
            break
        i = neg[0]
        lefts = [j for j in reflections if j < i]
        rights = [j for j in reflections if j > i]
        if lefts and (not rights or i - lefts[-1] <= rights[0] - i):
            while work[i][1] == -1:
                swap_left(i)
                i -= 1
        else:
            while work[i][1] == -1:
                swap_right(i)
                i += 1
        reflections = [j for j, (g, _) in enumerate(work) if group.coset_class(g) == 1]

    out = Certificate(
        group,
        OrderedTuple(tuple(g for g, _ in work)),
        group.identity,
        "product",
    )
    if not out.verify():
        raise AssertionError("rearranged certificate failed verification")
    if out.multiset() != cert.multiset():
        raise AssertionError("rearrangement changed the underlying multiset")
    return out


def dpm_extract(seq: Sequence) -> Certificate:
    """Nonempty signed product-one certificate from any dihedral sequence of
    length >= 2*floor(log2 n) + 2.

    Reflection pair differences and rotation exponents feed one signed zero
    subset; chosen reflection pairs are ordered to realize their sign and
    chosen rotations carry the sign directly.
    """
    group = seq.group
    n = _dihedral_n(group)
    bound = _log2_floor(n)
    if seq.length < 2 * bound + 2:
        raise ExtractionPreconditionError(
            f"need |S| >= 2*floor(log2 {n}) + 2 = {2 * bound + 2}, got {seq.length}"
        )
    if seq.counts[group.identity]:
        cert = Certificate(
            group, OrderedTuple((group.identity,), (1,)), group.identity, "signed-product"
        )
        return cert
    parts = seq.coset_split()
    alphas = sorted(_exponents(group, parts[1], 1))
    betas = sorted(_exponents(group, parts[0], 0))
    pairs = [(alphas[2 * i], alphas[2 * i + 1]) for i in range(len(alphas) // 2)]
    values = [a - b for a, b in pairs] + betas
    values = values[: bound + 1]
    chosen = signed_zero_mod(values, n)
    num_pair_values = min(len(pairs), bound + 1)
    elems: list[int] = []
    signs: list[int] = []
    for i, sign in zip(chosen.indices, chosen.signs):
        if i < num_pair_values:
            a, b = pairs[i]
            first, second = (a, b) if sign == -1 else (b, a)
            elems.extend([n + first, n + second])
            signs.extend([1, 1])
        else:
            beta = values[i]
            elems.append(beta)
            signs.append(sign)
    cert = Certificate(
        group, OrderedTuple(tuple(elems), tuple(signs)), group.identity, "signed-product"
    )
    if not cert.verify():
        raise AssertionError("dpm certificate failed verification")
    return cert


def odd_pm_extract(seq: Sequence) -> Certificate:
    """Signed product-one certificate of odd length from a cyclic sequence
    with n odd and |S| >= n.  Existence is a theorem; the finder is the exact
    signed engine restricted to odd lengths."""
    group = seq.group
    if group.family != "cyclic":
        raise ValueError("a cyclic group is required")
    n = group.family_params[0]
    if n % 2 == 0:
        raise ExtractionPreconditionError(f"n must be odd, got {n}")
    if seq.length < n:
        raise ExtractionPreconditionError(f"need |S| >= {n}, got {seq.length}")
    cert = find_subsequence(seq, signed=True, parity="odd")
    if cert is None:
        raise AssertionError("odd signed extraction is guaranteed; engine bug")
    return cert


@dataclass
class BlockDecomposition:
    """Product-one blocks (with certificates) peeled off a sequence, plus the
    remainder below the guarantee threshold."""

    blocks: list[Certificate]
    remainder: Sequence

    def recombined(self) -> Sequence:
        acc = self.remainder
        for cert in self.blocks:
            acc = acc.concat(cert.multiset())
        return acc


def greedy_decompose(
    seq: Sequence,
    block_len: int,
    guarantee_threshold: int,
    block_finder: Callable[[Sequence], Certificate | None] | None = None,
) -> BlockDecomposition:
    """Repeatedly extract product-one blocks of exact length ``block_len``
    while the current length is at least ``guarantee_threshold``.

    The threshold must be one above which the finder provably succeeds;
    failure there is an engine bug and raises AssertionError rather than
    returning a partial answer.
    """
    if block_finder is None:
        block_finder = lambda s: find_subsequence(s, length=block_len)
    current = seq
    blocks: list[Certificate] = []
    while current.length >= guarantee_threshold:
        cert = block_finder(current)
        if cert is None:
            raise AssertionError(
                f"block extraction failed at length {current.length} >= "
                f"{guarantee_threshold}; this contradicts the guarantee"
            )
        if cert.length != block_len:
            raise AssertionError("block finder returned a block of the wrong length")
        block = cert.multiset()
        if not block.divides(current):
            raise AssertionError("block finder used unavailable multiplicities")
        blocks.append(cert)
        current = current.subtract(block)
    return BlockDecomposition(blocks, current)


def block_zero_sum_select(lengths: Seq[int], d: int) -> list[int]:
    """Nonempty subset of positions (0-based) whose lengths sum to 0 mod d,
    from exactly d lengths, by prefix-sum pigeonhole."""
    if len(lengths) != d:
        raise ValueError(f"exactly {d} lengths required, got {len(lengths)}")
    if any(v < 1 for v in lengths):
        raise ValueError("lengths must be positive")
    first_at = {0: 0}
    prefix = 0
    for i, v in enumerate(lengths, start=1):
        prefix = (prefix + v) % d
        j = first_at.get(prefix)
        if j is not None:
            return list(range(j, i))
        first_at[prefix] = i
    raise AssertionError("prefix pigeonhole failed; unreachable")


@dataclass(frozen=True)
class CauchyDavenportReport:
    bound: int
    sumset: frozenset[int]
    ok: bool


def cauchy_davenport_check(sets: Seq[Seq[int]], q: int) -> CauchyDavenportReport:
    """Compute the sumset of nonempty subsets of Z_q (q prime) and compare it
    against the bound min{q, sum |A_i| - k + 1}."""
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if not sets or any(len(a) == 0 for a in sets):
        raise ValueError("all subsets must be nonempty")
    norm = [frozenset(x % q for x in a) for a in sets]
    acc = norm[0]
    for a in norm[1:]:
        acc = frozenset((x + y) % q for x in acc for y in a)
    bound = min(q, sum(len(a) for a in norm) - len(norm) + 1)
    return CauchyDavenportReport(bound, acc, len(acc) >= bound)
