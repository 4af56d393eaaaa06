"""Explicit extremal sequences with machine-checked freeness.

Each constructor builds the claimed extremal multiset, asserts its length
formula, and validates the freeness predicate through the product engine
rather than trusting the construction.  A failed check raises
WitnessValidationError.
"""

from __future__ import annotations

import math

from .groups import FiniteGroup, make_cyclic, make_dihedral, make_metacyclic
from .products import find_subsequence
from .sequences import Sequence


class WitnessValidationError(RuntimeError):
    """The constructed sequence failed its freeness or length check."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def _check_free(seq: Sequence, expected_length: int, name: str, **query) -> Sequence:
    if seq.length != expected_length:
        raise WitnessValidationError(
            f"{name}: length {seq.length} != expected {expected_length}"
        )
    cert = find_subsequence(seq, **query)
    if cert is not None:
        raise WitnessValidationError(
            f"{name}: not free, violating certificate {cert.to_dict()}"
        )
    return seq


def _log2_floor(n: int) -> int:
    return n.bit_length() - 1


def dihedral_main_witness(n: int, d: int, group: FiniteGroup | None = None) -> Sequence:
    """x^[2d-1] . y^1 . y^2 . y^4 ... (doubling rotations below n), for d odd
    with n | d: a dN-free sequence of length 2d + floor(log2 n) - 1."""
    _require(n >= 3, f"need n >= 3, got {n}")
    _require(d % 2 == 1, f"need d odd, got {d}")
    _require(d % n == 0, f"need n | d, got n={n}, d={d}")
    if group is None:
        group = make_dihedral(n)
    counts = [0] * group.order
    counts[n] = 2 * d - 1  # the reflection x
    for i in range(_log2_floor(n)):
        counts[2**i % n] += 1
    seq = Sequence(group, counts)
    return _check_free(seq, 2 * d + _log2_floor(n) - 1, "dihedral-main", modulus=d)


def dihedral_nn_witness(n: int, group: FiniteGroup | None = None) -> Sequence:
    """The d = n instance of the main witness (n odd)."""
    _require(n % 2 == 1, f"need n odd, got {n}")
    return dihedral_main_witness(n, n, group=group)


def dihedral_coprime_witness(n: int, d: int, group: FiniteGroup | None = None) -> Sequence:
    """x . y^[nd-1] for gcd(n, d) = 1: a dN-free sequence of length nd."""
    _require(n >= 3, f"need n >= 3, got {n}")
    _require(math.gcd(n, d) == 1, f"need gcd(n, d) = 1, got n={n}, d={d}")
    if group is None:
        group = make_dihedral(n)
    counts = [0] * group.order
    counts[n] = 1
    counts[1] = n * d - 1
    seq = Sequence(group, counts)
    return _check_free(seq, n * d, "dihedral-coprime", modulus=d)


def metacyclic_witness_params(p: int, q: int, k: int) -> tuple[int, int]:
    """(d, expected length) for the metacyclic construction: d = lcm(kp, q) +
    gcd(kp, q) - 1 and length p + d - 2."""
    d = math.lcm(k * p, q) + math.gcd(k * p, q) - 1
    return d, p + d - 2


def metacyclic_witness(
    p: int, q: int, s: int, k: int, group: FiniteGroup | None = None
) -> Sequence:
    """x^[p-1] . y^[d-1] with d = lcm(kp, q) + gcd(kp, q) - 1: a kpN-free
    sequence of length p + d - 2.

    Validation is by the engine, not by trust: when q | k the construction
    contains y^[kp] with product one, so it is not kpN-free and this raises
    (the identity-padded sequence realizes the bound there instead).
    """
    _require(k >= 1, f"need k >= 1, got {k}")
    if group is None:
        group = make_metacyclic(p, q, s)
    d, expected = metacyclic_witness_params(p, q, k)
    counts = [0] * group.order
    counts[q] = p - 1  # the generator x
    counts[1] = d - 1  # the generator y
    seq = Sequence(group, counts)
    return _check_free(seq, expected, "metacyclic", modulus=k * p)


def generic_identity_pad(
    group: FiniteGroup,
    d: int,
    s1: Sequence,
    davenport_value: int | None = None,
) -> Sequence:
    """1^[d-1] . S1 where S1 is product-free of length D(G) - 1: a dN-free
    sequence of length D(G) + d - 2 realizing the generic lower bound."""
    _require(d >= 1, f"need d >= 1, got {d}")
    if s1.group != group:
        raise ValueError("S1 must live over the given group")
    if find_subsequence(s1) is not None:
        raise WitnessValidationError("S1 is not product-free")
    if davenport_value is None:
        from .search import compute_davenport

        davenport_value = compute_davenport(group).value
    if s1.length != davenport_value - 1:
        raise ValueError(
            f"S1 must have length D(G)-1 = {davenport_value - 1}, got {s1.length}"
        )
    if d == 1:
        return s1
    seq = s1.with_added(group.identity, d - 1)
    return _check_free(seq, davenport_value + d - 2, "generic-identity-pad", modulus=d)


def inverse_family(
    n: int,
    variant: int,
    *,
    t: int | None = None,
    s: int | None = None,
    nu: int | None = None,
) -> Sequence:
    """The classified product-free sequences of length n over D_2n.

    Variant 1 (n >= 4): (y^t)^[n-1] . xy^s with gcd(t, n) = 1.
    Variant 2 (n = 3): (y^t, y^t, xy^nu) with t in {2, 3}, or (x, xy, xy^2)
    when t is omitted.  The printed t constants are used as-is (mod 3), so
    t = 3 produces identity elements and fails validation; classify_free
    reports the true families.
    """
    if variant == 1:
        _require(n >= 4, f"variant 1 needs n >= 4, got {n}")
        _require(t is not None and s is not None, "variant 1 needs t and s")
        _require(1 <= t <= n - 1, f"need 1 <= t <= n-1, got t={t}")
        _require(math.gcd(t, n) == 1, f"need gcd(t, n) = 1, got t={t}, n={n}")
        _require(0 <= s <= n - 1, f"need 0 <= s <= n-1, got s={s}")
        group = make_dihedral(n)
        counts = [0] * group.order
        counts[t % n] = n - 1
        counts[n + s] = 1
        return _check_free(Sequence(group, counts), n, "inverse-family-1")
    if variant == 2:
        _require(n == 3, f"variant 2 needs n = 3, got {n}")
        group = make_dihedral(3)
        counts = [0] * group.order
        if t is None:
            seq = Sequence.from_elements(group, [3, 4, 5])  # x, xy, xy^2
            return _check_free(seq, 3, "inverse-family-2")
        _require(t in (2, 3), f"variant 2 needs t in {{2, 3}}, got {t}")
        _require(nu is not None and 0 <= nu <= 2, "variant 2 needs nu in [0, 2]")
        counts[t % 3] = 2
        counts[3 + nu] = 1
        return _check_free(Sequence(group, counts), 3, "inverse-family-2")
    raise ValueError(f"variant must be 1 or 2, got {variant}")
