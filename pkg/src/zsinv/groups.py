"""Finite groups as dense multiplication tables.

Elements are integers ``0..order-1`` with ``0`` the identity, so every group
operation downstream is a table lookup.  Constructors cover the families used
by the workbench: cyclic groups, direct products of cyclic groups, dihedral
groups D_2n and metacyclic groups C_p x|_s C_q.  Groups are immutable after
construction and safe to share between threads.

Note on ``exponent``: here exp(G) is the maximum element order, which for
nonabelian groups differs from the usual lcm convention.  See README.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence as Seq

MAX_ORDER = 512           # dense tables only; desk scale
ASSOC_CHECK_MAX = 64      # full associativity check is O(order^3)
DEFAULT_AUT_CAP = 24


class GroupConstructionError(ValueError):
    """Invalid constructor parameters or a broken multiplication table."""


class AutomorphismCapError(RuntimeError):
    """Group too large for brute-force automorphisms; orbit pruning unavailable."""


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    mul: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    labels: tuple[str, ...]
    family: str
    family_params: tuple[int, ...]
    coset: tuple[int, ...] | None = None

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def elements(self) -> range:
        return range(self.order)

    def label(self, g: int) -> str:
        return self.labels[g]

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: g for g, lab in enumerate(self.labels)}

    def element(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise KeyError(f"no element labelled {label!r} in {self.describe_short()}") from None

    def power(self, g: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv[g], -k)
        acc = self.identity
        row = self.mul
        for _ in range(k):
            acc = row[acc][g]
        return acc

    def element_order(self, g: int) -> int:
        acc = g
        k = 1
        while acc != self.identity:
            acc = self.mul[acc][g]
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        """Maximum element order over the group."""
        return max(self.element_order(g) for g in self.elements())

    @cached_property
    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in self.elements() for b in self.elements())

    def coset_class(self, g: int) -> int:
        if self.coset is None:
            raise ValueError(f"family {self.family!r} has no coset structure")
        return self.coset[g]

    @property
    def num_cosets(self) -> int:
        if self.coset is None:
            raise ValueError(f"family {self.family!r} has no coset structure")
        return max(self.coset) + 1

    @cached_property
    def canonical_invariants(self) -> tuple[int, ...]:
        """Invariant factors 1 < n_1 | n_2 | ... for abelian families."""
        if self.family == "cyclic":
            return abelian_canonical_invariants(self.family_params)
        if self.family == "abelian-product":
            return abelian_canonical_invariants(self.family_params)
        raise ValueError(f"family {self.family!r} is not an abelian product")

    @property
    def dstar(self) -> int:
        """1 + sum(n_i - 1) over the invariant factors (abelian families only)."""
        return 1 + sum(n - 1 for n in self.canonical_invariants)

    @cached_property
    def rmul_bits(self) -> tuple[tuple[int, ...], ...]:
        """rmul_bits[g][e] = bit of e*g; used by the product engines."""
        return tuple(
            tuple(1 << self.mul[e][g] for e in self.elements()) for g in self.elements()
        )

    def describe_short(self) -> str:
        params = ",".join(str(p) for p in self.family_params)
        return f"{self.family}({params})"

    def describe(self) -> dict:
        return {
            "order": self.order,
            "family": self.family,
            "params": list(self.family_params),
            "labels": list(self.labels),
        }

    def __repr__(self) -> str:  # keep reprs short; tables are big
        return f"FiniteGroup({self.describe_short()}, order={self.order})"


def validate_group(group: FiniteGroup) -> None:
    """Check identity, inverses, Latin-square rows/columns, associativity
    (orders <= 64) and the defining family relations.  Raises on any failure."""
    n = group.order
    m = group.mul
    if n < 1 or len(m) != n or any(len(row) != n for row in m):
        raise GroupConstructionError("table shape does not match order")
    if len(set(group.labels)) != n:
        raise GroupConstructionError("labels are not unique")
    e = group.identity
    for a in range(n):
        if m[e][a] != a or m[a][e] != a:
            raise GroupConstructionError("identity is not two-sided")
        b = group.inv[a]
        if m[a][b] != e or m[b][a] != e:
            raise GroupConstructionError(f"inverse broken at element {a}")
        if len(set(m[a])) != n or len({m[x][a] for x in range(n)}) != n:
            raise GroupConstructionError(f"row/column {a} is not a permutation")
    if n <= ASSOC_CHECK_MAX:
        rng = range(n)
        for a in rng:
            ma = m[a]
            for b in rng:
                mab = ma[b]
                mb = m[b]
                for c in rng:
                    if m[mab][c] != ma[mb[c]]:
                        raise GroupConstructionError(f"associativity fails at ({a},{b},{c})")
    _validate_family(group)


def _validate_family(group: FiniteGroup) -> None:
    if group.family == "dihedral":
        (n,) = group.family_params
        x = group.element("x")
        y = group.element("y") if n > 1 else group.identity
        if group.op(x, x) != group.identity:
            raise GroupConstructionError("x^2 != 1")
        if group.power(y, n) != group.identity:
            raise GroupConstructionError("y^n != 1")
        # x*y = y^(n-1)*x
        if group.op(x, y) != group.op(group.power(y, n - 1), x):
            raise GroupConstructionError("xy != y^-1 x")
    elif group.family == "metacyclic":
        p, q, s = group.family_params
        x = group.element("x")
        y = group.element("y")
        if group.power(x, p) != group.identity or group.power(y, q) != group.identity:
            raise GroupConstructionError("x^p or y^q != 1")
        # y*x = x*y^s
        if group.op(y, x) != group.op(x, group.power(y, s)):
            raise GroupConstructionError("yx != xy^s")


def _exp_label(name: str, k: int) -> str:
    if k == 0:
        return ""
    if k == 1:
        return name
    return f"{name}^{k}"


def _xy_label(a: int, b: int) -> str:
    lab = _exp_label("x", a) + _exp_label("y", b)
    return lab or "1"


def make_cyclic(n: int) -> FiniteGroup:
    """Cyclic group C_n with elements y^b, b in [0, n)."""
    if n < 1:
        raise GroupConstructionError(f"cyclic order must be >= 1, got {n}")
    if n > MAX_ORDER:
        raise GroupConstructionError(f"order {n} exceeds dense-table limit {MAX_ORDER}")
    mul = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inv = tuple((-a) % n for a in range(n))
    labels = tuple(_exp_label("y", b) or "1" for b in range(n))
    g = FiniteGroup(n, mul, 0, inv, labels, "cyclic", (n,))
    validate_group(g)
    return g


def abelian_canonical_invariants(invariants: Seq[int]) -> tuple[int, ...]:
    """Reduce a list of cyclic orders to canonical form 1 < n_1 | n_2 | ...

    Elementary-divisor reduction: split every factor into prime powers, then
    rebuild invariant factors by taking, per prime, the k-th largest power.
    """
    if any(v < 1 for v in invariants):
        raise GroupConstructionError("invariants must be positive")
    powers: dict[int, list[int]] = {}
    for v in invariants:
        for p, k in _factorize(v).items():
            powers.setdefault(p, []).append(p**k)
    depth = max((len(v) for v in powers.values()), default=0)
    for p in powers:
        powers[p].sort(reverse=True)
        powers[p] += [1] * (depth - len(powers[p]))
    factors = []
    for i in range(depth):
        f = 1
        for p in powers:
            f *= powers[p][i]
        if f > 1:
            factors.append(f)
    return tuple(sorted(factors))


def _factorize(v: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= v:
        while v % d == 0:
            out[d] = out.get(d, 0) + 1
            v //= d
        d += 1
    if v > 1:
        out[v] = out.get(v, 0) + 1
    return out


def make_abelian(invariants: Seq[int]) -> FiniteGroup:
    """Direct product C_{n_1} + C_{n_2} + ... with componentwise addition."""
    invariants = tuple(int(v) for v in invariants)
    if not invariants:
        invariants = (1,)
    if any(v < 1 for v in invariants):
        raise GroupConstructionError("invariants must be positive")
    order = math.prod(invariants)
    if order > MAX_ORDER:
        raise GroupConstructionError(f"order {order} exceeds dense-table limit {MAX_ORDER}")

    k = len(invariants)

    def unpack(idx: int) -> tuple[int, ...]:
        comps = []
        for n in reversed(invariants):
            comps.append(idx % n)
            idx //= n
        return tuple(reversed(comps))

    def pack(comps: Seq[int]) -> int:
        idx = 0
        for n, c in zip(invariants, comps):
            idx = idx * n + c
        return idx

    tuples = [unpack(i) for i in range(order)]
    mul = tuple(
        tuple(pack([(a + b) % n for a, b, n in zip(ta, tb, invariants)]) for tb in tuples)
        for ta in tuples
    )
    inv = tuple(pack([(-a) % n for a, n in zip(t, invariants)]) for t in tuples)

    def lab(t: tuple[int, ...]) -> str:
        parts = [_exp_label(f"g{i + 1}", c) for i, c in enumerate(t) if c]
        return "*".join(p for p in parts if p) or "1"

    labels = tuple(lab(t) for t in tuples)
    g = FiniteGroup(order, mul, 0, inv, labels, "abelian-product", invariants)
    validate_group(g)
    return g


def make_dihedral(n: int) -> FiniteGroup:
    """Dihedral group D_2n = <x, y : x^2 = y^n = 1, xy = y^-1 x>, order 2n.

    Element x^a y^b is index a*n + b; coset class 0 is H = <y> (rotations),
    class 1 is N = x*H (reflections).
    """
    if n < 3:
        raise GroupConstructionError(f"dihedral parameter must be >= 3, got {n}")
    if 2 * n > MAX_ORDER:
        raise GroupConstructionError(f"order {2 * n} exceeds dense-table limit {MAX_ORDER}")
    order = 2 * n

    def idx(a: int, b: int) -> int:
        return (a % 2) * n + (b % n)

    mul_rows = []
    for i in range(order):
        a, b = divmod(i, n)
        row = []
        for j in range(order):
            c, d = divmod(j, n)
            row.append(idx(a + c, (b if c == 0 else -b) + d))
        mul_rows.append(tuple(row))
    mul = tuple(mul_rows)
    inv_list = []
    for i in range(order):
        a, b = divmod(i, n)
        inv_list.append(idx(a, -b) if a == 0 else i)  # reflections are involutions
    labels = tuple(_xy_label(a, b) for a in range(2) for b in range(n))
    coset = tuple(a for a in range(2) for _ in range(n))
    g = FiniteGroup(order, mul, 0, tuple(inv_list), labels, "dihedral", (n,), coset)
    validate_group(g)
    return g


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def multiplicative_order(s: int, q: int) -> int:
    s %= q
    if math.gcd(s, q) != 1:
        raise ValueError(f"{s} is not a unit mod {q}")
    acc = s
    k = 1
    while acc != 1:
        acc = acc * s % q
        k += 1
    return k


def make_metacyclic(p: int, q: int, s: int) -> FiniteGroup:
    """Metacyclic group <x, y : x^p = y^q = 1, yx = xy^s> with ord_q(s) = p.

    Element x^a y^b is index a*q + b; coset class of x^a y^b is a, so class 0
    is H = <y> and class i is N_i = x^i H.
    """
    if p == 2:
        raise GroupConstructionError("p = 2 gives the dihedral group; use make_dihedral(q)")
    if not (is_prime(p) and is_prime(q)):
        raise GroupConstructionError(f"p and q must be prime, got p={p}, q={q}")
    if p < 3 or (q - 1) % p != 0:
        raise GroupConstructionError(f"need p >= 3 and p | q-1, got p={p}, q={q}")
    if math.gcd(s, q) != 1 or multiplicative_order(s, q) != p:
        raise GroupConstructionError(
            f"ord_{q}({s}) != {p}: invalid presentation parameter s"
        )
    order = p * q
    if order > MAX_ORDER:
        raise GroupConstructionError(f"order {order} exceeds dense-table limit {MAX_ORDER}")

    spow = [pow(s, c, q) for c in range(p)]

    def idx(a: int, b: int) -> int:
        return (a % p) * q + (b % q)

    mul_rows = []
    for i in range(order):
        a, b = divmod(i, q)
        row = []
        for j in range(order):
            c, d = divmod(j, q)
            row.append(idx(a + c, b * spow[c] + d))
        mul_rows.append(tuple(row))
    mul = tuple(mul_rows)
    inv_list = [0] * order
    for i in range(order):
        for j in range(order):
            if mul[i][j] == 0:
                inv_list[i] = j
                break
    labels = tuple(_xy_label(a, b) for a in range(p) for b in range(q))
    coset = tuple(a for a in range(p) for _ in range(q))
    g = FiniteGroup(order, mul, 0, tuple(inv_list), labels, "metacyclic", (p, q, s), coset)
    validate_group(g)
    return g


# ---------------------------------------------------------------------------
# Maps between groups


@dataclass(frozen=True)
class GroupMap:
    """A per-element map; ``is_homomorphism=False`` marks bookkeeping maps
    (like the dihedral exponent extraction) that only satisfy their defining
    equations, not multiplicativity."""

    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]
    is_homomorphism: bool = True

    def apply(self, g: int) -> int:
        return self.image[g]

    def is_multiplicative(self) -> bool:
        src, tgt, img = self.source, self.target, self.image
        return all(
            img[src.op(a, b)] == tgt.op(img[a], img[b])
            for a in src.elements()
            for b in src.elements()
        )

    def is_bijective(self) -> bool:
        return len(set(self.image)) == self.source.order == self.target.order

    def is_automorphism(self) -> bool:
        return (
            self.source is self.target or self.source == self.target
        ) and self.is_multiplicative() and self.is_bijective()


def identity_map(group: FiniteGroup) -> GroupMap:
    return GroupMap(group, group, tuple(group.elements()))


def _closure_from(group: FiniteGroup, gens: Seq[int]) -> set[int]:
    seen = {group.identity}
    frontier = [group.identity]
    mul = group.mul
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mul[a][g]
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def generating_set(group: FiniteGroup) -> list[int]:
    """Greedy small generating set (indices, ascending)."""
    gens: list[int] = []
    reached = {group.identity}
    for g in group.elements():
        if g not in reached:
            gens.append(g)
            reached = _closure_from(group, gens)
    return gens


def _extend_to_endomorphism(
    group: FiniteGroup, gens: Seq[int], gen_images: Seq[int]
) -> tuple[int, ...] | None:
    """Propagate generator images along words; verify the result is an
    automorphism.  Returns the image table or None."""
    mul = group.mul
    img: dict[int, int] = {group.identity: group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for e in frontier:
            for g, h in zip(gens, gen_images):
                e2 = mul[e][g]
                v = mul[img[e]][h]
                known = img.get(e2)
                if known is None:
                    img[e2] = v
                    nxt.append(e2)
                elif known != v:
                    return None
        frontier = nxt
    if len(img) != group.order:
        return None
    image = tuple(img[e] for e in group.elements())
    if len(set(image)) != group.order:
        return None
    for a in group.elements():
        ra = mul[a]
        ia = image[a]
        for b in group.elements():
            if image[ra[b]] != mul[ia][image[b]]:
                return None
    return image


def automorphisms(group: FiniteGroup, cap: int = DEFAULT_AUT_CAP) -> list[GroupMap]:
    """Complete automorphism list by brute force over generator images.

    Raises AutomorphismCapError for |G| > cap; callers must then fall back to
    unpruned search.
    """
    if group.order > cap:
        raise AutomorphismCapError(
            f"|G| = {group.order} > cap {cap}: orbit pruning unavailable"
        )
    gens = generating_set(group)
    if not gens:
        return [identity_map(group)]
    orders = [group.element_order(g) for g in group.elements()]
    candidates = [
        [h for h in group.elements() if orders[h] == orders[g]] for g in gens
    ]
    out = []
    for images in itertools.product(*candidates):
        table = _extend_to_endomorphism(group, gens, images)
        if table is not None:
            out.append(GroupMap(group, group, table))
    out.sort(key=lambda m: m.image)
    return out


def dihedral_phi(group: FiniteGroup, alpha: int) -> GroupMap:
    """The reflection-twisting automorphism x -> x y^alpha, y -> y of D_2n."""
    if group.family != "dihedral":
        raise ValueError("dihedral_phi needs a dihedral group")
    (n,) = group.family_params
    image = []
    for i in group.elements():
        a, b = divmod(i, n)
        image.append(b if a == 0 else n + (alpha + b) % n)
    return GroupMap(group, group, tuple(image))


def dihedral_psi(group: FiniteGroup, target: FiniteGroup | None = None) -> GroupMap:
    """Exponent extraction D_2n -> C_n: x y^a -> a and y^b -> b.

    Not a homomorphism; stored flagged, and only the two defining equations
    are meaningful.
    """
    if group.family != "dihedral":
        raise ValueError("dihedral_psi needs a dihedral group")
    (n,) = group.family_params
    if target is None:
        target = make_cyclic(n)
    if target.family != "cyclic" or target.family_params != (n,):
        raise ValueError(f"target must be C_{n}")
    image = tuple(i % n for i in group.elements())
    return GroupMap(group, target, image, is_homomorphism=False)
