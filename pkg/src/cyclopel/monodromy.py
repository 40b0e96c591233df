"""Monodromy data of cyclic covers of the line: validation, genus,
signature, Galois action, degeneration into trees of 3-point covers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclotomic import SUPPORTED_MODULI, units_mod
from .errors import (
    DisconnectedCover,
    NonCompactType,
    NonMaximalOrder,
    UnbalancedInertia,
    UnsupportedModulus,
    ZeroInertia,
)

__all__ = [
    "DegenerationTree",
    "MonodromyDatum",
    "Signature",
    "cm_algebra_check",
    "degenerate",
    "galois_act",
    "galois_act_signature",
    "genus",
    "signature",
    "validate",
]


@dataclass(frozen=True)
class MonodromyDatum:
    """(m, N, a): a family of mu_m-covers of P^1 branched at N points with
    local inertia a(i) at the i-th point.  Constructing one validates it."""

    m: int
    a: tuple[int, ...]

    def __post_init__(self):
        m, a = self.m, self.a
        if m not in SUPPORTED_MODULI:
            raise UnsupportedModulus(f"modulus {m} is outside the supported list")
        if len(a) < 3:
            raise ValueError("a monodromy datum needs at least 3 branch points")
        if any(x % m == 0 for x in a):
            raise ZeroInertia("every inertia value must be nonzero mod m")
        if any(not 0 < x < m for x in a):
            raise ValueError("inertia values must be reduced to [1, m-1]; use validate()")
        if sum(a) % m != 0:
            raise UnbalancedInertia("inertia values must sum to 0 mod m")
        g = 0
        for x in a:
            g = gcd(g, x % m)
        if gcd(g, m) != 1:
            raise DisconnectedCover(f"gcd of inertia values with m is {gcd(g, m)}, cover is disconnected")

    @property
    def N(self) -> int:
        return len(self.a)


def validate(m: int, a) -> MonodromyDatum:
    """Normalize raw inertia values into [1, m-1] and enforce the datum
    invariants."""
    return MonodromyDatum(int(m), tuple(int(x) % int(m) for x in a))


def genus(datum: MonodromyDatum) -> int:
    """Genus of the (smooth) cover curve."""
    m, a = datum.m, datum.a
    tot = (datum.N - 2) * m - sum(gcd(x, m) for x in a)
    assert tot % 2 == 0
    return 1 + tot // 2


@dataclass(frozen=True)
class Signature:
    """f(n) = dimension of the zeta^n eigenspace of holomorphic
    differentials, indexed by all residues n mod m (f(0) = 0)."""

    m: int
    values: tuple[int, ...]

    def __post_init__(self):
        assert len(self.values) == self.m and self.values[0] == 0

    def __getitem__(self, n: int) -> int:
        return self.values[n % self.m]

    def total(self) -> int:
        return sum(self.values)

    def cm_type_members(self) -> frozenset[int]:
        """Residues coprime to m with f(n) = 1 (meaningful for 3-point data)."""
        return frozenset(n for n in units_mod(self.m) if self.values[n] == 1)


def _frac(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


def signature(datum: MonodromyDatum) -> Signature:
    """Eigenspace dimensions by the fractional-part formula, exact."""
    m, a = datum.m, datum.a
    vals = [0]
    for n in range(1, m):
        s = sum(_frac(Fraction(-n * x, m)) for x in a)
        assert s.denominator == 1, "signature value not integral"
        vals.append(int(s) - 1)
    return Signature(m, tuple(vals))


def galois_act(i: int, datum: MonodromyDatum) -> MonodromyDatum:
    """sigma_i sends the family with inertia a to the one with i^-1 * a."""
    m = datum.m
    if gcd(i, m) != 1:
        raise ValueError(f"{i} is not a unit mod {m}")
    inv = pow(i, -1, m)
    return MonodromyDatum(m, tuple((inv * x) % m for x in datum.a))


def galois_act_signature(i: int, sig: Signature) -> Signature:
    """Transport of signature under sigma_i: f'(n) = f(n * i^-1)."""
    m = sig.m
    if gcd(i, m) != 1:
        raise ValueError(f"{i} is not a unit mod {m}")
    inv = pow(i, -1, m)
    return Signature(m, tuple(sig.values[(n * inv) % m] for n in range(m)))


def cm_algebra_check(triple: MonodromyDatum) -> tuple[int, ...]:
    """Divisors d > 1 of m dividing no inertia value of the triple.  The
    Jacobian of the 3-point cover has CM by the product of Q(zeta_d) over
    these d; a singleton {m} is the maximal-order single-field case."""
    if triple.N != 3:
        raise ValueError("cm_algebra_check needs a 3-point datum")
    m = triple.m
    return tuple(
        d for d in range(2, m + 1) if m % d == 0 and all(x % d != 0 for x in triple.a)
    )


@dataclass(frozen=True)
class DegenerationTree:
    """Result of degenerating an N-point family into r = N-2 three-point
    covers joined along a tree.  merge_pairs records the index pair fused at
    each step (indices into that step's inertia vector); merged_values the
    inserted inertia of the new node."""

    base: MonodromyDatum
    triples: tuple[MonodromyDatum, ...]
    merge_pairs: tuple[tuple[int, int], ...]
    merged_values: tuple[int, ...]


def _triple_is_preferred(triple: MonodromyDatum) -> bool:
    # Prefer join components that stay inside the single-field maximal-order
    # case with a simple CM-type; ties are broken lexicographically by the
    # caller.  Simple components make the Hermitian-form argument
    # unconditional, and this reproduces the published degenerations.
    from .cmfield import cm_type_from_triple, is_simple

    if cm_algebra_check(triple) != (triple.m,):
        return False
    return is_simple(cm_type_from_triple(triple)).simple


def degenerate(datum: MonodromyDatum) -> DegenerationTree:
    """Fuse branch points pairwise until only 3-point covers remain.

    A pair (i, j) is admissible when gcd(a(i)+a(j), m) = 1: the two sides of
    the join meet at gcd(a(i)+a(j), m) points, so any larger gcd creates a
    cycle in the dual graph and the limit curve is not of compact type.
    Among admissible pairs the lexicographically least preferred one is
    taken (see _triple_is_preferred).  Every emitted triple must have
    single-field maximal-order CM, else NonMaximalOrder.
    """
    m = datum.m
    cur = datum
    triples: list[MonodromyDatum] = []
    pairs: list[tuple[int, int]] = []
    merged: list[int] = []

    def emit(t: MonodromyDatum):
        if cm_algebra_check(t) != (m,):
            raise NonMaximalOrder(
                f"component {t.a} has CM algebra indexed by {cm_algebra_check(t)}; "
                "the mu_m-action does not extend to a single maximal order"
            )
        triples.append(t)

    while cur.N > 3:
        a = cur.a
        candidates = [
            (i, j)
            for i in range(cur.N)
            for j in range(i + 1, cur.N)
            if gcd(a[i] + a[j], m) == 1
        ]
        if not candidates:
            raise NonCompactType(
                f"no branch-point pair of {a} joins at a single node; "
                "every degeneration of this family has a cycle in its dual graph"
            )

        def triple_for(p):
            i, j = p
            return MonodromyDatum(m, (a[i], a[j], (-(a[i] + a[j])) % m))

        choice = next((p for p in candidates if _triple_is_preferred(triple_for(p))), candidates[0])
        i, j = choice
        s = (a[i] + a[j]) % m
        emit(triple_for(choice))
        pairs.append(choice)
        merged.append(s)
        rest = tuple(x for k, x in enumerate(a) if k != i and k != j)
        cur = MonodromyDatum(m, (s,) + rest)

    emit(cur)
    return DegenerationTree(datum, tuple(triples), tuple(pairs), tuple(merged))
