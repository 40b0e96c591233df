"""Monodromy data: validation, genus, signature, Galois action, and the
compact-type degeneration into 3-point covers."""

from __future__ import annotations

import random
from collections import Counter
from math import gcd

import pytest

from cyclopel.errors import (
    DisconnectedCover,
    NonCompactType,
    NonMaximalOrder,
    UnbalancedInertia,
    UnsupportedModulus,
    ZeroInertia,
)
from cyclopel.monodromy import (
    MonodromyDatum,
    cm_algebra_check,
    degenerate,
    galois_act,
    galois_act_signature,
    genus,
    signature,
    validate,
)


def random_datum(rng, moduli=(3, 5, 7, 11), max_n=8):
    """Uniform-ish valid datum: entries free, last one balances the sum."""
    while True:
        m = rng.choice(moduli)
        n = rng.randint(3, max_n)
        a = [rng.randint(1, m - 1) for _ in range(n - 1)]
        last = (-sum(a)) % m
        if last == 0:
            continue
        a.append(last)
        if gcd(*a, m) != 1:
            continue
        return validate(m, tuple(a))


def test_validate_accepts_table_row():
    d = validate(5, (1, 3, 3, 3))
    assert d.m == 5 and d.N == 4 and d.a == (1, 3, 3, 3)


def test_validate_normalizes_residues():
    assert validate(5, (6, 3, 3, 3)).a == (1, 3, 3, 3)
    assert validate(5, (-2, 3, 3, 1)).a == (3, 3, 3, 1)


def test_validate_rejects_unbalanced_sum():
    with pytest.raises(UnbalancedInertia):
        validate(5, (1, 1, 1))


def test_validate_rejects_disconnected_cover():
    with pytest.raises(DisconnectedCover):
        validate(6, (2, 2, 2))


def test_validate_rejects_zero_inertia():
    with pytest.raises(ZeroInertia):
        validate(5, (5, 2, 3))
    with pytest.raises(ZeroInertia):
        validate(7, (0, 3, 4))


def test_validate_rejects_short_and_unsupported():
    with pytest.raises(ValueError):
        validate(5, (2, 3))
    with pytest.raises(UnsupportedModulus):
        validate(23, (1, 1, 21))


def test_genus_values():
    assert genus(validate(7, (2, 4, 4, 4))) == 6
    assert genus(validate(3, (1, 1, 2, 2))) == 2
    assert genus(validate(5, (4, 3, 3))) == 2


def test_signature_three_point_case():
    sig = signature(validate(7, (1, 1, 5)))
    assert sig.values == (0, 1, 1, 1, 0, 0, 0)


def test_signature_four_point_case():
    sig = signature(validate(5, (1, 3, 3, 3)))
    assert sig.values == (0, 1, 2, 0, 1)
    assert sig.values[0] == 0


def test_signature_total_is_genus():
    for m, a in ((5, (2, 2, 2, 2, 2)), (7, (2, 4, 4, 4)), (10, (3, 5, 6, 6))):
        d = validate(m, a)
        assert signature(d).total() == genus(d)


def test_galois_act_identity():
    d = validate(7, (1, 1, 2, 3))
    assert galois_act(1, d) == d


def test_galois_act_multiset():
    d = galois_act(2, validate(7, (1, 1, 1, 4)))
    assert sorted(d.a) == [2, 4, 4, 4]


def test_galois_act_rejects_non_coprime():
    with pytest.raises(ValueError):
        galois_act(5, validate(10, (3, 5, 6, 6)))


def test_galois_equivariance_of_signature():
    rng = random.Random(61)
    for _ in range(40):
        d = random_datum(rng)
        i = rng.choice([n for n in range(1, d.m) if gcd(n, d.m) == 1])
        assert signature(galois_act(i, d)) == galois_act_signature(i, signature(d))


def test_degenerate_five_point_family():
    tree = degenerate(validate(5, (2, 2, 2, 2, 2)))
    assert [t.a for t in tree.triples] == [(2, 2, 1), (4, 2, 4), (1, 2, 2)]
    assert tree.merge_pairs == ((0, 1), (0, 1))
    assert tree.merged_values == (4, 1)


def test_degenerate_four_point_family_multiset():
    tree = degenerate(validate(7, (2, 4, 4, 4)))
    got = {tuple(sorted(t.a)) for t in tree.triples}
    assert got == {(4, 4, 6), (1, 2, 4)}


def test_degenerate_three_point_is_single_triple():
    d = validate(7, (1, 2, 4))
    tree = degenerate(d)
    assert tree.triples == (d,)
    assert tree.merge_pairs == ()


def test_degenerate_non_compact_type():
    with pytest.raises(NonCompactType):
        degenerate(validate(6, (1, 1, 1, 3)))


def test_degenerate_composite_split_cm_algebra():
    # a triple whose new part carries CM by a product of two rings
    with pytest.raises(NonMaximalOrder):
        degenerate(validate(9, (3, 5, 5, 5)))
    with pytest.raises(NonMaximalOrder):
        degenerate(validate(10, (3, 5, 6, 6)))


def test_cm_algebra_check_values():
    assert cm_algebra_check(validate(7, (1, 2, 4))) == (7,)
    assert cm_algebra_check(validate(6, (1, 1, 4))) == (3, 6)
    assert cm_algebra_check(validate(6, (1, 2, 3))) == (6,)


def test_degeneration_conservation():
    rng = random.Random(67)
    count = 0
    while count < 60:
        d = random_datum(rng, moduli=(3, 5, 7, 11), max_n=7)
        tree = degenerate(d)
        entries = Counter()
        for t in tree.triples:
            entries.update(t.a)
        for v in tree.merged_values:
            entries[v] -= 1
            entries[(d.m - v) % d.m] -= 1
        entries = +entries
        assert entries == Counter(d.a)
        count += 1


def test_degenerate_triples_validate_and_sum_genus():
    rng = random.Random(71)
    for _ in range(40):
        d = random_datum(rng, moduli=(5, 7, 11), max_n=6)
        tree = degenerate(d)
        assert len(tree.triples) == d.N - 2
        for t in tree.triples:
            assert t.N == 3
            assert validate(t.m, t.a) == t
        # prime m: each component has genus (m-1)/2
        assert sum(genus(t) for t in tree.triples) == genus(d)


def test_conjugate_signature_pairing():
    rng = random.Random(73)
    for _ in range(40):
        d = random_datum(rng)
        sig = signature(d)
        for n in range(1, d.m):
            if gcd(n, d.m) == 1:
                assert sig.values[n] + sig.values[d.m - n] == d.N - 2
