import random

import pytest

from parrondo_ring.states import (
    Symmetry,
    canonical_form,
    count_classes,
    enumerate_classes,
    orbit,
    reflect,
    rotate,
)

from expected import CLASS_COUNTS


def test_rotate_reflect_basics():
    # 0b0011 on 4 players: rotation moves player 2 into seat 1
    assert rotate(0b0011, 4) == 0b0110
    assert reflect(0b0011, 4) == 0b1100
    assert reflect(0b1010, 4) == 0b0101


def test_canonical_examples():
    assert canonical_form(0b000000, 6, Symmetry.CYCLIC) == 0
    assert canonical_form(0b1010, 4, Symmetry.CYCLIC) == 0b0101
    # 001101 and 001011 merge under reflection
    assert canonical_form(0b001101, 6, Symmetry.DIHEDRAL) == 0b001011
    assert canonical_form(0b001101, 6, Symmetry.CYCLIC) == 13


def test_canonical_idempotent():
    rng = random.Random(7)
    for _ in range(10_000):
        n = rng.randint(3, 16)
        x = rng.randrange(1 << n)
        for sym in Symmetry:
            c = canonical_form(x, n, sym)
            assert canonical_form(c, n, sym) == c


def test_canonical_constant_on_orbits():
    rng = random.Random(8)
    for _ in range(1000):
        n = rng.randint(3, 14)
        x = rng.randrange(1 << n)
        for sym in Symmetry:
            c = canonical_form(x, n, sym)
            assert all(canonical_form(y, n, sym) == c for y in orbit(x, n, sym))


def test_enumerate_n3():
    classes = enumerate_classes(3, Symmetry.CYCLIC)
    assert [c.canonical for c in classes] == [0, 1, 3, 7]
    assert [c.orbit_size for c in classes] == [1, 3, 3, 1]
    assert [c.ones_count for c in classes] == [0, 1, 2, 3]


def test_enumerate_partitions_hypercube():
    for n in range(3, 13):
        for sym in Symmetry:
            classes = enumerate_classes(n, sym)
            seen = set()
            for c in classes:
                members = c.members
                assert c.canonical == min(members)
                assert c.orbit_size == len(members)
                group_order = n if sym is Symmetry.CYCLIC else 2 * n
                assert group_order % c.orbit_size == 0
                assert all(bin(m).count("1") == c.ones_count for m in members)
                assert seen.isdisjoint(members)
                seen.update(members)
            assert len(seen) == 1 << n


def test_counts_match_enumeration():
    for n in range(3, 17):
        for sym in Symmetry:
            assert count_classes(n, sym) == len(enumerate_classes(n, sym))


@pytest.mark.parametrize("n,expected", sorted(CLASS_COUNTS.items()))
def test_table_counts(n, expected):
    assert count_classes(n, Symmetry.CYCLIC) == expected[0]
    assert count_classes(n, Symmetry.DIHEDRAL) == expected[1]


def test_dihedral_never_exceeds_cyclic():
    for n in range(3, 33):
        assert count_classes(n, Symmetry.DIHEDRAL) <= count_classes(n, Symmetry.CYCLIC)


def test_bad_ring_sizes():
    with pytest.raises(ValueError):
        canonical_form(0, 2, Symmetry.CYCLIC)
    with pytest.raises(ValueError):
        canonical_form(8, 3, Symmetry.CYCLIC)
    with pytest.raises(ValueError):
        count_classes(2, Symmetry.CYCLIC)
