"""Ring configurations and their symmetry classes.

A configuration of N players arranged in a circle is an N-bit word:
bit i is 1 when player i's most recent game was a win.  Throughout the
package a configuration is a plain Python int in [0, 2**n) together
with an explicit ring size n; player i (1-based) occupies bit (n - i),
so reading the binary word left to right gives players 1..n.

Two configurations are equivalent when one is a rotation of the other
(cyclic symmetry), or a rotation and/or reversal (dihedral symmetry).
Equivalence classes are the classic two-color necklaces (cyclic) and
bracelets (dihedral); each class is represented by its numerically
smallest member.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

import numpy as np

MIN_RING = 3
MAX_RING = 32       # configurations must fit a machine word
MAX_ENUM_RING = 22  # enumeration allocates arrays of length 2**n


class Symmetry(Enum):
    """Group acting on the ring: rotations only, or rotations + reversal."""

    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"

    @classmethod
    def coerce(cls, value: "Symmetry | str") -> "Symmetry":
        if isinstance(value, Symmetry):
            return value
        return cls(str(value).lower())


def _check_ring(n: int) -> None:
    if not MIN_RING <= n <= MAX_RING:
        raise ValueError(f"ring size must be in [{MIN_RING}, {MAX_RING}], got {n}")


def _check_state(x: int, n: int) -> None:
    _check_ring(n)
    if not 0 <= x < (1 << n):
        raise ValueError(f"state {x} out of range for ring size {n}")


def player_bit(i: int, n: int) -> int:
    """Value of player i's status bit (i in 1..n) inside an n-bit word."""
    if not 1 <= i <= n:
        raise ValueError(f"player index {i} out of 1..{n}")
    return 1 << (n - i)


def get_status(x: int, i: int, n: int) -> int:
    return (x >> (n - i)) & 1


def rotate(x: int, n: int) -> int:
    """Shift every player one seat counterclockwise (player 2 -> seat 1)."""
    return ((x << 1) | (x >> (n - 1))) & ((1 << n) - 1)


def reflect(x: int, n: int) -> int:
    """Reverse the seating order of the players."""
    y = 0
    for _ in range(n):
        y = (y << 1) | (x & 1)
        x >>= 1
    return y


def orbit(x: int, n: int, symmetry: Symmetry | str = Symmetry.CYCLIC) -> tuple[int, ...]:
    """All distinct images of x under the symmetry group, ascending."""
    symmetry = Symmetry.coerce(symmetry)
    _check_state(x, n)
    seen = set()
    cur = x
    for _ in range(n):
        seen.add(cur)
        cur = rotate(cur, n)
    if symmetry is Symmetry.DIHEDRAL:
        cur = reflect(x, n)
        for _ in range(n):
            seen.add(cur)
            cur = rotate(cur, n)
    return tuple(sorted(seen))


def canonical_form(x: int, n: int, symmetry: Symmetry | str = Symmetry.CYCLIC) -> int:
    """Smallest integer in the orbit of x; constant on orbits, idempotent."""
    symmetry = Symmetry.coerce(symmetry)
    _check_state(x, n)
    best = x
    cur = x
    for _ in range(n - 1):
        cur = rotate(cur, n)
        if cur < best:
            best = cur
    if symmetry is Symmetry.DIHEDRAL:
        cur = reflect(x, n)
        for _ in range(n):
            if cur < best:
                best = cur
            cur = rotate(cur, n)
    return best


@dataclass(eq=False)
class EquivClass:
    """A necklace orbit: canonical representative plus orbit metadata."""

    canonical: int
    n: int
    symmetry: Symmetry
    orbit_size: int
    ones_count: int

    @cached_property
    def members(self) -> tuple[int, ...]:
        return orbit(self.canonical, self.n, self.symmetry)

    def __contains__(self, x: int) -> bool:
        return canonical_form(x, self.n, self.symmetry) == self.canonical

    def __repr__(self) -> str:
        word = format(self.canonical, f"0{self.n}b")
        return f"EquivClass({word}, size={self.orbit_size})"


def _rotate_array(arr: np.ndarray, n: int, mask: int) -> np.ndarray:
    return ((arr << np.uint64(1)) | (arr >> np.uint64(n - 1))) & np.uint64(mask)


def _reflect_array(arr: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(arr)
    for i in range(n):
        out |= ((arr >> np.uint64(i)) & np.uint64(1)) << np.uint64(n - 1 - i)
    return out


@lru_cache(maxsize=8)
def canonical_table(n: int, symmetry: Symmetry) -> np.ndarray:
    """Canonical form of every state 0..2**n-1 as a uint64 array."""
    symmetry = Symmetry.coerce(symmetry)
    _check_ring(n)
    if n > MAX_ENUM_RING:
        raise ValueError(f"enumeration supported only up to n={MAX_ENUM_RING}")
    mask = (1 << n) - 1
    states = np.arange(1 << n, dtype=np.uint64)
    canon = states.copy()
    cur = states
    for _ in range(n - 1):
        cur = _rotate_array(cur, n, mask)
        np.minimum(canon, cur, out=canon)
    if symmetry is Symmetry.DIHEDRAL:
        cur = _reflect_array(states, n)
        np.minimum(canon, cur, out=canon)
        for _ in range(n - 1):
            cur = _rotate_array(cur, n, mask)
            np.minimum(canon, cur, out=canon)
    return canon


@lru_cache(maxsize=8)
def enumerate_classes(n: int, symmetry: Symmetry | str = Symmetry.CYCLIC) -> tuple[EquivClass, ...]:
    """All equivalence classes for ring size n, ascending by canonical value.

    The orbits partition {0,1}**n, so orbit sizes sum to 2**n.
    """
    symmetry = Symmetry.coerce(symmetry)
    canon = canonical_table(n, symmetry)
    reps = np.flatnonzero(canon == np.arange(1 << n, dtype=np.uint64))
    sizes = np.bincount(canon.astype(np.int64), minlength=1 << n)[reps]
    ones = np.bitwise_count(reps.astype(np.uint64))
    return tuple(
        EquivClass(int(c), n, symmetry, int(s), int(o))
        for c, s, o in zip(reps.tolist(), sizes.tolist(), ones.tolist())
    )


def _euler_phi(m: int) -> int:
    result = m
    d = 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


def count_classes(n: int, symmetry: Symmetry | str = Symmetry.CYCLIC) -> int:
    """Necklace/bracelet count by the totient formula, without enumeration."""
    symmetry = Symmetry.coerce(symmetry)
    if n < MIN_RING:
        raise ValueError(f"ring size must be at least {MIN_RING}, got {n}")
    total = sum(_euler_phi(d) * (1 << (n // d)) for d in range(1, n + 1) if n % d == 0)
    assert total % n == 0
    cyclic = total // n
    if symmetry is Symmetry.CYCLIC:
        return cyclic
    # Bracelets: average in the reversal-containing coset of the dihedral group.
    if n % 2 == 0:
        reversal_fixed = 3 << (n // 2 - 1)
    else:
        reversal_fixed = 2 << ((n - 1) // 2)
    assert (cyclic + reversal_fixed) % 2 == 0
    return (cyclic + reversal_fixed) // 2
