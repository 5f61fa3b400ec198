"""Transition matrices for the ring game, full and symmetry-reduced.

In game B, the player chosen to move tosses one of four coins selected
by the status of their two neighbors: the neighbor code of player i in
configuration x is m = 2*x(i-1) + x(i+1), and the coin lands heads
(player wins, status set to 1) with probability p_m.  One turn of the
ensemble picks a player uniformly at random, so every transition
probability carries a factor 1/n.

Reduced-chain entries are never stored numerically.  Each entry is a
vector of eight nonnegative integer counts over the coin symbols
(p0, p1, p2, p3, q0, q1, q2, q3), scaled by 1/n at evaluation time.
Keeping p and q coefficients separate is what makes the profit-rate
sign flip (q_m -> -q_m) well defined: the flip must be applied before
any simplification using q_m = 1 - p_m.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .states import (
    EquivClass,
    Symmetry,
    canonical_table,
    enumerate_classes,
    get_status,
)

SYMBOLS = ("p0", "p1", "p2", "p3", "q0", "q1", "q2", "q3")

#: dense full-chain matrices beyond this ring size switch to sparse storage
FULL_DENSE_MAX = 12
#: hard caps: dense ndarray (or exact rows) vs scipy CSR
FULL_MAX = 14
FULL_SPARSE_MAX = 20


class BoundaryCase(Enum):
    """Which reducible parameter regime applies, if any.

    INTERIOR   all four coin probabilities strictly inside (0,1)
    CASE1      p0 = 1: the all-losers state becomes unreachable
    CASE2      p0 = 0: the all-losers state is absorbing
    CASE3      p3 = 0: the all-winners state becomes unreachable
    CASE4      p3 = 1: the all-winners state is absorbing
    CASE5      p0 = 1 and p3 = 0: both extreme states unreachable
    CASE6      p0 = 0 and p3 = 1: both extreme states absorbing
    UNSUPPORTED  any other boundary combination (e.g. p1 in {0,1})
    """

    INTERIOR = "interior"
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"
    CASE5 = "case5"
    CASE6 = "case6"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class Params:
    """Coin parameters: game A probability p, game B coins p0..p3, mix weight gamma.

    Values may be floats or Fractions; exact pipelines pass Fractions.
    """

    p0: float | Fraction
    p1: float | Fraction
    p2: float | Fraction
    p3: float | Fraction
    p: float | Fraction = Fraction(1, 2)
    gamma: float | Fraction = Fraction(1, 2)

    def __post_init__(self):
        for name in ("p0", "p1", "p2", "p3", "p", "gamma"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name}={v} outside [0, 1]")

    def coin(self, m: int) -> float | Fraction:
        return (self.p0, self.p1, self.p2, self.p3)[m]

    def q(self, m: int) -> float | Fraction:
        return 1 - self.coin(m)

    def symbol_values(self) -> tuple:
        """(p0, p1, p2, p3, q0, q1, q2, q3) in the symbol basis order."""
        ps = (self.p0, self.p1, self.p2, self.p3)
        return ps + tuple(1 - v for v in ps)

    @property
    def interior(self) -> bool:
        return all(0 < v < 1 for v in (self.p0, self.p1, self.p2, self.p3))

    def mixed(self) -> "Params":
        """Game C coins r_m = gamma*p + (1-gamma)*p_m."""
        g, p = self.gamma, self.p
        return replace(
            self,
            p0=g * p + (1 - g) * self.p0,
            p1=g * p + (1 - g) * self.p1,
            p2=g * p + (1 - g) * self.p2,
            p3=g * p + (1 - g) * self.p3,
        )

    def complementary(self) -> "Params":
        """The reversed-role parameter vector (q3, q2, q1, q0)."""
        return replace(self, p0=1 - self.p3, p1=1 - self.p2, p2=1 - self.p1, p3=1 - self.p0)


def classify_boundary(params: Params) -> BoundaryCase:
    """Identify the reducible regime of a parameter vector."""
    if params.interior:
        return BoundaryCase.INTERIOR
    inner = all(0 < v < 1 for v in (params.p1, params.p2))
    if not inner:
        return BoundaryCase.UNSUPPORTED
    p0, p3 = params.p0, params.p3
    if p0 == 1 and p3 == 0:
        return BoundaryCase.CASE5
    if p0 == 0 and p3 == 1:
        return BoundaryCase.CASE6
    if p0 == 1 and 0 < p3 < 1:
        return BoundaryCase.CASE1
    if p0 == 0 and 0 < p3 < 1:
        return BoundaryCase.CASE2
    if p3 == 0 and 0 < p0 < 1:
        return BoundaryCase.CASE3
    if p3 == 1 and 0 < p0 < 1:
        return BoundaryCase.CASE4
    return BoundaryCase.UNSUPPORTED


def neighbor_code(x: int, i: int, n: int) -> int:
    """m_i(x) = 2*status(i-1) + status(i+1), ring indices wrapping."""
    left = get_status(x, n if i == 1 else i - 1, n)
    right = get_status(x, 1 if i == n else i + 1, n)
    return 2 * left + right


class FullTransition(NamedTuple):
    heads_prob: float | Fraction
    tails_prob: float | Fraction
    heads_state: int
    tails_state: int


def full_transition(x: int, i: int, n: int, params: Params) -> FullTransition:
    """Outcome of player i playing game B from configuration x.

    Probabilities are conditional on player i being chosen.  Heads means
    the player wins (status becomes 1, payoff +1); tails means a loss
    (status 0, payoff -1).
    """
    if not 1 <= i <= n:
        raise ValueError(f"player index {i} out of 1..{n}")
    m = neighbor_code(x, i, n)
    bit = 1 << (n - i)
    return FullTransition(params.coin(m), params.q(m), x | bit, x & ~bit)


def build_full_chain(n: int, params: Params, exact: bool = False, sparse: bool | None = None):
    """One-step matrix over all 2**n configurations.

    Float mode returns a dense ndarray through n=14 (auto-switching to
    scipy CSR beyond n=12, which stays available through n=20); exact
    mode returns a list of {column: Fraction} rows.
    """
    if sparse is None:
        sparse = n > FULL_DENSE_MAX
    cap = FULL_MAX if (exact or not sparse) else FULL_SPARSE_MAX
    if not 3 <= n <= cap:
        raise ValueError(f"full chain supported for 3 <= n <= {cap} in this mode")
    size = 1 << n
    if exact:
        rows = []
        inv = Fraction(1, n)
        for x in range(size):
            row: dict[int, Fraction] = {}
            for i in range(1, n + 1):
                t = full_transition(x, i, n, params)
                win, lose = Fraction(t.heads_prob), Fraction(t.tails_prob)
                if get_status(x, i, n) == 0:
                    row[t.heads_state] = row.get(t.heads_state, Fraction(0)) + win * inv
                    row[x] = row.get(x, Fraction(0)) + lose * inv
                else:
                    row[x] = row.get(x, Fraction(0)) + win * inv
                    row[t.tails_state] = row.get(t.tails_state, Fraction(0)) + lose * inv
            rows.append({c: v for c, v in row.items() if v})
        return rows
    coins = [float(params.coin(m)) for m in range(4)]
    if sparse:
        from scipy.sparse import coo_matrix

        data, ri, ci = [], [], []

        def put(r, c, v):
            ri.append(r)
            ci.append(c)
            data.append(v)

    else:
        mat = np.zeros((size, size))

        def put(r, c, v):
            mat[r, c] += v

    for x in range(size):
        for i in range(1, n + 1):
            m = neighbor_code(x, i, n)
            bit = 1 << (n - i)
            win, lose = coins[m] / n, (1.0 - coins[m]) / n
            if x & bit:
                put(x, x, win)
                put(x, x & ~bit, lose)
            else:
                put(x, x | bit, win)
                put(x, x, lose)
    if sparse:
        return coo_matrix((data, (ri, ci)), shape=(size, size)).tocsr()
    return mat


@dataclass(frozen=True)
class ReducedChain:
    """Symbolic transition matrix over equivalence classes.

    rows[i] maps a column index to the 8-vector of symbol counts of that
    entry; the implied scale is 1/n.  m_counts[i][m] counts the players
    of the canonical representative whose neighbor code is m, which is
    all the structure needed for profit-rate row sums.  Built once per
    (n, symmetry) and reusable for any numeric parameter vector.
    """

    n: int
    symmetry: Symmetry
    classes: tuple[EquivClass, ...]
    rows: tuple[dict[int, tuple[int, ...]], ...]
    m_counts: tuple[tuple[int, int, int, int], ...]

    @property
    def size(self) -> int:
        return len(self.classes)

    def class_index(self, x: int) -> int:
        from .states import canonical_form

        return self._canon_index[canonical_form(x, self.n, self.symmetry)]

    @property
    def _canon_index(self) -> dict[int, int]:
        idx = self.__dict__.get("_canon_index_cache")
        if idx is None:
            idx = {c.canonical: k for k, c in enumerate(self.classes)}
            object.__setattr__(self, "_canon_index_cache", idx)
        return idx

    def entry(self, i: int, j: int) -> tuple[int, ...]:
        """Symbol counts of entry (i, j); zeros when the classes are not linked."""
        return self.rows[i].get(j, (0,) * 8)

    def _check_eval(self, params: Params) -> None:
        if self.symmetry is Symmetry.DIHEDRAL and params.p1 != params.p2:
            raise ValueError("dihedral reduction is valid only when p1 == p2")

    def transition_matrix(self, params: Params, exact: bool = False, flip: bool = False):
        """Evaluate the reduced matrix at numeric parameters.

        With flip=True each q_m is replaced by -q_m (profit-weighted
        matrix); the substitution happens on the raw symbol counts.
        """
        self._check_eval(params)
        vals = params.symbol_values()
        if flip:
            vals = vals[:4] + tuple(-v for v in vals[4:])
        if exact:
            vals = tuple(Fraction(v) for v in vals)
            inv = Fraction(1, self.n)
            return [
                {
                    j: s * inv
                    for j, counts in row.items()
                    if (s := sum(c * v for c, v in zip(counts, vals) if c))
                }
                for row in self.rows
            ]
        rows_idx, cols_idx, counts = self._arrays
        entries = counts @ np.asarray([float(v) for v in vals]) / self.n
        # dense LU beats sparse factorization fill-in up to ~15000 classes
        if self.size > 15000:
            from scipy.sparse import coo_matrix

            return coo_matrix((entries, (rows_idx, cols_idx)), shape=(self.size, self.size)).tocsr()
        mat = np.zeros((self.size, self.size))
        mat[rows_idx, cols_idx] = entries
        return mat

    def payoff_sums(self, params: Params, exact: bool = False):
        """Row sums of the profit-weighted matrix: sum_m count_m*(p_m - q_m)/n."""
        self._check_eval(params)
        if exact:
            diffs = [Fraction(params.coin(m)) - Fraction(params.q(m)) for m in range(4)]
            inv = Fraction(1, self.n)
            return [sum(c * d for c, d in zip(mc, diffs)) * inv for mc in self.m_counts]
        diffs = np.asarray([float(params.coin(m) - params.q(m)) for m in range(4)])
        return np.asarray(self.m_counts, dtype=float) @ diffs / self.n

    @property
    def _arrays(self):
        cached = self.__dict__.get("_arrays_cache")
        if cached is None:
            ri, ci, cnt = [], [], []
            for i, row in enumerate(self.rows):
                for j, counts in row.items():
                    ri.append(i)
                    ci.append(j)
                    cnt.append(counts)
            cached = (
                np.asarray(ri, dtype=np.intp),
                np.asarray(ci, dtype=np.intp),
                np.asarray(cnt, dtype=float),
            )
            object.__setattr__(self, "_arrays_cache", cached)
        return cached


@lru_cache(maxsize=16)
def build_reduced_chain(n: int, symmetry: Symmetry | str = Symmetry.CYCLIC) -> ReducedChain:
    """Construct the symbolic reduced matrix for ring size n.

    Entry ([x], [y]) accumulates one count of p_m (or q_m) for every
    player i of the canonical representative x whose move lands in
    class [y].  Classes are linked only when their winner counts differ
    by at most one.
    """
    symmetry = Symmetry.coerce(symmetry)
    classes = enumerate_classes(n, symmetry)
    canon = canonical_table(n, symmetry)
    index = {c.canonical: k for k, c in enumerate(classes)}
    rows: list[dict[int, list[int]]] = []
    m_counts: list[tuple[int, int, int, int]] = []
    for cls in classes:
        x = cls.canonical
        row: dict[int, list[int]] = {}
        diag = row.setdefault(index[x], [0] * 8)
        mc = [0, 0, 0, 0]
        for i in range(1, n + 1):
            m = neighbor_code(x, i, n)
            mc[m] += 1
            bit = 1 << (n - i)
            target = index[int(canon[x ^ bit])]
            if x & bit:
                # winner keeps status with p_m, drops with q_m
                diag[m] += 1
                row.setdefault(target, [0] * 8)[4 + m] += 1
            else:
                diag[4 + m] += 1
                row.setdefault(target, [0] * 8)[m] += 1
        rows.append({j: tuple(c) for j, c in row.items()})
        m_counts.append(tuple(mc))
    return ReducedChain(n, symmetry, classes, tuple(rows), tuple(m_counts))


def payoff_flip(chain: ReducedChain, params: Params, exact: bool = False, squared: bool = False):
    """Profit-weighted reduced matrix.

    Default: each q_m evaluated as -q_m (per-transition payoff of -1 on
    losses).  squared=True weights by payoff squared instead, which
    leaves every symbol positive, so it equals the plain matrix.
    """
    return chain.transition_matrix(params, exact=exact, flip=not squared)
