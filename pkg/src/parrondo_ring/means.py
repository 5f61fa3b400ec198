"""Mean profit rates of the ring games.

The ensemble profit after a turn changes by +1 on a win and -1 on a
loss.  The long-run profit per turn mu is pi_bar . (flipped row sums)
on the reduced chain, where "flipped" means every q_m counted with a
minus sign before any simplification.  Game A has mu = 2p - 1; game C
is game B evaluated at the mixed coins r_m = gamma*p + (1-gamma)*p_m.

For a general finite chain with per-transition payoffs, mean and
asymptotic variance come from the fundamental matrix:

    mu     = pi . (P*W) . 1
    sigma2 = pi . (P*W*W) . 1 - mu**2 + 2 pi . (P*W) (Z - Pi) (P*W) . 1

with Z = (I - (P - Pi))**-1 and Pi the matrix whose rows are pi.  The
ring game feeds this formula through an augmented chain over
(configuration, next player) pairs, where every transition genuinely
pays +1 or -1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .chain import (
    BoundaryCase,
    Params,
    build_full_chain,
    build_reduced_chain,
    classify_boundary,
    neighbor_code,
)
from .exact import mat_mat, solve_exact
from .states import Symmetry
from .stationary import Distribution, ReducibleChainError, solve_stationary

AUGMENTED_MAX = 8
AUGMENTED_EXACT_MAX = 6


@dataclass(frozen=True)
class MeanReport:
    """Per-turn profit rates of the three games at one parameter vector."""

    mu_a: float | Fraction
    mu_b: float | Fraction
    mu_c: float | Fraction
    sigma2: float | Fraction | None = None
    exact: bool = False


def default_symmetry(params: Params) -> Symmetry:
    return Symmetry.DIHEDRAL if params.p1 == params.p2 else Symmetry.CYCLIC


def mean_rate(
    n: int,
    params: Params,
    symmetry: Symmetry | str | None = None,
    exact: bool = False,
) -> float | Fraction:
    """Long-run profit per turn of game B on a ring of n players.

    Boundary parameter vectors with an absorbing extreme state return
    the forced constant immediately (-1 when p0 = 0, +1 when p3 = 1,
    0 when p0 = 1 and p3 = 0 on an even ring).  Vectors that absorb at
    both extremes are rejected; see simulate.absorption_analysis.
    """
    case = classify_boundary(params)
    if case is BoundaryCase.CASE2:
        return Fraction(-1) if exact else -1.0
    if case is BoundaryCase.CASE4:
        return Fraction(1) if exact else 1.0
    if case is BoundaryCase.CASE6:
        raise ValueError(
            "p0=0, p3=1 absorbs at both extremes; use simulate.absorption_analysis"
        )
    if case is BoundaryCase.UNSUPPORTED:
        raise ValueError("unsupported boundary parameters (p1 or p2 on the boundary?)")
    chain = build_reduced_chain(n, Symmetry.coerce(symmetry) if symmetry else default_symmetry(params))
    exclude: tuple[int, ...] = ()
    if case is BoundaryCase.CASE5:
        if n % 2 == 0:
            return Fraction(0) if exact else 0.0
        # Odd ring with both extreme states unreachable: solve on the rest.
        # No closed-form constant exists here; the solve fails loudly when
        # the remaining classes split into several recurrent components.
        exclude = (0, chain.size - 1)
    try:
        pi = solve_stationary(chain.transition_matrix(params, exact=exact), exact=exact, exclude=exclude)
    except ReducibleChainError as e:
        raise ReducibleChainError(f"mean undefined at {params}: {e}") from e
    pay = chain.payoff_sums(params, exact=exact)
    if exact:
        return sum(w * s for w, s in zip(pi.weights, pay))
    return float(np.dot(pi.weights, pay))


def mean_mixed(
    n: int,
    params: Params,
    gamma: float | Fraction | None = None,
    p: float | Fraction | None = None,
    symmetry: Symmetry | str | None = None,
    exact: bool = False,
) -> float | Fraction:
    """Profit rate of the mixed game C at coins r_m = gamma*p + (1-gamma)*p_m."""
    if gamma is not None or p is not None:
        params = replace(
            params,
            gamma=params.gamma if gamma is None else gamma,
            p=params.p if p is None else p,
        )
    return mean_rate(n, params.mixed(), symmetry=symmetry, exact=exact)


def mean_report(
    n: int,
    params: Params,
    symmetry: Symmetry | str | None = None,
    exact: bool = False,
) -> MeanReport:
    mu_a = 2 * params.p - 1
    if not exact:
        mu_a = float(mu_a)
    return MeanReport(
        mu_a=mu_a,
        mu_b=mean_rate(n, params, symmetry=symmetry, exact=exact),
        mu_c=mean_mixed(n, params, symmetry=symmetry, exact=exact),
        exact=exact,
    )


def mu_n3_closed(params: Params) -> float | Fraction:
    """Closed-form game-B profit rate on a ring of 3, requiring p1 == p2."""
    if params.p1 != params.p2:
        raise ValueError("closed form assumes p1 == p2")
    p0, p1, p3 = params.p0, params.p1, params.p3
    q1, q3 = 1 - p1, 1 - p3
    return (p1 * (p0 + q3) - q3) / (p0 * p1 + 2 * p0 * q3 + q1 * q3)


def mu_n4_closed(params: Params) -> float | Fraction:
    """Closed-form game-B profit rate on a ring of 4, requiring p1 == p2."""
    if params.p1 != params.p2:
        raise ValueError("closed form assumes p1 == p2")
    p0, p1, p3 = params.p0, params.p1, params.p3
    q0, q3 = 1 - p0, 1 - p3
    f0 = -(3 - 2 * p3 - 3 * p0**2 + 2 * p0 * p3 - p3**2 + 2 * p0**2 * p3 - 2 * p0 * p3**2)
    numer = f0 + 4 * (1 + p0) * (q0 + p3) * q3 * p1 - 2 * (q0 + p3) * (q0 - p3) * p1**2
    g0 = (
        (3 + 6 * p0 - 2 * p3 - 3 * p0**2 - 2 * p0 * p3 - p3**2
         + 12 * p0**2 * p3 - 4 * p0 * p3**2 - 8 * p0**2 * p3**2)
        - 4 * (q0 + p3 + 2 * p0**2 + 2 * p0 * p3) * q3 * p1
        + 2 * (1 + 4 * p0 - p0**2 - 2 * p0 * p3 - p3**2) * p1**2
    )
    return numer / g0


def markov_mean_variance(p_matrix, w_matrix, pi: Distribution | None = None):
    """Mean and asymptotic variance of cumulative payoffs on a finite chain.

    p_matrix must be irreducible-aperiodic (or a unichain); w_matrix
    assigns a payoff to each one-step transition.  Returns (mu, sigma2).
    Exact arithmetic is used when the matrices are nested lists of
    rationals, floats when they are ndarrays.
    """
    exact = not hasattr(p_matrix, "shape")
    if pi is None:
        pi = solve_stationary(p_matrix, exact=exact)
    if exact:
        return _mean_variance_exact(p_matrix, w_matrix, list(pi.weights))
    return _mean_variance_float(np.asarray(p_matrix), np.asarray(w_matrix), pi.as_floats())


def _mean_variance_float(p, w, pi):
    pdot = p * w
    v = pdot.sum(axis=1)
    mu = float(pi @ v)
    w2 = (pdot * w).sum(axis=1)
    a = np.eye(len(pi)) - p + np.tile(pi, (len(pi), 1))
    try:
        y = np.linalg.solve(a, v)
    except np.linalg.LinAlgError as e:
        raise ReducibleChainError("fundamental matrix does not exist") from e
    sigma2 = float(pi @ w2 - mu**2 + 2 * (pi @ (pdot @ (y - mu))))
    return mu, sigma2


def _mean_variance_exact(p, w, pi):
    k = len(pi)
    pdot = [[Fraction(p[i][j]) * w[i][j] for j in range(k)] for i in range(k)]
    v = [sum(row, start=Fraction(0)) for row in pdot]
    mu = sum((pi[i] * v[i] for i in range(k)), start=Fraction(0))
    w2 = [
        sum((pdot[i][j] * w[i][j] for j in range(k)), start=Fraction(0))
        for i in range(k)
    ]
    a = [
        [(1 if i == j else 0) - Fraction(p[i][j]) + pi[j] for j in range(k)]
        for i in range(k)
    ]
    try:
        y = solve_exact(a, v)
    except Exception as e:
        raise ReducibleChainError("fundamental matrix does not exist") from e
    corr = [y[j] - mu for j in range(k)]
    pdot_corr = [sum((pdot[i][j] * corr[j] for j in range(k)), start=Fraction(0)) for i in range(k)]
    sigma2 = (
        sum((pi[i] * w2[i] for i in range(k)), start=Fraction(0))
        - mu * mu
        + 2 * sum((pi[i] * pdot_corr[i] for i in range(k)), start=Fraction(0))
    )
    return mu, sigma2


@dataclass(frozen=True)
class AugmentedChain:
    """Chain over (configuration, next player) pairs with +-1 payoffs.

    State (x, i) means the players' statuses are x and player i is the
    one about to play.  Its stationary distribution spreads the base
    chain's uniformly over the player coordinate.
    """

    n: int
    matrix: object   # ndarray or nested Fraction lists
    payoffs: object  # same shape, every supported transition +-1
    exact: bool

    @property
    def size(self) -> int:
        return (1 << self.n) * self.n

    def state(self, idx: int) -> tuple[int, int]:
        return idx // self.n, idx % self.n + 1

    def index(self, x: int, i: int) -> int:
        return x * self.n + (i - 1)

    def stationary_from_full(self, pi_full: Distribution) -> Distribution:
        """pi*(x, i) = pi(x) / n for every player i."""
        if pi_full.exact:
            inv = Fraction(1, self.n)
            w = tuple(Fraction(pi_full.weights[idx // self.n]) * inv for idx in range(self.size))
            return Distribution(w, "state", True)
        w = np.repeat(pi_full.as_floats(), self.n) / self.n
        return Distribution(w, "state", False)


def build_augmented(n: int, params: Params, exact: bool = False) -> AugmentedChain:
    """Augmented chain whose every transition carries payoff +1 or -1."""
    cap = AUGMENTED_EXACT_MAX if exact else AUGMENTED_MAX
    if not 3 <= n <= cap:
        raise ValueError(f"augmented chain supported for 3 <= n <= {cap}")
    size = (1 << n) * n
    if exact:
        p_rows = [[Fraction(0)] * size for _ in range(size)]
        w_rows = [[0] * size for _ in range(size)]
    else:
        p_rows = np.zeros((size, size))
        w_rows = np.zeros((size, size))
    inv = Fraction(1, n) if exact else 1.0 / n
    for x in range(1 << n):
        for i in range(1, n + 1):
            src = x * n + (i - 1)
            m = neighbor_code(x, i, n)
            coin = Fraction(params.coin(m)) if exact else float(params.coin(m))
            bit = 1 << (n - i)
            win_state, lose_state = x | bit, x & ~bit
            for j in range(n):
                p_rows[src][win_state * n + j] = coin * inv
                p_rows[src][lose_state * n + j] = (1 - coin) * inv
                w_rows[src][win_state * n + j] = 1
                w_rows[src][lose_state * n + j] = -1
    return AugmentedChain(n, p_rows, w_rows, exact)


def player_transition_matrix(n: int, i: int, params: Params) -> list[list[Fraction]]:
    """Exact full-chain matrix when player i is forced to play every turn."""
    size = 1 << n
    rows = [[Fraction(0)] * size for _ in range(size)]
    bit = 1 << (n - i)
    for x in range(size):
        coin = Fraction(params.coin(neighbor_code(x, i, n)))
        rows[x][x | bit] += coin
        rows[x][x & ~bit] += 1 - coin
    return rows


def history_equivalence_check(params: Params) -> bool:
    """Compare the ring-of-3 chain with the play-in-order product chain.

    Builds the three forced-player matrices P1, P2, P3, checks that
    their average reproduces the uniformly random chain, and returns
    whether stationary(P) equals stationary(P1 P2 P3) exactly.
    """
    n = 3
    p_parts = [player_transition_matrix(n, i, params) for i in (1, 2, 3)]
    size = 1 << n
    averaged = [
        [sum(p[x][y] for p in p_parts) / 3 for y in range(size)]
        for x in range(size)
    ]
    direct = build_full_chain(n, params, exact=True)
    for x in range(size):
        for y in range(size):
            if averaged[x][y] != direct[x].get(y, Fraction(0)):
                raise RuntimeError("forced-player average disagrees with the uniform chain")
    product = mat_mat(mat_mat(p_parts[0], p_parts[1]), p_parts[2])
    pi_avg = solve_stationary(averaged, exact=True)
    pi_prod = solve_stationary(product, exact=True)
    return tuple(pi_avg.weights) == tuple(pi_prod.weights)
