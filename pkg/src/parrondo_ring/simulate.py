"""Monte Carlo play of the ring games.

One turn: pick a player uniformly at random; under the mixed game
toss the gamma-coin to choose between games A and B; toss the selected
game's coin.  Heads pays the ensemble +1 and sets the player's status
to 1; tails pays -1 and clears it.

A single counter-based generator (Philox) drives every random choice
of a run, drawn in a fixed documented order: optional initial statuses
first (one fair bit per player), then the player sequence, then the
game-choice sequence (mixed game only), then the coin sequence.  Runs
are reproducible from (seed, arguments) alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import BoundaryCase, Params, build_full_chain, classify_boundary
from .states import EquivClass, Symmetry, canonical_form, enumerate_classes


@dataclass
class ProfitTrace:
    """Increment-level record of one simulated run."""

    n: int
    game: str
    turns: int
    seed: int
    initial_state: int
    final_state: int
    increments: np.ndarray  # int8, each +1 or -1
    params: Params | None = None

    @property
    def sums(self) -> np.ndarray:
        cached = self.__dict__.get("_sums")
        if cached is None:
            cached = np.cumsum(self.increments, dtype=np.int64)
            self.__dict__["_sums"] = cached
        return cached

    @property
    def total(self) -> int:
        return int(self.sums[-1]) if self.turns else 0

    @property
    def mean(self) -> float:
        return self.total / self.turns

    @property
    def increment_stderr(self) -> float:
        return float(np.std(self.increments)) / np.sqrt(self.turns)


def _fair_initial(rng: np.random.Generator, n: int) -> int:
    bits = rng.integers(0, 2, size=n)
    x = 0
    for b in bits:
        x = (x << 1) | int(b)
    return x


def _run(
    n: int,
    coins4: tuple[float, float, float, float],
    coin_a: float,
    gamma: float,
    game: str,
    turns: int,
    rng: np.random.Generator,
    initial: int | None,
    flip_coins: bool,
) -> tuple[int, int, np.ndarray]:
    x = _fair_initial(rng, n) if initial is None else int(initial)
    start = x
    players = rng.integers(0, n, size=turns)
    picks = rng.random(turns) if game == "c" else None
    coins = rng.random(turns)
    shifts = [n - 1 - s for s in range(n)]
    left = [(s - 1) % n for s in range(n)]
    right = [(s + 1) % n for s in range(n)]
    inc = np.empty(turns, dtype=np.int8)
    for t in range(turns):
        s = int(players[t])
        if game == "a":
            prob = coin_a
        else:
            if game == "c" and picks[t] < gamma:
                prob = coin_a
            else:
                m = 2 * ((x >> shifts[left[s]]) & 1) + ((x >> shifts[right[s]]) & 1)
                prob = coins4[m]
        u = coins[t]
        win = (u >= 1.0 - prob) if flip_coins else (u < prob)
        if win:
            x |= 1 << shifts[s]
            inc[t] = 1
        else:
            x &= ~(1 << shifts[s])
            inc[t] = -1
    return start, x, inc


def simulate(
    n: int,
    params: Params,
    game: str = "b",
    turns: int = 1_000_000,
    seed: int = 0,
    initial: int | None = None,
    gamma: float | None = None,
) -> ProfitTrace:
    """Play the chosen game for a number of turns; deterministic per seed.

    initial=None starts every player on an independent fair coin toss.
    """
    game = game.lower()
    if game not in ("a", "b", "c"):
        raise ValueError("game must be 'a', 'b', or 'c'")
    if turns < 1:
        raise ValueError("turns must be positive")
    g = float(params.gamma if gamma is None else gamma)
    rng = np.random.Generator(np.random.Philox(key=seed))
    coins4 = tuple(float(params.coin(m)) for m in range(4))
    start, final, inc = _run(
        n, coins4, float(params.p), g, game, turns, rng, initial, flip_coins=False
    )
    return ProfitTrace(n, game, turns, seed, start, final, inc, params)


def coupled_simulate(
    n: int,
    params: Params,
    turns: int = 10_000,
    seed: int = 0,
    initial: int | None = None,
) -> tuple[ProfitTrace, ProfitTrace]:
    """Two game-B runs coupled through one stream of players and coins.

    The second run plays the reversed-role parameters (q3, q2, q1, q0)
    from the complemented initial configuration and reads every coin
    through the opposite face: it wins exactly when the first run
    loses.  Pathwise, its configuration stays the bitwise complement
    of the first run's and its profit is the exact negative.
    """
    mask = (1 << n) - 1
    comp = params.complementary()
    rng1 = np.random.Generator(np.random.Philox(key=seed))
    coins4 = tuple(float(params.coin(m)) for m in range(4))
    start1, final1, inc1 = _run(
        n, coins4, float(params.p), float(params.gamma), "b", turns, rng1, initial, flip_coins=False
    )
    # identical stream: same seed, same draw order
    rng2 = np.random.Generator(np.random.Philox(key=seed))
    if initial is None:
        start2 = _fair_initial(rng2, n) ^ mask
    else:
        start2 = int(initial) ^ mask
    coins4c = tuple(float(comp.coin(m)) for m in range(4))
    _, final2, inc2 = _run(
        n, coins4c, float(comp.p), float(comp.gamma), "b", turns, rng2, start2, flip_coins=True
    )
    first = ProfitTrace(n, "b", turns, seed, start1, final1, inc1, params)
    second = ProfitTrace(n, "b", turns, seed, start2, final2, inc2, comp)
    return first, second


@dataclass(frozen=True)
class AbsorptionReport:
    """Absorption outcome of the doubly-absorbing regime p0 = 0, p3 = 1."""

    n: int
    initial_state: int | None  # None means fair-coin initial distribution
    initial_class: EquivClass | None
    prob_absorb_at_ones: float
    mu_b: float


def _case6_chain(n: int, params: Params) -> np.ndarray:
    if classify_boundary(params) is not BoundaryCase.CASE6:
        raise ValueError("absorption analysis applies only when p0 = 0 and p3 = 1")
    if not 3 <= n <= 12:
        raise ValueError("absorption solve supported for 3 <= n <= 12")
    return build_full_chain(n, params, sparse=False)


def absorption_profile(n: int, params: Params) -> np.ndarray:
    """P(absorb at all-ones | start x) for every configuration x."""
    p = _case6_chain(n, params)
    size = 1 << n
    ones = size - 1
    transient = [x for x in range(1, ones)]
    q = p[np.ix_(transient, transient)]
    r = p[transient, ones]
    h = np.linalg.solve(np.eye(len(transient)) - q, r)
    full = np.empty(size)
    full[0] = 0.0
    full[ones] = 1.0
    full[transient] = h
    return full


def absorption_analysis(n: int, params: Params, initial: int | None = None) -> AbsorptionReport:
    """Absorption probability at all-ones and the implied profit rate.

    After absorption every turn pays the same unit, so the long-run
    profit per turn is 2 * P(absorb at all-ones) - 1.  With initial
    None the probability is averaged over the fair-coin initial
    distribution (uniform over configurations).
    """
    profile = absorption_profile(n, params)
    if initial is None:
        prob = float(profile.mean())
        cls = None
    else:
        prob = float(profile[initial])
        classes = enumerate_classes(n, Symmetry.CYCLIC)
        canon = canonical_form(initial, n, Symmetry.CYCLIC)
        cls = next(c for c in classes if c.canonical == canon)
    return AbsorptionReport(n, initial, cls, prob, 2 * prob - 1)


def absorption_by_class(n: int, params: Params) -> list[AbsorptionReport]:
    """One absorption report per equivalence class of initial states."""
    return [
        absorption_analysis(n, params, initial=c.canonical)
        for c in enumerate_classes(n, Symmetry.CYCLIC)
    ]


def absorption_monte_carlo(
    n: int,
    params: Params,
    initial: int,
    replications: int = 10_000,
    seed: int = 0,
    max_turns: int = 1_000_000,
) -> tuple[float, float]:
    """Estimate P(absorb at all-ones) by independent replications.

    Returns (fraction, stderr).  Each replication plays game B until an
    absorbing configuration is hit.
    """
    if classify_boundary(params) is not BoundaryCase.CASE6:
        raise ValueError("absorption sampling applies only when p0 = 0 and p3 = 1")
    rng = np.random.Generator(np.random.Philox(key=seed))
    coins4 = tuple(float(params.coin(m)) for m in range(4))
    mask = (1 << n) - 1
    shifts = [n - 1 - s for s in range(n)]
    left = [(s - 1) % n for s in range(n)]
    right = [(s + 1) % n for s in range(n)]
    hits = 0
    for _ in range(replications):
        x = int(initial)
        for _ in range(max_turns):
            if x == 0 or x == mask:
                break
            s = int(rng.integers(0, n))
            m = 2 * ((x >> shifts[left[s]]) & 1) + ((x >> shifts[right[s]]) & 1)
            if rng.random() < coins4[m]:
                x |= 1 << shifts[s]
            else:
                x &= ~(1 << shifts[s])
        else:
            raise RuntimeError("run failed to absorb within max_turns")
        hits += x == mask
    frac = hits / replications
    return frac, float(np.sqrt(frac * (1 - frac) / replications))


def reducible_mu(n: int, params: Params) -> float:
    """Forced profit rate in the absorbing/alternating boundary regimes.

    p0 = 0 traps the ensemble at all-losers (rate -1); p3 = 1 traps it
    at all-winners (rate +1); p0 = 1 with p3 = 0 on an even ring locks
    into an alternating configuration whose turns are fair (rate 0).
    """
    case = classify_boundary(params)
    if case is BoundaryCase.CASE2:
        return -1.0
    if case is BoundaryCase.CASE4:
        return 1.0
    if case is BoundaryCase.CASE5 and n % 2 == 0:
        return 0.0
    raise ValueError(f"no forced constant rate for {case} with n={n}")
