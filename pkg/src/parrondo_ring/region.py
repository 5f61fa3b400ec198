"""Geometry of the Parrondo region in the (p0, p1, p3) unit cube.

Scans fix the standing conventions p = 1/2, p2 = p1, gamma = 1/2, so a
cube point (p0, p1, p3) determines both game B and the mixture C.  A
point shows the Parrondo effect when mu_B <= 0 and mu_C > 0, and the
anti-Parrondo effect when mu_B >= 0 and mu_C < 0.

The scan path evaluates thousands of points per call: the reduced
chain is built once, every chunk of points becomes one batched linear
solve, and classifications fall out of the two profit-rate signs.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chain import Params, build_reduced_chain
from .means import mean_mixed, mean_rate
from .states import Symmetry


class Region(Enum):
    PARRONDO = "parrondo"
    ANTI_PARRONDO = "anti-parrondo"
    NEITHER = "neither"


#: float margin below which a profit-rate sign is settled exactly
TIE_TOL = 1e-12


class NonMonotoneError(RuntimeError):
    """A profit rate changed sign more than once along the scan line."""


@dataclass(frozen=True)
class CubePoint:
    """A point of the open parameter cube (p0, p1, p3)."""

    p0: float | Fraction
    p1: float | Fraction
    p3: float | Fraction

    def as_params(self) -> Params:
        return Params(self.p0, self.p1, self.p1, self.p3)

    @property
    def interior(self) -> bool:
        return all(0 < v < 1 for v in (self.p0, self.p1, self.p3))


@dataclass(frozen=True)
class ParrondoInterval:
    """The p1 interval (lower, upper] showing the Parrondo effect.

    lower is the mu_C = 0 crossing (exclusive: mu_C must be positive),
    upper the mu_B = 0 crossing (inclusive: mu_B = 0 still qualifies).
    """

    lower: float | Fraction | None
    upper: float | Fraction | None
    empty: bool

    def contains(self, p1) -> bool:
        return not self.empty and self.lower < p1 <= self.upper


@dataclass(frozen=True)
class RegionEstimate:
    """Volume estimate of the Parrondo region with method metadata."""

    n: int
    method: str  # "riemann", "monte-carlo", or "closed-form"
    volume: float
    points: int
    stderr: float | None = None
    seed: int | None = None


def symmetry_map(point: CubePoint | tuple) -> CubePoint:
    """The involution (p0, p1, p3) -> (1-p3, 1-p1, 1-p0).

    It exchanges the Parrondo and anti-Parrondo regions and preserves
    volume, so both regions have the same measure.
    """
    p0, p1, p3 = _coords(point)
    return CubePoint(1 - p3, 1 - p1, 1 - p0)


def _coords(point) -> tuple:
    if isinstance(point, CubePoint):
        return point.p0, point.p1, point.p3
    p0, p1, p3 = point
    return p0, p1, p3


class MeanEvaluator:
    """Vectorized mu_B / mu_C evaluation over batches of cube points."""

    def __init__(self, n: int):
        self.n = n
        self.chain = build_reduced_chain(n, Symmetry.DIHEDRAL)
        rows, cols, counts = self.chain._arrays
        self._rows = rows
        self._cols = cols
        self._counts = counts
        self._m_counts = np.asarray(self.chain.m_counts, dtype=float)
        self.k = self.chain.size

    def _mu(self, sym: np.ndarray) -> np.ndarray:
        b = sym.shape[0]
        k = self.k
        entries = (sym @ self._counts.T) / self.n
        p = np.zeros((b, k, k))
        p[:, self._rows, self._cols] = entries
        m = p.transpose(0, 2, 1) - np.eye(k)
        m[:, 0, :] = 1.0
        rhs = np.zeros((k, 1))
        rhs[0, 0] = 1.0
        pi = np.linalg.solve(m, rhs)[..., 0]
        pays = ((sym[:, :4] - sym[:, 4:]) @ self._m_counts.T) / self.n
        return np.einsum("bk,bk->b", pi, pays)

    @staticmethod
    def _symbols(coins: np.ndarray) -> np.ndarray:
        return np.concatenate([coins, 1.0 - coins], axis=1)

    def _coins(self, points: np.ndarray, mixed: bool) -> np.ndarray:
        p0, p1, p3 = points[:, 0], points[:, 1], points[:, 2]
        coins = np.stack([p0, p1, p1, p3], axis=1)
        if mixed:
            coins = 0.25 + 0.5 * coins
        return coins

    def mu_b(self, points: np.ndarray) -> np.ndarray:
        return self._mu(self._symbols(self._coins(np.asarray(points, dtype=float), False)))

    def mu_c(self, points: np.ndarray) -> np.ndarray:
        return self._mu(self._symbols(self._coins(np.asarray(points, dtype=float), True)))

    def mu_pair(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(points, dtype=float)
        return self.mu_b(pts), self.mu_c(pts)

    def classify(self, points: np.ndarray, exact_coords=None) -> np.ndarray:
        """+1 Parrondo, -1 anti-Parrondo, 0 neither, per point.

        A sign decided by less than TIE_TOL in floating point is settled
        by an exact rational evaluation instead: grid centers can land
        exactly on a zero surface, where the <= / < conventions matter.
        exact_coords optionally supplies the intended exact coordinates;
        otherwise the binary values of the floats are used.
        """
        pts = np.asarray(points, dtype=float)
        mu_b, mu_c = self.mu_pair(pts)
        out = np.zeros(len(mu_b), dtype=np.int8)
        out[(mu_b <= 0) & (mu_c > 0)] = 1
        out[(mu_b >= 0) & (mu_c < 0)] = -1
        for i in np.flatnonzero((np.abs(mu_b) < TIE_TOL) | (np.abs(mu_c) < TIE_TOL)):
            if exact_coords is not None:
                coords = exact_coords(int(i))
            else:
                coords = tuple(Fraction(v) for v in pts[i])
            region = classify_point(self.n, coords, exact=True)
            out[i] = {Region.PARRONDO: 1, Region.ANTI_PARRONDO: -1, Region.NEITHER: 0}[region]
        return out

    @property
    def chunk_size(self) -> int:
        return max(256, (1 << 22) // (self.k * self.k))


@lru_cache(maxsize=8)
def _evaluator(n: int) -> MeanEvaluator:
    return MeanEvaluator(n)


def classify_point(n: int, point: CubePoint | tuple, exact: bool = False) -> Region:
    """Classify one interior cube point by the signs of mu_B and mu_C."""
    point = CubePoint(*_coords(point))
    if not point.interior:
        raise ValueError(f"{point} is not interior; boundary points need explicit handling")
    if exact:
        params = point.as_params()
        mu_b = mean_rate(n, params, exact=True)
        mu_c = mean_mixed(n, params, exact=True)
    else:
        code = _evaluator(n).classify(np.asarray([_coords(point)], dtype=float))[0]
        return {1: Region.PARRONDO, -1: Region.ANTI_PARRONDO, 0: Region.NEITHER}[int(code)]
    if mu_b <= 0 and mu_c > 0:
        return Region.PARRONDO
    if mu_b >= 0 and mu_c < 0:
        return Region.ANTI_PARRONDO
    return Region.NEITHER


def interval_n3(p0, p3) -> ParrondoInterval:
    """Closed-form Parrondo p1-interval on a ring of 3.

    Nonempty exactly when p3 lies strictly between p0 and 1 - p0.
    """
    q0, q3 = 1 - p0, 1 - p3
    if p0 + q3 == 0:
        return ParrondoInterval(None, None, True)
    lower = (q0 + 3 * q3) / (2 * (1 + p0 + q3))
    upper = q3 / (p0 + q3)
    if lower >= upper:
        return ParrondoInterval(None, None, True)
    return ParrondoInterval(lower, upper, False)


def boundary_n4(p0, p3) -> ParrondoInterval:
    """Closed-form Parrondo p1-interval on a ring of 4 (requires p0 + p3 < 1).

    Solves the two quadratic sign conditions; any nonempty interval
    lies inside (1/2, 1].
    """
    p0, p3 = float(p0), float(p3)
    if p0 + p3 >= 1:
        return ParrondoInterval(None, None, True)
    q0, q3 = 1 - p0, 1 - p3
    f = (p0 * (3 * p0 - 2 * p3 - 2 * p0 * p3 + 2 * p3**2) - (3 + p3) * q3) / (2 * (q0 + p3))
    disc_b = (1 + p0) ** 2 * q3**2 + (q0 - p3) * f
    if disc_b >= 0:
        upper = ((1 + p0) * q3 - math.sqrt(disc_b)) / (q0 - p3)
    else:
        upper = 1.0  # the mu_B <= 0 condition holds for every p1
    g = 13 + 8 * p0 - 8 * p3 - 4 * p0 * p3
    h = (
        -48 + 14 * p0 + 30 * p3 + 13 * p0**2 - 8 * p0 * p3
        + 3 * p3**2 - 4 * p0**2 * p3 + 4 * p0 * p3**2
    ) / (1 + q0 + p3)
    disc_c = g**2 + 4 * (q0 - p3) * h
    if disc_c >= 0:
        lower = (g - math.sqrt(disc_c)) / (4 * (q0 - p3))
    else:
        # mu_C keeps one sign in p1; probe the closed form to find which
        from .means import mu_n4_closed

        mid = Params(p0, 0.75, 0.75, p3).mixed()
        if mu_n4_closed(mid) <= 0:
            return ParrondoInterval(None, None, True)
        lower = 0.0
    lower = max(lower, 0.0)
    upper = min(upper, 1.0)
    if lower >= upper:
        return ParrondoInterval(None, None, True)
    return ParrondoInterval(lower, upper, False)


def _bisect(fn, lo: float, hi: float, f_lo: float, tol: float) -> float:
    """Root of a sign-changing scalar function by plain bisection."""
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        val = fn(mid)
        if val == 0.0:
            return mid
        if (val < 0) == (f_lo < 0):
            lo, f_lo = mid, val
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _admissible_side(grid: np.ndarray, values: np.ndarray, fn, tol: float, keep_nonpositive: bool):
    """Interval of p1 where values <= 0 (or > 0), assuming one sign change.

    Returns (lo, hi) floats bounding the admissible set inside [0, 1],
    or None when the set is empty.  Raises NonMonotoneError on several
    sign changes.
    """
    pos = values > 0
    changes = np.flatnonzero(pos[:-1] != pos[1:])
    if len(changes) > 1:
        raise NonMonotoneError(
            f"{len(changes)} sign changes detected on the scan grid; "
            "root isolation assumes a single crossing"
        )
    if len(changes) == 0:
        all_pos = bool(pos[0])
        if keep_nonpositive:
            return None if all_pos else (0.0, 1.0)
        return (0.0, 1.0) if all_pos else None
    i = changes[0]
    root = _bisect(fn, float(grid[i]), float(grid[i + 1]), float(values[i]), tol)
    if keep_nonpositive:
        # nonpositive side of the crossing, closed at the root
        return (0.0, root) if not pos[0] else (root, 1.0)
    return (root, 1.0) if not pos[0] else (0.0, root)


def parrondo_interval(n: int, p0, p3, tol: float = 1e-9, grid: int = 1024) -> ParrondoInterval:
    """Parrondo p1-interval at fixed (p0, p3) by sign scan and bisection.

    Scans mu_B and mu_C on a uniform interior grid, isolates the single
    crossing of each, and intersects {mu_B <= 0} with {mu_C > 0}.
    """
    p0f, p3f = float(p0), float(p3)
    ev = _evaluator(n)
    p1s = (np.arange(grid) + 0.5) / grid
    pts = np.column_stack([np.full(grid, p0f), p1s, np.full(grid, p3f)])
    mu_b, mu_c = ev.mu_pair(pts)

    def at_b(p1: float) -> float:
        return float(ev.mu_b([[p0f, p1, p3f]])[0])

    def at_c(p1: float) -> float:
        return float(ev.mu_c([[p0f, p1, p3f]])[0])

    side_b = _admissible_side(p1s, mu_b, at_b, tol, keep_nonpositive=True)
    side_c = _admissible_side(p1s, mu_c, at_c, tol, keep_nonpositive=False)
    if side_b is None or side_c is None:
        return ParrondoInterval(None, None, True)
    lower = max(side_b[0], side_c[0])
    upper = min(side_b[1], side_c[1])
    if lower >= upper:
        return ParrondoInterval(None, None, True)
    return ParrondoInterval(lower, upper, False)


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("PARRONDO_THREADS", "1"))
    return max(1, threads)


def _scan_chunks(ev: MeanEvaluator, chunks, threads: int) -> int:
    def work(chunk) -> int:
        points, exact_coords = chunk
        return int(np.count_nonzero(ev.classify(points, exact_coords) == 1))

    if threads <= 1:
        return sum(work(c) for c in chunks)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(work, chunks))


def _riemann_chunk(grid: int, start: int, stop: int):
    idx = np.arange(start, stop)
    i = idx // (grid * grid)
    j = (idx // grid) % grid
    k = idx % grid
    points = np.column_stack([(2 * i + 1), (2 * j + 1), (2 * k + 1)]) / (2.0 * grid)

    def exact_coords(local: int) -> tuple:
        return (
            Fraction(int(2 * i[local] + 1), 2 * grid),
            Fraction(int(2 * j[local] + 1), 2 * grid),
            Fraction(int(2 * k[local] + 1), 2 * grid),
        )

    return points, exact_coords


def volume_riemann(n: int, grid: int = 100, threads: int | None = None) -> RegionEstimate:
    """Fraction of midpoint-rule cube centers (2i+1)/(2*grid) showing the effect."""
    if grid < 2:
        raise ValueError("grid must be at least 2")
    ev = _evaluator(n)
    total = grid**3
    step = ev.chunk_size
    chunks = (_riemann_chunk(grid, s, min(s + step, total)) for s in range(0, total, step))
    count = _scan_chunks(ev, chunks, _threads(threads))
    return RegionEstimate(n=n, method="riemann", volume=count / total, points=total)


def volume_monte_carlo(
    n: int, samples: int = 1_000_000, seed: int = 0, threads: int | None = None
) -> RegionEstimate:
    """Uniform sampling of the cube with a counter-based generator.

    Reproducible for a given seed; the standard error of the hit
    fraction v is sqrt(v*(1-v)/samples).
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    ev = _evaluator(n)
    rng = np.random.Generator(np.random.Philox(key=seed))
    points = rng.random((samples, 3))
    step = ev.chunk_size
    chunks = ((points[s: s + step], None) for s in range(0, samples, step))
    count = _scan_chunks(ev, chunks, _threads(threads))
    vol = count / samples
    return RegionEstimate(
        n=n,
        method="monte-carlo",
        volume=vol,
        points=samples,
        stderr=math.sqrt(vol * (1 - vol) / samples),
        seed=seed,
    )


def exact_volume_n3() -> float:
    """Exact volume of the ring-of-3 Parrondo region: (9 ln 9 - 8 ln 8 - 3)/8."""
    return (9 * math.log(9) - 8 * math.log(8) - 3) / 8


def surface_grid(n: int, grid: int, which: str = "muB") -> np.ndarray:
    """Profit-rate samples over the cube for external plotting.

    Returns a (grid**3, 4) array of rows (p0, p3, p1, value) at the
    cube centers (2i+1)/(2*grid), ordered p0-major, then p3, then p1.
    which selects the sampled rate: "muB" or "muC".
    """
    if which not in ("muB", "muC"):
        raise ValueError("which must be muB or muC")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    ev = _evaluator(n)
    total = grid**3
    out = np.empty((total, 4))
    step = ev.chunk_size
    for s in range(0, total, step):
        stop = min(s + step, total)
        idx = np.arange(s, stop)
        i = idx // (grid * grid)
        j = (idx // grid) % grid
        k = idx % grid
        p0 = (2 * i + 1) / (2.0 * grid)
        p3 = (2 * j + 1) / (2.0 * grid)
        p1 = (2 * k + 1) / (2.0 * grid)
        pts = np.column_stack([p0, p1, p3])
        vals = ev.mu_b(pts) if which == "muB" else ev.mu_c(pts)
        out[s:stop, 0] = p0
        out[s:stop, 1] = p3
        out[s:stop, 2] = p1
        out[s:stop, 3] = vals
    return out
