"""Stationary distributions of the full and reduced chains.

The linear system is pi @ (P - I) = 0 with one redundant equation
replaced by sum(pi) = 1.  Because the rows of P sum to one, every
column of (P - I) is a linear combination of the others, so replacing
any single equation keeps the system nonsingular whenever the chain
has a unique stationary distribution.  Chains with two absorbing
components (both extreme states absorbing) make the system singular,
which is reported rather than silently mis-solved.

Both arithmetic modes solve the same system: exact mode with
fraction-free elimination over the rationals, float mode with LAPACK
plus one step of iterative refinement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chain import Params, ReducedChain
from .exact import SingularSystemError, solve_exact
from .states import EquivClass

FLOAT_RESIDUAL_TOL = 1e-12


class ReducibleChainError(ValueError):
    """The chain has no unique stationary distribution."""


@dataclass
class Distribution:
    """Probability weights indexed by full state or by equivalence class."""

    weights: "np.ndarray | tuple[Fraction, ...]"
    kind: str  # "state" or "class"
    exact: bool

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int):
        return self.weights[i]

    def as_floats(self) -> np.ndarray:
        if self.exact:
            return np.asarray([float(w) for w in self.weights])
        return np.asarray(self.weights)


def _exact_rows(matrix) -> list[dict[int, Fraction]]:
    """Normalize an exact matrix argument to sparse {col: value} rows."""
    if isinstance(matrix, list) and matrix and isinstance(matrix[0], dict):
        return matrix
    return [
        {j: Fraction(v) for j, v in enumerate(row) if v}
        for row in matrix
    ]


def _solve_exact_stationary(rows: list[dict[int, Fraction]]) -> tuple[Fraction, ...]:
    k = len(rows)
    cols: list[dict[int, Fraction]] = [{} for _ in range(k)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    system: list[list[Fraction | int]] = []
    rhs: list[int] = []
    system.append([1] * k)
    rhs.append(1)
    for j in range(1, k):
        col = cols[j]
        system.append([col.get(i, 0) - (1 if i == j else 0) for i in range(k)])
        rhs.append(0)
    try:
        pi = solve_exact(system, rhs)
    except SingularSystemError as e:
        raise ReducibleChainError(
            "no unique stationary distribution (multiple recurrent classes?)"
        ) from e
    # exact sanity: pi really is stationary and nonnegative
    for j in range(k):
        if sum(pi[i] * v for i, v in cols[j].items()) != pi[j]:
            raise ReducibleChainError("exact solution fails the stationarity check")
    if any(w < 0 for w in pi):
        raise ReducibleChainError("exact solution has negative weights")
    return tuple(pi)


def _solve_float_stationary(matrix) -> np.ndarray:
    sparse = hasattr(matrix, "tocsc")
    k = matrix.shape[0]
    if sparse:
        from scipy.sparse import identity as sp_identity
        from scipy.sparse.linalg import spsolve

        a = (matrix.T - sp_identity(k, format="csr")).tolil()
        a[0, :] = 1.0
        a = a.tocsc()
        b = np.zeros(k)
        b[0] = 1.0
        pi = spsolve(a, b)
        pi = pi + spsolve(a, b - a @ pi)
    else:
        a = matrix.T - np.eye(k)
        a[0, :] = 1.0
        b = np.zeros(k)
        b[0] = 1.0
        try:
            pi = np.linalg.solve(a, b)
            pi = pi + np.linalg.solve(a, b - a @ pi)
        except np.linalg.LinAlgError as e:
            raise ReducibleChainError(
                "no unique stationary distribution (multiple recurrent classes?)"
            ) from e
    if not np.all(np.isfinite(pi)):
        raise ReducibleChainError("stationary solve produced non-finite weights")
    if np.any(pi < -1e-9):
        raise ReducibleChainError("stationary solve produced negative weights")
    # weights indistinguishable from zero at double precision are zero
    # (an unreachable class leaves rounding dust of order 1e-16)
    pi = np.where(np.abs(pi) < 1e-13 * pi.max(), 0.0, pi)
    pi = pi / pi.sum()
    residual = np.max(np.abs(pi @ matrix - pi))
    if residual > FLOAT_RESIDUAL_TOL:
        raise ReducibleChainError(f"stationarity residual {residual:.2e} too large")
    return pi


def solve_stationary(matrix, exact: bool | None = None, exclude: tuple[int, ...] = ()) -> Distribution:
    """Unique stationary distribution of a row-stochastic matrix.

    matrix: ndarray or scipy sparse (float mode), or a list of
    {col: Fraction} rows / list of Fraction lists (exact mode).
    exclude: indices known to be unreachable; they are removed before
    solving and reinserted with weight zero.
    """
    if exact is None:
        exact = not (hasattr(matrix, "shape"))
    if exclude:
        keep = [i for i in range(_size(matrix)) if i not in set(exclude)]
        sub = _submatrix(matrix, keep, exact)
        inner = solve_stationary(sub, exact=exact)
        if exact:
            full = [Fraction(0)] * _size(matrix)
            for pos, i in enumerate(keep):
                full[i] = inner.weights[pos]
            return Distribution(tuple(full), inner.kind, True)
        full_w = np.zeros(_size(matrix))
        full_w[keep] = inner.weights
        return Distribution(full_w, inner.kind, False)
    if exact:
        return Distribution(_solve_exact_stationary(_exact_rows(matrix)), "class", True)
    return Distribution(_solve_float_stationary(matrix), "class", False)


def _size(matrix) -> int:
    return matrix.shape[0] if hasattr(matrix, "shape") else len(matrix)


def _submatrix(matrix, keep: list[int], exact: bool):
    if exact:
        rows = _exact_rows(matrix)
        pos = {i: p for p, i in enumerate(keep)}
        return [
            {pos[j]: v for j, v in rows[i].items() if j in pos}
            for i in keep
        ]
    if hasattr(matrix, "tocsr"):
        return matrix.tocsr()[keep, :][:, keep]
    return matrix[np.ix_(keep, keep)]


def stationary_distribution(chain: ReducedChain, params: Params, exact: bool = False) -> Distribution:
    """Stationary distribution of a reduced chain at numeric parameters."""
    return solve_stationary(chain.transition_matrix(params, exact=exact), exact=exact)


def closed_form_n3(params: Params) -> tuple:
    """Unnormalized invariant measure of the four-class ring-of-3 chain.

    Entries follow class order by winner count (0, 1, 2, 3) and already
    include orbit multiplicities: (rho0, 3*rho1, 3*rho2, rho3).
    """
    p0, p1, p2, p3 = params.p0, params.p1, params.p2, params.p3
    q0, q1, q2, q3 = 1 - p0, 1 - p1, 1 - p2, 1 - p3
    rho0 = q0 * (q1 + q2) * q3
    rho1 = p0 * (q1 + q2) * q3
    rho2 = p0 * (p1 + p2) * q3
    rho3 = p0 * (p1 + p2) * p3
    return (rho0, 3 * rho1, 3 * rho2, rho3)


def _n4_terms(params: Params):
    p0, p1, p2, p3 = params.p0, params.p1, params.p2, params.p3
    q0, q1, q2, q3 = 1 - p0, 1 - p1, 1 - p2, 1 - p3
    return p0, p1, p2, p3, q0, q1, q2, q3


def closed_form_n4_rho2_forms(params: Params) -> tuple:
    """The two algebraically equal expressions for the weight of class 2."""
    p0, p1, p2, p3, q0, q1, q2, q3 = _n4_terms(params)
    a = p0 * (2 * q0 * q3 + (p1 + p2) * (q1 + q2) * (q0 + p3) + (q1 + q2) * (p3 - q0)) * q3
    b = p0 * (2 * p0 * p3 + (p1 + p2) * (q1 + q2) * (q0 + p3) + (p1 + p2) * (q0 - p3)) * q3
    return a, b


def closed_form_n4(params: Params) -> tuple:
    """Unnormalized invariant measure of the six-class ring-of-4 chain.

    Class order 0, 1, 2, 2', 3, 4 with orbit multiplicities applied:
    (rho0, 4*rho1, 4*rho2, 2*rho2', 4*rho3, rho4).
    """
    p0, p1, p2, p3, q0, q1, q2, q3 = _n4_terms(params)
    rho0 = q0 * (2 * q0 * q3 + (q1 + q2) ** 2 * (q0 + p3)) * q3
    rho1 = p0 * (2 * q0 * q3 + (q1 + q2) ** 2 * (q0 + p3)) * q3
    rho2 = closed_form_n4_rho2_forms(params)[0]
    rho2p = p0 * (2 * p0 * q3 + (p1 + p2) ** 2 * q3 + (q1 + q2) ** 2 * p0) * q3
    rho3 = p0 * (2 * p0 * p3 + (p1 + p2) ** 2 * (q0 + p3)) * q3
    rho4 = p0 * (2 * p0 * p3 + (p1 + p2) ** 2 * (q0 + p3)) * p3
    return (rho0, 4 * rho1, 4 * rho2, 2 * rho2p, 4 * rho3, rho4)


def normalize_measure(measure) -> tuple:
    total = sum(measure)
    if isinstance(total, Fraction) or isinstance(total, int):
        return tuple(Fraction(m) / total for m in measure)
    return tuple(m / total for m in measure)


def lift_to_full(pi_bar: Distribution, classes: tuple[EquivClass, ...]) -> Distribution:
    """Spread class weights uniformly over orbit members: pi(x) = pi([x]) / |[x]|."""
    n = classes[0].n
    size = 1 << n
    if pi_bar.exact:
        full = [Fraction(0)] * size
        for cls, w in zip(classes, pi_bar.weights):
            share = Fraction(w) / cls.orbit_size
            for x in cls.members:
                full[x] = share
        return Distribution(tuple(full), "state", True)
    full_w = np.zeros(size)
    for cls, w in zip(classes, pi_bar.weights):
        full_w[list(cls.members)] = w / cls.orbit_size
    return Distribution(full_w, "state", False)


def check_detailed_balance(pi: Distribution, matrix, tol: float = 1e-12) -> bool:
    """True when pi_i * P_ij == pi_j * P_ji for every pair (reversibility)."""
    if pi.exact:
        rows = _exact_rows(matrix)
        flux: dict[tuple[int, int], Fraction] = {}
        for i, row in enumerate(rows):
            for j, v in row.items():
                if i != j:
                    flux[(i, j)] = pi.weights[i] * v
        for (i, j), f in flux.items():
            if flux.get((j, i), Fraction(0)) != f:
                return False
        return True
    p = np.asarray(matrix)
    flow = pi.weights[:, None] * p
    return bool(np.max(np.abs(flow - flow.T)) <= tol)
