"""The five coefficient inequalities behind the approximation factor, a min-alpha
search over them, and the coefficient sign table."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

LN4 = 1.38629436112  # ln 4 to 12 significant digits
PUBLISHED_ALPHA = 1.7994
PUBLISHED_BETA = 1.252
PUBLISHED_WEIGHTS = (0.385, 0.187, 0.428)

COLUMNS = ("r_A", "b1", "b2", "r_C", "r_D")
ROWS = ("GW", "ST", "IT")

# published sign pattern; None marks the undetermined ST x r_C cell
TABLE2 = (
    ("+", "+", "-", "-", "-"),
    ("-", "+", "+", None, "+"),
    ("0", "-", "+", "0", "-"),
)

_FEAS_TOL = 1e-12


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    p: float
    alpha: float
    beta: float
    w_gw: float
    w_st: float
    w_it: float

    def validate(self) -> None:
        w = (self.w_gw, self.w_st, self.w_it)
        if min(w) < 0:
            raise ConstraintError("weights must be nonnegative")
        if not math.isclose(sum(w), 1.0, abs_tol=1e-9):
            raise ConstraintError(f"weights must sum to 1, got {sum(w)}")
        if not 1 <= self.p <= self.alpha <= 2:
            raise ConstraintError(f"need 1 <= p <= alpha <= 2, got p={self.p}, alpha={self.alpha}")
        if not 0 < self.beta <= 2:
            raise ConstraintError(f"need 0 < beta <= 2, got {self.beta}")

    @property
    def weights(self) -> tuple:
        return (self.w_gw, self.w_st, self.w_it)


def coefficient_matrix(p: float, alpha: float, beta: float) -> np.ndarray:
    """Rows = (GW, ST, IT), columns = (r_A, b1, b2, r_C, r_D)."""
    a, b = alpha, beta
    return np.array([
        [2 - a, 2 - a, 2 - 2 * a, 2 - a * b, 2 - a * b],
        [p - a, p + b - a, 2 * p + b - 2 * a, 2 * p - a * b, 2 * p + b - a * b],
        [0.0, b - a, b, 0.0, b - a * b],
    ])


def feasible(cs: ConstraintSystem) -> tuple:
    """Signed left-hand sides of the five inequalities; the system holds iff all are <= 0."""
    cs.validate()
    m = coefficient_matrix(cs.p, cs.alpha, cs.beta)
    return tuple(float(x) for x in np.asarray(cs.weights) @ m)


@dataclass(frozen=True)
class AlphaWitness:
    alpha: float
    beta: float
    w_gw: float
    w_st: float
    w_it: float
    p: float

    def system(self) -> ConstraintSystem:
        return ConstraintSystem(self.p, self.alpha, self.beta, self.w_gw, self.w_st, self.w_it)


def _halfplanes(p: float, alpha: float, betas: np.ndarray):
    """Constraints A @ (w_gw, w_st) <= c with w_it = 1 - w_gw - w_st, one row set per beta."""
    nb = len(betas)
    coef = np.empty((nb, 5, 3))
    for i, b in enumerate(betas):
        coef[i] = coefficient_matrix(p, alpha, b).T  # (5 inequalities, 3 weights)
    A = np.empty((nb, 8, 2))
    c = np.empty((nb, 8))
    A[:, :5, 0] = coef[:, :, 0] - coef[:, :, 2]
    A[:, :5, 1] = coef[:, :, 1] - coef[:, :, 2]
    c[:, :5] = -coef[:, :, 2]
    A[:, 5] = (-1.0, 0.0)
    A[:, 6] = (0.0, -1.0)
    A[:, 7] = (1.0, 1.0)
    c[:, 5:7] = 0.0
    c[:, 7] = 1.0
    return A, c


_PAIRS = list(combinations(range(8), 2))


def _witness_for_alpha(p: float, alpha: float, betas: np.ndarray):
    """First beta in ``betas`` with a feasible weight vector, found by vertex enumeration.

    The feasible set lies inside the weight simplex, so it is empty or has a vertex
    at the intersection of two tight constraints.
    """
    A, c = _halfplanes(p, alpha, betas)
    best = None
    for i, j in _PAIRS:
        m = np.stack([A[:, i], A[:, j]], axis=1)  # (nb, 2, 2)
        rhs = np.stack([c[:, i], c[:, j]], axis=1)
        det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
        ok = np.abs(det) > 1e-14
        safe = np.where(ok, det, 1.0)
        x = (rhs[:, 0] * m[:, 1, 1] - rhs[:, 1] * m[:, 0, 1]) / safe
        y = (m[:, 0, 0] * rhs[:, 1] - m[:, 1, 0] * rhs[:, 0]) / safe
        slack = np.einsum("bkj,bj->bk", A, np.stack([x, y], axis=1)) - c
        good = ok & (slack.max(axis=1) <= _FEAS_TOL)
        if good.any():
            k = int(np.argmax(good))
            if best is None or k < best[0]:
                best = (k, float(x[k]), float(y[k]))
    if best is None:
        return None
    k, x, y = best
    x, y = max(x, 0.0) + 0.0, max(y, 0.0) + 0.0
    return float(betas[k]), x, y, max(0.0, 1.0 - x - y)


def beta_grid(step: float = 1e-3) -> np.ndarray:
    n = int(round(2.0 / step))
    return np.linspace(2.0 / n, 2.0, n)


def is_feasible_alpha(p: float, alpha: float, betas: np.ndarray | None = None) -> bool:
    return _witness_for_alpha(p, alpha, beta_grid() if betas is None else betas) is not None


def min_alpha(p: float, tolerance: float = 1e-4, step: float = 1e-3) -> AlphaWitness:
    """Smallest alpha in [p, 2] (to within ``tolerance``) for which some beta on the
    grid and some weights satisfy all five inequalities.

    Feasibility is monotone in alpha (every coefficient is nonincreasing in
    alpha), so bisection applies. alpha = 2 is always feasible via w_gw = 1.
    """
    if not 1 <= p <= 2:
        raise ConstraintError(f"p must lie in [1, 2], got {p}")
    if tolerance <= 0:
        raise ConstraintError("tolerance must be positive")
    betas = beta_grid(step)
    lo, hi = float(p), 2.0
    wit = _witness_for_alpha(p, hi, betas)
    if wit is None:
        # grid may miss beta values where only the GW corner works; beta = 2/alpha = 1 always does
        wit = (1.0, 1.0, 0.0, 0.0)
    if _witness_for_alpha(p, lo, betas) is not None:
        hi = lo
        wit = _witness_for_alpha(p, lo, betas)
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        w = _witness_for_alpha(p, mid, betas)
        if w is None:
            lo = mid
        else:
            hi, wit = mid, w
    beta, x, y, z = wit
    return AlphaWitness(alpha=hi, beta=beta, w_gw=x, w_st=y, w_it=z, p=float(p))


# ---------------------------------------------------------------- sign table

def _sign(x: float, tol: float = 1e-12) -> str:
    if x > tol:
        return "+"
    if x < -tol:
        return "-"
    return "0"


def sign_table(cs: ConstraintSystem) -> list[list[str]]:
    """Signs of the 15 per-solution coefficients, rows GW/ST/IT.

    Cells the published table leaves undetermined are reported as ``"?"``.
    Requires 1 < p < alpha < 1.8 and 2/alpha <= beta <= alpha.
    """
    p, a, b = cs.p, cs.alpha, cs.beta
    if not 1 < p < a < 1.8:
        raise ConstraintError(f"need 1 < p < alpha < 1.8, got p={p}, alpha={a}")
    if not 2 / a <= b <= a:
        raise ConstraintError(f"need 2/alpha <= beta <= alpha, got beta={b}")
    m = coefficient_matrix(p, a, b)
    out = []
    for r in range(3):
        out.append(["?" if TABLE2[r][k] is None else _sign(m[r, k]) for k in range(5)])
    return out


def raw_signs(cs: ConstraintSystem) -> list[list[str]]:
    m = coefficient_matrix(cs.p, cs.alpha, cs.beta)
    return [[_sign(m[r, k]) for k in range(5)] for r in range(3)]


def sign_mismatches(table: list[list[str]]) -> list[str]:
    """Cells where ``table`` disagrees with the published fixed entries."""
    out = []
    for r in range(3):
        for k in range(5):
            want = TABLE2[r][k]
            if want is not None and table[r][k] != want:
                out.append(f"{ROWS[r]} x {COLUMNS[k]}: got {table[r][k]}, expected {want}")
    return out


def published_system(p: float = LN4) -> ConstraintSystem:
    return ConstraintSystem(p, PUBLISHED_ALPHA, PUBLISHED_BETA, *PUBLISHED_WEIGHTS)
