"""Independent spectral oracle.

H = -1/2 d^2/dx^2 + V is discretized with the 3-point stencil and Dirichlet
walls; the lowest eigenvalues come from Sturm-sequence bisection.  Nothing
here looks at superpotentials or transformation data, only at V.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import linear_sum_assignment

from .grid import GridFunction

BISECT_TOL = 1e-10
EDGE_RTOL = 1e-6


@dataclass(frozen=True)
class Tridiagonal:
    diag: np.ndarray
    off: np.ndarray

    @property
    def n(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.n)
        r[:-1] += np.abs(self.off)
        r[1:] += np.abs(self.off)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))


def discretize(v, h: float | None = None) -> Tridiagonal:
    """Diagonal 1/h^2 + V(x_i), off-diagonal -1/(2h^2)."""
    if isinstance(v, GridFunction):
        h = v.grid.h
        v = v.values
    v = np.asarray(v, dtype=float)
    if h is None:
        raise ValueError("spacing h is required for raw arrays")
    if not np.all(np.isfinite(v)):
        raise ValueError("potential must be finite")
    return Tridiagonal(1.0 / h**2 + v, np.full(len(v) - 1, -0.5 / h**2))


def sturm_count(op: Tridiagonal, lam) -> np.ndarray:
    """Number of eigenvalues strictly below each ``lam`` (vectorized)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    off2 = op.off**2
    tiny = np.finfo(float).tiny ** 0.5
    count = np.zeros(lam.shape, dtype=int)
    d = op.diag[0] - lam
    d[d == 0.0] = -tiny
    count += d < 0
    for a, b2 in zip(op.diag[1:], off2):
        d = (a - lam) - b2 / d
        d[d == 0.0] = -tiny
        count += d < 0
    return count


def lowest_eigenvalues(op: Tridiagonal, m: int, tol: float = BISECT_TOL) -> list[float]:
    """The m smallest eigenvalues, each bisected to ``tol``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    m = min(m, op.n)
    lo_all, hi_all = op.gershgorin()
    # shrink the upper bracket to just above the m-th eigenvalue
    hi = lo_all + 1.0
    while hi < hi_all and sturm_count(op, hi)[0] < m:
        hi = lo_all + 2.0 * (hi - lo_all)
    hi = min(hi, hi_all)
    lo = np.full(m, lo_all)
    up = np.full(m, hi)
    idx = np.arange(m)
    while np.any(up - lo > tol):
        mid = 0.5 * (lo + up)
        c = sturm_count(op, mid)
        below = c > idx
        up = np.where(below, mid, up)
        lo = np.where(below, lo, mid)
    return list(0.5 * (lo + up))


def eigenvector(op: Tridiagonal, lam: float, iters: int = 3) -> np.ndarray:
    """Inverse iteration at a converged eigenvalue."""
    shift = lam - 1e-9 * max(1.0, abs(lam))
    ab = np.zeros((3, op.n))
    ab[0, 1:] = op.off
    ab[1] = op.diag - shift
    ab[2, :-1] = op.off
    vec = np.ones(op.n) / np.sqrt(op.n)
    for _ in range(iters):
        vec = solve_banded((1, 1), ab, vec)
        vec /= np.linalg.norm(vec)
    return vec


def edge_untrusted(op: Tridiagonal, lam: float, rtol: float = EDGE_RTOL) -> bool:
    """True when the eigenvector has not decayed at the box walls."""
    vec = np.abs(eigenvector(op, lam))
    return bool(max(vec[0], vec[-1]) > rtol * vec.max())


@dataclass(frozen=True)
class SpectrumReport:
    computed: list[float]
    expected: list[float]
    abs_errors: list[float]
    tol: float
    passed: bool
    matched: list[float] = field(default_factory=list)
    untrusted: list[bool] = field(default_factory=list)
    unexpected: list[float] = field(default_factory=list)

    def table(self) -> str:
        lines = [f"{'index':>5}  {'expected':>14}  {'computed':>16}  {'abs_error':>10}"]
        for i, (e, c, err) in enumerate(zip(self.expected, self.matched, self.abs_errors)):
            lines.append(f"{i:>5}  {e:>14.8f}  {c:>16.10f}  {err:>10.2e}")
        for u in self.unexpected:
            lines.append(f"{'-':>5}  {'(none)':>14}  {u:>16.10f}  {'unexpected':>10}")
        lines.append(f"tol={self.tol:g}  {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        rows = ["index,expected,computed,abs_error"]
        rows += [f"{i},{e!r},{c!r},{err!r}"
                 for i, (e, c, err) in enumerate(zip(self.expected, self.matched, self.abs_errors))]
        return "\n".join(rows) + "\n"


def spectrum_report(v: GridFunction, expected, tol: float, extra: int = 2) -> SpectrumReport:
    """Compare the lowest levels of -d^2/2 + V with ``expected``.

    Levels are paired by an optimal one-to-one assignment.  A computed
    level below the highest expected one that pairs with nothing also
    fails the report, so a spurious extra bound state cannot hide.
    """
    expected = [float(e) for e in expected]
    if not expected or any(b < a for a, b in zip(expected, expected[1:])):
        raise ValueError("expected levels must be a non-empty ascending list")
    op = discretize(v)
    comp = lowest_eigenvalues(op, len(expected) + extra)
    cost = np.abs(np.subtract.outer(expected, comp))
    rows, cols = linear_sum_assignment(cost)
    matched = [comp[c] for c in cols]
    errors = [float(cost[r, c]) for r, c in zip(rows, cols)]
    used = set(cols.tolist())
    unexpected = [c for j, c in enumerate(comp)
                  if j not in used and c < expected[-1] + tol]
    untrusted = [edge_untrusted(op, c) for c in matched]
    passed = all(e <= tol for e in errors) and not unexpected
    return SpectrumReport(comp, expected, errors, tol, passed, matched, untrusted, unexpected)
