"""Oscillator eigenstates and the general seed solution.

Units are hbar = m = omega = 1 and H = -1/2 d^2/dx^2 + V with V0 = x^2/2.
Every solution is carried as a (value, derivative) pair; second derivatives
come from the Schrodinger equation itself, never from differencing twice.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, replace

import mpmath
import numpy as np

from . import specfun
from .errors import DomainTooNarrow, PoleError, PrecisionLoss
from .grid import Grid, GridFunction, derivative, trapezoid_norm

KINDS = ("general_kummer", "physical_eigenstate")
# Digits of cancellation accepted from the double-precision seed path.
_SEED_LOSS = 1e3
_DEFAULT_GRID = Grid(-8.0, 8.0, 3201)


@dataclass(frozen=True)
class SeedSolution:
    epsilon: complex
    nu: complex
    u: GridFunction
    du: GridFunction
    kind: str = "general_kummer"
    odd_only: bool = False

    @property
    def grid(self) -> Grid:
        return self.u.grid

    @property
    def x(self) -> np.ndarray:
        return self.u.grid.x

    @property
    def is_real(self) -> bool:
        return not self.u.is_complex

    def d2u(self, v: np.ndarray | None = None) -> np.ndarray:
        """u'' reconstructed from the ODE, u'' = 2(V - eps) u."""
        v = oscillator_values(self.x) if v is None else v
        return 2.0 * (v - self.epsilon) * self.u.values

    def alpha(self) -> np.ndarray:
        return self.du.values / self.u.values

    def ode_residual(self) -> float:
        """max |-u''/2 + (V0 - eps) u| / max|u| with u'' differenced from u'.

        The derivative is a 4th-order stencil on the carried u', so this
        is an independent check of u and u' rather than of the ODE identity.
        """
        d2 = derivative(self.du.values, self.grid.h)
        res = -0.5 * d2 + (oscillator_values(self.x) - self.epsilon) * self.u.values
        return float(np.max(np.abs(res[2:-2])) / np.max(np.abs(self.u.values)))

    def manifest(self) -> dict[str, object]:
        return {"epsilon": self.epsilon, "nu": self.nu, "kind": self.kind}


@dataclass(frozen=True)
class WaveFunction:
    energy: float
    psi: GridFunction
    dpsi: GridFunction
    normalized: bool = True

    @property
    def grid(self) -> Grid:
        return self.psi.grid

    @property
    def x(self) -> np.ndarray:
        return self.psi.grid.x

    def norm(self) -> float:
        return trapezoid_norm(self.psi.values, self.grid.h)

    def scaled(self, c) -> "WaveFunction":
        return WaveFunction(self.energy, self.psi.with_values(c * self.psi.values),
                            self.dpsi.with_values(c * self.dpsi.values), False)

    def normalize(self, fix_sign: bool = True) -> "WaveFunction":
        """Unit trapezoid norm, positive at the largest-|psi| sample."""
        nrm = self.norm()
        if nrm == 0.0:
            raise ZeroDivisionError("cannot normalize the zero function")
        c = 1.0 / nrm
        if fix_sign:
            peak = self.psi.values[np.argmax(np.abs(self.psi.values))]
            c *= np.conj(peak) / abs(peak)
            if not np.iscomplexobj(self.psi.values):
                c = float(np.real(c))
        return replace(self.scaled(c), normalized=True)


def oscillator_values(x) -> np.ndarray:
    return 0.5 * np.asarray(x) ** 2


def oscillator_potential(grid: Grid) -> GridFunction:
    return GridFunction(grid, oscillator_values(grid.x), {"kind": "V0"})


def _hermite_functions(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """psi_n and psi_{n-1} by the normalized recurrence (no overflow)."""
    prev = np.zeros_like(x)
    cur = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    for m in range(n):
        prev, cur = cur, math.sqrt(2.0 / (m + 1)) * x * cur - math.sqrt(m / (m + 1)) * prev
    return cur, prev


def oscillator_eigenstate(n: int, grid: Grid, edge_tol: float = 1e-10) -> WaveFunction:
    """Normalized psi_n with the usual Hermite sign convention."""
    if not 0 <= n <= 100:
        raise ValueError("n must lie in 0..100")
    x = grid.x
    psi, prev = _hermite_functions(n, x)
    # H_n' = 2n H_{n-1}  <=>  psi_n' = sqrt(2n) psi_{n-1} - x psi_n
    dpsi = math.sqrt(2.0 * n) * prev - x * psi
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge >= edge_tol:
        raise DomainTooNarrow(f"psi_{n} is {edge:.2e} at the grid edge")
    meta = {"energy": n + 0.5, "n": n}
    return WaveFunction(n + 0.5, GridFunction(grid, psi, meta), GridFunction(grid, dpsi, meta))


def eigenstate_seed(n: int, grid: Grid) -> SeedSolution:
    """The physical eigenstate psi_n used as a transformation function."""
    wf = oscillator_eigenstate(n, grid)
    return SeedSolution(n + 0.5, 0.0, wf.psi, wf.dpsi, kind="physical_eigenstate")


# --------------------------------------------------------------------------
# general solution


def _cmul(p, q):
    return p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0]


def _sdiv(num: int, den: int) -> int:
    if den < 0:
        num, den = -num, -den
    return specfun._rdiv(num, den)


def _high_precision_coefficient(a: complex, nu: complex, prec: int, odd_only: bool):
    """2 nu Gamma(a+1/2)/Gamma(a) (or 2 for the odd branch) scaled by 2**prec."""
    if odd_only:
        return 2 << prec, 0
    with mpmath.workprec(prec + 32):
        am = mpmath.mpc(a.real, a.imag)
        if specfun._is_nonpositive_integer(a):
            return 0, 0
        ratio = mpmath.gamma(am + mpmath.mpf(0.5)) / mpmath.gamma(am)
        c = 2 * mpmath.mpc(nu.real, nu.imag) * ratio * mpmath.mpf(2) ** prec
        return int(mpmath.nint(c.real)), int(mpmath.nint(c.imag))


def _bracket_exact(a: complex, nu: complex, x: float, odd_only: bool, bound: float):
    """Bracket B(x) and B'(x) with exact arithmetic at one point.

    u = e^{-x^2/2} B.  The argument x^2 is formed as an exact dyadic so the
    two Kummer terms cancel consistently.
    """
    kx, [(xn, _)] = specfun.dyadic([x])
    y = (2 * kx, xn * xn, 0)
    prec = 64 + 53 + max(0, math.ceil(math.log2(max(bound, 1.0))))
    while prec <= specfun._MAX_PREC_BITS:
        s1r, s1i, d1r, d1i, n1, _ = specfun.fixed_series([a], [0.5], y, prec)
        s2r, s2i, d2r, d2i, n2, _ = specfun.fixed_series([a + 0.5], [1.5], y, prec)
        c = _high_precision_coefficient(a, nu, prec, odd_only)
        # x * C * M2  and  C * (M2 + 2 y M2')
        cm2 = _cmul(c, (s2r, s2i))
        t2 = ((cm2[0] * xn) >> (prec + kx), (cm2[1] * xn) >> (prec + kx))
        cd = _cmul(c, (s2r + 2 * d2r, s2i + 2 * d2i))
        t2d = (cd[0] >> prec, cd[1] >> prec)
        if odd_only:
            br, bi = t2
            dbr, dbi = t2d
        else:
            br, bi = s1r + t2[0], s1i + t2[1]
            # 2 x M1'(y) = 2 (y M1'(y)) / x
            dbr = _sdiv(2 * d1r << kx, xn) if xn else 0
            dbi = _sdiv(2 * d1i << kx, xn) if xn else 0
            dbr += t2d[0]
            dbi += t2d[1]
        # rounding of C and the per-term rounding, in units of 2**-prec
        lever = max(1.0, abs(2 * nu * x) if not odd_only else abs(2 * x))
        err_bits = max(specfun._bits(s2r, s2i) - prec + 2 + math.ceil(math.log2(lever + 1)),
                       (n1 + n2).bit_length() + 3)
        err_bits = max(err_bits, specfun._bits(d2r, d2i) - prec + 4 + math.ceil(math.log2(lever + 1)))
        if (specfun._bits(br, bi) - err_bits >= 62
                and (specfun._bits(dbr, dbi) - err_bits >= 62 or (dbr == 0 and dbi == 0))):
            return (specfun._to_complex(br, bi, prec), specfun._to_complex(dbr, dbi, prec))
        prec *= 2
    raise PrecisionLoss(f"seed bracket at x={x} needs more than {specfun._MAX_PREC_BITS} bits")


def general_solution(epsilon: complex, nu: complex, grid: Grid = _DEFAULT_GRID,
                     odd_only: bool = False) -> SeedSolution:
    """Kummer-form solution of -u''/2 + (x^2/2 - eps) u = 0.

    u = e^{-x^2/2} [1F1(a, 1/2; x^2) + 2 nu x G 1F1(a + 1/2, 3/2; x^2)]
    with a = (1 - 2 eps)/4 and G = Gamma(a + 1/2)/Gamma(a), where G = 0 when
    a is a non-positive integer.  ``odd_only`` keeps just the odd branch
    2x 1F1(a + 1/2, 3/2; x^2) e^{-x^2/2}, the nu -> infinity limit up to scale.
    """
    eps = complex(epsilon)
    nu = complex(nu)
    real = eps.imag == 0.0 and nu.imag == 0.0
    if real and eps.real < 0.5 and abs(nu) == 1.0 and not odd_only:
        warnings.warn("|nu| = 1 gives a seed with an asymptotic zero; nodelessness "
                      "is only guaranteed for |nu| < 1", stacklevel=2)
    return _general_solution(eps, nu, grid, bool(odd_only))


@functools.lru_cache(maxsize=64)
def _general_solution(eps: complex, nu: complex, grid: Grid, odd_only: bool) -> SeedSolution:
    real = eps.imag == 0.0 and nu.imag == 0.0
    a = (1.0 - 2.0 * eps) / 4.0
    if odd_only:
        coef = 2.0 + 0j
    elif nu == 0:
        coef = 0j
    else:
        try:
            coef = 2.0 * nu * specfun.gamma_ratio(a)
        except PoleError as exc:
            raise PoleError(f"{exc}; use odd_only=True for the odd eigenstate branch") from None

    x = grid.x
    ax, inverse = np.unique(np.abs(x), return_inverse=True)
    y = ax * ax
    m1, d1, am1, ad1, _ = specfun.series_array([a], [0.5], y, rel_tol=1e-17)
    m2, d2, am2, ad2, _ = specfun.series_array([a + 0.5], [1.5], y, rel_tol=1e-17)
    xs = x
    m1, d1, am1, ad1 = m1[inverse], d1[inverse], am1[inverse], ad1[inverse]
    m2, d2, am2, ad2 = m2[inverse], d2[inverse], am2[inverse], ad2[inverse]

    with np.errstate(divide="ignore", invalid="ignore"):
        dm1_term = np.where(xs != 0.0, 2.0 * d1 / np.where(xs != 0.0, xs, 1.0), 0.0)
        adm1 = np.where(xs != 0.0, 2.0 * ad1 / np.abs(np.where(xs != 0.0, xs, 1.0)), 0.0)
    if odd_only:
        b = coef * xs * m2
        db = coef * (m2 + 2.0 * d2)
        bound_b = abs(coef) * np.abs(xs) * am2
        bound_db = abs(coef) * (am2 + 2.0 * ad2)
    else:
        b = m1 + coef * xs * m2
        db = dm1_term + coef * (m2 + 2.0 * d2)
        bound_b = am1 + abs(coef) * np.abs(xs) * am2
        bound_db = adm1 + abs(coef) * (am2 + 2.0 * ad2)

    with np.errstate(divide="ignore"):
        bad = (bound_b > _SEED_LOSS * np.abs(b)) | (bound_db > _SEED_LOSS * np.abs(db - xs * b))
    bad &= (bound_b > 0)
    if bad.any():
        cache: dict[float, tuple[complex, complex]] = {}
        for i in np.flatnonzero(bad):
            xi = float(xs[i])
            if xi not in cache:
                cache[xi] = _bracket_exact(a, nu, xi, odd_only, float(max(bound_b[i], bound_db[i])))
            b[i], db[i] = cache[xi]

    g = np.exp(-0.5 * xs * xs)
    u = g * b
    du = g * (db - xs * b)
    if real:
        u, du = u.real, du.real
    meta = {"epsilon": eps.real if real else eps, "nu": nu.real if real else nu,
            "kind": "general_kummer"}
    if odd_only:
        meta["branch"] = "odd"
    return SeedSolution(eps.real if eps.imag == 0 else eps, nu.real if nu.imag == 0 else nu,
                        GridFunction(grid, u, meta), GridFunction(grid, du, meta),
                        kind="general_kummer", odd_only=odd_only)


# --------------------------------------------------------------------------
# diagnostics


def count_nodes(f, atol: float | None = None) -> int:
    """Strict sign changes, ignoring samples below ``atol``.

    ``atol`` defaults to 1e-12 max|f|.  Tiny samples take the sign of the
    nearest non-tiny neighbour, which amounts to dropping them.
    """
    vals = np.asarray(f.values if isinstance(f, GridFunction) else f)
    if np.iscomplexobj(vals):
        raise ValueError("node counting needs a real function")
    if atol is None:
        atol = 1e-12 * float(np.max(np.abs(vals)))
    kept = vals[np.abs(vals) > atol]
    kept = kept[kept != 0.0]
    return int(np.count_nonzero(np.signbit(kept[1:]) != np.signbit(kept[:-1])))


def node_positions(values: np.ndarray, x: np.ndarray) -> list[float]:
    """Linear-interpolated zero crossings of a sampled real function."""
    v = np.asarray(values)
    s = np.signbit(v)
    idx = np.flatnonzero((s[1:] != s[:-1]) & (v[1:] != 0) & (v[:-1] != 0))
    idx = np.union1d(idx, np.flatnonzero(v == 0)).astype(int)
    out = []
    for i in idx:
        if v[i] == 0 or i + 1 >= len(v):
            out.append(float(x[i]))
        else:
            out.append(float(x[i] - v[i] * (x[i + 1] - x[i]) / (v[i + 1] - v[i])))
    return out


def seed_nodes(seed: SeedSolution) -> int:
    """Nodes of a seed, read off its exact signs (seeds span huge ranges)."""
    return count_nodes(seed.u.values.real, atol=0.0)


def tail_decay(values: np.ndarray, rtol: float = 1e-6) -> tuple[bool, bool]:
    """Whether |f| has fallen below ``rtol`` of its maximum at each edge."""
    mag = np.abs(np.asarray(values))
    peak = float(mag.max())
    return bool(mag[0] <= rtol * peak), bool(mag[-1] <= rtol * peak)


def wronskian(s1: SeedSolution, s2: SeedSolution) -> np.ndarray:
    return s1.u.values * s2.du.values - s2.u.values * s1.du.values
