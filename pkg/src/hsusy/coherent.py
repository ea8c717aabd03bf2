"""Coherent states of the partner Hamiltonians.

A coherent state is expanded over the isospectral eigenstates psi_n^(k),

    |z> = sum_n c_n |psi_n^(k)>,

with c_n = z c_{n-1} / sqrt(n prod (n - eps - 1/2)(n - eps + 1/2)) for the
nonlinear ladder L_k and c_n = z c_{n-1} / sqrt(n + w) for the linearized
ladder.  Normalizers are 0F_{2k} and 1F1(1, w + 1; r^2) respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import specfun
from .errors import NegativeRadicand, NotOscillatorLimit

MAX_TRUNCATION = 2000
TAIL_RTOL = 1e-16


@dataclass(frozen=True)
class CoherentStateSpec:
    k: int
    epsilons: tuple[float, ...]
    z: complex
    mode: str = "nonlinear"
    w: float = 0.0
    truncation: int | None = None

    def __post_init__(self):
        if self.mode not in ("nonlinear", "linear"):
            raise ValueError("mode must be 'nonlinear' or 'linear'")
        if len(self.epsilons) != self.k:
            raise ValueError("need one factorization energy per order")
        if self.mode == "linear" and self.w < -1.0:
            raise ValueError("w must be >= -1")
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))

    def at(self, z: complex) -> "CoherentStateSpec":
        return CoherentStateSpec(self.k, self.epsilons, z, self.mode, self.w, self.truncation)

    @property
    def starts_at_one(self) -> bool:
        """w = -1: the ground state decouples and the series starts at n = 1."""
        return self.mode == "linear" and self.w == -1.0


@dataclass(frozen=True)
class CsCoefficients:
    c: np.ndarray
    spec: CoherentStateSpec

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.c) ** 2))

    def __len__(self) -> int:
        return len(self.c)


def ladder_weight(spec: CoherentStateSpec, n: int) -> float:
    """Squared lowering coefficient, |L psi_n|^2."""
    if spec.mode == "linear":
        if n == 0:
            return 0.0
        return n + spec.w
    val = float(n)
    for e in spec.epsilons:
        val *= (n - e - 0.5) * (n - e + 0.5)
    return val


def _normalizer_params(spec: CoherentStateSpec):
    if spec.mode == "linear":
        return [1.0], [spec.w + 1.0]
    return [], [0.5 - e for e in spec.epsilons] + [1.5 - e for e in spec.epsilons]


def normalizer(spec: CoherentStateSpec, x: complex) -> complex:
    """sum_n x^n / prod_{m<=n} weight(m), i.e. 0F_{2k} or 1F1(1, w+1; x)."""
    if spec.starts_at_one:
        return complex(np.exp(x))
    a, b = _normalizer_params(spec)
    return complex(specfun.hypergeometric_series(a, b, x).value)


def cs_coefficients(spec: CoherentStateSpec) -> CsCoefficients:
    """Normalized coefficients c_0 .. c_N with c at the lowest index real positive."""
    z = complex(spec.z)
    start = 1 if spec.starts_at_one else 0
    terms = [0j] * start + [1.0 + 0j]
    norm = 1.0
    cap = spec.truncation or MAX_TRUNCATION
    n = start
    while n < cap:
        n += 1
        weight = ladder_weight(spec, n) if not spec.starts_at_one else n - 1.0
        if weight <= 0.0:
            raise NegativeRadicand(f"ladder weight at n={n} is {weight}")
        nxt = z * terms[-1] / math.sqrt(weight)
        terms.append(nxt)
        mag = abs(nxt) ** 2
        norm += mag
        if spec.truncation is None and mag < TAIL_RTOL * norm and n > abs(z) ** 2 + 2:
            break
    c = np.array(terms)
    r2 = abs(z) ** 2
    c0 = 1.0 / math.sqrt(normalizer(spec, r2).real)
    return CsCoefficients(c * c0, spec)


def direct_norm(coeffs: CsCoefficients) -> float:
    return coeffs.norm2


def kernel(spec: CoherentStateSpec, z: complex, zp: complex) -> complex:
    """<z|z'> in closed form."""
    num = normalizer(spec, np.conj(z) * zp)
    den = math.sqrt(normalizer(spec, abs(z) ** 2).real * normalizer(spec, abs(zp) ** 2).real)
    return num / den


def kernel_by_series(spec: CoherentStateSpec, z: complex, zp: complex) -> complex:
    a = cs_coefficients(spec.at(z)).c
    b = cs_coefficients(spec.at(zp)).c
    m = min(len(a), len(b))
    return complex(np.vdot(a[:m], b[:m]))


def lowered(coeffs: CsCoefficients) -> np.ndarray:
    """Coefficients of L|z> in the same basis (index shifted down by one)."""
    spec = coeffs.spec
    c = coeffs.c
    out = np.zeros_like(c)
    for n in range(1, len(c)):
        wgt = ladder_weight(spec, n) if not spec.starts_at_one else float(n - 1)
        out[n - 1] = math.sqrt(max(wgt, 0.0)) * c[n]
    return out


def eigen_residual(coeffs: CsCoefficients) -> float:
    """|| L|z> - z|z> || using the exact ladder action on the coefficients."""
    lc = lowered(coeffs)
    z = complex(coeffs.spec.z)
    # the last coefficient has lost its successor to truncation
    diff = lc[:-1] - z * coeffs.c[:-1]
    if coeffs.spec.starts_at_one:
        diff = diff[1:]
    return float(np.linalg.norm(diff))


def evolve(coeffs: CsCoefficients, t: float) -> np.ndarray:
    """Coefficients of e^{-itH}|z>, H acting as n + 1/2 on psi_n^(k)."""
    n = np.arange(len(coeffs.c))
    return coeffs.c * np.exp(-1j * t * (n + 0.5))


def measure_moment_rhs(k: int, epsilons: Sequence[float], n: int) -> float:
    """Gamma(n+1) prod Gamma(n-e+1/2) Gamma(n-e+3/2) / (pi prod Gamma(-e+1/2) Gamma(-e+3/2))."""
    if len(epsilons) != k:
        raise ValueError("need one factorization energy per order")
    val = specfun.gamma(n + 1) / math.pi
    for e in epsilons:
        val *= specfun.gamma(n - e + 0.5) * specfun.gamma(n - e + 1.5)
        val /= specfun.gamma(-e + 0.5) * specfun.gamma(-e + 1.5)
    return float(val.real)


def gram_matrix(spec: CoherentStateSpec, zs: Sequence[complex]) -> np.ndarray:
    return np.array([[kernel(spec, a, b) for b in zs] for a in zs])


# --------------------------------------------------------------------------
# uncertainties in the oscillator limit


def _check_oscillator_limit(spec: CoherentStateSpec) -> None:
    expected = tuple(0.5 - i for i in range(1, spec.k + 1))
    if spec.k > 2 or spec.epsilons != expected:
        raise NotOscillatorLimit(
            f"closed forms exist for k <= 2 with eps_i = 1/2 - i, got k={spec.k}, "
            f"eps={spec.epsilons}")


def fock_uncertainty(spec: CoherentStateSpec) -> tuple[float, float, float]:
    """dx, dp from Fock moments with psi_n^(k) = |n + k>."""
    _check_oscillator_limit(spec)
    c = cs_coefficients(spec).c
    m = np.arange(len(c)) + spec.k
    a1 = np.sum(np.conj(c[:-1]) * c[1:] * np.sqrt(m[1:]))
    a2 = np.sum(np.conj(c[:-2]) * c[2:] * np.sqrt(m[2:] * (m[2:] - 1)))
    num = np.sum(m * np.abs(c) ** 2)
    x1 = math.sqrt(2.0) * a1.real
    p1 = math.sqrt(2.0) * a1.imag
    x2 = a2.real + num + 0.5
    p2 = -a2.real + num + 0.5
    dx = math.sqrt(max(x2 - x1**2, 0.0))
    dp = math.sqrt(max(p2 - p1**2, 0.0))
    return dx, dp, dx * dp


def _pfq(b: Sequence[float], x: float) -> float:
    return specfun.pfq([], b, x)


def closed_form_uncertainty(spec: CoherentStateSpec) -> tuple[float, float, float]:
    """The closed forms for the four oscillator-limit configurations."""
    _check_oscillator_limit(spec)
    z = complex(spec.z)
    r2 = abs(z) ** 2
    if spec.mode == "linear":
        if spec.k == 1 and spec.w == 1.0:
            var = 0.5 + 1.0 / specfun.kummer_1f1(1.0, 2.0, r2).real
        elif spec.k == 2 and spec.w == 2.0:
            var = 0.5 + 2.0 / specfun.kummer_1f1(1.0, 3.0, r2).real
        else:
            raise NotOscillatorLimit("linear closed forms cover (k, w) = (1, 1) and (2, 2)")
        s = math.sqrt(var)
        return s, s, var
    if spec.k == 1:
        base = _pfq([1.0, 2.0], r2)
        rho = 2.0 * (_pfq([2.0, 2.0], r2) / base) ** 2 - _pfq([2.0, 3.0], r2) / base
        top = 1.5
    elif spec.k == 2:
        base = _pfq([1.0, 2.0, 2.0, 3.0], r2)
        rho = (0.5 * (_pfq([2.0, 2.0, 3.0, 3.0], r2) / base) ** 2
               - _pfq([2.0, 3.0, 3.0, 4.0], r2) / base / 6.0)
        top = 2.5
    else:
        raise NotOscillatorLimit("nonlinear closed forms cover k = 1 and k = 2")
    dx = math.sqrt(top - z.real**2 * rho)
    dp = math.sqrt(top - z.imag**2 * rho)
    return dx, dp, dx * dp


def uncertainty(spec: CoherentStateSpec, tol: float = 1e-6) -> tuple[float, float, float]:
    """(dx, dp, dx dp); the closed form and the Fock moments must agree."""
    closed = closed_form_uncertainty(spec)
    fock = fock_uncertainty(spec)
    gap = max(abs(a - b) for a, b in zip(closed, fock))
    if gap > tol:
        raise ArithmeticError(f"closed form and Fock moments differ by {gap:.3e}")
    return closed


def uncertainty_surface(spec: CoherentStateSpec, re_vals, im_vals, method: str = "fock"):
    """Rows (re_z, im_z, dx, dp, product) over a rectangular z-grid."""
    fn = fock_uncertainty if method == "fock" else closed_form_uncertainty
    rows = []
    for re in re_vals:
        for im in im_vals:
            rows.append((float(re), float(im), *fn(spec.at(complex(re, im)))))
    return rows


def surface_csv(rows) -> str:
    out = ["re_z,im_z,dx,dp,product"]
    out += [",".join(repr(float(v)) for v in row) for row in rows]
    return "\n".join(out) + "\n"


def ladder_eigen_residual(ladder, coeffs: CsCoefficients, n_terms: int | None = None) -> float:
    """max_m |<psi_m^(k)| L |z>> - z c_m| with L applied on the grid.

    ``ladder`` is an algebra.LadderSpec whose mode matches the coherent
    state.  Each component psi_n^(k) is lowered separately, since the
    ladder acts through the energy of the state it is given.
    """
    from .algebra import ladder_apply
    from .grid import inner
    from .intertwine import partner_state

    spec = coeffs.spec
    want = "linearized" if spec.mode == "linear" else "natural"
    if ladder.mode != want or (spec.mode == "linear" and ladder.w != spec.w):
        raise ValueError("ladder mode does not match the coherent state")
    c = coeffs.c
    n_terms = min(n_terms or len(c), len(c))
    grid = ladder.op.grid
    states = [partner_state(ladder.op, n) for n in range(n_terms)]
    total = np.zeros(grid.n, dtype=complex)
    for n in range(1, n_terms):
        if c[n] == 0:
            continue
        total += c[n] * ladder_apply(ladder, "down", states[n]).psi.values
    z = complex(spec.z)
    worst = 0.0
    for m in range(n_terms - 1):
        proj = inner(states[m].psi.values, total, grid.h)
        worst = max(worst, abs(proj - z * c[m]))
    return worst
