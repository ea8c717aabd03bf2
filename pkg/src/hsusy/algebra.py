"""Ladder operators of the partner Hamiltonians.

The natural ladder pair is L_k = B_k^+ a B_k, L_k^+ = B_k^+ a^+ B_k.  Its
linearized version inserts f(N), a function of the oscillator number
operator, which is applied spectrally by expanding in oscillator
eigenfunctions, L_L = B^+ f(N) a B and L_L^+ = B^+ a^+ f(N) B.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NegativeRadicand, SectorError
from .grid import Grid, GridFunction, inner, trapezoid_norm
from .intertwine import Intertwiner, energy_product, hamiltonian_action, partner_state
from .schrodinger import WaveFunction, oscillator_eigenstate, oscillator_values

SQRT2 = math.sqrt(2.0)
MODES = ("natural", "linearized")


@dataclass(frozen=True)
class LadderSpec:
    op: Intertwiner
    mode: str = "natural"
    w: float = 0.0
    basis_size: int = 48

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.mode == "linearized" and self.w < -1.0:
            raise ValueError("the linearized ladder needs w >= -1")

    @property
    def epsilons(self) -> list[float]:
        return [float(np.real(e)) for e in self.op.epsilons]

    @property
    def k(self) -> int:
        return len(self.op.epsilons)


@dataclass(frozen=True)
class AlgebraReport:
    commutator_residuals: list[float]
    number_op_values: list[float]
    g_values: list[float]
    number_op_measured: list[float] = field(default_factory=list)
    predicted_diagonal: list[float] = field(default_factory=list)

    def to_csv(self) -> str:
        rows = ["n,residual_comm,number_op_expected,number_op_measured"]
        rows += [f"{n},{r!r},{e!r},{m!r}" for n, (r, e, m) in enumerate(
            zip(self.commutator_residuals, self.number_op_values, self.number_op_measured))]
        return "\n".join(rows) + "\n"


def _wave(grid: Grid, energy, psi, dpsi) -> WaveFunction:
    meta = {"energy": energy}
    return WaveFunction(energy, GridFunction(grid, psi, meta), GridFunction(grid, dpsi, meta),
                        normalized=False)


def apply_a(wf: WaveFunction) -> WaveFunction:
    """a psi = (x psi + psi')/sqrt(2); lowers the energy by one."""
    x, psi, dpsi = wf.x, wf.psi.values, wf.dpsi.values
    d2 = 2.0 * (oscillator_values(x) - wf.energy) * psi
    return _wave(wf.grid, wf.energy - 1.0, (x * psi + dpsi) / SQRT2,
                 (psi + x * dpsi + d2) / SQRT2)


def apply_adag(wf: WaveFunction) -> WaveFunction:
    """a^+ psi = (x psi - psi')/sqrt(2); raises the energy by one."""
    x, psi, dpsi = wf.x, wf.psi.values, wf.dpsi.values
    d2 = 2.0 * (oscillator_values(x) - wf.energy) * psi
    return _wave(wf.grid, wf.energy + 1.0, (x * psi - dpsi) / SQRT2,
                 (psi + x * dpsi - d2) / SQRT2)


@functools.lru_cache(maxsize=8)
def _basis(grid: Grid, size: int) -> tuple[np.ndarray, np.ndarray]:
    states = [oscillator_eigenstate(m, grid, edge_tol=1.0) for m in range(size)]
    return (np.array([s.psi.values for s in states]), np.array([s.dpsi.values for s in states]))


def f_coefficient(m: int, w: float, epsilons: Sequence[float]) -> float:
    """f(m) = sqrt((m+1+w) / ((m+1) prod (m - eps + 1/2)(m - eps + 3/2)))."""
    n = m + 1
    den = n * np.prod([(n - e - 0.5) * (n - e + 0.5) for e in epsilons])
    num = n + w
    if den <= 0.0 or num < 0.0:
        raise NegativeRadicand(f"f({m}) needs a positive radicand, got {num}/{den}")
    return math.sqrt(num / den)


def apply_f_of_n(wf: WaveFunction, w: float, epsilons: Sequence[float],
                 size: int = 48) -> WaveFunction:
    """f(N) applied component-wise in the oscillator eigenbasis."""
    basis, dbasis = _basis(wf.grid, size)
    h = wf.grid.h
    coeffs = np.array([inner(b, wf.psi.values, h) for b in basis])
    if not np.iscomplexobj(wf.psi.values):
        coeffs = coeffs.real
    weights = np.array([f_coefficient(m, w, epsilons) if abs(c) > 0 else 0.0
                        for m, c in enumerate(coeffs)])
    c = weights * coeffs
    return _wave(wf.grid, wf.energy, c @ basis, c @ dbasis)


def _check_sector(spec: LadderSpec, wf: WaveFunction) -> None:
    for e in spec.op.epsilons:
        if abs(wf.energy - np.real(e)) < 1e-9:
            raise SectorError(f"E={wf.energy} is a factorization energy; "
                              "such states are annihilated by both ladder operators")


def ladder_apply(spec: LadderSpec, direction: str, wf: WaveFunction) -> WaveFunction:
    """L or L^+ (natural or linearized) on an isospectral-sector state of H_k."""
    _check_sector(spec, wf)
    return _ladder(spec, direction, wf)


def _ladder(spec: LadderSpec, direction: str, wf: WaveFunction) -> WaveFunction:
    op = spec.op
    low = op.apply(wf)
    if direction == "down":
        mid = apply_a(low)
        if spec.mode == "linearized":
            mid = apply_f_of_n(mid, spec.w, spec.epsilons, spec.basis_size)
    elif direction == "up":
        if spec.mode == "linearized":
            low = apply_f_of_n(low, spec.w, spec.epsilons, spec.basis_size)
        mid = apply_adag(low)
    else:
        raise ValueError("direction must be 'up' or 'down'")
    return op.apply_dagger(mid)


def number_op_eigenvalue(epsilons, energy: float) -> float:
    """N(E) = (E - 1/2) prod (E - eps_i - 1)(E - eps_i)."""
    eps = epsilons.epsilons if hasattr(epsilons, "epsilons") else epsilons
    return float(np.real((energy - 0.5) * np.prod([(energy - e - 1.0) * (energy - e) for e in eps])))


def natural_coefficient(n: int, epsilons: Sequence[float]) -> float:
    """|L_k psi_n| = sqrt(n prod (n - eps + 1/2)(n - eps - 1/2))."""
    return math.sqrt(max(number_op_eigenvalue(epsilons, n + 0.5), 0.0))


def g_function(w: float, n: int, epsilons: Sequence[float]) -> tuple[float, float]:
    """g(n) = n + w and the matching f(n-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    if w < -1.0:
        raise ValueError("w must be >= -1")
    return n + w, f_coefficient(n - 1, w, epsilons)


def predicted_commutator(spec: LadderSpec, n: int) -> float:
    if spec.mode == "linearized":
        return 1.0 + spec.w if n == 0 else 1.0
    e = n + 0.5
    return number_op_eigenvalue(spec.epsilons, e + 1.0) - number_op_eigenvalue(spec.epsilons, e)


def algebra_report(spec: LadderSpec, n_max: int) -> AlgebraReport:
    """[L, L^+] on psi_n^(k) against its predicted diagonal, n = 0..n_max."""
    op = spec.op
    h = op.grid.h
    residuals, expected, measured, diag, gs = [], [], [], [], []
    for n in range(n_max + 1):
        psi = partner_state(op, n)
        up_down = _ladder(spec, "down", _ladder(spec, "up", psi))
        lo = _ladder(spec, "down", psi)
        lo_norm2 = trapezoid_norm(lo.psi.values, h) ** 2
        if lo_norm2 < 1e-20:
            # L annihilates the state; raising a numerical zero is noise
            down_up = np.zeros_like(psi.psi.values)
        else:
            down_up = _ladder(spec, "up", lo).psi.values
        pred = predicted_commutator(spec, n)
        comm = up_down.psi.values - down_up
        residuals.append(trapezoid_norm(comm - pred * psi.psi.values, h) / psi.norm())
        diag.append(pred)
        measured.append(lo_norm2)
        if spec.mode == "linearized":
            expected.append(float(n + spec.w) if n else 0.0)
            gs.append(float(n + spec.w))
        else:
            expected.append(number_op_eigenvalue(spec.epsilons, n + 0.5))
            gs.append(expected[-1])
    return AlgebraReport(residuals, expected, gs, measured, diag)


def h_commutator_residual(spec: LadderSpec, n: int) -> float:
    """||(H_k L - L (H_k - 1)) psi_n|| relative to ||L psi_n||."""
    psi = partner_state(spec.op, n)
    out = _ladder(spec, "down", psi)
    nrm = out.norm()
    if nrm < 1e-10 * psi.norm():
        # the ladder closes here (e.g. w = -1 at n = 1): nothing to compare
        return 0.0
    res = hamiltonian_action(spec.op.potential, out) - (psi.energy - 1.0) * out.psi.values
    return trapezoid_norm(res[2:-2], spec.op.grid.h) / trapezoid_norm(out.psi.values[2:-2], spec.op.grid.h)


def kernel_norms(spec: LadderSpec, state: WaveFunction) -> tuple[float, float]:
    """Norms of L psi and L^+ psi for a missing state psi (both should vanish)."""
    h = spec.op.grid.h
    nrm = state.norm()
    return (trapezoid_norm(_ladder(spec, "down", state).psi.values, h) / nrm,
            trapezoid_norm(_ladder(spec, "up", state).psi.values, h) / nrm)


def energy_product_at(spec: LadderSpec, n: int) -> float:
    return energy_product(spec.op.epsilons, n + 0.5)
