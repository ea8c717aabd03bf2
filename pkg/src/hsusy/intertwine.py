"""Operations shared by every intertwiner B^+ with H_k B^+ = B^+ H_0.

Both the iterated chain and the direct second-order transform expose
``apply_dagger``, ``apply``, ``epsilons``, ``potential`` and ``grid``.
"""

from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np

from .grid import Grid, derivative, inner, trapezoid_norm
from .schrodinger import WaveFunction, oscillator_eigenstate


class Intertwiner(Protocol):
    @property
    def grid(self) -> Grid: ...

    @property
    def epsilons(self) -> Sequence[complex]: ...

    @property
    def potential(self) -> np.ndarray: ...

    def apply_dagger(self, wf: WaveFunction) -> WaveFunction: ...

    def apply(self, wf: WaveFunction) -> WaveFunction: ...


def energy_product(epsilons: Sequence[complex], energy: float) -> float:
    """prod (E - eps_i), real for real or conjugate-paired energies."""
    return float(np.real(np.prod([energy - e for e in epsilons])))


def hamiltonian_action(v: np.ndarray, wf: WaveFunction) -> np.ndarray:
    """-phi''/2 + V phi with phi'' differenced from the carried phi'."""
    return -0.5 * derivative(wf.dpsi.values, wf.grid.h) + v * wf.psi.values


def eigen_residual(v: np.ndarray, wf: WaveFunction, energy: float | None = None) -> float:
    """||(H - E) phi|| / ||phi|| over the interior samples."""
    e = wf.energy if energy is None else energy
    res = hamiltonian_action(v, wf) - e * wf.psi.values
    h = wf.grid.h
    nrm = trapezoid_norm(wf.psi.values[2:-2], h)
    return trapezoid_norm(res[2:-2], h) / nrm if nrm else float("inf")


def intertwining_residual(op: Intertwiner, n: int) -> float:
    """||(H_k B^+ - B^+ H_0) psi_n|| / ||B^+ psi_n||."""
    psi = oscillator_eigenstate(n, op.grid)
    return eigen_residual(op.potential, op.apply_dagger(psi), psi.energy)


def product_identity(op: Intertwiner, n: int) -> tuple[float, float]:
    """(<psi_n|B B^+|psi_n>, prod (E_n - eps_i))."""
    psi = oscillator_eigenstate(n, op.grid)
    back = op.apply(op.apply_dagger(psi))
    return inner(psi.psi.values, back.psi.values, op.grid.h).real, \
        energy_product(op.epsilons, psi.energy)


def partner_state(op: Intertwiner, n: int) -> WaveFunction:
    """psi_n^(k) = B^+ psi_n / sqrt(prod (E_n - eps_i))."""
    psi = oscillator_eigenstate(n, op.grid)
    out = op.apply_dagger(psi)
    factor = energy_product(op.epsilons, psi.energy)
    if factor <= 0:
        return out.normalize()
    c = factor ** -0.5
    return WaveFunction(psi.energy, out.psi.with_values(c * out.psi.values),
                        out.dpsi.with_values(c * out.dpsi.values), normalized=True)


def kernel_residual(op: Intertwiner, state: WaveFunction) -> float:
    """||B psi|| for a normalized state expected in the kernel of B."""
    return trapezoid_norm(op.apply(state).psi.values, op.grid.h) / state.norm()
