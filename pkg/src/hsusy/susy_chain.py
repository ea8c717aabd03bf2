"""Iterated first-order SUSY transformations of the oscillator.

Step i uses the superpotential alpha_i = u_i'/u_i of the seed for eps_i
after it has been carried through the previous i-1 intertwiners,

    V_i = V_{i-1} - alpha_i' = -V_{i-1} + 2 eps_i + alpha_i^2,

the second form being the Riccati equation, so no derivative of alpha is
ever differenced.  Each A_i^+ = (-d/dx + alpha_i)/sqrt(2) maps solutions
at level i-1 to level i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EnergyCollision, NotNormalizable, OrderingError, SingularTransform
from .grid import Grid, GridFunction, derivative
from .schrodinger import (SeedSolution, WaveFunction, node_positions, oscillator_potential,
                          seed_nodes, tail_decay)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SusyStep:
    epsilon: float
    alpha: GridFunction
    dalpha: GridFunction


@dataclass(frozen=True)
class SusyChain:
    steps: tuple[SusyStep, ...]
    v0: GridFunction
    vk: GridFunction
    seeds: tuple[SeedSolution, ...]
    # V_0 .. V_k, needed to rebuild second derivatives at every level
    potentials: tuple[np.ndarray, ...]
    # u_i after i-1 intertwiners, as (u, u') pairs
    levels: tuple[tuple[np.ndarray, np.ndarray], ...]

    @property
    def k(self) -> int:
        return len(self.steps)

    @property
    def grid(self) -> Grid:
        return self.v0.grid

    @property
    def epsilons(self) -> list[float]:
        return [s.epsilon for s in self.steps]

    @property
    def potential(self) -> np.ndarray:
        return self.vk.values

    @property
    def order(self) -> int:
        return self.k

    def manifest(self) -> str:
        return "\n".join(f"# step {i}: epsilon={s.epsilon!r}, nu={s.nu!r}"
                         for i, s in enumerate(self.seeds, 1))

    def apply_dagger(self, wf: WaveFunction) -> WaveFunction:
        """A_k^+ ... A_1^+ psi, without normalization."""
        psi, dpsi = wf.psi.values, wf.dpsi.values
        for i, step in enumerate(self.steps):
            psi, dpsi = _raise(psi, dpsi, wf.energy, step, self.potentials[i])
        return _wave(self.grid, wf.energy, psi, dpsi)

    def apply(self, wf: WaveFunction) -> WaveFunction:
        """A_1 ... A_k phi for phi living at level k, without normalization."""
        psi, dpsi = wf.psi.values, wf.dpsi.values
        for i in reversed(range(self.k)):
            psi, dpsi = _lower(psi, dpsi, wf.energy, self.steps[i], self.potentials[i + 1])
        return _wave(self.grid, wf.energy, psi, dpsi)

    def missing_state(self, i: int) -> WaveFunction:
        return chain_missing_state(self, i)

    def to_csv(self, path) -> None:
        self.vk.to_csv(path, k=self.k)


def _wave(grid: Grid, energy: float, psi, dpsi) -> WaveFunction:
    meta = {"energy": energy}
    return WaveFunction(energy, GridFunction(grid, psi, meta), GridFunction(grid, dpsi, meta),
                        normalized=False)


def _raise(psi, dpsi, energy, step: SusyStep, v_prev):
    """A^+ psi and its derivative, using psi'' = 2(V_prev - E) psi."""
    a, da = step.alpha.values, step.dalpha.values
    d2 = 2.0 * (v_prev - energy) * psi
    return (-dpsi + a * psi) / SQRT2, (-d2 + da * psi + a * dpsi) / SQRT2


def _lower(psi, dpsi, energy, step: SusyStep, v_next):
    """A psi = (psi' + alpha psi)/sqrt(2) for psi at the upper level."""
    a, da = step.alpha.values, step.dalpha.values
    d2 = 2.0 * (v_next - energy) * psi
    return (dpsi + a * psi) / SQRT2, (d2 + da * psi + a * dpsi) / SQRT2


def _check_order(eps: Sequence[float]) -> None:
    if eps[0] > 0.5:
        raise OrderingError(f"first factorization energy {eps[0]} lies above the ground level 1/2")
    for e1, e2 in zip(eps, eps[1:]):
        if not e2 < e1:
            raise OrderingError(f"factorization energies must decrease strictly, got {e1} then {e2}")


def _sign_changes(values: np.ndarray, x: np.ndarray) -> list[float]:
    return node_positions(np.real(values), x)


def build_chain(seeds: Sequence[SeedSolution], grid: Grid | None = None) -> SusyChain:
    """k-step chain from seeds ordered by decreasing factorization energy."""
    if not seeds:
        if grid is None:
            raise ValueError("an empty chain needs an explicit grid")
        v0 = oscillator_potential(grid)
        return SusyChain((), v0, v0, (), (v0.values,), ())
    grid = grid or seeds[0].grid
    if any(s.grid != grid for s in seeds):
        raise ValueError("all seeds must live on the chain grid")
    if any(not s.is_real or complex(s.epsilon).imag for s in seeds):
        raise ValueError("iterated chains use real seeds")
    eps = [float(np.real(s.epsilon)) for s in seeds]
    _check_order(eps)
    if seed_nodes(seeds[0]):
        pos = node_positions(seeds[0].u.values, grid.x)
        raise SingularTransform("first seed has nodes, alpha_1 would be singular", pos)

    v0 = oscillator_potential(grid)
    v = v0.values
    funcs = [(s.u.values.copy(), s.du.values.copy()) for s in seeds]
    steps, potentials, levels = [], [v], []
    for i, e_i in enumerate(eps):
        u_i, du_i = funcs[i]
        alpha = du_i / u_i
        dalpha = 2.0 * (v - e_i) - alpha**2
        levels.append((u_i, du_i))
        new_funcs = funcs[:i + 1]
        for j in range(i + 1, len(eps)):
            u_j, du_j = funcs[j]
            w = u_i * du_j - u_j * du_i
            if j == i + 1:
                scale = np.abs(u_i * du_j) + np.abs(u_j * du_i)
                if _sign_changes(w, grid.x) or np.any(np.abs(w) < 1e-10 * scale):
                    raise SingularTransform(
                        f"Wronskian of the step {i + 1} and {j + 1} functions vanishes",
                        _sign_changes(w, grid.x))
            # A_i^+ u_j = -W(u_i, u_j) / (sqrt2 u_i); derivative closes on u_j itself
            nxt = -w / (SQRT2 * u_i)
            dnxt = -SQRT2 * (e_i - eps[j]) * u_j - alpha * nxt
            new_funcs.append((nxt, dnxt))
        funcs = new_funcs
        meta = {"step": i + 1, "epsilon": e_i}
        steps.append(SusyStep(e_i, GridFunction(grid, alpha, meta), GridFunction(grid, dalpha, meta)))
        v = -v + 2.0 * e_i + alpha**2
        potentials.append(v)
    vk = GridFunction(grid, v, {"k": len(eps), "epsilons": ",".join(map(repr, eps))})
    return SusyChain(tuple(steps), v0, vk, tuple(seeds), tuple(potentials), tuple(levels))


def recursion_alphas(chain: SusyChain) -> list[np.ndarray]:
    """alpha_i from the finite-difference recursion in alpha alone.

    alpha_{i+1} = -alpha_i(eps_i) - 2(eps_i - eps_{i+1}) / (alpha_i(eps_i) - alpha_i(eps_{i+1}))
    with the auxiliary alpha_i(eps_j) propagated by the same formula.  This
    route divides by quantities that blow up at nodes of intermediate
    functions; it is kept as an independent cross-check of build_chain.
    """
    eps = chain.epsilons
    table = [s.du.values / s.u.values for s in chain.seeds]
    out = []
    for i in range(chain.k):
        out.append(table[i])
        nxt = []
        for j in range(i + 1, chain.k):
            with np.errstate(divide="ignore", invalid="ignore"):
                nxt.append(-table[i] - 2.0 * (eps[i] - eps[j]) / (table[i] - table[j]))
        table = [None] * (i + 1) + nxt
    return out


def potential_by_differences(chain: SusyChain) -> np.ndarray:
    """V_k = V_0 - sum alpha_i' with alpha_i' from a 4th-order stencil."""
    h = chain.grid.h
    v = chain.v0.values.copy()
    for step in chain.steps:
        v -= derivative(step.alpha.values, h)
    return v


def chain_missing_state(chain: SusyChain, i: int) -> WaveFunction:
    """Normalized eigenfunction of H_k at the factorization energy eps_i.

    The missing state of H_i is 1/u_i (with u_i taken after i-1 steps), and
    the remaining intertwiners carry it to level k.
    """
    if not 1 <= i <= chain.k:
        raise IndexError(f"step index {i} outside 1..{chain.k}")
    u, _ = chain.levels[i - 1]
    step = chain.steps[i - 1]
    psi = 1.0 / u
    dpsi = -step.alpha.values * psi
    energy = step.epsilon
    for j in range(i, chain.k):
        psi, dpsi = _raise(psi, dpsi, energy, chain.steps[j], chain.potentials[j])
    left, right = tail_decay(psi)
    if not (left and right):
        raise NotNormalizable(f"state at eps={energy} does not decay at the grid edge")
    return _wave(chain.grid, energy, psi, dpsi).normalize()


def apply_bk_dagger(chain: SusyChain, psi: WaveFunction) -> WaveFunction:
    """Normalized image B_k^+ psi / sqrt(prod (E - eps_i))."""
    for e in chain.epsilons:
        if abs(psi.energy - e) <= 1e-12:
            raise EnergyCollision(f"E={psi.energy} coincides with a factorization energy")
    out = chain.apply_dagger(psi)
    factor = float(np.prod([psi.energy - e for e in chain.epsilons]))
    if factor <= 0.0:
        return out.normalize()
    return WaveFunction(psi.energy, out.psi.with_values(out.psi.values / math.sqrt(factor)),
                        out.dpsi.with_values(out.dpsi.values / math.sqrt(factor)),
                        normalized=psi.normalized)


def oscillator_limit_chain(k: int, grid: Grid) -> SusyChain:
    """Chain with eps_i = 1/2 - i whose partner states are psi_{n+k}.

    Seeds alternate between the even solution (nu = 0) and the odd branch,
    e.g. e^{x^2/2} for eps = -1/2 and 2x e^{x^2/2} for eps = -3/2.
    """
    from .schrodinger import general_solution
    seeds = [general_solution(0.5 - i, 0.0, grid, odd_only=(i % 2 == 0))
             for i in range(1, k + 1)]
    return build_chain(seeds, grid)
