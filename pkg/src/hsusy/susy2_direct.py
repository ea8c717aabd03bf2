"""Direct second-order SUSY partners of the oscillator.

All three regimes are driven by one function w(x) with w' = u1 u2:

* real:       w = W(u1, u2) / (2 (eps1 - eps2))
* confluent:  w = w0 + int_{x0}^x u^2
* complex:    u2 = conj(u1), eps2 = conj(eps1), w as in the real case

and then eta = w'/w, V2 = V0 - eta',
B2^+ = (d^2 - eta d + gamma)/2 with gamma = eta'/2 + eta^2/2 - 2 V0 + d.
The new eigenfunctions are u2/w (energy eps1) and u1/w (energy eps2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BadW0, NoDecay, SingularW, SingularWronskian
from .grid import Grid, GridFunction, cumulative_integral
from .schrodinger import (SeedSolution, WaveFunction, node_positions, oscillator_values,
                          seed_nodes, tail_decay)

CASES = ("real", "confluent", "complex")
LABELS = ("a", "b", "c", "confluent", "complex", "none")
_EDGE_FRACTION = 0.05


@dataclass(frozen=True)
class SecondOrderTransform:
    case: str
    params: dict
    seeds: tuple[SeedSolution, ...]
    w: GridFunction
    eta: GridFunction
    deta: np.ndarray
    d2eta: np.ndarray
    v2: GridFunction
    gamma: GridFunction
    d: float
    new_states: tuple[WaveFunction, ...]
    normalizable: tuple[bool, ...]
    max_imag_v2: float = 0.0
    report: "AdmissibilityReport | None" = None

    @property
    def grid(self) -> Grid:
        return self.v2.grid

    @property
    def x(self) -> np.ndarray:
        return self.v2.grid.x

    @property
    def v0(self) -> np.ndarray:
        return oscillator_values(self.x)

    @property
    def potential(self) -> np.ndarray:
        return self.v2.values

    @property
    def order(self) -> int:
        return 2

    @property
    def epsilons(self) -> list[complex]:
        p = self.params
        if self.case == "confluent":
            return [p["epsilon"], p["epsilon"]]
        return [p["eps1"], p["eps2"]]

    def dgamma(self) -> np.ndarray:
        return 0.5 * self.d2eta + self.eta.values * self.deta - 2.0 * self.x

    def apply_dagger(self, wf: WaveFunction) -> WaveFunction:
        """B2^+ psi for psi an H0 solution at energy E (unnormalized)."""
        psi, dpsi, e = wf.psi.values, wf.dpsi.values, wf.energy
        x, v0 = self.x, self.v0
        eta, deta, g = self.eta.values, self.deta, self.gamma.values
        d2 = 2.0 * (v0 - e) * psi
        d3 = 2.0 * x * psi + 2.0 * (v0 - e) * dpsi
        out = 0.5 * (d2 - eta * dpsi + g * psi)
        dout = 0.5 * (d3 - deta * dpsi - eta * d2 + self.dgamma() * psi + g * dpsi)
        return _wave(self.grid, e, out, dout)

    def apply(self, wf: WaveFunction) -> WaveFunction:
        """B2 phi = (phi'' + eta phi' + eta' phi + gamma phi)/2 for phi at level 2."""
        phi, dphi, e = wf.psi.values, wf.dpsi.values, wf.energy
        x, v2 = self.x, self.v2.values
        eta, deta, d2eta, g = self.eta.values, self.deta, self.d2eta, self.gamma.values
        d2 = 2.0 * (v2 - e) * phi
        d3 = 2.0 * (x - d2eta) * phi + 2.0 * (v2 - e) * dphi
        out = 0.5 * (d2 + eta * dphi + deta * phi + g * phi)
        dout = 0.5 * (d3 + 2.0 * deta * dphi + eta * d2 + d2eta * phi
                      + self.dgamma() * phi + g * dphi)
        return _wave(self.grid, e, out, dout)

    def manifest(self) -> str:
        lines = [f"# case={self.case}"]
        if self.report is not None:
            lines.append(f"# label={self.report.case_label}")
        lines += [f"# {k}={v!r}" for k, v in self.params.items()]
        return "\n".join(lines)

    def to_csv(self, directory) -> None:
        from pathlib import Path
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        meta = {"case": self.case, **self.params}
        self.v2.to_csv(out / "v2.csv", **meta)
        self.eta.to_csv(out / "eta.csv", **meta)
        self.w.to_csv(out / "w.csv", **meta)
        for i, st in enumerate(self.new_states, 1):
            st.psi.to_csv(out / f"state{i}.csv", energy=st.energy, **meta)


@dataclass(frozen=True)
class W0Domain:
    """Admissible w0: ``w0 <= below`` or ``w0 >= above`` (None = no branch).

    With ``strict`` the end points themselves are excluded.
    """
    below: float | None
    above: float | None
    i_minus: float = math.inf
    i_plus: float = math.inf
    strict: bool = False

    @property
    def empty(self) -> bool:
        return self.below is None and self.above is None

    def __contains__(self, w0: float) -> bool:
        if self.strict:
            return ((self.below is not None and w0 < self.below)
                    or (self.above is not None and w0 > self.above))
        return ((self.below is not None and w0 <= self.below)
                or (self.above is not None and w0 >= self.above))

    def __str__(self) -> str:
        parts = []
        lb, rb = (")", "(") if self.strict else ("]", "[")
        if self.below is not None:
            parts.append(f"(-inf, {self.below:.12g}{lb}")
        if self.above is not None:
            parts.append(f"{rb}{self.above:.12g}, inf)")
        return " U ".join(parts) or "empty"


@dataclass(frozen=True)
class AdmissibilityReport:
    wronskian_nodeless: bool
    node_positions: list = field(default_factory=list)
    w0_domain: W0Domain | None = None
    case_label: str = "none"
    notes: tuple[str, ...] = ()


def _wave(grid: Grid, energy, psi, dpsi, normalized=False) -> WaveFunction:
    meta = {"energy": energy}
    return WaveFunction(energy, GridFunction(grid, psi, meta), GridFunction(grid, dpsi, meta),
                        normalized=normalized)


def _scan_mask(grid: Grid, exclude_edges: bool) -> np.ndarray:
    if not exclude_edges:
        return np.ones(grid.n, dtype=bool)
    return grid.interior(1.0 - 2 * _EDGE_FRACTION)


def _sign_scan(w: np.ndarray, grid: Grid, exclude_edges: bool = False) -> list[float]:
    mask = _scan_mask(grid, exclude_edges)
    return node_positions(np.real(w)[mask], grid.x[mask])


def _build(case: str, params: dict, seeds, u1, du1, u2, du2, w, eps1, eps2, d,
           grid: Grid, report=None, physical=False) -> SecondOrderTransform:
    x = grid.x
    v0 = oscillator_values(x)
    w1 = u1 * u2
    w2 = du1 * u2 + u1 * du2
    w3 = 2.0 * (v0 - eps1) * u1 * u2 + 2.0 * du1 * du2 + 2.0 * (v0 - eps2) * u1 * u2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        eta = w1 / w
        deta = w2 / w - eta**2
        d2eta = w3 / w - 3.0 * eta * deta - eta**3
    bad = ~(np.isfinite(eta) & np.isfinite(deta) & np.isfinite(d2eta))
    if bad.any():
        if not physical:
            raise SingularW("eta is not finite on the grid", list(x[bad]))
        eta, deta, d2eta = (_extend_asymptotic(f, bad) for f in (eta, deta, d2eta))
    v2c = v0 - deta
    max_imag = float(np.max(np.abs(np.imag(v2c))))
    gamma = 0.5 * deta + 0.5 * eta**2 - 2.0 * v0 + d

    states, flags = [], []
    for energy, u, du in ((eps1, u2, du2), (eps2, u1, du1)):
        if case == "confluent" and states:
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            psi = u / w
            dpsi = (du - eta * u) / w
        if not np.all(np.isfinite(psi)):
            psi = np.nan_to_num(psi)
            dpsi = np.nan_to_num(dpsi)
        left, right = tail_decay(psi)
        ok = left and right and np.all(np.isfinite(psi))
        wf = _wave(grid, energy, psi, dpsi)
        states.append(wf.normalize() if ok else wf)
        flags.append(bool(ok))

    real = lambda f: np.real(f) if case == "complex" else f  # noqa: E731
    meta = {"case": case}
    return SecondOrderTransform(
        case=case, params=params, seeds=tuple(seeds),
        w=GridFunction(grid, real(w), meta),
        eta=GridFunction(grid, real(eta), meta),
        deta=real(deta), d2eta=real(d2eta),
        v2=GridFunction(grid, np.real(v2c), meta),
        gamma=GridFunction(grid, real(gamma), meta),
        d=float(np.real(d)), new_states=tuple(states), normalizable=tuple(flags),
        max_imag_v2=max_imag, report=report)


def _extend_asymptotic(f: np.ndarray, bad: np.ndarray) -> np.ndarray:
    """Fill non-finite edge samples with the nearest finite value.

    Only used for physical-eigenstate seeds whose Wronskian underflows far
    out, where V2 has already relaxed to V0 plus a constant.
    """
    good = np.flatnonzero(~bad)
    out = f.copy()
    out[bad] = np.interp(np.flatnonzero(bad), good, f[good])
    return out


def real_case(u1: SeedSolution, u2: SeedSolution, grid: Grid | None = None) -> SecondOrderTransform:
    """Second-order transform with two distinct real factorization energies."""
    grid = grid or u1.grid
    e1, e2 = float(np.real(u1.epsilon)), float(np.real(u2.epsilon))
    if e1 == e2:
        raise ValueError("the real case needs eps1 != eps2; use confluent_case")
    physical = u1.kind == "physical_eigenstate" and u2.kind == "physical_eigenstate"
    a1, da1, a2, da2 = u1.u.values, u1.du.values, u2.u.values, u2.du.values
    wr = a1 * da2 - a2 * da1
    nodes = _sign_scan(wr, grid, exclude_edges=physical)
    if nodes:
        raise SingularWronskian(f"W(u1, u2) changes sign {len(nodes)} time(s)", nodes)
    report = classify(e1, e2, u1=u1, u2=u2)
    w = wr / (2.0 * (e1 - e2))
    params = {"eps1": e1, "nu1": u1.nu, "eps2": e2, "nu2": u2.nu}
    return _build("real", params, (u1, u2), a1, da1, a2, da2, w, e1, e2, e1 + e2, grid,
                  report, physical)


def _tail_integrals(u: SeedSolution, x0: float) -> tuple[float, float, bool, bool]:
    """I- = int_{-inf}^{x0} u^2 and I+ = int_{x0}^{inf} u^2 where they exist."""
    grid = u.grid
    sq = np.abs(u.u.values) ** 2
    left, right = tail_decay(u.u.values)
    cum = cumulative_integral(sq, grid, x0)
    # Gaussian-type tail beyond the box: int_X^inf e^{-t^2} ~ e^{-X^2}/(2X)
    i_minus = -cum[0] + sq[0] / (2.0 * abs(grid.xmin)) if left else math.inf
    i_plus = cum[-1] + sq[-1] / (2.0 * abs(grid.xmax)) if right else math.inf
    return float(i_minus), float(i_plus), left, right


def w0_domain(u: SeedSolution, x0: float = 0.0) -> W0Domain:
    """Values of w0 for which w = w0 + int_{x0}^x u^2 never vanishes."""
    i_minus, i_plus, left, right = _tail_integrals(u, x0)
    if not (left or right):
        raise NoDecay("u decays at neither end of the grid")
    if left and right:
        return W0Domain(-i_plus, i_minus, i_minus, i_plus, strict=True)
    if right:
        return W0Domain(-i_plus, None, i_minus, i_plus)
    return W0Domain(None, i_minus, i_minus, i_plus)


def confluent_case(u: SeedSolution, w0: float, x0: float = 0.0,
                   grid: Grid | None = None) -> SecondOrderTransform:
    """Confluent transform: w = w0 + int_{x0}^x u^2, eta = w'/w."""
    grid = grid or u.grid
    if not u.is_real:
        raise ValueError("the confluent case needs a real seed")
    eps = float(np.real(u.epsilon))
    left, right = tail_decay(u.u.values)
    domain = w0_domain(u, x0) if (left or right) else None
    if domain is not None and w0 not in domain:
        raise BadW0(f"w0={w0} outside the nodeless domain {domain}")
    a, da = u.u.values, u.du.values
    w = w0 + cumulative_integral(a * a, grid, x0)
    nodes = _sign_scan(w, grid)
    if nodes:
        raise SingularW(f"w changes sign near x={nodes[0]:.6g}", nodes)
    report = AdmissibilityReport(True, [], domain, "confluent")
    params = {"epsilon": eps, "nu": u.nu, "w0": w0, "x0": x0}
    return _build("confluent", params, (u,), a, da, a, da, w, eps, eps, 2.0 * eps, grid,
                  report, physical=u.kind == "physical_eigenstate")


def complex_case(u1: SeedSolution, grid: Grid | None = None) -> SecondOrderTransform:
    """Transform with eps2 = conj(eps1), u2 = conj(u1); V2 comes out real."""
    grid = grid or u1.grid
    e1 = complex(u1.epsilon)
    if e1.imag == 0.0:
        raise ValueError("the complex case needs Im(eps1) != 0")
    left, right = tail_decay(u1.u.values)
    if not (left or right):
        raise NoDecay("u1 must vanish at one end of the grid")
    a1, da1 = u1.u.values, u1.du.values
    a2, da2 = np.conj(a1), np.conj(da1)
    e2 = e1.conjugate()
    w = (a1 * da2 - a2 * da1) / (2.0 * (e1 - e2))
    wd = np.abs(a1) ** 2
    if np.any(wd < 0):
        raise SingularW("w' must be non-negative")
    nodes = _sign_scan(np.real(w), grid)
    if nodes:
        raise SingularW(f"w changes sign near x={nodes[0]:.6g}", nodes)
    report = AdmissibilityReport(True, [], None, "complex")
    params = {"eps1": e1, "nu1": u1.nu, "eps2": e2}
    return _build("complex", params, (u1,), a1, da1, a2, da2, w, e1, e2, 2.0 * e1.real,
                  grid, report)


def _level_gap(e: float) -> int | None:
    """Index i with E_i < e < E_{i+1}; None when e sits on a level or below 1/2."""
    if e < 0.5:
        return -1
    n = e - 0.5
    if n == math.floor(n):
        return None
    return int(math.floor(n))


def classify(eps1: complex, eps2: complex | None = None, *, u1: SeedSolution | None = None,
             u2: SeedSolution | None = None, physical: bool | None = None) -> AdmissibilityReport:
    """Label a requested second-order transform and test its Wronskian."""
    notes: list[str] = []
    e1 = complex(eps1)
    if e1.imag != 0.0:
        return AdmissibilityReport(True, [], None, "complex")
    if eps2 is None or complex(eps2) == e1:
        return AdmissibilityReport(True, [], None, "confluent")
    hi, lo = sorted([e1.real, complex(eps2).real], reverse=True)
    if physical is None:
        physical = all(s is not None and s.kind == "physical_eigenstate" for s in (u1, u2))

    label = "none"
    if hi < 0.5:
        label = "a"
    elif physical and (lo - 0.5) == math.floor(lo - 0.5) and hi == lo + 1.0:
        label = "c"
    else:
        g1, g2 = _level_gap(hi), _level_gap(lo)
        if g1 is not None and g1 == g2 and g1 >= 0:
            label = "b"
            # heuristic: (E_n - eps1)(E_n - eps2) >= 0 for every level
        elif g1 != g2:
            notes.append("levels separate eps1 and eps2: (E_n - eps1)(E_n - eps2) < 0 "
                         "for some n, the transform is expected to be singular")
            warnings.warn(notes[-1], stacklevel=2)

    positions: list[float] = []
    if u1 is not None and u2 is not None:
        wr = u1.u.values * u2.du.values - u2.u.values * u1.du.values
        positions = _sign_scan(np.real(wr), u1.grid, exclude_edges=label == "c")
        if label == "a" and seed_nodes(u1 if np.real(u1.epsilon) == hi else u2):
            notes.append("case (a) wants the higher-energy seed nodeless")
        if label == "b":
            i = _level_gap(hi)
            upper, lower = (u1, u2) if np.real(u1.epsilon) == hi else (u2, u1)
            if seed_nodes(upper) != i + 1 or seed_nodes(lower) != i + 2:
                notes.append(f"case (b) node pattern is i+1, i+2 = {i + 1}, {i + 2}; got "
                             f"{seed_nodes(upper)}, {seed_nodes(lower)}")
    return AdmissibilityReport(not positions, positions, None, label, tuple(notes))


def find_nu_for_nodes(epsilon: float, target: int, grid: Grid,
                      nus=None) -> float:
    """First nu in a scan whose seed has ``target`` nodes.

    Only a search aid: the node counts per case are known, how nu maps to
    them is not, so this scans and records rather than derives.
    """
    from .schrodinger import general_solution
    nus = np.round(np.arange(0.0, 3.0001, 0.05), 10) if nus is None else nus
    for nu in nus:
        if seed_nodes(general_solution(epsilon, float(nu), grid)) == target:
            return float(nu)
    raise ValueError(f"no nu in the scan gives {target} nodes at eps={epsilon}")


def eta_consistency(t: SecondOrderTransform) -> float:
    """Max relative gap between eta' and -eta^2 + 2 beta1 eta + 2(eps1 - eps2).

    Evaluated away from nodes of u1, where beta1 = u1'/u1 is finite.
    """
    u1 = t.seeds[0]
    a, da = u1.u.values, u1.du.values
    mask = np.abs(a) > 1e-6 * np.abs(da) * 10 * t.grid.h
    mask &= _scan_mask(t.grid, True)
    e1, e2 = t.epsilons
    beta = da[mask] / a[mask]
    eta = t.eta.values[mask]
    rhs = -eta**2 + 2.0 * beta * eta + 2.0 * (e1 - e2)
    scale = np.abs(t.deta[mask]) + np.abs(eta**2) + 1.0
    return float(np.max(np.abs(rhs - t.deta[mask]) / scale))
