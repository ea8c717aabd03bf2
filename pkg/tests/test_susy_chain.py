import numpy as np
import pytest
from scipy.special import erf

from hsusy.errors import EnergyCollision, OrderingError, SingularTransform
from hsusy.grid import Grid, trapezoid_norm
from hsusy.intertwine import eigen_residual
from hsusy.schrodinger import count_nodes, general_solution, oscillator_eigenstate
from hsusy.susy_chain import (apply_bk_dagger, build_chain, chain_missing_state,
                              oscillator_limit_chain, potential_by_differences, recursion_alphas)
from hsusy.verify import spectrum_report


@pytest.fixture(scope="module")
def fig1_chain(verify_grid):
    return build_chain([general_solution(-1.0, 0.9, verify_grid),
                        general_solution(-1.2, 1.1, verify_grid)])


def test_first_order_oscillator_shift(design_grid):
    x = design_grid.x
    ch = build_chain([general_solution(-0.5, 0.0, design_grid)])
    assert np.allclose(ch.steps[0].alpha.values, x, atol=1e-12)
    assert np.allclose(ch.vk.values, x**2 / 2 - 1, atol=1e-10)


def test_first_order_mielnik_superpotential(design_grid):
    x, nu = design_grid.x, 0.2
    ch = build_chain([general_solution(-0.5, nu, design_grid)])
    dlog = 2 * nu * np.exp(-x**2) / np.sqrt(np.pi) / (1 + nu * erf(x))
    assert np.allclose(ch.steps[0].alpha.values, x + dlog, rtol=1e-11, atol=1e-12)


def test_identity_chain(design_grid):
    ch = build_chain([], design_grid)
    psi = oscillator_eigenstate(3, design_grid)
    assert ch.k == 0
    assert np.array_equal(ch.apply_dagger(psi).psi.values, psi.psi.values)
    with pytest.raises(ValueError):
        build_chain([])


def test_ordering_rules(design_grid):
    with pytest.raises(OrderingError):
        build_chain([general_solution(-1.2, 1.1, design_grid), general_solution(-1.0, 0.9, design_grid)])
    with pytest.raises(OrderingError):
        build_chain([general_solution(0.7, 0.3, design_grid)])


def test_noded_first_seed_is_rejected(design_grid):
    with pytest.raises(SingularTransform) as info:
        build_chain([general_solution(-1.2, 1.1, design_grid)])
    assert len(info.value.positions) == 1


def test_exact_potential_matches_differenced_one(fig1_chain):
    m = fig1_chain.grid.interior(0.9)
    fd = potential_by_differences(fig1_chain)
    # fourth-order stencil at h = 0.005: truncation error around 1e-7
    assert np.max(np.abs(fd - fig1_chain.vk.values)[m]) < 1e-6


def test_alpha_recursion_cross_check(fig1_chain):
    m = fig1_chain.grid.interior(0.8)
    for a, step in zip(recursion_alphas(fig1_chain), fig1_chain.steps):
        assert np.max(np.abs(a - step.alpha.values)[m]) < 1e-9


def test_fig1_chain_spectrum(fig1_chain):
    rep = spectrum_report(fig1_chain.vk, [-1.2, -1.0, 0.5, 1.5, 2.5], 5e-3)
    assert rep.passed, rep.table()


def test_missing_states(fig1_chain):
    v = fig1_chain.potential
    low = chain_missing_state(fig1_chain, 2)
    high = chain_missing_state(fig1_chain, 1)
    assert low.energy == -1.2 and high.energy == -1.0
    assert count_nodes(low.psi) == 0 and count_nodes(high.psi) == 1
    for st in (low, high):
        assert st.norm() == pytest.approx(1.0, abs=1e-10)
        assert eigen_residual(v, st) < 1e-5
    with pytest.raises(IndexError):
        chain_missing_state(fig1_chain, 3)


def test_partner_state_norm_identity(fig1_chain):
    g = fig1_chain.grid
    for n in (0, 1, 4):
        psi = oscillator_eigenstate(n, g)
        raw = fig1_chain.apply_dagger(psi)
        want = (n + 0.5 + 1.0) * (n + 0.5 + 1.2)
        assert trapezoid_norm(raw.psi.values, g.h) ** 2 == pytest.approx(want, rel=1e-9)
        out = apply_bk_dagger(fig1_chain, psi)
        assert out.norm() == pytest.approx(1.0, abs=1e-9)
        assert eigen_residual(fig1_chain.potential, out) < 1e-5


def test_energy_collision(design_grid):
    ch = oscillator_limit_chain(1, design_grid)
    fake = oscillator_eigenstate(0, design_grid)
    from hsusy.schrodinger import WaveFunction
    with pytest.raises(EnergyCollision):
        apply_bk_dagger(ch, WaveFunction(-0.5, fake.psi, fake.dpsi))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_oscillator_limit_partner_states(k):
    g = Grid(-10, 10, 4001)
    ch = oscillator_limit_chain(k, g)
    assert ch.epsilons == [0.5 - i for i in range(1, k + 1)]
    assert np.allclose(ch.vk.values, g.x**2 / 2 - k, atol=1e-8)
    for n in (0, 3):
        out = apply_bk_dagger(ch, oscillator_eigenstate(n, g))
        target = oscillator_eigenstate(n + k, g).psi.values
        overlap = abs(np.sum(out.psi.values * target) * g.h)
        assert overlap == pytest.approx(1.0, abs=1e-9)
