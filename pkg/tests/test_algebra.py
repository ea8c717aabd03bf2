import math

import numpy as np
import pytest

from hsusy.algebra import (LadderSpec, algebra_report, apply_a, apply_adag, apply_f_of_n,
                           f_coefficient, g_function, h_commutator_residual, kernel_norms,
                           ladder_apply, natural_coefficient, number_op_eigenvalue,
                           predicted_commutator)
from hsusy.errors import NegativeRadicand, SectorError
from hsusy.grid import Grid, inner
from hsusy.intertwine import partner_state, product_identity
from hsusy.schrodinger import WaveFunction, oscillator_eigenstate
from hsusy.susy_chain import build_chain, chain_missing_state, oscillator_limit_chain

GRID = Grid(-12, 12, 4801)


@pytest.fixture(scope="module")
def chains():
    return {0: build_chain([], GRID), 1: oscillator_limit_chain(1, GRID),
            2: oscillator_limit_chain(2, GRID)}


def test_fock_actions():
    psi0, psi1, psi5 = (oscillator_eigenstate(n, GRID) for n in (0, 1, 5))
    assert apply_a(psi0).norm() < 1e-8
    low = apply_a(psi1)
    assert abs(inner(psi0.psi.values, low.psi.values, GRID.h)) >= 1 - 1e-8
    assert apply_a(psi5).norm() == pytest.approx(math.sqrt(5), abs=1e-6)
    up = apply_adag(psi1)
    assert up.energy == 2.5 and up.norm() == pytest.approx(math.sqrt(2), abs=1e-8)


def test_k0_natural_equals_plain_oscillator(chains):
    spec = LadderSpec(chains[0], "natural")
    psi = oscillator_eigenstate(4, GRID)
    assert np.allclose(ladder_apply(spec, "down", psi).psi.values, apply_a(psi).psi.values)
    rep = algebra_report(spec, 5)
    assert max(rep.commutator_residuals) <= 1e-5
    assert rep.predicted_diagonal == [1.0] * 6


def test_number_operator_roots_and_values():
    assert number_op_eigenvalue([], 0.5) == 0
    assert number_op_eigenvalue([-0.5], -0.5) == 0
    assert number_op_eigenvalue([-0.5], 0.5) == 0
    assert number_op_eigenvalue([-0.5, -1.5], 3.5) == pytest.approx(3 * 3 * 4 * 4 * 5)
    assert natural_coefficient(1, [-0.5]) == pytest.approx(math.sqrt(2))


def test_natural_lowering_norm_k1(chains):
    spec = LadderSpec(chains[1], "natural")
    out = ladder_apply(spec, "down", partner_state(chains[1], 1))
    assert out.norm() == pytest.approx(math.sqrt(2), rel=1e-8)


def test_k1_predicted_commutator_is_quadratic_in_h():
    spec = LadderSpec(oscillator_limit_chain(1, GRID), "natural")
    for n in range(5):
        e = n + 0.5
        assert predicted_commutator(spec, n) == pytest.approx((e + 0.5) * (3 * e + 0.5))


@pytest.mark.parametrize("k", [1, 2])
def test_natural_algebra(chains, k):
    spec = LadderSpec(chains[k], "natural")
    rep = algebra_report(spec, 6)
    assert max(rep.commutator_residuals) <= 1e-4
    for measured, want in zip(rep.number_op_measured, rep.number_op_values):
        assert measured == pytest.approx(want, rel=1e-4, abs=1e-10)
    assert max(h_commutator_residual(spec, n) for n in range(1, 7)) <= 1e-4


@pytest.mark.parametrize("k", [1, 2])
def test_missing_states_are_in_both_kernels(chains, k):
    spec = LadderSpec(chains[k], "natural")
    for i in range(1, k + 1):
        st = chain_missing_state(chains[k], i)
        assert max(kernel_norms(spec, st)) < 1e-6
        with pytest.raises(SectorError):
            ladder_apply(spec, "down", st)


@pytest.mark.parametrize("w", [0.0, 1.0, -1.0, 2.5])
def test_linearized_algebra(chains, w):
    spec = LadderSpec(chains[2], "linearized", w)
    rep = algebra_report(spec, 6)
    assert rep.predicted_diagonal[0] == 1 + w
    assert rep.predicted_diagonal[1:] == [1.0] * 6
    assert max(rep.commutator_residuals) <= 1e-4


def test_linearized_w0_gives_heisenberg_coefficients(chains):
    spec = LadderSpec(chains[1], "linearized", 0.0)
    for n in (1, 3):
        down = ladder_apply(spec, "down", partner_state(chains[1], n))
        up = ladder_apply(spec, "up", partner_state(chains[1], n))
        assert down.norm() == pytest.approx(math.sqrt(n), rel=1e-8)
        assert up.norm() == pytest.approx(math.sqrt(n + 1), rel=1e-8)


def test_g_function():
    assert g_function(0.0, 4, [-0.5])[0] == 4
    # dyadic w keeps n + w exact, so the step is exactly 1
    for n in range(1, 8):
        assert g_function(1.25, n + 1, [-0.5])[0] - g_function(1.25, n, [-0.5])[0] == 1
    g, f0 = g_function(1.0, 1, [-0.5])
    assert g == 2 and f0 == pytest.approx(math.sqrt(2 / (1 * 1 * 2)))
    with pytest.raises(ValueError):
        g_function(-2.0, 1, [])


def test_f_radicand_checks():
    with pytest.raises(NegativeRadicand):
        f_coefficient(0, 0.0, [1.2])
    with pytest.raises(ValueError):
        LadderSpec(build_chain([], GRID), "linearized", -1.5)


def test_f_of_n_acts_diagonally():
    psi = oscillator_eigenstate(3, GRID)
    out = apply_f_of_n(psi, 0.0, [])
    assert np.allclose(out.psi.values, psi.psi.values * f_coefficient(3, 0.0, []), atol=1e-12)


def test_product_identity(chains):
    for n in (0, 3):
        got, want = product_identity(chains[2], n)
        assert got == pytest.approx(want, rel=1e-9)
