"""Continuum Fourier gauge fields: charge, energy split, and the 7D lift."""

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import su2
from g2lab.gauge.fourier import (
    CurvatureField, FourierField, asd_defect_form, constant_curvature_u1,
    curvature, energy_decomposition_7d, flux_charge, instanton_residual_field,
    is_self_dual_flux, lift_to_7d, topological_charge, ym_energy_4d,
)
from g2lab.rng import SplitMix64


def sd_flux(a, b, c):
    return [[0, a, b, c], [-a, 0, c, -b], [-b, -c, 0, a], [-c, b, -a, 0]]


def random_field(dim, degree, rank, seed, n_modes=4, cutoff=3):
    rng = SplitMix64(seed)
    f = FourierField.zero(dim, degree, rank, cutoff)
    basis = None
    from g2lab.exterior import lex_basis
    basis = lex_basis(dim, degree)
    for _ in range(n_modes):
        m = tuple(int(rng.uniform() * (2 * cutoff + 1)) - cutoff
                  for _ in range(dim))
        idx = basis[int(rng.uniform() * len(basis))]
        if rank == 1:
            c = rng.gauss() + 1j * rng.gauss()
        else:
            c = (rng.gauss() + 1j * rng.gauss()) * su2(
                [rng.gauss(), rng.gauss(), rng.gauss()])
        f.add_coeff(m, idx, c)
    return f.symmetrized()


def test_d_squared_is_zero():
    a = random_field(7, 1, 2, seed=11)
    dd = a.d().d()
    assert dd.is_zero(1e-12)


def test_symmetrized_field_is_real():
    a = random_field(7, 1, 2, seed=5)
    assert a.reality_defect() < 1e-14
    # symmetrization creates the missing conjugate modes
    b = FourierField.zero(4, 1, 1, 2)
    b.add_coeff((1, 0, 0, 0), (2,), 0.3 + 0.4j)
    assert b.reality_defect() > 0.1
    assert b.symmetrized().reality_defect() == 0.0


def test_flux_charge_matches_integral():
    for a, b, c in itertools.product((-1, 0, 1), repeat=3):
        m = sd_flux(a, b, c)
        assert is_self_dual_flux(m)
        F = constant_curvature_u1(m)
        assert topological_charge(F) == pytest.approx(flux_charge(m), abs=1e-12)
    assert flux_charge(sd_flux(1, 0, 0)) == -1
    assert flux_charge(sd_flux(1, 1, 0)) == -2


def test_constant_flux_rejects_global_potential_representation():
    F = constant_curvature_u1(sd_flux(1, 0, 0))
    assert F.fluctuation.is_zero()
    assert F.flux[0][1] == 1 and F.flux[2][3] == 1


def test_ym_energy_sd_asd_split():
    F = constant_curvature_u1(sd_flux(1, 0, 0))
    en = ym_energy_4d(F)
    assert en["asd_part"] == pytest.approx(0.0, abs=1e-12)
    assert en["total"] == pytest.approx(2 * (2 * np.pi) ** 2)
    assert en["q"] == pytest.approx(-1.0)
    G = constant_curvature_u1([[0, 1, 0, 0], [-1, 0, 0, 0],
                               [0, 0, 0, -1], [0, 0, 1, 0]])
    en2 = ym_energy_4d(G)
    assert en2["sd_part"] == pytest.approx(0.0, abs=1e-12)
    assert en2["q"] == pytest.approx(1.0)


def test_curvature_of_potential_and_bianchi():
    A = random_field(4, 1, 2, seed=3, cutoff=2)
    F = curvature(A)
    # d F + [A, F] = 0 (Bianchi) for the computed curvature
    full = F.full_field()
    bianchi = full.d() + A.wedge(full) - full.wedge(A)
    assert bianchi.is_zero(1e-10)
    assert F.truncation_error == pytest.approx(0.0, abs=1e-14)


def test_charge_of_trivial_sector_vanishes():
    A = random_field(4, 1, 2, seed=9, cutoff=2)
    assert topological_charge(curvature(A)) == pytest.approx(0.0, abs=1e-10)


def test_lift_residuals_sd_and_asd(standard_fibration):
    s = standard_fibration.adapted_g2()
    for a, b, c in itertools.product((-1, 0, 1), repeat=3):
        F7 = lift_to_7d(constant_curvature_u1(sd_flux(a, b, c)),
                        standard_fibration)
        res = instanton_residual_field(F7, s)
        assert max(res.values()) < 1e-12
    # anti-self-dual single planes: residual is governed by the defect form
    asd = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    F4 = constant_curvature_u1(asd)
    F7 = lift_to_7d(F4, standard_fibration)
    res = instanton_residual_field(F7, s)
    O = asd_defect_form(F4)
    nO = float(np.sqrt(sum(np.real(np.trace(o @ o.conj().T)) for o in O)))
    assert res["r_a"] == pytest.approx(nO, abs=1e-10)
    assert res["f7_norm"] == pytest.approx(nO / np.sqrt(3.0), abs=1e-10)


def test_energy_decomposition_identity_random_fields(standard_fibration):
    s = standard_fibration.adapted_g2()
    for seed in range(20):
        A = random_field(7, 1, 2, seed=100 + seed, cutoff=2)
        F = curvature(A)
        en = energy_decomposition_7d(F, s)
        assert en["identity_residual"] < 1e-9 * max(1.0, en["ym"])


def test_asd_fraction_of_lifted_field(standard_fibration):
    """For a lifted ASD plane the 7-component carries 2/3 of the energy."""
    s = standard_fibration.adapted_g2()
    asd = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    F7 = lift_to_7d(constant_curvature_u1(asd), standard_fibration)
    en = energy_decomposition_7d(F7, s)
    assert en["F7sq"] / en["ym"] == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert en["kappa_integral"] < 0
    assert en["ym"] == pytest.approx(en["kappa_integral"]
                                     + 3 * en["F7sq"], abs=1e-9)


def test_kappa_positive_for_sd_lift(standard_fibration):
    s = standard_fibration.adapted_g2()
    F7 = lift_to_7d(constant_curvature_u1(sd_flux(1, 0, 0)),
                    standard_fibration)
    en = energy_decomposition_7d(F7, s)
    assert en["F7sq"] == pytest.approx(0.0, abs=1e-12)
    assert en["kappa_integral"] == pytest.approx(en["ym"], abs=1e-9)
    assert en["kappa_integral"] > 0
