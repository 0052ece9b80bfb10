"""Lattice gauge fields: clover observables, cooling, lifting, snapshots."""

import numpy as np
import pytest

from g2lab.gauge.lattice import (
    CoolingDivergence, LatticeGaugeField, add_link_noise, asd_force,
    asd_residual_4d, chirality_energies, clover_charge, clover_field,
    constant_flux_field, cool_to_sd, identity_field, lift_lattice_7d,
    plaquette, plaquette_chirality_energies, random_gauge_transform,
    read_snapshot, residual_7d, reunitarize, toron_su2, wilson_force,
    write_snapshot,
)

SD_UNIT = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
HALF_FLUX = [[0, 0.5, 0.5, 0], [-0.5, 0, 0, -0.5],
             [-0.5, 0, 0, 0.5], [0, 0.5, -0.5, 0]]


def test_identity_field_trivial():
    U = identity_field((4, 4, 4, 4), "su2")
    assert U.unitarity_defect() < 1e-14
    p = plaquette(U, (0, 0, 0, 0), 0, 1)
    assert np.abs(p - np.eye(2)).max() == 0.0
    assert clover_charge(U) == 0.0
    en = chirality_energies(U)
    assert en["total"] == 0.0


def test_u1_discretized_charge_within_5pct():
    U = constant_flux_field((8, 8, 8, 8), SD_UNIT, "u1")
    q = clover_charge(U)
    assert abs(q + 1.0) < 0.05


def test_gauge_invariance_of_observables():
    U = constant_flux_field((6, 6, 6, 6), SD_UNIT, "u1")
    q0 = clover_charge(U)
    en0 = chirality_energies(U)
    for seed in range(3):
        V = random_gauge_transform(U, seed=seed + 1)
        assert abs(clover_charge(V) - q0) < 1e-10
        en = chirality_energies(V)
        assert abs(en["asd_sq"] - en0["asd_sq"]) < 1e-8
        assert abs(en["total"] - en0["total"]) < 1e-8


def test_clover_field_is_antihermitian_traceless():
    U = add_link_noise(identity_field((4, 4, 4, 4), "su2"), 0.2, seed=2)
    f = clover_field(U, 0, 1)
    assert np.abs(f + np.conj(np.swapaxes(f, -1, -2))).max() < 1e-14
    assert np.abs(np.trace(f, axis1=-2, axis2=-1)).max() < 1e-14


def test_single_plaquette_excitation_is_topologically_trivial():
    U = identity_field((6, 6, 6, 6), "u1")
    U.links[0, 0, 0, 0, 0, 0, 0] = np.exp(0.3j)
    assert abs(clover_charge(U)) < 1e-3


def test_asd_force_is_gradient_of_asd_energy():
    U = add_link_noise(constant_flux_field((4, 4, 4, 4), HALF_FLUX, "su2"),
                       0.05, seed=7)
    G = asd_force(U)
    rng = np.random.default_rng(0)
    X = rng.normal(size=U.links.shape[:-2] + (3,))
    # anti-Hermitian direction fields
    H = np.zeros(U.links.shape, dtype=complex)
    H[..., 0, 0] = 1j * X[..., 2]
    H[..., 1, 1] = -1j * X[..., 2]
    H[..., 0, 1] = X[..., 1] + 1j * X[..., 0]
    H[..., 1, 0] = -X[..., 1] + 1j * X[..., 0]
    eps = 1e-6

    def energy(V):
        return plaquette_chirality_energies(V)["asd_sq"]

    Up, Um = U.copy(), U.copy()
    from g2lab.gauge.lattice import _expm_ah
    Up.links = _expm_ah(eps * H) @ Up.links
    Um.links = _expm_ah(-eps * H) @ Um.links
    fd = (energy(Up) - energy(Um)) / (2 * eps)
    # the derivative along H is <H, G>, so exp(-tau G) is a descent update
    pair = float(np.real(np.trace(
        H @ np.conj(np.swapaxes(G, -1, -2)), axis1=-2, axis2=-1)).sum())
    assert fd == pytest.approx(pair, rel=1e-5)


def test_cooling_identity_start_stops_immediately():
    U = identity_field((4, 4, 4, 4), "su2")
    out = cool_to_sd(U, max_steps=10, tol=1e-3)
    assert out["steps"] == 0 and out["converged"]


def test_cooling_monotone_and_converges():
    U = add_link_noise(constant_flux_field((6, 6, 6, 6), HALF_FLUX, "su2"),
                       0.005, seed=42)
    out = cool_to_sd(U, max_steps=5000, tol=1e-3)
    assert out["converged"]
    fracs = [row[1] for row in out["history"]]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(fracs, fracs[1:]))
    assert abs(out["history"][-1][2] + 1.0) < 0.1


def test_wilson_force_is_antihermitian():
    U = add_link_noise(identity_field((4, 4, 4, 4), "su2"), 0.3, seed=3)
    G = wilson_force(U)
    assert np.abs(G + np.conj(np.swapaxes(G, -1, -2))).max() < 1e-12


def test_reunitarize_projects_back():
    U = identity_field((3, 3, 3, 3), "su2")
    U.links = U.links + 0.05 * (np.random.default_rng(1).normal(
        size=U.links.shape) + 1j * np.random.default_rng(2).normal(
        size=U.links.shape))
    reunitarize(U)
    assert U.unitarity_defect() < 1e-12


def test_lift_and_7d_residual_ratio(standard_fibration):
    """A lifted 4D field has 7D residual sqrt(2/3) times its ASD residual."""
    U = constant_flux_field((6, 6, 6, 6),
                            [[0, 1, 0, 0], [-1, 0, 0, 0],
                             [0, 0, 0, -1], [0, 0, 1, 0]], "u1")
    U7 = lift_lattice_7d(U, (3, 3, 3))
    assert U7.ndim == 7
    res = residual_7d(U7, standard_fibration.adapted_g2())
    asd4 = asd_residual_4d(U)
    assert res["f7_norm"] == pytest.approx(np.sqrt(2.0 / 3.0) * asd4, rel=1e-10)
    # an SD flux lifts with residual at discretization level only
    V7 = lift_lattice_7d(constant_flux_field((6, 6, 6, 6), SD_UNIT, "u1"),
                         (3, 3, 3))
    resV = residual_7d(V7, standard_fibration.adapted_g2())
    assert resV["f7_norm"] < 2 * asd_residual_4d(
        constant_flux_field((6, 6, 6, 6), SD_UNIT, "u1")) + 1e-12


def test_snapshot_roundtrip(tmp_path):
    U = add_link_noise(constant_flux_field((4, 4, 4, 4), SD_UNIT, "su2"),
                       0.1, seed=5)
    path = str(tmp_path / "field.lat")
    write_snapshot(U, path)
    V = read_snapshot(path)
    assert V.dims == U.dims and V.group == U.group
    assert np.abs(V.links - U.links).max() == 0.0
    import json
    manifest = json.load(open(path + ".json"))
    assert manifest["dims"] == list(U.dims)
    assert manifest["group"] == "su2"


def test_snapshot_rejects_garbage(tmp_path):
    p = tmp_path / "junk.lat"
    p.write_bytes(b"NOTAFILE" + b"\0" * 64)
    with pytest.raises(ValueError):
        read_snapshot(str(p))
