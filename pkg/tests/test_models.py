import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from nhprobe import models, opalg
from nhprobe.models import (DoubleKitaevSpec, KitaevSpec, NanowireSpec,
                            ParafermionSpec)


def build(spec):
    ops = models.build_modes(spec)
    return ops, models.build_hamiltonian(spec, ops)


def test_kitaev_flat_band_point():
    _, ham = build(KitaevSpec(sites=2, t=1.0, mu=0.0, delta=1.0))
    assert np.allclose(np.linalg.eigvalsh(ham), [-1, -1, 1, 1], atol=1e-12)


def test_kitaev_onsite_only():
    _, ham = build(KitaevSpec(sites=2, t=0.0, mu=2.0, delta=0.0))
    assert np.allclose(np.linalg.eigvalsh(ham), [-2, 0, 0, 2], atol=1e-12)


def test_kitaev_deep_phase_ground_doublet():
    _, ham = build(KitaevSpec(sites=8, t=1.0, mu=0.1, delta=1.0))
    w = np.linalg.eigvalsh(ham)
    assert w[1] - w[0] < 1e-3
    assert w[2] - w[1] > 0.5


def test_kitaev_sweet_spot_degeneracy_exact():
    _, ham = build(KitaevSpec(sites=5, t=1.0, mu=0.0, delta=1.0))
    w = np.linalg.eigvalsh(ham)
    assert w[1] - w[0] <= 1e-12


def test_majorana_form_flat_band_single_term():
    spec = KitaevSpec(sites=2, t=1.0, mu=0.0, delta=1.0)
    ops = models.build_modes(spec)
    c = opalg.majorana_modes(ops)
    assert np.abs(models.majorana_form_hamiltonian(spec, ops)
                  - 1j * c[1] @ c[2]).max() <= 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_majorana_form_matches_mode_form(seed):
    rng = np.random.default_rng(seed)
    t, mu, delta = rng.uniform(0.2, 2.0, size=3)
    spec = KitaevSpec(sites=3, t=t, mu=mu, delta=delta)
    ops = models.build_modes(spec)
    diff = np.abs(models.build_hamiltonian(spec, ops)
                  - models.majorana_form_hamiltonian(spec, ops)).max()
    assert diff <= 1e-10


def test_hamiltonians_hermitian():
    cases = [
        KitaevSpec(sites=3, t=1.0, mu=0.7, delta=0.4),
        DoubleKitaevSpec(sites=2, t=1.0, mu=0.4, delta=1.0, w=0.3),
        NanowireSpec(sites=2, t=1.0, mu=0.5, alpha=0.5, zeeman=1.5, delta=1.0),
        ParafermionSpec(sites=3, h=1.0, g=1.8),
    ]
    for spec in cases:
        _, ham = build(spec)
        assert np.abs(ham - ham.conj().T).max() <= 1e-12


def test_fermionic_models_commute_with_parity():
    cases = [
        KitaevSpec(sites=4, t=1.0, mu=0.7, delta=0.4),
        DoubleKitaevSpec(sites=2, t=1.0, mu=0.4, delta=1.0, w=0.5),
        NanowireSpec(sites=2, t=1.0, mu=0.5, alpha=0.5, zeeman=1.5, delta=1.0),
    ]
    for spec in cases:
        ops, ham = build(spec)
        parity = opalg.total_parity(ops)
        assert np.abs(ham @ parity - parity @ ham).max() <= 1e-10


def test_parafermion_commutes_with_clock_charge():
    spec = ParafermionSpec(sites=4, h=1.0, g=1.8)
    ops, ham = build(spec)
    charge = opalg.clock_charge(ops)
    assert np.abs(ham @ charge - charge @ ham).max() <= 1e-10


def test_parafermion_onsite_term_brute_force():
    # g = 0 decouples the sites; the 9-dim spectrum must be all pairwise
    # sums of the single-site eigenvalues of h(e^{i pi/3} a1† a2 + h.c.)
    spec = ParafermionSpec(sites=2, h=1.0, g=0.0)
    ops, ham = build(spec)
    single = opalg.build_parafermion_modes(1, 3)
    a1, a2 = single.annihilators
    term = np.exp(1j * np.pi / 3) * a1.conj().T @ a2
    site_levels = np.linalg.eigvalsh(term + term.conj().T)
    expected = np.sort([x + y for x in site_levels for y in site_levels])
    assert np.allclose(np.linalg.eigvalsh(ham), expected, atol=1e-10)


def test_double_kitaev_decoupled_ground_cluster():
    # identical decoupled chains: the two singly-excited combinations are
    # exactly degenerate; the four lowest states sit far below the bulk
    _, ham = build(DoubleKitaevSpec(sites=4, t=1.0, mu=0.4, delta=1.0, w=0.0))
    w = np.linalg.eigvalsh(ham)
    assert w[2] - w[1] <= 1e-6
    assert w[3] - w[0] < 1e-2
    assert w[4] - w[3] > 1.0


def test_bulk_spectrum_kitaev():
    assert models.bulk_spectrum(KitaevSpec(sites=2, t=1.0, mu=-2.0, delta=1.0),
                                0.0).branches == pytest.approx([0.0, 0.0])
    branches = models.bulk_spectrum(KitaevSpec(sites=2, t=1.0, mu=0.0, delta=1.0),
                                    np.pi / 2).branches
    assert branches == pytest.approx([-2.0, 2.0])


def test_bulk_spectrum_particle_hole_symmetry():
    kitaev = KitaevSpec(sites=2, t=1.3, mu=0.7, delta=0.4)
    wire = NanowireSpec(sites=2, t=1.0, mu=0.5, alpha=0.5, zeeman=1.5, delta=1.0)
    for k in np.linspace(-np.pi, np.pi, 17):
        for spec in (kitaev, wire):
            branches = models.bulk_spectrum(spec, float(k)).branches
            assert np.abs(branches + branches[::-1]).max() <= 1e-12


def _min_gap(spec):
    result = minimize_scalar(
        lambda k: float(np.abs(models.bulk_spectrum(spec, k).branches).min()),
        bounds=(-np.pi, np.pi), method="bounded",
        options={"xatol": 1e-12})
    return result.fun


def test_gap_closes_on_boundaries():
    assert _min_gap(KitaevSpec(sites=2, t=1.0, mu=2.0, delta=1.0)) < 1e-6
    v_c = models.phase_boundary(NanowireSpec(sites=2, t=1.0, mu=0.5, alpha=0.5,
                                             zeeman=0.0, delta=1.0))
    wire = NanowireSpec(sites=2, t=1.0, mu=0.5, alpha=0.5, zeeman=v_c, delta=1.0)
    assert _min_gap(wire) < 1e-6


def test_gap_open_off_boundary():
    assert _min_gap(KitaevSpec(sites=2, t=1.0, mu=1.0, delta=1.0)) > 0.1


def test_phase_boundaries():
    assert models.phase_boundary(KitaevSpec(sites=2, t=1.0)) == pytest.approx(2.0)
    wire = NanowireSpec(sites=2, delta=1.0, mu=0.5)
    assert models.phase_boundary(wire) == pytest.approx(1.118033988749895)
    assert models.phase_boundary(ParafermionSpec(sites=2, h=1.0, g=0.3)) == 1.0
    with pytest.raises(ValueError):
        models.phase_boundary(DoubleKitaevSpec(sites=2))
    with pytest.raises(ValueError):
        models.bulk_spectrum(ParafermionSpec(sites=2, h=1.0, g=1.0), 0.0)


def test_mode_count_mismatch_rejected():
    spec = KitaevSpec(sites=3)
    wrong = models.build_modes(KitaevSpec(sites=4))
    with pytest.raises(ValueError):
        models.build_hamiltonian(spec, wrong)
    with pytest.raises(ValueError):
        models.majorana_form_hamiltonian(spec, wrong)
    para_ops = models.build_modes(ParafermionSpec(sites=3, h=1.0, g=0.5))
    with pytest.raises(ValueError):
        models.build_hamiltonian(spec, para_ops)


def test_spec_validation():
    with pytest.raises(ValueError):
        KitaevSpec(sites=1)
    with pytest.raises(ValueError):
        KitaevSpec(sites=3, delta=-0.5)
    with pytest.raises(ValueError):
        NanowireSpec(sites=3, t=float("inf"))


@pytest.mark.parametrize("spec", [
    KitaevSpec(sites=4, t=1.0, mu=0.3, delta=0.8),
    DoubleKitaevSpec(sites=3, t=1.0, mu=0.4, delta=1.0, w=0.6),
    NanowireSpec(sites=3, t=1.0, mu=0.5, alpha=0.5, zeeman=1.2, delta=0.9),
    ParafermionSpec(sites=3, h=1.0, g=1.4, d=3),
])
def test_spec_serialization_roundtrip(spec):
    assert models.spec_from_dict(models.spec_to_dict(spec)) == spec


def test_spec_from_dict_diagnostics():
    with pytest.raises(ValueError, match="model"):
        models.spec_from_dict({"sites": 3})
    with pytest.raises(ValueError, match="sites"):
        models.spec_from_dict({"model": "kitaev"})
    with pytest.raises(ValueError, match="unknown"):
        models.spec_from_dict({"model": "xy-chain", "sites": 3})
