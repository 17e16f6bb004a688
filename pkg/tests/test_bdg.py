import numpy as np
import pytest

from nhprobe import bdg, models, opalg
from nhprobe.errors import NotTopologicalError, SingularParameterError
from nhprobe.models import KitaevSpec, NanowireSpec

WIRE = dict(t=1.0, mu=0.5, alpha=0.5, delta=1.0)


def test_kitaev_flat_band_single_particle():
    matrix = bdg.build_bdg(KitaevSpec(sites=2, t=1.0, mu=0.0, delta=1.0))
    assert np.allclose(np.linalg.eigvalsh(matrix.matrix), [-1, 0, 0, 1], atol=1e-12)


def test_bdg_eigenvalues_come_in_pairs():
    matrix = bdg.build_bdg(KitaevSpec(sites=5, t=1.3, mu=0.7, delta=0.4))
    w = np.linalg.eigvalsh(matrix.matrix)
    assert np.abs(w + w[::-1]).max() <= 1e-10


def test_bdg_particle_hole_symmetry():
    for spec in (KitaevSpec(sites=4, t=1.1, mu=0.6, delta=0.8),
                 NanowireSpec(sites=3, zeeman=1.5, **WIRE)):
        m = bdg.build_bdg(spec).matrix
        n = m.shape[0] // 2
        tau_x = np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
        assert np.abs(tau_x @ m.conj() @ tau_x + m).max() <= 1e-10
        assert np.abs(m - m.conj().T).max() <= 1e-12


@pytest.mark.parametrize("seed", [0, 1])
def test_kitaev_fold_matches_many_body(seed):
    rng = np.random.default_rng(seed)
    t, mu, delta = rng.uniform(0.3, 1.5, size=3)
    spec = KitaevSpec(sites=4, t=t, mu=mu, delta=delta)
    _, ham = models.build_modes(spec), None
    ops = models.build_modes(spec)
    ham = models.build_hamiltonian(spec, ops)
    folded = bdg.fold_spectrum(bdg.build_bdg(spec))
    assert np.abs(folded - np.linalg.eigvalsh(ham)).max() <= 1e-8


def test_nanowire_fold_matches_many_body():
    spec = NanowireSpec(sites=2, zeeman=1.5, **WIRE)
    ops = models.build_modes(spec)
    ham = models.build_hamiltonian(spec, ops)
    folded = bdg.fold_spectrum(bdg.build_bdg(spec))
    assert np.abs(folded - np.linalg.eigvalsh(ham)).max() <= 1e-8


def test_nanowire_zero_modes_topological_side():
    matrix = bdg.build_bdg(NanowireSpec(sites=50, zeeman=1.5, **WIRE))
    w = np.sort(np.abs(np.linalg.eigvalsh(matrix.matrix)))
    assert w[1] < 1e-6
    assert w[2] > 0.1


def test_nanowire_trivial_side_is_gapped():
    matrix = bdg.build_bdg(NanowireSpec(sites=50, zeeman=0.2, **WIRE))
    w = np.sort(np.abs(np.linalg.eigvalsh(matrix.matrix)))
    assert w[0] > 1e-3
    with pytest.raises(NotTopologicalError):
        bdg.extract_zero_modes(matrix)


def test_extract_kitaev_sweet_spot_edges():
    pair = bdg.extract_zero_modes(bdg.build_bdg(KitaevSpec(sites=4, mu=0.0)))
    gamma = np.zeros(8)
    gamma[0] = 1.0  # c_1
    gamma_prime = np.zeros(8)
    gamma_prime[7] = 1.0  # c_{2N}
    assert np.allclose(pair.gamma, gamma, atol=1e-8)
    assert np.allclose(pair.gamma_prime, gamma_prime, atol=1e-8)
    assert pair.edge_weights[0] > 0.999 and pair.edge_weights[1] > 0.999


def test_extract_nanowire_phase():
    matrix = bdg.build_bdg(NanowireSpec(sites=50, zeeman=1.5, **WIRE))
    pair = bdg.extract_zero_modes(matrix)
    assert abs(pair.energies[0]) < 1e-6 and abs(pair.energies[1]) < 1e-6
    assert pair.phase == pytest.approx(0.36, abs=0.02)
    assert pair.fit_residual < 1e-6
    assert pair.edge_weights[0] > 0.9 and pair.edge_weights[1] > 0.9


def test_kitaev_zero_mode_edge_support():
    pair = bdg.extract_zero_modes(
        bdg.build_bdg(KitaevSpec(sites=20, t=1.0, mu=0.4, delta=1.0)),
        edge_fraction=0.15)
    assert pair.edge_weights[0] > 0.95  # first 3 sites


def test_kitaev_zero_mode_decay_matches_x_minus():
    spec = KitaevSpec(sites=20, t=1.0, mu=0.4, delta=1.0)
    pair = bdg.extract_zero_modes(bdg.build_bdg(spec), edge_fraction=0.5)
    roots = bdg.kitaev_x_pm(spec)
    x = max(abs(roots.x_plus), abs(roots.x_minus))
    # gamma lives on the odd Majoranas (even 0-based slots)
    site_amp = np.abs(pair.gamma[0::2])
    for j in range(5, 11):
        ratio = (site_amp[j] / site_amp[4]) / x ** (j - 4)
        assert 1 / 3 < ratio < 3


def test_lifted_parity_commutes_on_ground_doublet():
    spec = KitaevSpec(sites=8, t=1.0, mu=0.4, delta=1.0)
    pair = bdg.extract_zero_modes(bdg.build_bdg(spec), edge_fraction=0.5)
    ops = models.build_modes(spec)
    ham = models.build_hamiltonian(spec, ops)
    c = opalg.majorana_modes(ops)
    gamma = bdg.lift_majorana(pair.gamma, c)
    gamma_prime = bdg.lift_majorana(pair.gamma_prime, c)
    p_gamma = opalg.ground_parity_operator(gamma, gamma_prime, tol=1e-3)
    w, v = np.linalg.eigh(ham)
    doublet = v[:, :2]
    commutator = ham @ p_gamma - p_gamma @ ham
    residual = np.linalg.norm(commutator @ doublet) / np.linalg.norm(p_gamma @ doublet)
    assert residual < 1e-3


def test_lifted_gamma_squares_to_identity():
    spec = KitaevSpec(sites=6, t=1.0, mu=0.2, delta=1.0)
    pair = bdg.extract_zero_modes(bdg.build_bdg(spec), edge_fraction=0.5)
    c = opalg.majorana_modes(models.build_modes(spec))
    gamma = bdg.lift_majorana(pair.gamma, c)
    assert np.abs(gamma @ gamma - np.eye(64)).max() < 1e-10


def test_x_pm_examples():
    flat = bdg.kitaev_x_pm(KitaevSpec(sites=2, t=1.0, mu=0.0, delta=1.0))
    assert flat.x_plus == pytest.approx(0.0) and flat.x_minus == pytest.approx(0.0)
    mid = bdg.kitaev_x_pm(KitaevSpec(sites=2, t=1.0, mu=1.0, delta=1.0))
    assert sorted([mid.x_plus.real, mid.x_minus.real]) == pytest.approx([-0.5, 0.0])
    trivial = bdg.kitaev_x_pm(KitaevSpec(sites=2, t=1.0, mu=2.5, delta=1.0))
    assert max(abs(trivial.x_plus), abs(trivial.x_minus)) > 1.0


def test_x_pm_singular_parameters():
    with pytest.raises(SingularParameterError):
        bdg.kitaev_x_pm(KitaevSpec(sites=2, t=0.0, mu=1.0, delta=0.0))


def test_build_bdg_rejects_unsupported():
    with pytest.raises(ValueError):
        bdg.build_bdg(models.ParafermionSpec(sites=2, h=1.0, g=1.0))


def test_edge_fraction_validation():
    matrix = bdg.build_bdg(KitaevSpec(sites=4, mu=0.0))
    with pytest.raises(ValueError):
        bdg.extract_zero_modes(matrix, edge_fraction=0.0)
    with pytest.raises(ValueError):
        bdg.extract_zero_modes(matrix, edge_fraction=0.7)
