import numpy as np
import pytest

from nhprobe import linalg
from nhprobe.errors import NotPositiveSemidefiniteError

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def random_complex(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def test_expm_zero_is_identity():
    assert np.allclose(linalg.expm(np.zeros((3, 3))), np.eye(3), atol=1e-15)


def test_expm_nilpotent_series_truncates():
    j2 = np.array([[0, 0], [1, 0]], dtype=complex)
    got = linalg.expm(-1j * j2)  # lambda*t = 1
    assert np.allclose(got, np.array([[1, 0], [-1j, 1]]), atol=1e-14)


def test_expm_pauli_rotation():
    got = linalg.expm(-1j * (np.pi / 2) * SX)
    assert np.allclose(got, -1j * SX, atol=1e-14)


def test_expm_rejects_bad_input():
    with pytest.raises(ValueError):
        linalg.expm(np.ones((2, 3)))
    with pytest.raises(ValueError):
        linalg.expm(np.array([[np.nan, 0], [0, 1]]))


def test_expm_inverse_pairs():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a = random_complex(rng, 6)
        a *= 10.0 / max(np.linalg.norm(a), 1e-12)
        prod = linalg.expm(a) @ linalg.expm(-a)
        assert np.linalg.norm(prod - np.eye(6)) / np.linalg.norm(np.eye(6)) < 1e-8


def test_expm_hermitian_generator_is_unitary():
    rng = np.random.default_rng(8)
    h = linalg.hermitize(random_complex(rng, 5))
    u = linalg.expm(-1j * h)
    assert np.linalg.norm(u.conj().T @ u - np.eye(5)) < 1e-8


def test_expm_matches_eigendecomposition_route():
    rng = np.random.default_rng(9)
    checked = 0
    while checked < 5:
        a = random_complex(rng, 6)
        w, v = np.linalg.eig(a)
        if np.linalg.cond(v) > 1e6:
            continue
        via_eig = (v * np.exp(w)) @ np.linalg.inv(v)
        diff = np.linalg.norm(linalg.expm(a) - via_eig) / np.linalg.norm(via_eig)
        assert diff < 1e-6
        checked += 1


def test_herm_eig_examples():
    dec = linalg.herm_eig(np.diag([3.0, 1.0]))
    assert np.allclose(dec.eigenvalues, [1.0, 3.0])
    dec = linalg.herm_eig(SX)
    assert np.allclose(dec.eigenvalues, [-1.0, 1.0])
    minus = dec.eigenvectors[:, 0]
    assert np.isclose(abs(minus[0]), 1 / np.sqrt(2)) and np.isclose(
        minus[1] / minus[0], -1.0)


def test_herm_eig_kitaev_flat_band():
    from nhprobe import KitaevSpec, build_hamiltonian, build_modes

    spec = KitaevSpec(sites=2, t=1.0, mu=0.0, delta=1.0)
    h = build_hamiltonian(spec, build_modes(spec))
    dec = linalg.herm_eig(h)
    assert np.allclose(dec.eigenvalues, [-1.0, -1.0, 1.0, 1.0], atol=1e-12)


def test_herm_eig_invariants():
    rng = np.random.default_rng(10)
    a = linalg.hermitize(random_complex(rng, 8))
    dec = linalg.herm_eig(a)
    scale = np.linalg.norm(a)
    assert np.linalg.norm(dec.reconstruct() - linalg.hermitize(a)) <= 1e-10 * scale
    v = dec.eigenvectors
    assert np.linalg.norm(v.conj().T @ v - np.eye(8)) < 1e-10
    assert np.all(np.diff(dec.eigenvalues) >= 0)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        linalg.herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_sqrt_examples():
    assert np.allclose(linalg.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    assert np.allclose(linalg.psd_sqrt(np.eye(3)), np.eye(3))
    v = np.array([0.6, 0.8j], dtype=complex)
    proj = np.outer(v, v.conj())
    assert np.allclose(linalg.psd_sqrt(proj), proj, atol=1e-12)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(11)
    w = rng.uniform(0.1, 2.0, size=6)
    q, _ = np.linalg.qr(random_complex(rng, 6))
    a = linalg.hermitize((q * w) @ q.conj().T)
    s = linalg.psd_sqrt(a)
    assert np.linalg.norm(s @ s - a) <= 1e-8 * np.linalg.norm(a)
    # full-rank input: recomputed spectrum of the root stays non-negative
    assert np.linalg.eigvalsh(s).min() >= 0.0


def test_psd_sqrt_clamps_roundoff_negatives():
    a = np.diag([1.0, -1e-12])
    s = linalg.psd_sqrt(a, clamp_tol=1e-10)
    assert np.allclose(s, np.diag([1.0, 0.0]))


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveSemidefiniteError) as info:
        linalg.psd_sqrt(np.diag([1.0, -0.5]), clamp_tol=1e-10)
    assert info.value.min_eigenvalue == pytest.approx(-0.5)


def test_fidelity_examples():
    rho = np.diag([0.25, 0.75]).astype(complex)
    assert linalg.uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
    pure0 = np.diag([1.0, 0.0]).astype(complex)
    assert linalg.uhlmann_fidelity(np.eye(2) / 2, pure0) == pytest.approx(0.5, abs=1e-12)
    pure1 = np.diag([0.0, 1.0]).astype(complex)
    assert linalg.uhlmann_fidelity(pure0, pure1) == pytest.approx(0.0, abs=1e-12)


def test_fidelity_symmetric():
    rng = np.random.default_rng(12)
    for _ in range(4):
        a = random_complex(rng, 4)
        b = random_complex(rng, 4)
        rho = linalg.hermitize(a @ a.conj().T)
        rho /= np.trace(rho).real
        sig = linalg.hermitize(b @ b.conj().T)
        sig /= np.trace(sig).real
        f1 = linalg.uhlmann_fidelity(rho, sig)
        f2 = linalg.uhlmann_fidelity(sig, rho)
        assert abs(f1 - f2) < 1e-8
        assert 0.0 <= f1 <= 1.0


def test_fidelity_rejects_bad_trace():
    with pytest.raises(ValueError):
        linalg.uhlmann_fidelity(np.eye(2), np.eye(2) / 2)
