"""Single-particle Bogoliubov-de Gennes solver.

Nambu convention: basis (a_1..a_D, a†_1..a†_D), site-major with spin-up
before spin-down, and

    H_many = Psi† H_bdg Psi + const,
    H_bdg  = (1/2) [[h, Delta], [-Delta*, -h*]]

so eigenvalues come in ±eps/2 pairs with eps the quasiparticle energies.
Particle-hole symmetry is C = tau_x K.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotTopologicalError, SingularParameterError
from .models import KitaevSpec, NanowireSpec


@dataclass(frozen=True)
class BdgMatrix:
    matrix: np.ndarray
    n_sites: int
    n_orbitals: int  # single-particle dimension D (modes per Nambu block)
    constant: float  # scalar term of the many-body Hamiltonian

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ZeroModePair:
    """Self-conjugate near-zero modes, gamma on the left edge, gamma' on the right.

    Coefficient vectors are real, indexed over the Majorana partners of each
    mode (2 per mode, interleaved), truncated to the edge region and
    renormalized so the lifted operators square to the identity.
    """

    energies: tuple
    gamma: np.ndarray
    gamma_prime: np.ndarray
    edge_weights: tuple  # (left weight of gamma, right weight of gamma')
    phase: float | None  # spin-structure angle of the left mode (nanowire)
    fit_residual: float | None


def build_bdg(spec) -> BdgMatrix:
    """BdG matrix of the quadratic content of a Kitaev or nanowire spec."""
    if isinstance(spec, KitaevSpec):
        n = spec.sites
        h = np.zeros((n, n), dtype=complex)
        pair = np.zeros((n, n), dtype=complex)
        for j in range(n):
            h[j, j] = -spec.mu
            if j + 1 < n:
                h[j, j + 1] = h[j + 1, j] = -spec.t
                pair[j + 1, j] += spec.delta
                pair[j, j + 1] -= spec.delta
        constant = spec.mu * n / 2
        n_orb = n
    elif isinstance(spec, NanowireSpec):
        n = spec.sites
        n_orb = 2 * n
        h = np.zeros((n_orb, n_orb), dtype=complex)
        pair = np.zeros((n_orb, n_orb), dtype=complex)
        for i in range(n):
            for s, sgn in ((0, +1), (1, -1)):
                m = 2 * i + s
                h[m, m] += 2 * spec.t - spec.mu
                if i + 1 < n:
                    hop = -(spec.t - 1j * spec.alpha * sgn)
                    h[2 * (i + 1) + s, m] += hop
                    h[m, 2 * (i + 1) + s] += np.conj(hop)
            h[2 * i, 2 * i + 1] += spec.zeeman
            h[2 * i + 1, 2 * i] += spec.zeeman
            pair[2 * i + 1, 2 * i] += spec.delta
            pair[2 * i, 2 * i + 1] -= spec.delta
        constant = 0.0
    else:
        raise ValueError(f"build_bdg supports Kitaev and nanowire specs, not {type(spec).__name__}")

    matrix = 0.5 * np.block([[h, pair], [-pair.conj(), -h.conj()]])
    return BdgMatrix(matrix=matrix, n_sites=n, n_orbitals=n_orb, constant=constant)


def quasiparticle_energies(bdg: BdgMatrix) -> np.ndarray:
    """Non-negative quasiparticle energies eps_m, ascending."""
    w = np.linalg.eigvalsh(bdg.matrix)
    return 2.0 * w[bdg.n_orbitals:]


def fold_spectrum(bdg: BdgMatrix) -> np.ndarray:
    """All 2^D many-body energies from quasiparticle occupations, sorted."""
    eps = quasiparticle_energies(bdg)
    if len(eps) > 12:
        raise ValueError("folding is only meant for small systems")
    d = bdg.n_orbitals
    h_trace = 2.0 * float(np.trace(bdg.matrix[:d, :d]).real)  # upper block is h/2
    e0 = bdg.constant + 0.5 * h_trace - 0.5 * eps.sum()
    energies = [e0 + sum(eps[k] for k in range(len(eps)) if mask >> k & 1)
                for mask in range(2 ** len(eps))]
    return np.sort(np.asarray(energies))


def _phs_conjugate(psi: np.ndarray) -> np.ndarray:
    n = psi.shape[0] // 2
    return np.concatenate([psi[n:].conj(), psi[:n].conj()])


def _self_conjugate_basis(v1: np.ndarray, v2: np.ndarray):
    """Orthonormal pair of C-invariant vectors spanning span{v1, v2}."""
    m1 = v1 + _phs_conjugate(v1)
    if np.linalg.norm(m1) < 1e-8:
        m1 = 1j * v1 + _phs_conjugate(1j * v1)
    m1 /= np.linalg.norm(m1)
    m2 = v2 + _phs_conjugate(v2)
    m2 -= m1 * np.vdot(m1, m2)
    if np.linalg.norm(m2) < 1e-8:
        m2 = 1j * v2 + _phs_conjugate(1j * v2)
        m2 -= m1 * np.vdot(m1, m2)
    m2 /= np.linalg.norm(m2)
    return m1, m2


def _edge_mask(n_sites: int, n_orb: int, edge_sites: int, left: bool) -> np.ndarray:
    per_site = n_orb // n_sites
    sites = range(edge_sites) if left else range(n_sites - edge_sites, n_sites)
    mask = np.zeros(2 * n_orb, dtype=bool)
    for i in sites:
        lo, hi = i * per_site, (i + 1) * per_site
        mask[lo:hi] = True
        mask[n_orb + lo:n_orb + hi] = True
    return mask


def extract_zero_modes(bdg: BdgMatrix, edge_fraction: float = 0.1) -> ZeroModePair:
    """Isolate the two near-zero BdG modes as edge-localized Majorana vectors.

    The degenerate pair is rotated to maximize the left-edge weight of
    gamma (gamma' takes the orthogonal combination), truncated to the edge
    region, and renormalized.  For spinful wires the left mode determines
    the spin-structure phase by least squares, with the fit residual
    reported.

    Raises NotTopologicalError when the two smallest |E| are not separated
    from the rest of the spectrum by at least a factor of 10.
    """
    if not 0.0 < edge_fraction <= 0.5:
        raise ValueError("edge_fraction must lie in (0, 0.5]")
    w, vecs = np.linalg.eigh(bdg.matrix)
    order = np.argsort(np.abs(w))
    e0, e1, e2 = np.abs(w[order[0]]), np.abs(w[order[1]]), np.abs(w[order[2]])
    if 10.0 * e1 > e2:
        raise NotTopologicalError(
            f"no isolated zero-mode pair: |E| = {e0:.3e}, {e1:.3e} vs bulk {e2:.3e}"
        )
    v1, v2 = vecs[:, order[0]], vecs[:, order[1]]
    m1, m2 = _self_conjugate_basis(v1, v2)

    edge_sites = max(1, int(np.ceil(edge_fraction * bdg.n_sites)))
    left = _edge_mask(bdg.n_sites, bdg.n_orbitals, edge_sites, left=True)
    right = _edge_mask(bdg.n_sites, bdg.n_orbitals, edge_sites, left=False)

    # left-edge weight of cos(th) m1 + sin(th) m2 is a 2x2 quadratic form
    quad = np.array([
        [np.sum(np.abs(m1[left]) ** 2), np.real(np.sum(m1.conj()[left] * m2[left]))],
        [np.real(np.sum(m2.conj()[left] * m1[left])), np.sum(np.abs(m2[left]) ** 2)],
    ])
    _, rot = np.linalg.eigh(quad)
    x = rot[:, -1]
    gvec = x[0] * m1 + x[1] * m2
    gpvec = -x[1] * m1 + x[0] * m2
    if np.sum(np.abs(gpvec[right]) ** 2) < np.sum(np.abs(gvec[right]) ** 2):
        gvec, gpvec = gpvec, gvec

    left_weight = float(np.sum(np.abs(gvec[left]) ** 2))
    right_weight = float(np.sum(np.abs(gpvec[right]) ** 2))

    def truncate(vec, mask):
        out = np.where(mask, vec, 0.0)
        return out / np.linalg.norm(out)

    gvec = truncate(gvec, left)
    gpvec = truncate(gpvec, right)

    n_orb = bdg.n_orbitals
    phase = fit_residual = None
    if bdg.n_orbitals == 2 * bdg.n_sites:  # spinful wire
        u = gvec[:n_orb]
        phase, fit_residual, sign = _fit_edge_phase(u[0], u[1])
        gvec = sign * gvec
    else:
        lead = np.argmax(np.abs(_majorana_coefficients(gvec)))
        if _majorana_coefficients(gvec)[lead] < 0:
            gvec = -gvec
    lead = np.argmax(np.abs(_majorana_coefficients(gpvec)))
    if _majorana_coefficients(gpvec)[lead] < 0:
        gpvec = -gpvec

    # norm sqrt(2) in the Nambu vector lifts to an operator squaring to 1
    gamma = _majorana_coefficients(gvec * np.sqrt(2))
    gamma_prime = _majorana_coefficients(gpvec * np.sqrt(2))
    energies = (float(w[order[0]]), float(w[order[1]]))
    return ZeroModePair(energies=energies, gamma=gamma, gamma_prime=gamma_prime,
                        edge_weights=(left_weight, right_weight),
                        phase=phase, fit_residual=fit_residual)


def _majorana_coefficients(psi: np.ndarray) -> np.ndarray:
    """Real coefficients over interleaved Majorana partners for C-invariant psi."""
    n = psi.shape[0] // 2
    u = psi[:n]
    coeffs = np.empty(2 * n)
    coeffs[0::2] = u.real
    coeffs[1::2] = u.imag
    return coeffs


def _fit_edge_phase(u_up: complex, u_dn: complex):
    """Least-squares fit of (u_up, u_dn) to (i s e^{i phi}, s e^{-i phi}), s > 0.

    Returns (phi, relative residual, sign) where sign in {+1, -1} flips the
    overall Majorana vector into the branch with cos(phi) > 0.
    """
    sign = 1.0
    z = 1j * np.conj(u_up) + u_dn
    phi = -np.angle(z)
    if np.cos(phi) < 0:
        sign = -1.0
        z = -z
        phi = -np.angle(z)
    s = np.abs(z) / 2
    fit = np.array([1j * s * np.exp(1j * phi), s * np.exp(-1j * phi)])
    actual = sign * np.array([u_up, u_dn])
    norm = np.linalg.norm(actual)
    residual = float(np.linalg.norm(actual - fit) / norm) if norm > 0 else 0.0
    return float(phi), residual, sign


def lift_majorana(coefficients: np.ndarray, majoranas: list) -> np.ndarray:
    """Many-body operator sum_m coefficients[m] * c_m."""
    if len(coefficients) != len(majoranas):
        raise ValueError("coefficient count does not match Majorana count")
    out = np.zeros_like(majoranas[0])
    for coeff, c in zip(coefficients, majoranas):
        if coeff != 0.0:
            out = out + coeff * c
    return out


@dataclass(frozen=True)
class KitaevLocalization:
    x_plus: complex
    x_minus: complex


def kitaev_x_pm(spec: KitaevSpec) -> KitaevLocalization:
    """Closed-form decay roots of the Kitaev zero modes.

    x_pm = (-mu ± sqrt(mu^2 - 4 t^2 + 4 delta^2)) / (2 (t + delta)).
    Both |x| < 1 in the topological phase.
    """
    denom = 2.0 * (spec.t + spec.delta)
    if denom == 0.0:
        raise SingularParameterError("t + delta = 0 makes the decay roots singular")
    disc = complex(spec.mu**2 - 4 * spec.t**2 + 4 * spec.delta**2)
    root = np.sqrt(disc)
    return KitaevLocalization(x_plus=(-spec.mu + root) / denom,
                              x_minus=(-spec.mu - root) / denom)
