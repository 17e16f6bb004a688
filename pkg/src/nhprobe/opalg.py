"""Second-quantized operators as dense matrices on the many-body Hilbert space.

Fermions are built by Jordan-Wigner (sign string on lower mode indices,
so mode 0 carries no string); parafermions by the Fradkin-Kadanoff
transformation of Z_d clock operators.  Basis: occupation numbers with
mode 0 the least-significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError
from .linalg import MAX_DIM

FERMION = "fermion"
PARAFERMION = "parafermion"


@dataclass(frozen=True)
class FockSpace:
    """Tensor-product space of `n_factors` local sites of dimension `local_dim`.

    For fermions a factor is one mode (local_dim 2).  For parafermions a
    factor is one clock site of dimension d, hosting two parafermion modes.
    """

    n_factors: int
    local_dim: int

    def __post_init__(self):
        if self.n_factors < 1:
            raise ValueError("need at least one site")
        if self.local_dim < 2:
            raise ValueError("local dimension must be >= 2")
        if self.dim > MAX_DIM:
            raise CapacityError(
                f"Hilbert dimension {self.local_dim}^{self.n_factors} exceeds {MAX_DIM}"
            )

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_factors


@dataclass(frozen=True)
class ModeOperatorSet:
    """A verified family of mode operators sharing one Fock space.

    `annihilators` holds the fermionic a_j (one per mode) or the
    parafermionic alpha_j (two per clock site, indexed 0..2*sites-1).
    """

    space: FockSpace
    annihilators: list = field(repr=False)
    statistics: str  # FERMION or PARAFERMION

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def n_operators(self) -> int:
        return len(self.annihilators)


def _embed(local: np.ndarray, string: np.ndarray, identity: np.ndarray,
           site: int, n_sites: int) -> np.ndarray:
    """kron chain with `local` at `site`, `string` below it, identity above."""
    out = np.eye(1, dtype=complex)
    for k in range(n_sites - 1, -1, -1):  # most significant factor first
        if k == site:
            block = local
        elif k < site:
            block = string
        else:
            block = identity
        out = np.kron(out, block)
    return out


def build_fermion_modes(n_modes: int) -> ModeOperatorSet:
    """Jordan-Wigner annihilation operators for `n_modes` fermionic modes."""
    if not 1 <= n_modes <= 12:
        raise CapacityError(f"n_modes must be in 1..12, got {n_modes}")
    space = FockSpace(n_factors=n_modes, local_dim=2)
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    zstring = np.diag([1.0, -1.0]).astype(complex)
    ident = np.eye(2, dtype=complex)
    ops = [_embed(lower, zstring, ident, j, n_modes) for j in range(n_modes)]
    return ModeOperatorSet(space=space, annihilators=ops, statistics=FERMION)


def majorana_modes(ops: ModeOperatorSet) -> list:
    """Majorana partners c_{2j} = a_j + a_j†, c_{2j+1} = -i(a_j - a_j†), 0-based."""
    if ops.statistics != FERMION:
        raise ValueError("majorana_modes requires a fermionic operator set")
    out = []
    for a in ops.annihilators:
        adag = a.conj().T
        out.append(a + adag)
        out.append(-1j * (a - adag))
    return out


def total_parity(ops: ModeOperatorSet) -> np.ndarray:
    """P = prod_j (1 - 2 a_j† a_j), diagonal with entries ±1."""
    if ops.statistics != FERMION:
        raise ValueError("total_parity requires a fermionic operator set")
    diag = np.ones(ops.dim)
    for a in ops.annihilators:
        diag = diag * (1.0 - 2.0 * np.diag(a.conj().T @ a).real)
    return np.diag(diag).astype(complex)


def ground_parity_operator(gamma, gamma_prime, tol: float = 1e-8) -> np.ndarray:
    """P_gamma = i*gamma*gamma' for a pair of Majorana operators.

    Preconditions (each checked to `tol`, absolute on the defect norm
    relative to operator scale): both Hermitian, both square to identity,
    and they anticommute.
    """
    g = np.asarray(gamma, dtype=complex)
    gp = np.asarray(gamma_prime, dtype=complex)
    dim = g.shape[0]
    eye = np.eye(dim)
    checks = [
        ("gamma is not Hermitian", np.linalg.norm(g - g.conj().T)),
        ("gamma_prime is not Hermitian", np.linalg.norm(gp - gp.conj().T)),
        ("gamma^2 != 1", np.linalg.norm(g @ g - eye)),
        ("gamma_prime^2 != 1", np.linalg.norm(gp @ gp - eye)),
        ("{gamma, gamma_prime} != 0", np.linalg.norm(g @ gp + gp @ g)),
    ]
    scale = max(np.sqrt(dim), 1.0)
    for message, defect in checks:
        if defect > tol * scale:
            raise ValueError(f"{message} (defect {defect:.3e})")
    return 1j * g @ gp


def build_parafermion_modes(n_sites: int, d: int) -> ModeOperatorSet:
    """Fradkin-Kadanoff parafermions alpha_0..alpha_{2*n_sites-1} on n_sites clock sites.

    Each clock site carries two parafermion modes, so a chain of N sites
    yields the 2N operators entering the chain Hamiltonian.  The relative
    phase of the even-indexed operator is eta = exp(i*pi*(d+1)/d), which
    makes all three defining relations exact:

        alpha^d = 1,   alpha† = alpha^{d-1},
        alpha_m alpha_n = alpha_n alpha_m * exp(i*(2*pi/d)*sgn(n-m)).
    """
    if d < 2:
        raise ValueError("clock dimension d must be >= 2")
    if n_sites < 1:
        raise ValueError("need at least one site")
    space = FockSpace(n_factors=n_sites, local_dim=d)  # capacity guard inside
    omega = np.exp(2j * np.pi / d)
    sigma = np.diag(omega ** np.arange(d))
    tau = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    ident = np.eye(d, dtype=complex)
    eta = np.exp(1j * np.pi * (d + 1) / d)
    ops = []
    for j in range(n_sites):
        ops.append(_embed(sigma, tau, ident, j, n_sites))
        ops.append(eta * _embed(sigma @ tau, tau, ident, j, n_sites))
    return ModeOperatorSet(space=space, annihilators=ops, statistics=PARAFERMION)


def clock_charge(ops: ModeOperatorSet) -> np.ndarray:
    """Global Z_d charge Q = prod_j tau_j, built from alpha_{2j}† alpha_{2j+1}."""
    if ops.statistics != PARAFERMION:
        raise ValueError("clock_charge requires a parafermionic operator set")
    d = ops.space.local_dim
    eta = np.exp(1j * np.pi * (d + 1) / d)
    q = np.eye(ops.dim, dtype=complex)
    for j in range(ops.space.n_factors):
        q = q @ (ops.annihilators[2 * j].conj().T @ ops.annihilators[2 * j + 1] / eta)
    return q


def algebra_check(ops: ModeOperatorSet) -> float:
    """Max-abs residual over every defining relation of the operator set.

    Fermions: {a_i, a_j†} = delta_ij, {a_i, a_j} = 0.
    Parafermions: alpha^d = 1, alpha† = alpha^{d-1}, and the sgn-phase
    exchange relation for every ordered pair.
    """
    mats = ops.annihilators
    eye = np.eye(ops.dim)
    worst = 0.0
    if ops.statistics == FERMION:
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                anti_dag = a @ b.conj().T + b.conj().T @ a
                target = eye if i == j else 0.0
                worst = max(worst, np.abs(anti_dag - target).max())
                worst = max(worst, np.abs(a @ b + b @ a).max())
        return float(worst)
    d = ops.space.local_dim
    omega = np.exp(2j * np.pi / d)
    for m, a in enumerate(mats):
        worst = max(worst, np.abs(np.linalg.matrix_power(a, d) - eye).max())
        worst = max(worst, np.abs(a.conj().T - np.linalg.matrix_power(a, d - 1)).max())
        for b in mats[m + 1:]:
            worst = max(worst, np.abs(a @ b - omega * b @ a).max())
    return float(worst)
