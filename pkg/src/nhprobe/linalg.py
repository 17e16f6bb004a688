"""Dense complex linear-algebra kernels.

Everything downstream (operator algebra, quench evolution, fidelities)
goes through these few functions, so the numerical conventions are fixed
here once: matrices are plain complex ndarrays, tolerances are relative
to the Frobenius norm unless stated otherwise, and the matrix exponential
never relies on diagonalizability of its argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotPositiveSemidefiniteError

MAX_DIM = 4096

DEFAULT_CLAMP_TOL = 1e-10


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return a finite square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError(f"{name} must have dimension >= 1")
    if m.shape[0] > MAX_DIM:
        raise ValueError(f"{name} dimension {m.shape[0]} exceeds supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError(f"{name} has non-finite entries")
    return m


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A†)/2."""
    return (a + a.conj().T) / 2


def herm_residual(a: np.ndarray) -> float:
    """Relative Frobenius distance of A from its Hermitian part."""
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a - a.conj().T) / scale)


def expm(a) -> np.ndarray:
    """Matrix exponential e^A by scaling-and-squaring with Padé approximants.

    Dispatches to :func:`scipy.linalg.expm` (Al-Mohy/Higham order-13 Padé
    with standard theta thresholds).  This route stays exact on defective
    matrices, which matters because post-quench generators sit at
    exceptional points by design; an eigendecomposition route would break
    there.
    """
    m = as_square_matrix(a)
    return scipy.linalg.expm(m)


@dataclass(frozen=True)
class HermEigDecomposition:
    """Ascending eigenvalues and the matching unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def herm_eig(a, rtol: float = 1e-10) -> HermEigDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Raises ValueError if the input deviates from Hermiticity by more than
    `rtol` in relative Frobenius norm.
    """
    m = as_square_matrix(a)
    res = herm_residual(m)
    if res > rtol:
        raise ValueError(f"matrix is not Hermitian within {rtol:g} (residual {res:.3e})")
    w, v = np.linalg.eigh(hermitize(m))
    return HermEigDecomposition(eigenvalues=w, eigenvectors=v)


def psd_sqrt(a, clamp_tol: float = DEFAULT_CLAMP_TOL) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues in [-clamp_tol, 0) are treated as round-off and clamped to
    zero; anything below -clamp_tol raises NotPositiveSemidefiniteError
    carrying the offending eigenvalue.
    """
    dec = herm_eig(a, rtol=1e-8)
    w = dec.eigenvalues
    if w[0] < -clamp_tol:
        raise NotPositiveSemidefiniteError(
            f"matrix has eigenvalue {w[0]:.6e} below -clamp_tol={-clamp_tol:.1e}",
            min_eigenvalue=float(w[0]),
        )
    w = np.clip(w, 0.0, None)
    v = dec.eigenvectors
    return hermitize((v * np.sqrt(w)) @ v.conj().T)


def uhlmann_fidelity(rho0, rhot, clamp_tol: float = DEFAULT_CLAMP_TOL) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho0) rhot sqrt(rho0)))^2 of two states.

    Both arguments must be unit-trace Hermitian PSD matrices (up to
    clamp_tol).  The result is clipped to [0, 1]; values outside
    [0, 1 + 1e-6] before clipping indicate invalid inputs and raise.
    """
    r0 = np.asarray(getattr(rho0, "matrix", rho0), dtype=complex)
    rt = np.asarray(getattr(rhot, "matrix", rhot), dtype=complex)
    for name, r in (("rho0", r0), ("rhot", rt)):
        tr = np.trace(r)
        if abs(tr - 1.0) > 1e-6:
            raise ValueError(f"{name} is not unit trace (trace {tr:.8g})")
    s0 = psd_sqrt(r0, clamp_tol)
    sandwich = hermitize(s0 @ rt @ s0)
    w = np.linalg.eigvalsh(sandwich)
    if w[0] < -clamp_tol:
        raise NotPositiveSemidefiniteError(
            f"fidelity sandwich has eigenvalue {w[0]:.6e} below -clamp_tol",
            min_eigenvalue=float(w[0]),
        )
    w = np.clip(w, 0.0, None)
    fid = float(np.sum(np.sqrt(w)) ** 2)
    if fid > 1.0 + 1e-6:
        raise ValueError(f"fidelity {fid:.8g} exceeds 1 beyond tolerance; inputs invalid")
    return min(max(fid, 0.0), 1.0)
