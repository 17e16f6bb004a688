"""Thermal preparation, non-unitary quench evolution, Loschmidt echo, and
the closed-form oracles used to cross-check the numerics.

Evolution follows rho(t) = M rho0 M† / Tr(M rho0 M†) with
M = exp(-i H_post t) accumulated by repeated multiplication of the
single-step propagator, so defective (exceptional-point) generators are
handled exactly like any other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import TraceUnderflowError

DEFAULT_BETA = 5.0
DEFAULT_STEP = 0.05
DEFAULT_HORIZON = 200.0
DEFAULT_SAMPLE = 1.0
DEFAULT_WINDOW = (100.0, 200.0)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix with its validity tolerance."""

    matrix: np.ndarray
    tol: float = 1e-8

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self) -> "DensityMatrix":
        m = linalg.as_square_matrix(self.matrix, "density matrix")
        if linalg.herm_residual(m) > self.tol:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m) - 1.0) > self.tol:
            raise ValueError(f"density matrix trace {np.trace(m):.8g} != 1")
        low = float(np.linalg.eigvalsh(linalg.hermitize(m))[0])
        if low < -self.tol:
            raise ValueError(f"density matrix eigenvalue {low:.3e} below -tol")
        return self


def thermal_state(hamiltonian: np.ndarray, beta: float) -> DensityMatrix:
    """Gibbs state e^{-beta H} / Tr e^{-beta H}.

    Computed in the eigenbasis with a ground-energy shift so no exponential
    overflows; beta = 0 gives the maximally mixed state.
    """
    if not (math.isfinite(beta) and beta >= 0):
        raise ValueError("beta must be finite and >= 0")
    dec = linalg.herm_eig(hamiltonian)
    weights = np.exp(-beta * (dec.eigenvalues - dec.eigenvalues[0]))
    weights /= weights.sum()
    v = dec.eigenvectors
    rho = linalg.hermitize((v * weights) @ v.conj().T)
    return DensityMatrix(matrix=rho, tol=1e-10)


def _snap_times(times, step: float) -> np.ndarray:
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or len(ts) == 0:
        raise ValueError("need a non-empty 1-d time grid")
    steps = np.rint(ts / step).astype(int)
    if np.any(steps < 0):
        raise ValueError("times must be non-negative")
    if len(steps) > 1 and np.any(np.diff(steps) <= 0):
        raise ValueError("times must be strictly increasing after snapping to the step")
    return steps


def evolve_quench(h_post: np.ndarray, rho0: DensityMatrix, times, step: float):
    """Density matrices at the requested times under the non-Hermitian H.

    Times are snapped to multiples of `step`.  Returns (states, traces)
    where traces holds the pre-normalization Tr(M rho0 M†) at each time.
    Each state is re-Hermitized as (X + X†)/2 before normalization.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    h = linalg.as_square_matrix(h_post, "post-quench Hamiltonian")
    rho = rho0.matrix
    steps = _snap_times(times, step)
    propagator = linalg.expm(-1j * h * step)
    block_powers = {}

    def advance(m, count):
        if count == 0:
            return m
        if count not in block_powers:
            block = np.eye(h.shape[0], dtype=complex)
            for _ in range(count):
                block = propagator @ block
            block_powers[count] = block
        return block_powers[count] @ m

    states = []
    traces = np.empty(len(steps))
    m = np.eye(h.shape[0], dtype=complex)
    previous = 0
    for i, target in enumerate(steps):
        m = advance(m, target - previous)
        previous = target
        x = m @ rho @ m.conj().T
        tr = float(np.trace(x).real)
        if not math.isfinite(tr):
            raise TraceUnderflowError(f"trace became non-finite at t={target * step:g}")
        if tr < 1e-300:
            raise TraceUnderflowError(
                f"pre-normalization trace underflowed at t={target * step:g}; "
                "renormalize on a shorter cadence"
            )
        traces[i] = tr
        states.append(DensityMatrix(matrix=linalg.hermitize(x) / tr, tol=1e-8))
    return states, traces


def loschmidt_echo(rho0: DensityMatrix, rhot: DensityMatrix,
                   clamp_tol: float = linalg.DEFAULT_CLAMP_TOL) -> float:
    """L(t) = (Tr sqrt(sqrt(rho0) rho(t) sqrt(rho0)))^2."""
    return linalg.uhlmann_fidelity(rho0.matrix, rhot.matrix, clamp_tol)


@dataclass(frozen=True)
class QuenchResult:
    """Time series of the echo plus the run's defining parameters."""

    times: np.ndarray
    le_values: np.ndarray
    norm_traces: np.ndarray
    steady_average: float
    window: tuple
    beta: float
    step: float
    model: dict = field(default_factory=dict)
    probe: dict = field(default_factory=dict)


def window_average(times: np.ndarray, values: np.ndarray, t0: float, t1: float) -> float:
    """Trapezoidal mean of a sampled series over [t0, t1]."""
    if not t0 < t1:
        raise ValueError("need t0 < t1")
    times = np.asarray(times, dtype=float)
    eps = 1e-9 * max(1.0, abs(t1))
    if t0 < times[0] - eps or t1 > times[-1] + eps:
        raise ValueError(f"window [{t0:g}, {t1:g}] is outside the sampled grid")
    mask = (times >= t0 - eps) & (times <= t1 + eps)
    sel_t = times[mask]
    sel_v = np.asarray(values, dtype=float)[mask]
    if len(sel_t) < 2:
        raise ValueError("window contains fewer than two samples")
    return float(np.trapz(sel_v, sel_t) / (sel_t[-1] - sel_t[0]))


def steady_average(result: QuenchResult, t0: float, t1: float) -> float:
    """Time average of L(t) over [t0, t1] by trapezoidal quadrature."""
    return window_average(result.times, result.le_values, t0, t1)


def run_echo(hamiltonian: np.ndarray, perturbation: np.ndarray,
             beta: float = DEFAULT_BETA, step: float = DEFAULT_STEP,
             horizon: float = DEFAULT_HORIZON, sample_every: float = DEFAULT_SAMPLE,
             window: tuple = DEFAULT_WINDOW, model: dict | None = None,
             probe: dict | None = None) -> QuenchResult:
    """Quench a thermal state of H with H + perturbation and record L(t)."""
    if sample_every <= 0 or horizon <= 0:
        raise ValueError("horizon and sample_every must be positive")
    t0, t1 = window
    if not 0 <= t0 < t1 <= horizon + 1e-9:
        raise ValueError(f"window {window} must fit inside [0, horizon]")
    rho0 = thermal_state(hamiltonian, beta)
    n_samples = int(round(horizon / sample_every))
    times = np.arange(n_samples + 1) * sample_every
    states, traces = evolve_quench(hamiltonian + perturbation, rho0, times, step)
    sqrt0 = linalg.psd_sqrt(rho0.matrix)
    le = np.empty(len(states))
    for i, state in enumerate(states):
        sandwich = linalg.hermitize(sqrt0 @ state.matrix @ sqrt0)
        w = np.clip(np.linalg.eigvalsh(sandwich), 0.0, None)
        le[i] = min(max(float(np.sum(np.sqrt(w)) ** 2), 0.0), 1.0)
    lbar = window_average(times, le, t0, t1)
    return QuenchResult(times=times, le_values=le, norm_traces=traces,
                        steady_average=lbar, window=(t0, t1), beta=beta,
                        step=step, model=model or {}, probe=probe or {})


def jordan_oracle_state(amplitudes, lam: float, energy: float, t: float) -> np.ndarray:
    """Closed-form evolution inside one degenerate cluster at the exceptional point.

    psi_m(t) = e^{-iEt} sum_{n=0}^{m-1} (-i lam t)^n / n! * a_{m-n}, the
    truncated exponential series of the nilpotent subdiagonal generator.
    """
    a = np.asarray(amplitudes, dtype=complex)
    if a.ndim != 1 or len(a) == 0:
        raise ValueError("need a non-empty amplitude vector")
    n = len(a)
    out = np.zeros(n, dtype=complex)
    for m in range(n):
        coeff = 1.0 + 0.0j
        total = 0.0 + 0.0j
        for k in range(m + 1):
            total += coeff * a[m - k]
            coeff *= (-1j * lam * t) / (k + 1)
        out[m] = total
    return np.exp(-1j * energy * t) * out


def two_level_oracle_rho(lam: float, lam_prime: float, t: float) -> np.ndarray:
    """Unnormalized rho(t) of the randomized two-level quench, prefactor 1/2.

    Valid for the maximally mixed initial state under
    D = [[0, lam'], [lam, 0]]; lam' = 0 is the polynomial limit of the
    trigonometric closed form.
    """
    if lam <= 0 or lam_prime < 0:
        raise ValueError("need lam > 0 and lam_prime >= 0")
    if lam_prime == 0.0:
        x = lam * t
        return 0.5 * np.array([[1.0, 1j * x], [-1j * x, 1.0 + x * x]], dtype=complex)
    root = math.sqrt(lam * lam_prime)
    c, s = math.cos(root * t), math.sin(root * t)
    off = 0.5 * (math.sqrt(lam / lam_prime) - math.sqrt(lam_prime / lam)) * math.sin(2 * root * t)
    return 0.5 * np.array([
        [c * c + (lam_prime / lam) * s * s, 1j * off],
        [-1j * off, c * c + (lam / lam_prime) * s * s],
    ], dtype=complex)


def trivial_phase_firstorder(energies, lam: float, lam_prime: float, t: float) -> np.ndarray:
    """First-order rho(t) = I/N + R(t) for a non-degenerate ladder.

    [R]_{i,i-1} = (lam - lam') / (E_i - E_{i-1}) (e^{-i (E_i - E_{i-1}) t} - 1) / N
    and its Hermitian mirror on the superdiagonal.  Valid when every gap
    dominates both couplings.
    """
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or len(e) < 2:
        raise ValueError("need at least two energies")
    gaps = np.diff(e)
    if np.any(gaps <= 0):
        raise ZeroDivisionError("energies must be strictly increasing; degenerate "
                                "levels belong to the Jordan-block oracle")
    n = len(e)
    if min(gaps) < 10 * max(lam, lam_prime):
        import warnings
        warnings.warn("level spacing is not large compared to the couplings; "
                      "first-order formula is unreliable", stacklevel=2)
    rho = np.eye(n, dtype=complex) / n
    for i in range(1, n):
        gap = e[i] - e[i - 1]
        amp = (lam - lam_prime) / gap
        rho[i, i - 1] += amp * (np.exp(-1j * gap * t) - 1.0) / n
        rho[i - 1, i] += amp * (np.exp(+1j * gap * t) - 1.0) / n
    return rho
