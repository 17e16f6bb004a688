"""Non-Hermitian perturbations and their exceptional-point diagnostics.

Probe operators couple the two edge zero modes so that, restricted to a
degenerate level cluster, they act as a nilpotent single Jordan chain.
Edge probes built from Majorana pairs are normalized to unit Jordan
amplitude on the ground doublet (gamma and gamma' squaring to one and an
overall factor 1/2), so the nominal strength lambda is the subdiagonal
matrix element the two-level analysis assumes.  Parafermion probes use
the unitary alpha operators as written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bdg import ZeroModePair
from .models import (DoubleKitaevSpec, KitaevSpec, NanowireSpec,
                     ParafermionSpec)
from .opalg import FERMION, PARAFERMION, ModeOperatorSet

AUX_VARIANTS = ("delta1", "delta2", "delta3", "delta4")


@dataclass(frozen=True)
class KitaevEdgeProbe:
    lam: float
    branch: int = +1  # sign of the (a_N - a_N†) term

    def __post_init__(self):
        if self.lam < 0 or not math.isfinite(self.lam):
            raise ValueError("lambda must be a finite non-negative real")
        if self.branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")


@dataclass(frozen=True)
class KitaevRandomizedProbe:
    lam: float
    lam_prime: float
    branch: int = +1

    def __post_init__(self):
        if self.lam < 0 or self.lam_prime < 0:
            raise ValueError("lambda and lambda' must be non-negative")
        if self.branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")


@dataclass(frozen=True)
class DoubleKitaevEdgeProbe:
    kappa1: float
    kappa2: float

    def __post_init__(self):
        if not (math.isfinite(self.kappa1) and math.isfinite(self.kappa2)):
            raise ValueError("kappa couplings must be finite")


@dataclass(frozen=True)
class NanowireMzmProbe:
    lam: float
    bdg_sites: int = 50  # lattice length of the solve that supplies the modes
    edge_fraction: float = 0.1
    # model-field overrides pinning the calibration point of the mode solve,
    # e.g. (("V", 1.5),); the probe stays fixed while the swept model varies
    reference: tuple = ()

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


@dataclass(frozen=True)
class NanowireAuxProbe:
    variant: str
    lam: float
    phi: float = 0.36

    def __post_init__(self):
        if self.variant not in AUX_VARIANTS:
            raise ValueError(f"variant must be one of {AUX_VARIANTS}")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


@dataclass(frozen=True)
class ParafermionApproxProbe:
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


@dataclass(frozen=True)
class ParafermionExactProbe:
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


ProbeSpec = (KitaevEdgeProbe | KitaevRandomizedProbe | DoubleKitaevEdgeProbe
             | NanowireMzmProbe | NanowireAuxProbe | ParafermionApproxProbe
             | ParafermionExactProbe)


def _kitaev_edge_operator(ops: ModeOperatorSet, first: int, last: int, branch: int) -> np.ndarray:
    a1 = ops.annihilators[first]
    an = ops.annihilators[last]
    return (a1 + a1.conj().T + branch * (an - an.conj().T)) / 2


def _spinful(ops: ModeOperatorSet, site: int, spin: int) -> np.ndarray:
    return ops.annihilators[2 * site + spin]


def _wire_left_mode(ops: ModeOperatorSet, phi: float) -> np.ndarray:
    up, dn = _spinful(ops, 0, 0), _spinful(ops, 0, 1)
    return (1j * np.exp(1j * phi) * up.conj().T - 1j * np.exp(-1j * phi) * up
            + np.exp(-1j * phi) * dn.conj().T + np.exp(1j * phi) * dn)


def _wire_right_mode(ops: ModeOperatorSet, phi: float) -> np.ndarray:
    n = ops.n_operators // 2
    up, dn = _spinful(ops, n - 1, 0), _spinful(ops, n - 1, 1)
    return (1j * np.exp(-1j * phi) * up.conj().T - 1j * np.exp(1j * phi) * up
            - np.exp(1j * phi) * dn.conj().T - np.exp(-1j * phi) * dn)


# single-edge pieces of the ideal wire probe; delta3/delta4 coincide with the
# bare left/right modes and therefore cannot tell the phases apart
def _wire_aux_operator(ops: ModeOperatorSet, variant: str, phi: float) -> np.ndarray:
    n = ops.n_operators // 2
    up1, dn1 = _spinful(ops, 0, 0), _spinful(ops, 0, 1)
    upn, dnn = _spinful(ops, n - 1, 0), _spinful(ops, n - 1, 1)
    left_up = 1j * np.exp(1j * phi) * up1.conj().T - 1j * np.exp(-1j * phi) * up1
    if variant == "delta1":
        return left_up - 1j * np.exp(1j * phi) * dnn.conj().T - 1j * np.exp(-1j * phi) * dnn
    if variant == "delta2":
        return left_up - np.exp(-1j * phi) * upn.conj().T + np.exp(1j * phi) * upn
    if variant == "delta3":
        return left_up + np.exp(-1j * phi) * dn1.conj().T + np.exp(1j * phi) * dn1
    if variant == "delta4":
        return (1j * np.exp(-1j * phi) * upn.conj().T - 1j * np.exp(1j * phi) * upn
                - np.exp(1j * phi) * dnn.conj().T - np.exp(-1j * phi) * dnn)
    raise ValueError(f"unknown variant {variant!r}")


_WIRE_NORM = 1.0 / (2.0 * math.sqrt(2.0))  # unit-Majorana edge modes, then /2


def build_probe(spec: ProbeSpec, ops: ModeOperatorSet,
                zero_modes: ZeroModePair | None = None) -> np.ndarray:
    """Full perturbation matrix (strengths included) for a probe spec."""
    if isinstance(spec, (KitaevEdgeProbe, KitaevRandomizedProbe)):
        if ops.statistics != FERMION:
            raise ValueError("Kitaev probes need fermionic modes")
        j = _kitaev_edge_operator(ops, 0, ops.n_operators - 1, spec.branch)
        if isinstance(spec, KitaevEdgeProbe):
            return spec.lam * j
        return spec.lam * j + spec.lam_prime * j.conj().T

    if isinstance(spec, DoubleKitaevEdgeProbe):
        if ops.statistics != FERMION or ops.n_operators % 2:
            raise ValueError("double-Kitaev probe needs an even fermionic mode count")
        n = ops.n_operators // 2
        j1 = _kitaev_edge_operator(ops, 0, n - 1, +1)
        j2 = _kitaev_edge_operator(ops, n, 2 * n - 1, +1)
        return spec.kappa1 * j1 + spec.kappa2 * j2

    if isinstance(spec, NanowireMzmProbe):
        if zero_modes is None:
            raise ValueError("the nanowire probe needs a ZeroModePair for its phase")
        if zero_modes.phase is None:
            raise ValueError("zero-mode pair carries no spin-structure phase")
        phi = zero_modes.phase
        j = _wire_left_mode(ops, phi) + 1j * _wire_right_mode(ops, phi)
        return spec.lam * _WIRE_NORM * j

    if isinstance(spec, NanowireAuxProbe):
        return spec.lam * _WIRE_NORM * _wire_aux_operator(ops, spec.variant, spec.phi)

    if isinstance(spec, (ParafermionApproxProbe, ParafermionExactProbe)):
        if ops.statistics != PARAFERMION:
            raise ValueError("parafermion probes need parafermionic modes")
        alpha_first = ops.annihilators[0]
        if isinstance(spec, ParafermionApproxProbe):
            return spec.lam * alpha_first
        d = ops.space.local_dim
        alpha_last = ops.annihilators[-1]
        return spec.lam * (alpha_first + np.exp(-1j * np.pi / d) * alpha_last)

    raise ValueError(f"unknown probe spec {spec!r}")


def parity_commutator_residual(j: np.ndarray, p_gamma: np.ndarray,
                               subspace: np.ndarray | None = None):
    """Best-branch residual of the parity-shift condition [J, P_gamma] = ±2 J.

    `subspace`, when given, is a matrix of orthonormal columns; the
    commutator and J are projected onto it before taking norms.  Returns
    (sign, residual) with the Frobenius-norm residual of the better branch.
    """
    comm = j @ p_gamma - p_gamma @ j
    if subspace is not None:
        basis = np.asarray(subspace)
        comm = basis.conj().T @ comm @ basis
        j = basis.conj().T @ j @ basis
    r_plus = np.linalg.norm(comm - 2.0 * j)
    r_minus = np.linalg.norm(comm + 2.0 * j)
    if r_plus <= r_minus:
        return +1, float(r_plus)
    return -1, float(r_minus)


@dataclass(frozen=True)
class JordanFormReport:
    """Structure of a probe restricted to the ground level cluster of H."""

    subspace_dim: int
    restricted: np.ndarray
    nilpotency_index: int  # 0 if not nilpotent at tolerance
    single_chain: bool
    parity_residual: float  # NaN when no parity operator was supplied
    cluster_energies: np.ndarray


def _nilpotency_index(restricted: np.ndarray, tol: float) -> int:
    scale = np.linalg.norm(restricted)
    if scale == 0.0:
        return 1
    power = np.eye(restricted.shape[0], dtype=complex)
    for k in range(1, restricted.shape[0] + 1):
        power = power @ restricted
        if np.linalg.norm(power) <= tol * scale**k:
            return k
    return 0


def jordan_form_report(hamiltonian: np.ndarray, probe: np.ndarray,
                       degeneracy_tol: float = 1e-6,
                       parity_op: np.ndarray | None = None,
                       nilpotency_tol: float = 1e-8) -> JordanFormReport:
    """Project the probe onto the (near-)degenerate ground cluster of H.

    Eigenvalues of H are grouped into clusters whose consecutive gaps stay
    below degeneracy_tol * (spectral range).  single_chain is True exactly
    when the restricted probe has rank N-1 and vanishing N-th power, the
    basis-independent content of a single Jordan block.  A ground cluster
    of size 1 reports single_chain = False: that is the trivial-phase
    signal, not an error.
    """
    w, v = np.linalg.eigh(hamiltonian)
    spread = float(w[-1] - w[0])
    gap_tol = degeneracy_tol * max(spread, 1e-300)
    size = 1
    while size < len(w) and w[size] - w[size - 1] <= gap_tol:
        size += 1
    basis = v[:, :size]
    restricted = basis.conj().T @ probe @ basis
    index = _nilpotency_index(restricted, nilpotency_tol)
    if size > 1:
        svals = np.linalg.svd(restricted, compute_uv=False)
        rank = int(np.sum(svals > nilpotency_tol * svals[0])) if svals[0] > 0 else 0
        single = bool(rank == size - 1 and index == size)
    else:
        single = False
    if parity_op is not None:
        _, residual = parity_commutator_residual(probe, parity_op, subspace=basis)
    else:
        residual = float("nan")
    return JordanFormReport(subspace_dim=size, restricted=restricted,
                            nilpotency_index=index, single_chain=single,
                            parity_residual=residual, cluster_energies=w[:size])


def probe_to_dict(spec: ProbeSpec) -> dict:
    if isinstance(spec, KitaevEdgeProbe):
        out = {"probe": "kitaev_edge", "lambda": spec.lam}
        if spec.branch != +1:
            out["branch"] = spec.branch
        return out
    if isinstance(spec, KitaevRandomizedProbe):
        out = {"probe": "kitaev_randomized", "lambda": spec.lam,
               "lambda_prime": spec.lam_prime}
        if spec.branch != +1:
            out["branch"] = spec.branch
        return out
    if isinstance(spec, DoubleKitaevEdgeProbe):
        return {"probe": "double_kitaev_edge", "kappa1": spec.kappa1,
                "kappa2": spec.kappa2}
    if isinstance(spec, NanowireMzmProbe):
        out = {"probe": "nanowire_mzm", "lambda": spec.lam,
               "bdg_sites": spec.bdg_sites, "edge_fraction": spec.edge_fraction}
        if spec.reference:
            out["reference"] = dict(spec.reference)
        return out
    if isinstance(spec, NanowireAuxProbe):
        return {"probe": "nanowire_aux", "variant": spec.variant,
                "lambda": spec.lam, "phi": spec.phi}
    if isinstance(spec, ParafermionApproxProbe):
        return {"probe": "parafermion_approx", "lambda": spec.lam}
    if isinstance(spec, ParafermionExactProbe):
        return {"probe": "parafermion_exact", "lambda": spec.lam}
    raise ValueError(f"unknown probe spec {spec!r}")


def probe_from_dict(data: dict) -> ProbeSpec:
    if not isinstance(data, dict) or "probe" not in data:
        raise ValueError("probe config must be an object with a 'probe' field")
    tag = data["probe"]
    try:
        if tag == "kitaev_edge":
            return KitaevEdgeProbe(lam=data["lambda"], branch=int(data.get("branch", +1)))
        if tag == "kitaev_randomized":
            return KitaevRandomizedProbe(lam=data["lambda"],
                                         lam_prime=data["lambda_prime"],
                                         branch=int(data.get("branch", +1)))
        if tag == "double_kitaev_edge":
            return DoubleKitaevEdgeProbe(kappa1=data["kappa1"], kappa2=data["kappa2"])
        if tag == "nanowire_mzm":
            reference = tuple(sorted(data.get("reference", {}).items()))
            return NanowireMzmProbe(lam=data["lambda"],
                                    bdg_sites=int(data.get("bdg_sites", 50)),
                                    edge_fraction=data.get("edge_fraction", 0.1),
                                    reference=reference)
        if tag == "nanowire_aux":
            return NanowireAuxProbe(variant=data["variant"], lam=data["lambda"],
                                    phi=data.get("phi", 0.36))
        if tag == "parafermion_approx":
            return ParafermionApproxProbe(lam=data["lambda"])
        if tag == "parafermion_exact":
            return ParafermionExactProbe(lam=data["lambda"])
    except KeyError as exc:
        raise ValueError(f"probe '{tag}' is missing field {exc}") from exc
    raise ValueError(f"unknown probe '{tag}'")


def default_probe_for(model_spec) -> type:
    """Probe family conventionally paired with a model family."""
    if isinstance(model_spec, KitaevSpec):
        return KitaevEdgeProbe
    if isinstance(model_spec, DoubleKitaevSpec):
        return DoubleKitaevEdgeProbe
    if isinstance(model_spec, NanowireSpec):
        return NanowireMzmProbe
    if isinstance(model_spec, ParafermionSpec):
        return ParafermionExactProbe
    raise ValueError(f"unknown model spec {model_spec!r}")
