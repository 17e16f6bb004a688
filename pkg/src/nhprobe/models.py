"""Model Hamiltonians: Kitaev chain, coupled Kitaev chains, Rashba nanowire,
Z3 parafermion chain.  Builders return dense many-body matrices; analytic
bulk spectra and phase boundaries are exposed separately.

Open boundary conditions throughout.  The chemical-potential term of the
Kitaev chain acts on every site and keeps its +mu/2 constant shift, so the
fermionic and Majorana forms agree entrywise without an offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import opalg
from .opalg import ModeOperatorSet


def _check_finite(**fields):
    for name, value in fields.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class KitaevSpec:
    sites: int
    t: float = 1.0
    mu: float = 0.0
    delta: float = 1.0

    def __post_init__(self):
        _check_finite(t=self.t, mu=self.mu, delta=self.delta)
        if self.sites < 2:
            raise ValueError("Kitaev chain needs at least 2 sites")
        if self.delta < 0:
            raise ValueError("pairing delta must be real and >= 0")


@dataclass(frozen=True)
class DoubleKitaevSpec:
    sites: int  # per chain
    t: float = 1.0
    mu: float = 0.0
    delta: float = 1.0
    w: float = 0.0

    def __post_init__(self):
        _check_finite(t=self.t, mu=self.mu, delta=self.delta, w=self.w)
        if self.sites < 2:
            raise ValueError("each Kitaev chain needs at least 2 sites")
        if self.delta < 0:
            raise ValueError("pairing delta must be real and >= 0")


@dataclass(frozen=True)
class NanowireSpec:
    sites: int
    t: float = 1.0
    mu: float = 0.0
    alpha: float = 0.0
    zeeman: float = 0.0
    delta: float = 1.0

    def __post_init__(self):
        _check_finite(t=self.t, mu=self.mu, alpha=self.alpha,
                      zeeman=self.zeeman, delta=self.delta)
        if self.sites < 2:
            raise ValueError("nanowire needs at least 2 sites")


@dataclass(frozen=True)
class ParafermionSpec:
    sites: int  # chain sites; the chain hosts 2*sites parafermion modes
    h: float = 1.0
    g: float = 0.0
    d: int = 3

    def __post_init__(self):
        _check_finite(h=self.h, g=self.g)
        if self.sites < 2:
            raise ValueError("parafermion chain needs at least 2 sites")
        if self.d < 2:
            raise ValueError("clock dimension d must be >= 2")


ModelSpec = KitaevSpec | DoubleKitaevSpec | NanowireSpec | ParafermionSpec

_MODEL_TAGS = {
    KitaevSpec: "kitaev",
    DoubleKitaevSpec: "double_kitaev",
    NanowireSpec: "nanowire",
    ParafermionSpec: "parafermion",
}


def build_modes(spec: ModelSpec) -> ModeOperatorSet:
    """Operator set sized for `spec` (spinful modes for the nanowire)."""
    if isinstance(spec, KitaevSpec):
        return opalg.build_fermion_modes(spec.sites)
    if isinstance(spec, DoubleKitaevSpec):
        return opalg.build_fermion_modes(2 * spec.sites)
    if isinstance(spec, NanowireSpec):
        return opalg.build_fermion_modes(2 * spec.sites)
    if isinstance(spec, ParafermionSpec):
        return opalg.build_parafermion_modes(spec.sites, spec.d)
    raise ValueError(f"unknown model spec {spec!r}")


def _required_operator_count(spec: ModelSpec) -> int:
    if isinstance(spec, KitaevSpec):
        return spec.sites
    return 2 * spec.sites


def _check_ops(spec: ModelSpec, ops: ModeOperatorSet):
    expected_stat = opalg.PARAFERMION if isinstance(spec, ParafermionSpec) else opalg.FERMION
    if ops.statistics != expected_stat:
        raise ValueError(f"operator set statistics {ops.statistics!r} does not match {spec!r}")
    need = _required_operator_count(spec)
    if ops.n_operators != need:
        raise ValueError(f"spec needs {need} mode operators, got {ops.n_operators}")
    if isinstance(spec, ParafermionSpec) and ops.space.local_dim != spec.d:
        raise ValueError("clock dimension mismatch between spec and operator set")


def _kitaev_terms(h, mode_ops, t, mu, delta):
    n = len(mode_ops)
    eye = np.eye(h.shape[0])
    for j in range(n - 1):
        a, b = mode_ops[j], mode_ops[j + 1]
        h += -t * (a.conj().T @ b + b.conj().T @ a)
        h += delta * (a @ b + b.conj().T @ a.conj().T)
    for a in mode_ops:
        h += -mu * (a.conj().T @ a - eye / 2)
    return h


def build_hamiltonian(spec: ModelSpec, ops: ModeOperatorSet) -> np.ndarray:
    """Dense many-body Hamiltonian for `spec` on the modes of `ops`."""
    _check_ops(spec, ops)
    a = ops.annihilators
    dim = ops.dim
    ham = np.zeros((dim, dim), dtype=complex)

    if isinstance(spec, KitaevSpec):
        return _kitaev_terms(ham, a, spec.t, spec.mu, spec.delta)

    if isinstance(spec, DoubleKitaevSpec):
        n = spec.sites
        _kitaev_terms(ham, a[:n], spec.t, spec.mu, spec.delta)
        _kitaev_terms(ham, a[n:], spec.t, spec.mu, spec.delta)
        a1, an = a[0], a[n - 1]
        b1, bn = a[n], a[2 * n - 1]
        ham += -spec.w * (
            an.conj().T @ b1 + b1.conj().T @ an
            + bn.conj().T @ a1 + a1.conj().T @ bn
            - an @ b1 - b1.conj().T @ an.conj().T
            - bn @ a1 - a1.conj().T @ bn.conj().T
        )
        return ham

    if isinstance(spec, NanowireSpec):
        n = spec.sites
        t, mu, al, vz, delta = spec.t, spec.mu, spec.alpha, spec.zeeman, spec.delta

        def mode(i, s):  # s = 0 up, 1 down
            return a[2 * i + s]

        terms = np.zeros_like(ham)
        for i in range(n):
            for s, sgn in ((0, +1), (1, -1)):
                terms += (2 * t - mu) * mode(i, s).conj().T @ mode(i, s)
                if i + 1 < n:
                    terms += -(2 * t - 2j * al * sgn) * mode(i + 1, s).conj().T @ mode(i, s)
                # the Zeeman and pairing terms sit inside the spin sum and
                # are therefore counted once per spin value
                terms += vz * mode(i, 0).conj().T @ mode(i, 1)
                terms += delta * mode(i, 0) @ mode(i, 1)
        return (terms + terms.conj().T) / 2

    if isinstance(spec, ParafermionSpec):
        n, d = spec.sites, spec.d
        onsite_phase = np.exp(1j * np.pi / d)
        bond_phase = np.exp(-1j * np.pi / d)
        for j in range(n):
            term = onsite_phase * a[2 * j].conj().T @ a[2 * j + 1]
            ham += spec.h * (term + term.conj().T)
        for j in range(n - 1):
            term = bond_phase * a[2 * j + 1].conj().T @ a[2 * j + 2]
            ham += spec.g * (term + term.conj().T)
        return ham

    raise ValueError(f"unknown model spec {spec!r}")


def majorana_form_hamiltonian(spec: KitaevSpec, ops: ModeOperatorSet) -> np.ndarray:
    """Kitaev chain assembled from Majorana bilinears.

    (i/2) sum_j [-mu c_{2j-1} c_{2j} + (delta+t) c_{2j} c_{2j+1}
                 + (delta-t) c_{2j-1} c_{2j+2}]  (1-based mode labels)

    Equals build_hamiltonian(spec, ops) entrywise.
    """
    if not isinstance(spec, KitaevSpec):
        raise ValueError("majorana_form_hamiltonian only applies to the Kitaev chain")
    _check_ops(spec, ops)
    c = opalg.majorana_modes(ops)
    n = spec.sites
    ham = np.zeros((ops.dim, ops.dim), dtype=complex)
    for j in range(n):
        ham += -spec.mu * c[2 * j] @ c[2 * j + 1]
    for j in range(n - 1):
        ham += (spec.delta + spec.t) * c[2 * j + 1] @ c[2 * j + 2]
        ham += (spec.delta - spec.t) * c[2 * j] @ c[2 * j + 3]
    return 0.5j * ham


@dataclass(frozen=True)
class BulkSpectrum:
    k: float
    branches: np.ndarray  # sorted ascending, particle-hole symmetric


def bulk_spectrum(spec: ModelSpec, k: float) -> BulkSpectrum:
    """Analytic infinite-chain bands at momentum k (Kitaev and nanowire only)."""
    if isinstance(spec, KitaevSpec):
        e = math.sqrt((2 * spec.t * math.cos(k) + spec.mu) ** 2
                      + 4 * spec.delta**2 * math.sin(k) ** 2)
        return BulkSpectrum(k=k, branches=np.array([-e, e]))
    if isinstance(spec, NanowireSpec):
        eps = 2 * spec.t - 2 * spec.t * math.cos(k) - spec.mu
        so = 4 * spec.alpha**2 * math.sin(k) ** 2
        common = eps**2 + so + spec.delta**2 + spec.zeeman**2
        root = 2 * math.sqrt(spec.delta**2 * spec.zeeman**2
                             + spec.zeeman**2 * eps**2 + so * eps**2)
        e_outer = math.sqrt(common + root)
        e_inner = math.sqrt(max(common - root, 0.0))
        return BulkSpectrum(k=k, branches=np.array([-e_outer, -e_inner, e_inner, e_outer]))
    raise ValueError(f"bulk_spectrum is not defined for {type(spec).__name__}")


def phase_boundary(spec: ModelSpec) -> float:
    """Critical coupling separating trivial and topological phases.

    Kitaev: mu_c = 2|t|.  Nanowire: V_c = sqrt(delta^2 + mu^2).
    Parafermion: g_c = h.  The coupled double chain has no closed form.
    """
    if isinstance(spec, KitaevSpec):
        return 2.0 * abs(spec.t)
    if isinstance(spec, NanowireSpec):
        return math.hypot(spec.delta, spec.mu)
    if isinstance(spec, ParafermionSpec):
        return spec.h
    raise ValueError(f"no closed-form phase boundary for {type(spec).__name__}")


def spec_to_dict(spec: ModelSpec) -> dict:
    """Serialize to the CLI JSON field names."""
    if isinstance(spec, KitaevSpec):
        return {"model": "kitaev", "sites": spec.sites, "t": spec.t,
                "mu": spec.mu, "delta": spec.delta}
    if isinstance(spec, DoubleKitaevSpec):
        return {"model": "double_kitaev", "sites": spec.sites, "t": spec.t,
                "mu": spec.mu, "delta": spec.delta, "w": spec.w}
    if isinstance(spec, NanowireSpec):
        return {"model": "nanowire", "sites": spec.sites, "t": spec.t,
                "mu": spec.mu, "alpha": spec.alpha, "V": spec.zeeman,
                "delta": spec.delta}
    if isinstance(spec, ParafermionSpec):
        return {"model": "parafermion", "sites": spec.sites, "h": spec.h,
                "g": spec.g, "d": spec.d}
    raise ValueError(f"unknown model spec {spec!r}")


def spec_from_dict(data: dict) -> ModelSpec:
    """Inverse of spec_to_dict; raises ValueError with the offending field."""
    if not isinstance(data, dict) or "model" not in data:
        raise ValueError("model config must be an object with a 'model' field")
    tag = data["model"]
    fields = {k: v for k, v in data.items() if k != "model"}
    try:
        if tag == "kitaev":
            return KitaevSpec(sites=int(fields.pop("sites")), **fields)
        if tag == "double_kitaev":
            return DoubleKitaevSpec(sites=int(fields.pop("sites")), **fields)
        if tag == "nanowire":
            zeeman = fields.pop("V", 0.0)
            return NanowireSpec(sites=int(fields.pop("sites")), zeeman=zeeman, **fields)
        if tag == "parafermion":
            return ParafermionSpec(sites=int(fields.pop("sites")),
                                   d=int(fields.pop("d", 3)), **fields)
    except TypeError as exc:
        raise ValueError(f"bad field for model '{tag}': {exc}") from exc
    except KeyError as exc:
        raise ValueError(f"model '{tag}' is missing field {exc}") from exc
    raise ValueError(f"unknown model '{tag}'")
