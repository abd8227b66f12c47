"""Weak measurement, dissipative evolution and reversal on a single atom.

The protection protocol runs

    prepare -> weak measurement (p1) -> cavity evolution -> reversal (p2)

The weak measurement ``diag(sqrt(1-p1), 1)`` damps the excited amplitude
before the atom meets the cavity; the reversal ``diag(1, sqrt(1-p2))``
damps the ground amplitude afterwards.  Post-measurement states are kept
unnormalized unless ``normalize`` is requested.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .model import PhysicalParams, check_hermitian, evolve_atom


@dataclass(frozen=True)
class InitialPreparation:
    """Real superposition ``cos(theta/2)|e> + sin(theta/2)|g>``."""

    theta: float = np.pi / 2

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise DomainError(f"theta must be finite, got {self.theta!r}")
        if not 0 <= self.theta <= 2 * np.pi:
            object.__setattr__(self, "theta", float(np.mod(self.theta, 2 * np.pi)))


@dataclass(frozen=True)
class MeasurementStrengths:
    p1: float = 0.0
    p2: float = 0.0

    def __post_init__(self):
        _check_strength("p1", self.p1)
        _check_strength("p2", self.p2)


@dataclass(frozen=True)
class ProtocolConfig:
    params: PhysicalParams = field(default_factory=PhysicalParams)
    prep: InitialPreparation = field(default_factory=InitialPreparation)
    strengths: MeasurementStrengths = field(default_factory=MeasurementStrengths)
    normalize: bool = False


@dataclass(frozen=True)
class CoherenceSample:
    t: float
    c_l1: float
    c_rel: float
    rho_ee: float
    trace: float


def _check_strength(name, p):
    if not (np.isfinite(p) and 0 <= p <= 1):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")


def prepare_initial(prep: InitialPreparation) -> np.ndarray:
    c, s = np.cos(prep.theta / 2), np.sin(prep.theta / 2)
    return np.array([[c * c, s * c], [s * c, s * s]], dtype=complex)


def _kraus_conjugate(a, diag):
    k = np.asarray(diag, dtype=float)
    return a * np.outer(k, k)


def apply_weak_measurement(a, p1: float) -> np.ndarray:
    """Conjugate ``a`` by ``diag(sqrt(1-p1), 1)``; the result is not renormalized."""
    _check_strength("p1", p1)
    a = check_hermitian(a, 2)
    return _kraus_conjugate(a, [np.sqrt(1 - p1), 1.0])


def apply_reversal(a, p2: float) -> np.ndarray:
    """Conjugate ``a`` by ``diag(1, sqrt(1-p2))``; the result is not renormalized."""
    _check_strength("p2", p2)
    a = check_hermitian(a, 2)
    return _kraus_conjugate(a, [1.0, np.sqrt(1 - p2)])


def run_protocol(cfg: ProtocolConfig, t) -> np.ndarray:
    """Atom state at time ``t`` after the full protocol.

    ``t`` may be an array, in which case a stack of 2x2 matrices is returned.
    """
    rho = apply_weak_measurement(prepare_initial(cfg.prep), cfg.strengths.p1)
    rho = evolve_atom(cfg.params, rho, t)
    rho = apply_reversal(rho, cfg.strengths.p2)
    if cfg.normalize:
        tr = np.real(rho[..., 0, 0] + rho[..., 1, 1])
        if np.any(tr <= 0):
            raise DomainError("cannot normalize: measurement left zero trace")
        rho = rho / np.asarray(tr)[..., None, None]
    return rho


def coherence_l1(a) -> float:
    """Sum of moduli of the off-diagonal entries, on the state as given."""
    a = np.asarray(a)
    return np.abs(a[..., 0, 1]) + np.abs(a[..., 1, 0])


def _entropy_bits(p):
    p = p[p > 1e-15]
    return float(-np.sum(p * np.log2(p)))


def coherence_rel_entropy(a) -> float:
    """Relative entropy of coherence ``S(diag(rho)) - S(rho)`` in bits.

    The state is normalized by its trace first.
    """
    a = check_hermitian(a, 2)
    tr = np.real(np.trace(a))
    if tr <= 0:
        raise DomainError("relative entropy of coherence needs a positive trace")
    a = a / tr
    diag = np.clip(np.real(np.diag(a)), 0, None)
    evals = np.clip(np.linalg.eigvalsh(a), 0, None)
    return max(_entropy_bits(diag) - _entropy_bits(evals), 0.0)


def sample(cfg: ProtocolConfig, t: float) -> CoherenceSample:
    rho = run_protocol(cfg, t)
    return CoherenceSample(
        t=float(t),
        c_l1=float(coherence_l1(rho)),
        c_rel=coherence_rel_entropy(rho),
        rho_ee=float(np.real(rho[0, 0])),
        trace=float(np.real(np.trace(rho))),
    )
