"""Closed-form dynamics of a two-level atom in a leaky cavity.

The atom-cavity system is restricted to the single-excitation sector and
represented in the dressed basis ``[|E1+>, |E1->, |E0>]`` with
``|E1±> = (|1g> ± |0e>)/sqrt(2)`` and ``|E0> = |0g>``.  Atomic density
matrices use the ``[|e>, |g>]`` ordering.

All rates are measured in units of the system-reservoir coupling
``lambda0``.  Functions taking a time ``t`` accept scalars or numpy arrays;
array input yields array-valued fields (and stacks of matrices, shape
``(..., 3, 3)``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ValidationError

ArrayLike = Union[float, np.ndarray]

SQRT2 = np.sqrt(2.0)

# dressed basis indices
E_PLUS, E_MINUS, E_GROUND = 0, 1, 2

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class PhysicalParams:
    """Reservoir, cavity and atom constants.

    ``lambda0`` is the system-environment coupling and fixes the time unit,
    ``lam`` the Lorentzian width, ``omega`` the atom-cavity coupling and
    ``omega0`` the atomic Bohr frequency.
    """

    lambda0: float = 1.0
    lam: float = 5.0
    omega: float = 1.0
    omega0: float = 100.0

    def __post_init__(self):
        for name in ("lambda0", "lam", "omega", "omega0"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.lambda0 <= 0:
            raise DomainError(f"lambda0 must be positive, got {self.lambda0}")
        if self.lam <= 0:
            raise DomainError(f"lam must be positive, got {self.lam}")
        if self.omega < 0:
            raise DomainError(f"omega must be non-negative, got {self.omega}")
        if self.omega0 < 0:
            raise DomainError(f"omega0 must be non-negative, got {self.omega0}")

    @property
    def is_weak_regime(self) -> bool:
        """True in the Markovian regime ``lam > 2 * lambda0``."""
        return self.lam > 2 * self.lambda0

    @property
    def plus_rate_limit(self) -> float:
        """Long-time value of the upper dressed-state decay rate."""
        return self.lambda0 * self.lam**2 / (4 * self.omega**2 + self.lam**2)


@dataclass(frozen=True)
class MemoryIntegrals:
    i_plus: ArrayLike
    i_minus: ArrayLike


@dataclass(frozen=True)
class DressedPropagator:
    """Coefficients mapping initial dressed matrix elements to time ``t``.

    ``a11``, ``a22``, ``a33`` are real, ``a12``, ``a13``, ``a23`` complex.
    Coefficients for transposed index pairs are the complex conjugates.
    """

    a11: ArrayLike
    a22: ArrayLike
    a33: ArrayLike
    a12: ArrayLike
    a13: ArrayLike
    a23: ArrayLike


def _check_time(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0):
        raise DomainError("time must be finite and non-negative")
    return t


def _unwrap(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def gamma_minus(params: PhysicalParams, t: ArrayLike) -> ArrayLike:
    """Decay rate of ``|E1->``, the state the spectrum is peaked on."""
    t = _check_time(t)
    return _unwrap(params.lambda0 * -np.expm1(-params.lam * t))


def gamma_plus(params: PhysicalParams, t: ArrayLike) -> ArrayLike:
    """Decay rate of ``|E1+>``; transiently negative when ``2*omega > lam``."""
    t = _check_time(t)
    lam, w = params.lam, params.omega
    bracket = (2 * w / lam) * np.sin(2 * w * t) - np.cos(2 * w * t)
    return _unwrap(params.plus_rate_limit * (1 + bracket * np.exp(-lam * t)))


def memory_integrals(params: PhysicalParams, t: ArrayLike) -> MemoryIntegrals:
    """Time integrals of :func:`gamma_plus` and :func:`gamma_minus` from 0 to ``t``."""
    t = _check_time(t)
    l0, lam, w = params.lambda0, params.lam, params.omega
    decay = np.exp(-lam * t)
    # expm1 keeps small-t accuracy where both terms nearly cancel
    i_minus = l0 * t + (l0 / lam) * np.expm1(-lam * t)

    s = 4 * w**2 + lam**2
    cos_term = decay * np.cos(2 * w * t) - 1
    i_plus = params.plus_rate_limit * (
        t
        - 4 * w * decay * np.sin(2 * w * t) / s
        + (lam**2 - 4 * w**2) * cos_term / (lam * s)
    )
    return MemoryIntegrals(i_plus=_unwrap(i_plus), i_minus=_unwrap(i_minus))


def propagator(params: PhysicalParams, t: ArrayLike) -> DressedPropagator:
    t = _check_time(t)
    mi = memory_integrals(params, t)
    ip, im = np.asarray(mi.i_plus), np.asarray(mi.i_minus)
    w, w0 = params.omega, params.omega0
    # exponents are assembled first and exponentiated once
    return DressedPropagator(
        a11=_unwrap(np.exp(-ip / 2)),
        a22=_unwrap(np.exp(-im / 2)),
        a33=_unwrap(np.ones_like(t)),
        a12=_unwrap(np.exp(-2j * w * t - (ip + im) / 4)),
        a13=_unwrap(np.exp(-1j * (w0 + w) * t - ip / 4)),
        a23=_unwrap(np.exp(-1j * (w0 - w) * t - im / 4)),
    )


def check_hermitian(m, size: int, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``m`` as a complex array after shape and Hermiticity checks."""
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (size, size):
        raise ValidationError(f"expected a {size}x{size} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix contains non-finite entries")
    dev = np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))), initial=0.0)
    if dev > tol:
        raise ValidationError(f"matrix is not Hermitian (deviation {dev:.3g})")
    return m


def evolve_dressed(r0, p: DressedPropagator) -> np.ndarray:
    """Apply the closed-form propagator to a dressed-basis density matrix.

    If the propagator was built from an array of times the result is a stack
    of matrices with the time axis first.
    """
    r0 = check_hermitian(r0, 3)
    a11, a22 = np.asarray(p.a11), np.asarray(p.a22)
    shape = np.broadcast_shapes(a11.shape, r0.shape[:-2])
    r = np.zeros(shape + (3, 3), dtype=complex)

    r[..., 0, 0] = a11 * r0[..., 0, 0]
    r[..., 1, 1] = a22 * r0[..., 1, 1]
    r[..., 2, 2] = (
        (1 - a11) * r0[..., 0, 0] + (1 - a22) * r0[..., 1, 1] + p.a33 * r0[..., 2, 2]
    )
    r[..., 0, 1] = p.a12 * r0[..., 0, 1]
    r[..., 0, 2] = p.a13 * r0[..., 0, 2]
    r[..., 1, 2] = p.a23 * r0[..., 1, 2]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        r[..., j, i] = np.conj(r[..., i, j])
    return r


def embed_atom_with_vacuum(a) -> np.ndarray:
    """Dressed-basis matrix of ``a`` tensored with the empty cavity."""
    a = check_hermitian(a, 2)
    tr = np.real(a[..., 0, 0] + a[..., 1, 1])
    if np.any(tr > 1 + 1e-12):
        raise ValidationError("atom state trace exceeds 1")
    ree, reg, rgg = a[..., 0, 0], a[..., 0, 1], a[..., 1, 1]
    r = np.zeros(a.shape[:-2] + (3, 3), dtype=complex)
    r[..., 0, 0] = r[..., 1, 1] = ree / 2
    r[..., 0, 1] = r[..., 1, 0] = -ree / 2
    r[..., 0, 2] = reg / SQRT2
    r[..., 1, 2] = -reg / SQRT2
    r[..., 2, 0] = np.conj(r[..., 0, 2])
    r[..., 2, 1] = np.conj(r[..., 1, 2])
    r[..., 2, 2] = rgg
    return r


def reduce_to_atom(r) -> np.ndarray:
    """Trace out the cavity from a dressed-basis matrix.

    The ground population collects both the ``|1g>`` weight and ``|E0>``.
    """
    r = check_hermitian(r, 3)
    a = np.empty(r.shape[:-2] + (2, 2), dtype=complex)
    cross = r[..., 0, 1] + r[..., 1, 0]
    a[..., 0, 0] = 0.5 * (r[..., 0, 0] - cross + r[..., 1, 1])
    a[..., 1, 1] = 0.5 * (r[..., 0, 0] + cross + r[..., 1, 1]) + r[..., 2, 2]
    a[..., 0, 1] = (r[..., 0, 2] - r[..., 1, 2]) / SQRT2
    a[..., 1, 0] = np.conj(a[..., 0, 1])
    return a


def evolve_atom(params: PhysicalParams, a, t: ArrayLike) -> np.ndarray:
    """Atom state after the cavity interaction: embed, propagate, reduce."""
    return reduce_to_atom(evolve_dressed(embed_atom_with_vacuum(a), propagator(params, t)))
