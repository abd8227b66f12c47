"""Fixed-step RK4 integration of the time-local master equation.

This is deliberately independent of the closed-form propagator: it builds
the generator from projectors in the dressed basis and steps it numerically.
It only shares the decay-rate functions with :mod:`cavitycoh.model`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .model import (
    E_GROUND,
    E_MINUS,
    E_PLUS,
    PhysicalParams,
    check_hermitian,
    evolve_dressed,
    gamma_minus,
    gamma_plus,
    propagator,
)


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise DomainError(f"steps must be a positive integer, got {self.steps!r}")
        if not (np.isfinite(self.t_start) and np.isfinite(self.t_end)):
            raise DomainError("grid bounds must be finite")
        if self.t_start < 0:
            raise DomainError(f"t_start must be non-negative, got {self.t_start}")
        # zero-length grids are allowed so a single-point comparison is possible
        if self.t_end < self.t_start:
            raise DomainError("t_end must not precede t_start")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.steps

    @property
    def times(self) -> np.ndarray:
        if self.t_end == self.t_start:
            return np.array([self.t_start])
        return np.linspace(self.t_start, self.t_end, self.steps + 1)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n, 3, 3)

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return zip(self.times, self.states)


def _ket(i):
    v = np.zeros((3, 1), dtype=complex)
    v[i] = 1
    return v


_KET = [_ket(i) for i in range(3)]
_PROJ = [k @ k.conj().T for k in _KET]
# lowering operators |E0><E1±|
_LOWER_PLUS = _KET[E_GROUND] @ _KET[E_PLUS].conj().T
_LOWER_MINUS = _KET[E_GROUND] @ _KET[E_MINUS].conj().T


def jc_hamiltonian(params: PhysicalParams) -> np.ndarray:
    """Jaynes-Cummings Hamiltonian restricted to the dressed basis."""
    w0, w = params.omega0, params.omega
    return np.diag([w0 / 2 + w, w0 / 2 - w, -w0 / 2]).astype(complex)


def _dissipator(lower, proj, r):
    return 0.5 * lower @ r @ lower.conj().T - 0.25 * (proj @ r + r @ proj)


def _generator(h, g_plus, g_minus, r):
    return (
        -1j * (h @ r - r @ h)
        + g_plus * _dissipator(_LOWER_PLUS, _PROJ[E_PLUS], r)
        + g_minus * _dissipator(_LOWER_MINUS, _PROJ[E_MINUS], r)
    )


def master_rhs(params: PhysicalParams, t: float, r) -> np.ndarray:
    """Time derivative of the dressed-basis density matrix."""
    r = np.asarray(r, dtype=complex)
    return _generator(
        jc_hamiltonian(params), gamma_plus(params, t), gamma_minus(params, t), r
    )


def integrate(params: PhysicalParams, r0, grid: TimeGrid) -> Trajectory:
    """Classical RK4 on a uniform grid, symmetrizing after every step."""
    r = check_hermitian(r0, 3).copy()
    times = grid.times
    states = np.empty((len(times), 3, 3), dtype=complex)
    states[0] = r
    h = jc_hamiltonian(params)
    dt = grid.dt
    # rates on the half-step grid: even index = grid point, odd = midpoint
    half = np.linspace(grid.t_start, grid.t_end, 2 * (len(times) - 1) + 1)
    gp = gamma_plus(params, half)
    gm = gamma_minus(params, half)
    gp, gm = np.atleast_1d(gp), np.atleast_1d(gm)

    # overflow is detected explicitly below and reported with its time
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, len(times)):
            i = 2 * (n - 1)
            k1 = _generator(h, gp[i], gm[i], r)
            k2 = _generator(h, gp[i + 1], gm[i + 1], r + dt / 2 * k1)
            k3 = _generator(h, gp[i + 1], gm[i + 1], r + dt / 2 * k2)
            k4 = _generator(h, gp[i + 2], gm[i + 2], r + dt * k3)
            r = r + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            r = 0.5 * (r + r.conj().T)
            if not np.all(np.isfinite(r)):
                raise NumericalError(f"non-finite state at t={times[n]:.6g}", t=times[n])
            states[n] = r
    return Trajectory(times=times, states=states)


def compare_closed_form(params: PhysicalParams, r0, grid: TimeGrid) -> float:
    """Largest entry-wise gap between the RK4 trajectory and the closed form."""
    traj = integrate(params, r0, grid)
    exact = evolve_dressed(r0, propagator(params, traj.times))
    return float(np.max(np.abs(exact - traj.states)))
