"""Effective two-level treatment of the adiabatic search algorithm.

Closed-form gap, the dominant sigma_x matrix element in the large-D limit,
and the weak-coupling excitation-error quadrature plus its order-of-magnitude
estimate.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._kernels import cumulative_simpson_uniform, filon_integral
from .bath import SpectralFunction, evaluate as bath_evaluate

_SOFT_LAMBDA = 0.1
_LARGE_D = 16


class QuadratureError(RuntimeError):
    """Oscillatory quadrature failed its grid-doubling certificate."""


@dataclass
class GroverParams:
    n_qubits: int
    coupling: float
    schedule: object
    spectral_function: SpectralFunction | None = None
    marked_state: str | None = None
    omega_grid: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.coupling < 0.0:
            raise ValueError(f"coupling must be nonnegative, got {self.coupling}")
        if self.coupling > _SOFT_LAMBDA:
            warnings.warn(
                f"coupling {self.coupling} above {_SOFT_LAMBDA}: first-order "
                "response is only reliable for weak coupling",
                stacklevel=2,
            )
        if self.marked_state is None:
            self.marked_state = "0" * self.n_qubits
        if len(self.marked_state) != self.n_qubits or set(self.marked_state) - {"0", "1"}:
            raise ValueError(f"marked_state must be a {self.n_qubits}-bit string")

    @property
    def dim(self):
        return 2**self.n_qubits

    @property
    def min_gap(self):
        return self.dim**-0.5


def grover_gap(g, dim):
    """Gap sqrt(1 - 4g(1-g)(1 - 1/D)); minimum 1/sqrt(D) at g=1/2."""
    g = np.asarray(g, dtype=float)
    if np.any(g < 0.0) or np.any(g > 1.0):
        raise ValueError(f"g must lie in [0, 1], got {g!r}")
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    val = np.sqrt(1.0 - 4.0 * g * (1.0 - g) * (1.0 - 1.0 / dim))
    return val if val.ndim else float(val)


def _phase_on_grid(schedule, dim, n_points):
    t = np.linspace(0.0, schedule.T, n_points)
    g = np.asarray(schedule.g_of(t), dtype=float)
    gap = grover_gap(g, dim)
    return t, g, gap, cumulative_simpson_uniform(gap, t[1] - t[0])


def matrix_element_x(g, t, dim, schedule, n_points=8193):
    """Dominant matrix element -(1-g)/(sqrt(D)*gap) * exp(-i int gap dt').

    Large-D form: the O(1/sqrt(D)) corrections to the two-level reduction
    are dropped, so require dim >= 16.
    """
    if dim < _LARGE_D:
        raise ValueError(f"large-D formula needs dim >= {_LARGE_D}, got {dim}")
    gap = grover_gap(g, dim)
    tg, _, gapg, cum = _phase_on_grid(schedule, dim, n_points)
    phi = float(np.interp(t, tg, cum))
    return -(1.0 - g) / (np.sqrt(dim) * gap) * np.exp(-1j * phi)


def _amplitude_fixed_grid(params, omega, n_points):
    t, g, gap, cum = _phase_on_grid(params.schedule, params.dim, n_points)
    env = -(1.0 - g) / (np.sqrt(params.dim) * gap)
    phase = omega * t + cum
    return filon_integral(env, phase, t[1] - t[0])


def amplitude_omega(params, omega, rel_tol=1e-4, n0=None, n_max=2**21):
    """Per-frequency amplitude integral with a grid-doubling certificate."""
    if n0 is None:
        cycles = params.schedule.T * (abs(omega) + 1.0) / (2.0 * np.pi)
        n0 = int(max(4096, 16 * cycles))
    n = n0
    prev = _amplitude_fixed_grid(params, omega, n + 1)
    while n < n_max:
        n *= 2
        cur = _amplitude_fixed_grid(params, omega, n + 1)
        scale = max(abs(cur), 1e-300)
        if abs(cur - prev) / scale < rel_tol:
            return cur, abs(cur - prev) / scale
        prev = cur
    raise QuadratureError(f"amplitude at omega={omega} not converged by n={n_max}")


def error_probability(params, omega_grid=None, rel_tol=1e-4):
    """Excitation error lambda^2 * int dw f(w) |amplitude(w)|^2.

    A dirac_comb spectral function reduces to the weighted sum over its
    atoms; continuous kinds are integrated on ``omega_grid`` (trapezoid).
    """
    sf = params.spectral_function
    if sf is None:
        raise ValueError("params.spectral_function is required")
    lam2 = params.coupling**2
    if sf.kind == "dirac_comb":
        total = 0.0
        for w0, wt in zip(*sf.probes):
            amp, _ = amplitude_omega(params, w0, rel_tol=rel_tol)
            total += wt * abs(amp) ** 2
        return lam2 * total
    if omega_grid is None:
        omega_grid = params.omega_grid
    if omega_grid is None:
        raise ValueError("omega_grid is required for a continuous spectral function")
    omega_grid = np.asarray(omega_grid, dtype=float)
    fvals = np.asarray(bath_evaluate(sf, omega_grid), dtype=float)
    mods = np.zeros_like(omega_grid)
    for i, w in enumerate(omega_grid):
        if fvals[i] == 0.0:
            continue
        amp, _ = amplitude_omega(params, w, rel_tol=rel_tol)
        mods[i] = abs(amp) ** 2
    return float(lam2 * np.trapezoid(fvals * mods, omega_grid))


def error_estimate(params, gap_multiplier=1.0):
    """Order-of-magnitude error lambda^2 * f(m * gap_min) / gap_min.

    ``gap_multiplier`` m in [1/2, 2] probes the sensitivity of the
    order-of-magnitude argument inside f.
    """
    if not (0.5 <= gap_multiplier <= 2.0):
        raise ValueError(f"gap_multiplier must lie in [1/2, 2], got {gap_multiplier}")
    sf = params.spectral_function
    if sf is None:
        raise ValueError("params.spectral_function is required")
    gap_min = params.min_gap
    fval = float(bath_evaluate(sf, gap_multiplier * gap_min))
    if not np.isfinite(fval):
        raise ValueError(f"f({gap_multiplier * gap_min}) is not finite")
    return params.coupling**2 * fval / gap_min
