"""Bath spectral functions f(omega).

Thermal bosonic family J(|w|)*[n_B(|w|) + step(w)] with the spectral density
J(w) = 2*theta*omega_ph^(1-eps)*w^eps*exp(-w/omega_c), plus tabulated custom
functions and a formal single-frequency probe.
"""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

KINDS = ("thermal_bosonic", "tabulated", "dirac_comb")


class DivergentAtZeroError(ArithmeticError):
    """Sub-ohmic thermal f(w) diverges at w=0 for finite temperature."""


@dataclass
class SpectralFunction:
    kind: str
    theta: float = 0.5
    omega_ph: float = 1.0
    epsilon: float = 1.0
    omega_c: float = np.inf
    beta: float = np.inf
    table: tuple | None = None  # (omega samples, f samples) for tabulated
    probes: tuple | None = None  # (omega0 array, weight array) for dirac_comb
    _interp: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "thermal_bosonic":
            if self.theta < 0.0 or self.omega_ph <= 0.0 or self.epsilon < 0.0:
                raise ValueError("need theta >= 0, omega_ph > 0, epsilon >= 0")
            if self.omega_c <= 0.0 or self.beta <= 0.0:
                raise ValueError("need omega_c > 0 and beta > 0 (inf allowed)")

    def __call__(self, omega):
        return evaluate(self, omega)


def spectral_density(sf, omega):
    """Bath spectral density J(w) = 2*theta*omega_ph^(1-eps)*w^eps*e^(-w/wc)."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise ValueError(f"omega must be nonnegative, got {omega!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        powered = np.where(omega > 0.0, omega ** sf.epsilon, 0.0 if sf.epsilon > 0.0 else 1.0)
        decay = np.exp(-omega / sf.omega_c) if np.isfinite(sf.omega_c) else np.ones_like(omega)
    val = 2.0 * sf.theta * sf.omega_ph ** (1.0 - sf.epsilon) * powered * decay
    return val if val.ndim else float(val)


def _thermal(sf, omega):
    omega = np.asarray(omega, dtype=float)
    scalar = omega.ndim == 0
    omega = np.atleast_1d(omega)
    out = np.zeros_like(omega)
    absw = np.abs(omega)
    pos = omega > 0.0
    zero = omega == 0.0

    if np.isinf(sf.beta):
        out[pos] = spectral_density(sf, absw[pos])
        # w <= 0 contributes nothing at zero temperature
    else:
        nz = ~zero
        j = spectral_density(sf, absw[nz])
        with np.errstate(over="ignore"):
            # expm1 overflow at large beta*|w| correctly yields occupancy 0
            occupancy = 1.0 / np.expm1(sf.beta * absw[nz])
        out[nz] = j * (occupancy + pos[nz].astype(float))
        if np.any(zero):
            if sf.epsilon < 1.0:
                raise DivergentAtZeroError(
                    f"thermal f(0) diverges for epsilon={sf.epsilon} < 1 at finite beta"
                )
            # classical limit J(|w|)/(beta*|w|): finite for eps=1, zero above
            if sf.epsilon == 1.0:
                out[zero] = 2.0 * sf.theta / sf.beta
    return out[0] if scalar else out


def evaluate(sf, omega):
    """Spectral function f(w); negative w handled per kind."""
    if sf.kind == "thermal_bosonic":
        return _thermal(sf, omega)
    if sf.kind == "tabulated":
        omega = np.asarray(omega, dtype=float)
        lo, hi = sf.table[0][0], sf.table[0][-1]
        inside = (omega >= lo) & (omega <= hi)
        out = np.where(inside, np.maximum(sf._interp(np.clip(omega, lo, hi)), 0.0), 0.0)
        return out if out.ndim else float(out)
    # dirac_comb is a formal measure; pointwise evaluation is zero a.e.
    omega = np.asarray(omega, dtype=float)
    out = np.zeros_like(omega)
    return out if out.ndim else float(out)


def load_tabulated(samples):
    """SpectralFunction from (omega, f) samples; zero outside the range.

    ``samples`` is a sequence of pairs or a path to a two-column CSV
    (header row optional).
    """
    if isinstance(samples, (str, bytes)) or hasattr(samples, "read"):
        rows = []
        close = False
        fh = samples
        if isinstance(samples, (str, bytes)):
            fh = open(samples, newline="")
            close = True
        try:
            for row in csv.reader(fh):
                if not row:
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows:
                        raise
                    continue  # header row
        finally:
            if close:
                fh.close()
        samples = rows
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError("need at least two (omega, f) samples")
    w, f = arr[:, 0], arr[:, 1]
    if np.any(np.diff(w) <= 0.0):
        raise ValueError("omega samples must be strictly ascending")
    if np.any(f < 0.0):
        raise ValueError("f samples must be nonnegative")
    sf = SpectralFunction(kind="tabulated", table=(w, f))
    sf._interp = PchipInterpolator(w, f)
    return sf


def dirac_probe(omega0, weight):
    """Formal measure weight * delta(w - omega0); vector arguments allowed."""
    omega0 = np.atleast_1d(np.asarray(omega0, dtype=float))
    weight = np.broadcast_to(np.asarray(weight, dtype=float), omega0.shape).copy()
    if np.any(weight <= 0.0):
        raise ValueError("weights must be positive")
    return SpectralFunction(kind="dirac_comb", probes=(omega0, weight))


def integrate_abs(sf, omega_lo, omega_hi, n_points=4097):
    """Integral of |f| over a window (atoms inside the window for dirac_comb)."""
    if omega_hi <= omega_lo:
        return 0.0
    if sf.kind == "dirac_comb":
        w0, wt = sf.probes
        mask = (w0 >= omega_lo) & (w0 < omega_hi)
        return float(np.sum(wt[mask]))
    grid = np.linspace(omega_lo, omega_hi, n_points)
    vals = np.abs(np.asarray(evaluate(sf, grid), dtype=float))
    return float(np.trapezoid(vals, grid))
