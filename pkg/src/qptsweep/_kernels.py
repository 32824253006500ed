"""Hot numeric kernels: oscillatory quadrature and the two-level mode integrator.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy fallback.
Set ``QPTSWEEP_DISABLE_NUMBA=1`` in the environment (before import) to force
the fallback path; ``using_numba()`` reports which path is active.
"""

import os

import numpy as np

_DISABLED = os.environ.get("QPTSWEEP_DISABLE_NUMBA", "0") not in ("0", "", "false")

if not _DISABLED:
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _HAVE_NUMBA = False
else:
    _HAVE_NUMBA = False


def using_numba():
    """True when the jitted kernel path is active."""
    return _HAVE_NUMBA


# Taylor switch-over for the Filon moments; below this |dphase| the closed
# form loses digits to cancellation.
_SMALL_PHASE = 1e-3


def _filon_numpy(env, phase, dt):
    """Integral of env(t) * exp(i*phase(t)) on a uniform grid.

    Per interval the envelope is taken linear and the phase linear, so each
    segment integrates in closed form regardless of how many radians the
    phase advances across it.
    """
    a0 = env[:-1]
    da = env[1:] - env[:-1]
    c = phase[1:] - phase[:-1]

    small = np.abs(c) < _SMALL_PHASE
    ic = 1j * c
    with np.errstate(divide="ignore", invalid="ignore"):
        eic = np.exp(ic)
        e0 = np.where(small, 1.0, (eic - 1.0) / np.where(small, 1.0, ic))
        e1 = np.where(small, 0.5, (eic * (ic - 1.0) + 1.0) / np.where(small, 1.0, ic * ic))
    if np.any(small):
        ics = ic[small]
        e0s = 1.0 + ics / 2.0 + ics**2 / 6.0 + ics**3 / 24.0 + ics**4 / 120.0
        e1s = 0.5 + ics / 3.0 + ics**2 / 8.0 + ics**3 / 30.0 + ics**4 / 144.0
        e0 = e0.astype(complex)
        e1 = e1.astype(complex)
        e0[small] = e0s
        e1[small] = e1s
    seg = dt * np.exp(1j * phase[:-1]) * (a0 * e0 + da * e1)
    return complex(np.sum(seg))


def _make_filon_numba():
    @njit(cache=True)
    def _filon(env, phase, dt):
        total = 0.0 + 0.0j
        n = env.shape[0] - 1
        for i in range(n):
            a0 = env[i]
            da = env[i + 1] - env[i]
            c = phase[i + 1] - phase[i]
            ic = 1j * c
            if abs(c) < _SMALL_PHASE:
                e0 = 1.0 + ic / 2.0 + ic**2 / 6.0 + ic**3 / 24.0 + ic**4 / 120.0
                e1 = 0.5 + ic / 3.0 + ic**2 / 8.0 + ic**3 / 30.0 + ic**4 / 144.0
            else:
                eic = np.exp(ic)
                e0 = (eic - 1.0) / ic
                e1 = (eic * (ic - 1.0) + 1.0) / (ic * ic)
            total += dt * np.exp(1j * phase[i]) * (a0 * e0 + da * e1)
        return total

    return _filon


def _rk4_mode_numpy(g2, ka, dt, u0=1.0 + 0.0j, v0=0.0 + 0.0j):
    """RK4 for i u' = a u + b v, i v' = -a v + b u with a, b functions of g.

    ``g2`` holds g at the step points and midpoints (length 2n+1).  Returns
    the full (u, v) trajectory at the n+1 step points, starting from
    (u0, v0).
    """
    n = (g2.shape[0] - 1) // 2
    chalf = np.cos(ka / 2.0) ** 2
    ska = np.sin(ka)
    u = np.empty(n + 1, dtype=complex)
    v = np.empty(n + 1, dtype=complex)
    u[0] = u0
    v[0] = v0
    uc, vc = complex(u0), complex(v0)
    for i in range(n):
        g0 = g2[2 * i]
        gm = g2[2 * i + 1]
        g1 = g2[2 * i + 2]
        a0 = 2.0 - 4.0 * g0 * chalf
        b0 = 2.0 * g0 * ska
        am = 2.0 - 4.0 * gm * chalf
        bm = 2.0 * gm * ska
        a1 = 2.0 - 4.0 * g1 * chalf
        b1 = 2.0 * g1 * ska

        k1u = -1j * (a0 * uc + b0 * vc)
        k1v = -1j * (-a0 * vc + b0 * uc)
        u2 = uc + 0.5 * dt * k1u
        v2 = vc + 0.5 * dt * k1v
        k2u = -1j * (am * u2 + bm * v2)
        k2v = -1j * (-am * v2 + bm * u2)
        u3 = uc + 0.5 * dt * k2u
        v3 = vc + 0.5 * dt * k2v
        k3u = -1j * (am * u3 + bm * v3)
        k3v = -1j * (-am * v3 + bm * u3)
        u4 = uc + dt * k3u
        v4 = vc + dt * k3v
        k4u = -1j * (a1 * u4 + b1 * v4)
        k4v = -1j * (-a1 * v4 + b1 * u4)

        uc = uc + dt * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0
        vc = vc + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        u[i + 1] = uc
        v[i + 1] = vc
    return u, v


def _make_rk4_numba():
    @njit(cache=True)
    def _rk4(g2, ka, dt, u0=1.0 + 0.0j, v0=0.0 + 0.0j):
        n = (g2.shape[0] - 1) // 2
        chalf = np.cos(ka / 2.0) ** 2
        ska = np.sin(ka)
        u = np.empty(n + 1, dtype=np.complex128)
        v = np.empty(n + 1, dtype=np.complex128)
        u[0] = u0
        v[0] = v0
        uc = u0 + 0.0j
        vc = v0 + 0.0j
        for i in range(n):
            g0 = g2[2 * i]
            gm = g2[2 * i + 1]
            g1 = g2[2 * i + 2]
            a0 = 2.0 - 4.0 * g0 * chalf
            b0 = 2.0 * g0 * ska
            am = 2.0 - 4.0 * gm * chalf
            bm = 2.0 * gm * ska
            a1 = 2.0 - 4.0 * g1 * chalf
            b1 = 2.0 * g1 * ska

            k1u = -1j * (a0 * uc + b0 * vc)
            k1v = -1j * (-a0 * vc + b0 * uc)
            u2 = uc + 0.5 * dt * k1u
            v2 = vc + 0.5 * dt * k1v
            k2u = -1j * (am * u2 + bm * v2)
            k2v = -1j * (-am * v2 + bm * u2)
            u3 = uc + 0.5 * dt * k2u
            v3 = vc + 0.5 * dt * k2v
            k3u = -1j * (am * u3 + bm * v3)
            k3v = -1j * (-am * v3 + bm * u3)
            u4 = uc + dt * k3u
            v4 = vc + dt * k3v
            k4u = -1j * (a1 * u4 + b1 * v4)
            k4v = -1j * (-a1 * v4 + b1 * u4)

            uc = uc + dt * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0
            vc = vc + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
            u[i + 1] = uc
            v[i + 1] = vc
        return u, v

    return _rk4


if _HAVE_NUMBA:
    filon_integral = _make_filon_numba()
    rk4_mode = _make_rk4_numba()
else:
    filon_integral = _filon_numpy
    rk4_mode = _rk4_mode_numpy

# Always-importable references for benchmarking / cross-checking the paths.
filon_integral_numpy = _filon_numpy
rk4_mode_numpy = _rk4_mode_numpy


def cumulative_simpson_uniform(y, dt):
    """Cumulative integral of samples on a uniform grid, 4th order.

    Each increment uses the parabola through the three nearest nodes
    (matches scipy's cumulative_simpson for uniform spacing).
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    out = np.zeros(n)
    if n < 2:
        return out
    if n == 2:
        out[1] = 0.5 * dt * (y[0] + y[1])
        return out
    inc = np.empty(n - 1)
    # interval [i, i+1] integrated with the parabola through (i, i+1, i+2)
    inc[:-1] = dt / 12.0 * (5.0 * y[:-2] + 8.0 * y[1:-1] - y[2:])
    # last interval uses the parabola through the final three nodes
    inc[-1] = dt / 12.0 * (-y[-3] + 8.0 * y[-2] + 5.0 * y[-1])
    out[1:] = np.cumsum(inc)
    return out
