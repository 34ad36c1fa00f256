"""Fused elementwise kernels for the 3D hot loops.

The 3D split-step spends most of its time in FFTs and in the pointwise
phase/decay factors; numba fuses the |psi|^2 evaluation with the complex
rotation so each step touches memory once instead of four times.
"""

import math
import warnings

import numba
import numpy as np

warnings.filterwarnings("ignore", message=".*TBB.*", category=numba.NumbaWarning)


@numba.njit(parallel=True, fastmath=True, cache=True)
def rotate_nonlinear(psi, v_static, u, dt):
    """psi *= exp(-i dt (v_static + u |psi|^2)), in place."""
    pf = psi.reshape(psi.size)
    vf = v_static.reshape(v_static.size)
    for i in numba.prange(pf.size):
        p = pf[i]
        theta = -dt * (vf[i] + u * (p.real * p.real + p.imag * p.imag))
        c = math.cos(theta)
        s = math.sin(theta)
        pf[i] = complex(p.real * c - p.imag * s, p.real * s + p.imag * c)


@numba.njit(parallel=True, fastmath=True, cache=True)
def decay_nonlinear(psi, decay_static, u, dtau):
    """psi *= decay_static * exp(-dtau u |psi|^2), in place (imaginary time)."""
    pf = psi.reshape(psi.size)
    df = decay_static.reshape(decay_static.size)
    for i in numba.prange(pf.size):
        p = pf[i]
        w = df[i] * math.exp(-dtau * u * (p.real * p.real + p.imag * p.imag))
        pf[i] = complex(p.real * w, p.imag * w)


@numba.njit(parallel=True, fastmath=True, cache=True)
def multiply_inplace(psi, factor):
    """psi *= factor elementwise, in place."""
    pf = psi.reshape(psi.size)
    ff = factor.reshape(factor.size)
    for i in numba.prange(pf.size):
        pf[i] = pf[i] * ff[i]


def flush_subnormals(values: np.ndarray, floor: float = 1e-200) -> None:
    """Zero magnitudes below `floor` in place.

    Graded subnormal shoulders in dead regions slow elementwise math by
    orders of magnitude on some CPUs; anything below 1e-200 is numerical
    debris here.
    """
    tiny = np.abs(values) < floor
    if tiny.any():
        values[tiny] = 0.0
