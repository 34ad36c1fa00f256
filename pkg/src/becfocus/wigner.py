"""Phase-space quasi-probability distribution and its diagnostics.

The transform is evaluated row by row as a discrete Fourier sum over the
separation coordinate.  Half-coordinate samples come from an exact
band-limited interpolation onto a doubled lattice, and separations beyond
half the window are dropped: the periodic wrap of the correlation would
otherwise alias a sign-flipped ghost of the distribution onto the window
edges.  States must therefore occupy less than half the window.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .grids import Grid1D, WaveFunction


@dataclass
class WignerGrid:
    """Real phase-space matrix W[z_i, p_k] with its axes.

    The momentum lattice has half the spacing of the field's conjugate
    lattice (the separation coordinate spans twice the window).
    """

    z: np.ndarray
    p: np.ndarray
    w: np.ndarray  # shape (n_z, n_p)

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])


def _double_resolution(values: np.ndarray) -> np.ndarray:
    """Band-limited interpolation to twice the sampling rate (node exact)."""
    n = values.size
    ft = np.fft.fft(values)
    out = np.zeros(2 * n, dtype=np.complex128)
    out[: n // 2] = ft[: n // 2]
    out[3 * n // 2 + 1:] = ft[n // 2 + 1:]
    out[n // 2] = 0.5 * ft[n // 2]
    out[3 * n // 2] = 0.5 * ft[n // 2]
    return np.fft.ifft(out) * 2


def wigner_transform(phi: WaveFunction) -> WignerGrid:
    """Phase-space distribution of a normalized 1D field."""
    if phi.ndim != 1 or phi.space != "position":
        raise ValueError("the transform expects a 1D position-space field")
    grid: Grid1D = phi.grid
    n = grid.n_points
    dz = grid.dz
    dens = phi.values.real**2 + phi.values.imag**2
    quarter = n // 4
    outside = float(dens[:quarter].sum() + dens[-quarter:].sum()) * dz
    if outside > 1e-4:
        warnings.warn(
            f"probability mass {outside:.2e} sits in the outer window quarters; "
            "separations beyond half the window are dropped, so correlations "
            "of such a wide state are truncated", stacklevel=2)
    fine = _double_resolution(phi.values)
    m = np.arange(2 * n)
    j = np.where(m < n, m, m - 2 * n)
    keep = np.abs(j) < n // 2
    scale = n * dz / math.pi
    w = np.empty((n, 2 * n))
    imag_max = 0.0
    for i in range(n):
        a = np.conj(fine[(2 * i + m) % (2 * n)]) * fine[(2 * i - m) % (2 * n)]
        a[~keep] = 0.0
        row = np.fft.ifft(a) * scale
        imag_max = max(imag_max, float(np.abs(row.imag).max()))
        w[i] = np.fft.fftshift(row.real)
    if imag_max > 1e-10:
        raise ValueError(f"non-real transform rows (imaginary residue {imag_max:.2e})")
    p = (math.pi / (n * dz)) * (np.arange(2 * n) - n)
    return WignerGrid(z=grid.z.copy(), p=p, w=w)


def marginal_position(wg: WignerGrid) -> np.ndarray:
    """Integrate over momentum; equals the position density."""
    return wg.w.sum(axis=1) * wg.dp


def marginal_momentum(wg: WignerGrid) -> np.ndarray:
    """Integrate over position; equals the momentum density on the fine lattice."""
    return wg.w.sum(axis=0) * wg.dz


def momentum_density_reference(phi: WaveFunction) -> np.ndarray:
    """|phi(p)|^2 on the Wigner momentum lattice (window zero-padded twofold)."""
    grid: Grid1D = phi.grid
    n = grid.n_points
    padded = np.concatenate([phi.values, np.zeros(n, dtype=np.complex128)])
    ft = np.fft.fft(padded) * grid.dz / math.sqrt(2 * math.pi)
    return np.fft.fftshift(ft.real**2 + ft.imag**2)


def total_mass(wg: WignerGrid) -> float:
    return float(wg.w.sum() * wg.dz * wg.dp)


def purity(wg: WignerGrid) -> float:
    """2 pi int W^2 dz dp; equals 1 for a pure state."""
    return float(2 * math.pi * (wg.w**2).sum() * wg.dz * wg.dp)


def negativity_volume(wg: WignerGrid) -> float:
    """Integrated magnitude of the negative part; zero only for Gaussian pure states."""
    neg = np.minimum(wg.w, 0.0)
    return float(-neg.sum() * wg.dz * wg.dp)


def shear(wg: WignerGrid, t: float) -> np.ndarray:
    """Free-motion prediction W(z - p t, p) by bilinear interpolation (0 outside)."""
    z, p, w = wg.z, wg.p, wg.w
    nz = z.size
    out = np.zeros_like(w)
    dz = wg.dz
    for k in range(p.size):
        src = z - p[k] * t
        pos = (src - z[0]) / dz
        i0 = np.floor(pos).astype(int)
        frac = pos - i0
        ok = (i0 >= 0) & (i0 < nz - 1)
        col = np.zeros(nz)
        col[ok] = w[i0[ok], k] * (1 - frac[ok]) + w[i0[ok] + 1, k] * frac[ok]
        out[:, k] = col
    return out


def downsample(wg: WignerGrid, max_size: int = 512) -> WignerGrid:
    """Decimate for plotting files; keeps axes consistent."""
    sz = max(1, wg.z.size // max_size)
    sp = max(1, wg.p.size // max_size)
    return WignerGrid(z=wg.z[::sz], p=wg.p[::sp], w=wg.w[::sz, ::sp])
