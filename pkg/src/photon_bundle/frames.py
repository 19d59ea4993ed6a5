"""Explicit trivialisation of the photon bundle.

Hemisphere frames glued by the clutching map f(phi), an SU(2) homotopy
from f to the identity over the lower hemisphere, the flat smoothing step,
and the resulting smooth global frame.  Also the nonvanishing section u.
"""

import numpy as np

from . import dual as D
from .geometry import (
    FiberVector,
    PhotonBundleError,
    PoleSingularity,
    SphericalPoint,
    WaveVector,
    basis_arrays,
    hdot,
    POLE_TOL,
)

UPPER, LOWER = "upper", "lower"

# exp(-1/t) is exactly zero in binary64 below this argument
H_CUTOFF = 1.0 / 745.2


class WrongHemisphere(PhotonBundleError, ValueError):
    pass


class DomainError(PhotonBundleError, ValueError):
    pass


def u_components(k):
    """u = E1 + i E2 with E1 = (0, kz, -ky), E2 = (-kz, 0, kx); dual-friendly."""
    kx, ky, kz = k
    return (-1j * kz, kz + 0j * kx, -ky + 1j * kx)


def section_u(k):
    return FiberVector(k, np.array(u_components(k.vec), dtype=complex))


def chart_columns(hemisphere, phi):
    """Coefficients of (v1, v2) in the (theta_hat, phi_hat) basis; each of shape phi.shape + (2,)."""
    s, c = np.sin(phi), np.cos(phi)
    if hemisphere == UPPER:
        return np.stack([s, c], -1), np.stack([-c, s], -1)
    if hemisphere == LOWER:
        return np.stack([-s, c], -1), np.stack([-c, -s], -1)
    raise ValueError(f"unknown hemisphere {hemisphere!r}")


def hemisphere_frame(hemisphere, p):
    """Real tangent frame (v1, v2) of the given hemisphere at p."""
    if p.at_pole:
        raise PoleSingularity("hemisphere frames are evaluated in the spherical chart")
    if hemisphere == UPPER and p.theta > np.pi / 2 + POLE_TOL:
        raise WrongHemisphere(f"theta={p.theta} is below the equator")
    if hemisphere == LOWER and p.theta < np.pi / 2 - POLE_TOL:
        raise WrongHemisphere(f"theta={p.theta} is above the equator")
    th, ph, _ = basis_arrays(p.theta, p.phi)
    a, b = chart_columns(hemisphere, p.phi)
    return a[0] * th + a[1] * ph, b[0] * th + b[1] * ph


def clutching(phi):
    c, s = np.cos(2 * phi), np.sin(2 * phi)
    return np.array([[c, s], [-s, c]])


def clutching_winding(n=256):
    """Degree of the rotation angle of f around the circle."""
    phi = np.linspace(0, 2 * np.pi, n + 1)
    ang = np.unwrap(np.arctan2(-np.sin(2 * phi), np.cos(2 * phi)))
    return int(round((ang[-1] - ang[0]) / (2 * np.pi)))


def h_step(t):
    """exp(-1/t) for t > 0, else 0; exact zero where the exponential underflows."""
    t = np.asarray(t, dtype=float)
    live = t > H_CUTOFF
    safe = np.where(live, t, 1.0)
    return np.where(live, np.exp(-1.0 / safe), 0.0)


def g_step(theta):
    a = h_step(np.asarray(theta) - np.pi / 2)
    b = h_step(np.pi - np.asarray(theta))
    return 0.5 * np.pi * (1 + a / (a + b))


def homotopy_xyz(theta, phi):
    st, ct = np.sin(theta), np.cos(theta)
    x = np.cos(2 * phi) * st ** 2 + ct ** 2
    y = np.sin(2 * phi) * st
    z = -np.sin(phi) ** 2 * np.sin(2 * theta)
    return x, y, z


def _su2(x, y, z):
    m = np.empty(np.broadcast(x, y, z).shape + (2, 2), dtype=complex)
    m[..., 0, 0] = x + 1j * z
    m[..., 0, 1] = y
    m[..., 1, 0] = -y
    m[..., 1, 1] = x - 1j * z
    return m


def rough_homotopy(theta, phi):
    """F(theta, phi) on the lower hemisphere, before smoothing."""
    return _su2(*homotopy_xyz(theta, phi))


def smooth_homotopy(theta, phi):
    """F_s(theta, phi) = F(g(theta), phi) for theta in [pi/2, pi]."""
    t = np.asarray(theta, dtype=float)
    if np.any(t < np.pi / 2 - POLE_TOL) or np.any(t > np.pi + POLE_TOL):
        raise DomainError("smooth homotopy is defined for theta in [pi/2, pi]")
    return rough_homotopy(g_step(np.clip(t, np.pi / 2, np.pi)), phi)


def frame_columns(theta, phi):
    """Chart columns of the smooth frame: complex arrays of shape (..., 2) for v1 and v2."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    lower = theta > np.pi / 2
    a_up, b_up = chart_columns(UPPER, phi)
    a_lo, b_lo = chart_columns(LOWER, phi)
    F = rough_homotopy(g_step(np.where(lower, theta, np.pi / 2)), phi)
    a_lo = np.einsum("...ij,...j->...i", F, a_lo)
    b_lo = np.einsum("...ij,...j->...i", F, b_lo)
    m = lower[..., None]
    return np.where(m, a_lo, a_up + 0j), np.where(m, b_lo, b_up + 0j)


def frame_arrays(theta, phi, orthonormalize=False):
    """Cartesian values of the smooth frame (v1, v2), each of shape (..., 3).

    Points within the pole tolerance use the phi = 0 meridian, where the
    frame takes its limiting values v1 = y_hat and v2 = -x_hat (north) or
    v2 = x_hat (south).
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    pole = (theta < POLE_TOL) | (theta > np.pi - POLE_TOL)
    phi = np.where(pole, 0.0, phi)
    a, b = frame_columns(theta, phi)
    th, ph, _ = basis_arrays(theta, phi)
    v1 = a[..., :1] * th + a[..., 1:] * ph
    v2 = b[..., :1] * th + b[..., 1:] * ph
    if orthonormalize:
        v1 = v1 / np.sqrt(hdot(v1, v1).real)[..., None]
        v2 = v2 - v1 * hdot(v1, v2)[..., None]
        v2 = v2 / np.sqrt(hdot(v2, v2).real)[..., None]
    return v1, v2


def _angles(k):
    kx, ky, kz = (np.asarray(D.value(c), float) for c in k)
    r = np.sqrt(kx * kx + ky * ky + kz * kz)
    return np.arccos(np.clip(kz / r, -1, 1)), np.arctan2(ky, kx)


class GlobalFrame:
    """The smooth global frame extended radially: v_i(k) = v_i(k / |k|)."""

    def __init__(self, orthonormalize=False):
        self.orthonormalize = orthonormalize

    def arrays(self, theta, phi):
        return frame_arrays(theta, phi, self.orthonormalize)

    def v1(self, k):
        v = self.arrays(*_angles(k))[0]
        return tuple(v[..., i] for i in range(3))

    def v2(self, k):
        v = self.arrays(*_angles(k))[1]
        return tuple(v[..., i] for i in range(3))

    def at(self, k):
        """Fiber vectors (v1, v2) at a WaveVector."""
        v1, v2 = self.arrays(*_angles(k.vec))
        return FiberVector(k, v1), FiberVector(k, v2)

    def gram_det(self, theta, phi):
        v1, v2 = self.arrays(theta, phi)
        g11, g22, g12 = hdot(v1, v1), hdot(v2, v2), hdot(v1, v2)
        return (g11 * g22 - g12 * np.conj(g12)).real


def global_frame(orthonormalize=False):
    return GlobalFrame(orthonormalize)


def equator_mismatch(n_phi=1024, step=1e-4):
    """One-sided derivative mismatch of the frame across the equator.

    Returns a dict with the largest disagreement between the theta
    derivative taken from the upper and from the lower side, measured
    (a) on the chart columns with first-order quotients and (b) on the
    Cartesian components with second-order one-sided stencils, plus the
    largest jump of the frame values themselves.
    """
    phi = (np.arange(n_phi) + 0.5) * 2 * np.pi / n_phi
    e = np.pi / 2
    up = lambda t: np.concatenate(chart_columns(UPPER, phi), -1) + 0j
    lo = lambda t: np.concatenate(frame_columns(np.full_like(phi, t), phi), -1)
    chart = np.max(np.abs((up(e) - up(e - step)) / step - (lo(e + step) - lo(e)) / step))

    def cart(t, side):
        if side == UPPER:
            th, ph, _ = basis_arrays(t, phi)
            a, b = chart_columns(UPPER, phi)
            v = (a[:, :1] * th + a[:, 1:] * ph, b[:, :1] * th + b[:, 1:] * ph)
        else:
            v = frame_arrays(np.full_like(phi, t), phi)
        return np.concatenate(v, -1)

    d_up = (3 * cart(e, UPPER) - 4 * cart(e - step, UPPER) + cart(e - 2 * step, UPPER)) / (2 * step)
    d_lo = (-3 * cart(e, LOWER) + 4 * cart(e + step, LOWER) - cart(e + 2 * step, LOWER)) / (2 * step)
    jump = np.max(np.abs(cart(e, UPPER) - cart(e, LOWER)))
    return {"chart": float(chart), "cartesian": float(np.max(np.abs(d_up - d_lo))), "jump": float(jump)}


def frame_at(p, orthonormalize=False):
    """Frame vectors (v1, v2) as complex 3-vectors at a SphericalPoint."""
    v1, v2 = frame_arrays(p.theta, p.phi, orthonormalize)
    return v1, v2

