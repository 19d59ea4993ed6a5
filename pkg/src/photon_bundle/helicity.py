"""Circular polarisation: e+- frames, helicity projectors, decomposition and zero scans."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .geometry import (
    FiberVector,
    MeshTooCoarse,
    PoleSingularity,
    SphericalPoint,
    WaveVector,
    basis_arrays,
    hdot,
    sample,
    unit_vector,
)

PLUS, MINUS = 1, -1


@dataclass(frozen=True)
class HelicitySign:
    value: int

    def __post_init__(self):
        if self.value not in (1, -1):
            raise ValueError("helicity sign must be +1 or -1")

    def __int__(self):
        return self.value

    def __neg__(self):
        return HelicitySign(-self.value)


def _sign(sign):
    s = int(sign)
    if s not in (1, -1):
        raise ValueError("helicity sign must be +1 or -1")
    return s


def circular_frame(p, sign):
    """e+- = (theta_hat +- i phi_hat) / sqrt(2) at p, as a fiber over the unit vector."""
    if p.at_pole:
        raise PoleSingularity("circular frame is chart-based")
    th, ph, kh = basis_arrays(p.theta, p.phi)
    return FiberVector(WaveVector.from_array(kh), (th + 1j * _sign(sign) * ph) / np.sqrt(2))


def circular_arrays(theta, phi, sign):
    th, ph, _ = basis_arrays(theta, phi)
    return (th + 1j * _sign(sign) * ph) / np.sqrt(2)


def helicity_projector(khat, sign):
    """P+- = (I_perp +- i [k_hat]_x) / 2 as (..., 3, 3) matrices.

    This equals e+- e+-^dagger for any chart, so it is smooth on the whole
    sphere, poles included.
    """
    khat = np.asarray(khat, dtype=float)
    kx, ky, kz = khat[..., 0], khat[..., 1], khat[..., 2]
    eye = np.eye(3) - khat[..., :, None] * khat[..., None, :]
    c = np.zeros(khat.shape + (3,))
    c[..., 0, 1], c[..., 0, 2] = -kz, ky
    c[..., 1, 0], c[..., 1, 2] = kz, -kx
    c[..., 2, 0], c[..., 2, 1] = -ky, kx
    return 0.5 * (eye + 1j * _sign(sign) * c)


def project_arrays(khat, v, sign):
    """P+- v for stacked unit vectors khat and vectors v (trailing axis 3)."""
    khat = np.asarray(khat, dtype=float)
    v = np.asarray(v, dtype=complex)
    vt = v - khat * np.sum(khat * v, axis=-1)[..., None]
    return 0.5 * (vt + 1j * _sign(sign) * np.cross(khat, vt))


def project_helicity(v, sign):
    return FiberVector(v.base, project_arrays(v.base.hat, v.e, sign))


def chart_projector(khat, sign, rotation=None):
    """Projector assembled from a chart frame, e e^dagger.

    With ``rotation`` (a 3x3 orthogonal matrix) the chart is the spherical
    chart of the rotated sphere, pulled back; used to show that the result
    does not depend on the chart.
    """
    khat = np.asarray(khat, dtype=float)
    R = np.eye(3) if rotation is None else np.asarray(rotation)
    q = khat @ R
    th, ph, _ = basis_arrays(np.arccos(np.clip(q[..., 2], -1, 1)), np.arctan2(q[..., 1], q[..., 0]))
    e = (th + 1j * _sign(sign) * ph) @ R.T / np.sqrt(2)
    return e[..., :, None] * np.conj(e[..., None, :])


@dataclass(frozen=True)
class HelicityComponents:
    plus: object
    minus: object


def _khat(k):
    kx, ky, kz = (np.asarray(c, float) for c in k)
    r = np.sqrt(kx * kx + ky * ky + kz * kz)
    return np.stack(np.broadcast_arrays(kx / r, ky / r, kz / r), -1)


def projected_section(s, sign):
    def out(k):
        v = np.stack(np.broadcast_arrays(*(np.asarray(c, complex) for c in s(k))), -1)
        p = project_arrays(_khat(k), v, sign)
        return tuple(p[..., i] for i in range(3))

    return out


def decompose_section(s):
    """Split a transverse section into its gamma+ and gamma- parts (full vectors, chart free)."""
    return HelicityComponents(projected_section(s, PLUS), projected_section(s, MINUS))


def little_group_action(s, theta):
    """exp(i chi theta) s = e^{i theta} s+ + e^{-i theta} s-."""
    def out(k):
        v = np.stack(np.broadcast_arrays(*(np.asarray(c, complex) for c in s(k))), -1)
        kh = _khat(k)
        w = np.exp(1j * theta) * project_arrays(kh, v, PLUS) + np.exp(-1j * theta) * project_arrays(kh, v, MINUS)
        return tuple(w[..., i] for i in range(3))

    return out


def rotate_about(axis, angle, v):
    """Active rotation of v (trailing axis 3) about unit ``axis`` by ``angle`` (Rodrigues)."""
    axis = np.asarray(axis, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return c * v + s * np.cross(axis, v) + (1 - c) * axis * np.sum(axis * v, -1)[..., None]


@dataclass(frozen=True)
class ScanResult:
    min_norm: float
    theta: float
    phi: float
    mesh: str
    index: int

    @property
    def argmin(self):
        return SphericalPoint(self.theta, self.phi)

    def as_dict(self):
        return {"min_norm": self.min_norm, "theta": self.theta, "phi": self.phi, "mesh": self.mesh}


def _min_scan(f, mesh, refine, tol):
    if mesh.size < 8:
        raise MeshTooCoarse("zero scan needs at least 8 nodes")
    vals = f(mesh.theta, mesh.phi)
    i = int(np.argmin(vals))
    best, t0, p0 = float(vals[i]), float(mesh.theta[i]), float(mesh.phi[i])
    if refine:
        dt = np.pi / mesh.shape[0] if len(mesh.shape) == 2 else np.sqrt(4 * np.pi / mesh.size)
        dp = 2 * np.pi / mesh.shape[1] if len(mesh.shape) == 2 else dt / max(np.sin(t0), dt)
        for _ in range(3):
            r = minimize_scalar(lambda t: float(f(t, p0)), bounds=(max(t0 - dt, 0.0), min(t0 + dt, np.pi)),
                                method="bounded", options={"xatol": tol})
            if r.fun < best:
                best, t0 = float(r.fun), float(r.x)
            r = minimize_scalar(lambda p: float(f(t0, p)), bounds=(p0 - dp, p0 + dp),
                                method="bounded", options={"xatol": tol})
            if r.fun < best:
                best, p0 = float(r.fun), float(r.x) % (2 * np.pi)
    return ScanResult(best, t0, p0, mesh.label(), i)


def zero_constraint_scan(s, sign, mesh, refine=False, tol=1e-3):
    """Minimum of |P+- s| over the unit-sphere mesh and where it occurs.

    Ties resolve to the lowest node index.  With ``refine`` a bounded
    scalar search alternates in theta and phi around the coarse minimiser.
    """
    def f(theta, phi):
        x = unit_vector(theta, phi)
        v = sample(s, x)
        p = project_arrays(x, v, sign)
        return np.sqrt(hdot(p, p).real)

    return _min_scan(f, mesh, refine, tol)


def norm_scan(s, mesh):
    def f(theta, phi):
        v = sample(s, unit_vector(theta, phi))
        return np.sqrt(hdot(v, v).real)

    return _min_scan(f, mesh, False, 0)


def real_part_scan(s, mesh, alphas=None):
    """For each constant phase alpha, the minimum over the mesh of |Re(e^{i alpha} s)|.

    Any such real part is a continuous real tangent field, so by the hairy
    ball theorem it must vanish somewhere; the scan reports the largest of
    the per-phase minima.
    """
    alphas = np.linspace(0, np.pi, 8, endpoint=False) if alphas is None else np.asarray(alphas)
    v = sample(s, mesh.points())
    mins = [float(np.min(np.linalg.norm((np.exp(1j * a) * v).real, axis=-1))) for a in alphas]
    return max(mins), mins


def helicity_rotation(khat, theta, v):
    """exp(i theta k_hat.J) on fiber vectors: the passive rotation by theta about k_hat, e+- -> e^{+-i theta} e+-."""
    return rotate_about(khat, -theta, v)
