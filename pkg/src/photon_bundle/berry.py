"""Berry connection and curvature of the helicity subbundles and their Chern numbers.

Sign convention: the connection is omega = <e, de> and C1 = (i / 2 pi) times the
integral of d omega, which gives C1(gamma+-) = -+2.  ``convention=-1`` flips
the overall sign everywhere.
"""

from dataclasses import dataclass

import numpy as np

from . import dual as D
from .frames import frame_arrays
from .geometry import PhotonBundleError, PoleSingularity, SphereMesh, SphericalPoint, unit_vector
from .helicity import project_arrays


class PlaquetteOverflow(PhotonBundleError, ValueError):
    pass


@dataclass(frozen=True)
class ConnectionSample:
    point: SphericalPoint
    omega_theta: complex
    omega_phi: complex


@dataclass(frozen=True)
class CurvatureSample:
    point: SphericalPoint
    f_theta_phi: complex


@dataclass(frozen=True)
class ChernResult:
    value: float
    method: str
    mesh: str
    residual: float
    raw: float

    def as_dict(self):
        return {"value": self.value, "method": self.method, "residual": self.residual, "mesh": self.mesh}


def _check_chart(p):
    if p.at_pole:
        raise PoleSingularity("chart connection is singular at the poles")


def berry_connection(sign, p):
    """Closed form in the e+- chart: omega_theta = 0, omega_phi = -+ i cos(theta)."""
    _check_chart(p)
    return ConnectionSample(p, 0j, -1j * int(sign) * np.cos(p.theta))


def berry_curvature(sign, p):
    """Closed form: Omega = +- i sin(theta) dtheta ^ dphi."""
    _check_chart(p)
    return CurvatureSample(p, 1j * int(sign) * np.sin(p.theta))


def chart_frame(sign, gauge=None):
    """e+- as a function of (theta, phi), dual friendly; ``gauge(theta, phi)`` multiplies by e^{i gauge}."""
    s = int(sign)

    def e(theta, phi):
        ct, st, cp, sp = D.cos(theta), D.sin(theta), D.cos(phi), D.sin(phi)
        th = (ct * cp, ct * sp, -st)
        ph = (-sp, cp, 0.0 * sp)
        v = tuple((a + 1j * s * b) / np.sqrt(2) for a, b in zip(th, ph))
        if gauge is not None:
            g = D.exp(1j * gauge(theta, phi))
            v = tuple(g * c for c in v)
        return v

    return e


def numerical_connection(frame, theta, phi):
    """(omega_theta, omega_phi) = <e, d e> by dual differentiation of frame(theta, phi)."""
    tag, (t, p) = D.seed((theta, phi))
    e = frame(t, p)
    val = [D.primal(c, tag) for c in e]
    out = []
    for j in range(2):
        de = [D.partial(c, tag, j) for c in e]
        out.append(sum(D.conj(a) * b for a, b in zip(val, de)))
    return out[0], out[1]


def numerical_curvature(frame, theta, phi):
    """Coefficient of dtheta ^ dphi in d<e, de>, using nested duals."""
    tag, (t, p) = D.seed((theta, phi))
    wt, wp = numerical_connection(frame, t, p)
    return D.partial(wp, tag, 0) - D.partial(wt, tag, 1)


def curvature_density(sign, theta, phi, source="closed"):
    """Curvature per unit area (coefficient of dA = sin(theta) dtheta dphi)."""
    if source == "closed":
        return np.full(np.broadcast(theta, phi).shape, 1j * int(sign))
    if source == "dual":
        return numerical_curvature(chart_frame(sign), theta, phi) / np.sin(theta)
    raise ValueError(f"unknown curvature source {source!r}")


def _chern_from(raw, method, mesh):
    n = float(round(raw))
    return ChernResult(n if method == "lattice" else float(raw), method, mesh.label(), abs(raw - n), float(raw))


def chern_analytic(sign, mesh, source="closed", convention=1):
    """C1 = (i / 2 pi) * integral of the curvature, by quadrature on the mesh weights."""
    if mesh.descriptor.get("rule", "area") == "area":
        mesh.check()
    f = curvature_density(sign, mesh.theta, mesh.phi, source)
    raw = convention * float(np.real(1j / (2 * np.pi) * mesh.integrate(f)))
    return _chern_from(raw, "analytic", mesh)


def helicity_bundle(sign):
    """Chartless fiber callback for gamma+-: project x, y, z and keep the largest image at each node."""
    def cb(theta, phi):
        kh = unit_vector(theta, phi)
        best = None
        for ax in np.eye(3):
            v = project_arrays(kh, np.broadcast_to(ax + 0j, kh.shape), sign)
            if best is None:
                best = v
            else:
                pick = np.linalg.norm(v, axis=-1) > np.linalg.norm(best, axis=-1)
                best = np.where(pick[..., None], v, best)
        return best
    return cb


def frame_bundle(i):
    """Fiber callback for the trivial line bundle spanned by the smooth frame vector v_i."""
    return lambda theta, phi: frame_arrays(theta, phi)[i - 1]


def link_phases(vectors, plaquettes):
    """Gauge-invariant field strength: arg of the product of normalised links around each plaquette."""
    out = np.empty(len(plaquettes))
    by_len = {}
    for n, c in enumerate(plaquettes):
        by_len.setdefault(len(c), []).append(n)
    for m, rows in sorted(by_len.items()):
        idx = np.array([plaquettes[r] for r in rows])
        e = vectors[idx]
        u = np.sum(np.conj(e) * np.roll(e, -1, axis=1), axis=-1)
        u = u / np.abs(u)
        out[rows] = np.angle(np.prod(u, axis=1))
    return out


def chern_lattice(bundle_frame, mesh, max_phase=0.5 * np.pi, convention=1):
    """Lattice Chern number from link variables around the oriented plaquettes of ``mesh``.

    ``bundle_frame(theta, phi)`` returns one nonzero fiber vector per node
    (an (N, 3) array); no continuity between nodes is assumed.  Raises
    PlaquetteOverflow when some plaquette phase exceeds ``max_phase``, where
    the branch of the logarithm stops being trustworthy.
    """
    e = np.asarray(bundle_frame(mesh.theta, mesh.phi), dtype=complex)
    if np.any(np.linalg.norm(e, axis=-1) < 1e-12):
        raise ValueError("fiber callback returned a vanishing vector")
    F = link_phases(e, mesh.plaquettes)
    worst = float(np.max(np.abs(F)))
    if worst > max_phase:
        raise PlaquetteOverflow(f"plaquette phase {worst:.3f} exceeds {max_phase:.3f}; refine the mesh")
    raw = -convention * float(np.sum(F)) / (2 * np.pi)
    return _chern_from(raw, "lattice", mesh)


BUNDLES = {"plus": lambda: helicity_bundle(1), "minus": lambda: helicity_bundle(-1),
           "frame1": lambda: frame_bundle(1), "frame2": lambda: frame_bundle(2)}


def chern(bundle, method="lattice", mesh=None, convention=1):
    """Chern number of a named bundle: plus, minus (helicity) or frame1, frame2 (trivial spans)."""
    if method == "lattice":
        mesh = mesh or SphereMesh.latlon(16, 32)
        return chern_lattice(BUNDLES[bundle](), mesh, convention=convention)
    if method == "analytic":
        mesh = mesh or SphereMesh.latlon(64, 128)
        if bundle in ("plus", "minus"):
            return chern_analytic(1 if bundle == "plus" else -1, mesh, convention=convention)
        return chern_frame_analytic(int(bundle[-1]), mesh, convention=convention)
    raise ValueError(f"unknown method {method!r}")


def fd_curvature(frame, theta, phi, h=1e-4):
    """Curvature coefficient of dtheta ^ dphi for a unit-vector callback, by nested central differences."""
    def conn(t, p):
        e = frame(t, p)
        dt = (frame(t + h, p) - frame(t - h, p)) / (2 * h)
        dp = (frame(t, p + h) - frame(t, p - h)) / (2 * h)
        return np.sum(np.conj(e) * dt, -1), np.sum(np.conj(e) * dp, -1)

    wp_plus, wp_minus = conn(theta + h, phi)[1], conn(theta - h, phi)[1]
    wt_plus, wt_minus = conn(theta, phi + h)[0], conn(theta, phi - h)[0]
    return (wp_plus - wp_minus) / (2 * h) - (wt_plus - wt_minus) / (2 * h)


def chern_frame_analytic(i, mesh, convention=1):
    """Curvature integral for the span of the smooth frame vector v_i (finite-difference curvature)."""
    mesh.check()
    f = fd_curvature(frame_bundle(i), mesh.theta, mesh.phi) / np.sin(mesh.theta)
    raw = convention * float(np.real(1j / (2 * np.pi) * mesh.integrate(f)))
    return _chern_from(raw, "analytic", mesh)


def spin_chern(method="lattice", mesh=None, convention=-1):
    """h+ C1(gamma+) + h- C1(gamma-), with h+- = +-1.

    The spin Chern number is quoted in the opposite Berry-connection sign to
    the one used for C1 above (there C1(gamma+-) = +-2), so that convention is
    the default here and yields 4; ``convention=1`` yields -4.
    """
    cp = chern("plus", method, mesh, convention).value
    cm = chern("minus", method, mesh, convention).value
    return (+1) * cp + (-1) * cm
