"""Wave vectors, transverse fibers, spherical charts and sphere meshes.

Sections throughout the package are plain callables ``s(k) -> (ex, ey, ez)``
where ``k`` is a triple of components.  Components may be floats, numpy
arrays of a common shape (one entry per sample point) or ``Dual`` numbers,
so the same section serves mesh sweeps and exact differentiation.
"""

import json
from dataclasses import dataclass, field

import numpy as np

FOUR_PI = 4.0 * np.pi
POLE_TOL = 1e-12


class PhotonBundleError(Exception):
    pass


class DegenerateWaveVector(PhotonBundleError, ValueError):
    pass


class TransversalityError(PhotonBundleError, ValueError):
    pass


class PoleSingularity(PhotonBundleError, ValueError):
    pass


class BaseMismatch(PhotonBundleError, ValueError):
    pass


class MeshTooCoarse(PhotonBundleError, ValueError):
    pass


@dataclass(frozen=True)
class WaveVector:
    kx: float
    ky: float
    kz: float
    scale: float = field(default=1.0, compare=False, repr=False)

    def __post_init__(self):
        for name in ("kx", "ky", "kz"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not np.all(np.isfinite(self.vec)):
            raise DegenerateWaveVector("non-finite wave vector")
        if self.norm < 1e-12 * self.scale:
            raise DegenerateWaveVector("wave vector at the excluded origin")

    @classmethod
    def from_array(cls, k, scale=1.0):
        k = np.asarray(k, dtype=float)
        return cls(k[0], k[1], k[2], scale)

    @property
    def vec(self):
        return np.array([self.kx, self.ky, self.kz])

    @property
    def norm(self):
        return float(np.linalg.norm(self.vec))

    @property
    def hat(self):
        return self.vec / self.norm

    def spherical(self):
        return SphericalPoint.from_vector(self.vec)


@dataclass(frozen=True)
class FiberVector:
    base: WaveVector
    e: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=complex).reshape(3)
        e.setflags(write=False)
        object.__setattr__(self, "e", e)
        leak = abs(np.dot(self.base.hat, e))
        if leak > max(1e-12 * np.linalg.norm(e), 1e-15):
            raise TransversalityError(f"|k.e| = {leak:.3e} exceeds tolerance")

    @property
    def norm(self):
        return float(np.linalg.norm(self.e))

    @property
    def b(self):
        """Magnetic amplitude k-hat x E."""
        return np.cross(self.base.hat, self.e)

    def __mul__(self, c):
        return FiberVector(self.base, c * self.e)

    __rmul__ = __mul__

    def __add__(self, other):
        _same_base(self, other)
        return FiberVector(self.base, self.e + other.e)

    def __sub__(self, other):
        _same_base(self, other)
        return FiberVector(self.base, self.e - other.e)


@dataclass(frozen=True)
class SphericalPoint:
    theta: float
    phi: float

    def __post_init__(self):
        t, p = float(self.theta), float(self.phi)
        if not (-POLE_TOL <= t <= np.pi + POLE_TOL):
            raise ValueError(f"theta={t} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(t, 0.0), np.pi))
        object.__setattr__(self, "phi", p % (2 * np.pi))

    @classmethod
    def from_vector(cls, k):
        k = np.asarray(k, dtype=float)
        r = np.linalg.norm(k)
        return cls(np.arccos(np.clip(k[2] / r, -1.0, 1.0)), np.arctan2(k[1], k[0]))

    def to_vector(self, r=1.0):
        return r * unit_vector(self.theta, self.phi)

    @property
    def at_pole(self):
        return self.theta < POLE_TOL or self.theta > np.pi - POLE_TOL


def unit_vector(theta, phi):
    st = np.sin(theta)
    return np.stack(np.broadcast_arrays(st * np.cos(phi), st * np.sin(phi), np.cos(theta)), axis=-1)


def basis_arrays(theta, phi):
    """Vectorised (theta_hat, phi_hat, k_hat), each with a trailing axis of length 3."""
    ct, st, cp, sp = np.cos(theta), np.sin(theta), np.cos(phi), np.sin(phi)
    th = np.stack(np.broadcast_arrays(ct * cp, ct * sp, -st), axis=-1)
    ph = np.stack(np.broadcast_arrays(-sp, cp, 0.0 * sp), axis=-1)
    kh = np.stack(np.broadcast_arrays(st * cp, st * sp, ct), axis=-1)
    return th, ph, kh


def spherical_basis(p):
    """Orthonormal right-handed triple (theta_hat, phi_hat, k_hat) at p."""
    if p.at_pole:
        raise PoleSingularity(f"spherical chart is singular at theta={p.theta}")
    return basis_arrays(p.theta, p.phi)


def _same_base(a, b):
    if not np.allclose(a.base.hat, b.base.hat, rtol=0, atol=1e-12) or not np.isclose(a.base.norm, b.base.norm, rtol=1e-12):
        raise BaseMismatch("fiber vectors live over different wave vectors")


def hdot(a, b):
    """Hermitian product a* . b over the trailing axis."""
    return np.sum(np.conj(a) * b, axis=-1)


def omega(a, b):
    """Symplectic form alpha1.beta2 - beta1.alpha2 over the trailing axis."""
    return np.sum(a.real * b.imag - a.imag * b.real, axis=-1)


def hermitian_product(a, b):
    _same_base(a, b)
    return complex(hdot(a.e, b.e))


def symplectic_form(a, b):
    _same_base(a, b)
    return float(omega(a.e, b.e))


def cross_matrix(k):
    kx, ky, kz = k
    return np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])


def maxwell_matrix(k):
    """The 6x6 Maxwell operator acting on (E, B) at wave vector k."""
    c = cross_matrix(k.vec)
    z = np.zeros((3, 3))
    return np.block([[z, -c], [c, z]]).astype(complex)


def maxwell_spectrum(k):
    return np.linalg.eigvalsh(maxwell_matrix(k))


def transverse_projector(k, v):
    v = np.asarray(v, dtype=complex)
    kh = k.hat
    return FiberVector(k, v - kh * np.dot(kh, v))


def project_transverse(khat, v):
    """Array version: remove the component along khat (trailing axis)."""
    return v - khat * np.sum(khat * v, axis=-1)[..., None]


class SphereMesh:
    """A quadrature mesh of the unit sphere with oriented plaquettes.

    ``theta``, ``phi`` and ``weights`` are flat node arrays; ``plaquettes``
    is a list of integer index arrays, each listing the corners of one cell
    counter-clockwise as seen from outside the sphere.
    """

    def __init__(self, theta, phi, weights, plaquettes, descriptor):
        self.theta = np.asarray(theta, dtype=float)
        self.phi = np.asarray(phi, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.plaquettes = [np.asarray(c, dtype=np.intp) for c in plaquettes]
        self.descriptor = descriptor
        self.shape = descriptor.get("shape", (self.theta.size,))

    @classmethod
    def latlon(cls, n_theta, n_phi, rule="area"):
        """Latitude-longitude grid with nodes at cell centres (no node on a pole).

        ``rule='area'`` weights each node by the exact area of its cell, so
        the weights sum to 4 pi to rounding and the integral of any constant
        multiple of sin(theta) dtheta dphi is exact.  ``rule='midpoint'`` uses
        sin(theta_mid) dtheta dphi, the plain second-order product rule.
        """
        if n_theta < 2 or n_phi < 3:
            raise MeshTooCoarse(f"latlon mesh {n_theta}x{n_phi} is too coarse")
        edges = np.linspace(0.0, np.pi, n_theta + 1)
        th = 0.5 * (edges[1:] + edges[:-1])
        dphi = 2 * np.pi / n_phi
        ph = (np.arange(n_phi) + 0.5) * dphi
        if rule == "area":
            w = (np.cos(edges[:-1]) - np.cos(edges[1:])) * dphi
        elif rule == "midpoint":
            w = np.sin(th) * (np.pi / n_theta) * dphi
        else:
            raise ValueError(f"unknown quadrature rule {rule!r}")
        T, P = np.meshgrid(th, ph, indexing="ij")
        W = np.broadcast_to(w[:, None], T.shape)
        idx = np.arange(n_theta * n_phi).reshape(n_theta, n_phi)
        nxt = np.roll(idx, -1, axis=1)
        quads = np.stack([idx[:-1], idx[1:], nxt[1:], nxt[:-1]], axis=-1).reshape(-1, 4)
        plaq = list(quads) + [idx[0], idx[-1][::-1]]
        desc = {"type": "latlon", "n_theta": int(n_theta), "n_phi": int(n_phi), "shape": (n_theta, n_phi)}
        if rule != "area":
            desc["rule"] = rule
        return cls(T.ravel(), P.ravel(), W.ravel(), plaq, desc)

    @classmethod
    def icosahedral(cls, level):
        """Geodesic grid from a subdivided icosahedron; vertex weights are a third of adjacent triangle areas."""
        g = (1 + np.sqrt(5)) / 2
        v = np.array([[-1, g, 0], [1, g, 0], [-1, -g, 0], [1, -g, 0], [0, -1, g], [0, 1, g],
                      [0, -1, -g], [0, 1, -g], [g, 0, -1], [g, 0, 1], [-g, 0, -1], [-g, 0, 1]], float)
        f = np.array([[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11], [1, 5, 9], [5, 11, 4],
                      [11, 10, 2], [10, 7, 6], [7, 1, 8], [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8],
                      [3, 8, 9], [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]])
        verts = list(v / np.linalg.norm(v, axis=1)[:, None])
        for _ in range(level):
            cache, nf = {}, []
            for a, b, c in f:
                m = []
                for i, j in ((a, b), (b, c), (c, a)):
                    key = (min(i, j), max(i, j))
                    if key not in cache:
                        p = verts[i] + verts[j]
                        verts.append(p / np.linalg.norm(p))
                        cache[key] = len(verts) - 1
                    m.append(cache[key])
                ab, bc, ca = m
                nf += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
            f = np.array(nf)
        x = np.array(verts)
        area = triangle_solid_angle(x[f[:, 0]], x[f[:, 1]], x[f[:, 2]])
        w = np.zeros(len(x))
        for j in range(3):
            np.add.at(w, f[:, j], area / 3)
        theta = np.arccos(np.clip(x[:, 2], -1, 1))
        phi = np.arctan2(x[:, 1], x[:, 0]) % (2 * np.pi)
        return cls(theta, phi, w, list(f), {"type": "icosahedral", "level": int(level)})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else dict(text)
        kind = d.get("type")
        if kind == "latlon":
            return cls.latlon(int(d["n_theta"]), int(d["n_phi"]), d.get("rule", "area"))
        if kind == "icosahedral":
            return cls.icosahedral(int(d["level"]))
        if kind == "explicit":
            return cls(d["theta"], d["phi"], d["weights"], d["plaquettes"], {"type": "explicit"})
        raise ValueError(f"unknown mesh type {kind!r}")

    def to_json(self):
        kind = self.descriptor["type"]
        if kind == "latlon":
            d = {k: self.descriptor[k] for k in ("type", "n_theta", "n_phi")}
            if "rule" in self.descriptor:
                d["rule"] = self.descriptor["rule"]
        elif kind == "icosahedral":
            d = {"type": kind, "level": self.descriptor["level"]}
        else:
            d = {"type": "explicit", "theta": self.theta.tolist(), "phi": self.phi.tolist(),
                 "weights": self.weights.tolist(), "plaquettes": [c.tolist() for c in self.plaquettes]}
        return json.dumps(d)

    def label(self):
        if self.descriptor["type"] == "latlon":
            return f"{self.descriptor['n_theta']}x{self.descriptor['n_phi']}"
        if self.descriptor["type"] == "icosahedral":
            return f"ico{self.descriptor['level']}"
        return f"explicit{self.size}"

    @property
    def size(self):
        return self.theta.size

    @property
    def nodes(self):
        return [SphericalPoint(t, p) for t, p in zip(self.theta, self.phi)]

    def points(self):
        return unit_vector(self.theta, self.phi)

    def check(self, tol=1e-8):
        err = abs(float(np.sum(self.weights)) - FOUR_PI)
        if err > tol:
            raise MeshTooCoarse(f"weights sum differs from 4 pi by {err:.3e}")
        return self

    def integrate(self, values):
        """Quadrature sum over nodes in fixed node order."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def plaquette_areas(self):
        """Signed solid angle of every plaquette (positive for outward orientation)."""
        x = self.points()
        out = np.empty(len(self.plaquettes))
        for n, c in enumerate(self.plaquettes):
            p = x[c]
            out[n] = np.sum(triangle_solid_angle(p[0], p[1:-1], p[2:]))
        return out


def triangle_solid_angle(a, b, c):
    """Signed solid angle of geodesic triangles (a, b, c) of unit vectors."""
    num = np.sum(a * np.cross(b, c), axis=-1)
    den = 1 + np.sum(a * b, axis=-1) + np.sum(b * c, axis=-1) + np.sum(c * a, axis=-1)
    return 2 * np.arctan2(num, den)


def sample(section, points):
    """Evaluate a section at an (N, 3) array of wave vectors; returns complex (N, 3)."""
    points = np.asarray(points, dtype=float)
    comps = section(tuple(points[..., i] for i in range(3)))
    return np.stack([np.broadcast_to(np.asarray(c, dtype=complex), points.shape[:-1]) for c in comps], axis=-1)


def sectional_inner_product(s1, s2, mesh, radial_samples, r0=0.5, r1=1.5):
    """Quadrature of the integral of <s1, s2> d^3k / |k| over the shell r0 <= |k| <= r1.

    The invariant measure is r dr dOmega; the radial direction uses the
    midpoint rule with ``radial_samples`` points.
    """
    mesh.check()
    if radial_samples < 1 or not 0 < r0 < r1:
        raise ValueError("need radial_samples >= 1 and 0 < r0 < r1")
    dr = (r1 - r0) / radial_samples
    x = mesh.points()
    total = 0j
    for r in r0 + (np.arange(radial_samples) + 0.5) * dr:
        f = hdot(sample(s1, r * x), sample(s2, r * x))
        total += r * dr * complex(mesh.integrate(f))
    return total
