"""Poincare action on photon fibers.

Conventions: metric eta = diag(-1, 1, 1, 1); four-vectors are (k0, kx, ky, kz).
The 4x4 generators satisfy (J_a)_{bc} = -i eps_{abc} on the spatial block and
i K_a = e_0 e_a^T + e_a e_0^T, so exp(i theta J_a) is a passive rotation by
theta about e_a and exp(i s K_a) a passive boost of rapidity s along -e_a.
With these, A = J_2 + K_1 and B = -J_1 + K_2 stabilise (1, 0, 0, 1).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .frames import frame_arrays
from .geometry import FiberVector, PhotonBundleError, WaveVector

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
REFERENCE = np.array([1.0, 0.0, 0.0, 1.0])


class SuperluminalBoost(PhotonBundleError, ValueError):
    pass


class NonOrthochronous(PhotonBundleError, ValueError):
    pass


class NotLorentz(PhotonBundleError, ValueError):
    pass


class FrequencyMismatch(PhotonBundleError, RuntimeError):
    pass


def levi_civita():
    e = np.zeros((3, 3, 3))
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        e[a, b, c], e[a, c, b] = 1.0, -1.0
    return e


EPS = levi_civita()


def J(a):
    g = np.zeros((4, 4), dtype=complex)
    g[1:, 1:] = -1j * EPS[a]
    return g


def K(a):
    g = np.zeros((4, 4), dtype=complex)
    g[0, a + 1] = g[a + 1, 0] = -1j
    return g


def A_gen():
    return J(1) + K(0)


def B_gen():
    return -J(0) + K(1)


def exp_generator(X):
    """exp(i X) for a generator X with i X real; scaling and squaring with Pade 13."""
    M = expm(1j * np.asarray(X))
    return M.real


@dataclass(frozen=True)
class LorentzTransform:
    lam: np.ndarray
    translation: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float).reshape(4, 4)
        a = np.array(self.translation, dtype=float).reshape(4)
        lam.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "translation", a)
        err = np.max(np.abs(lam.T @ ETA @ lam - ETA))
        if err > 1e-12 * max(1.0, np.max(np.abs(lam)) ** 2):
            raise NotLorentz(f"Lambda^T eta Lambda differs from eta by {err:.3e}")
        if lam[0, 0] < 1 - 1e-12:
            raise NonOrthochronous("Lambda^0_0 < 1 reverses the direction of time")

    @property
    def proper(self):
        return bool(np.linalg.det(self.lam) > 0)

    def __matmul__(self, other):
        return LorentzTransform(self.lam @ other.lam, self.lam @ other.translation + self.translation)

    def inverse(self):
        li = ETA @ self.lam.T @ ETA
        return LorentzTransform(li, -li @ self.translation)

    def apply(self, k4):
        return self.lam @ np.asarray(k4, dtype=float)


@dataclass(frozen=True)
class BoostParameter:
    v: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float).reshape(3)
        if np.linalg.norm(v) >= 1 - 1e-9:
            raise SuperluminalBoost(f"|v| = {np.linalg.norm(v)} is not below 1")
        object.__setattr__(self, "v", v)

    @property
    def gamma(self):
        return 1.0 / np.sqrt(1.0 - self.v @ self.v)


def boost_matrix(v):
    """Lambda_v: the frame moving with velocity v (passive boost)."""
    v = np.asarray(v, dtype=float)
    v2 = v @ v
    if v2 >= (1 - 1e-9) ** 2:
        raise SuperluminalBoost(f"|v| = {np.sqrt(v2)} is not below 1")
    g = 1.0 / np.sqrt(1.0 - v2)
    L = np.eye(4)
    L[0, 0] = g
    L[0, 1:] = L[1:, 0] = -g * v
    L[1:, 1:] += (g - 1) * np.outer(v, v) / v2 if v2 > 0 else 0.0
    return L


def rotation_matrix(axis, angle):
    """Active right-handed rotation by ``angle`` about ``axis`` (3x3)."""
    n = np.asarray(axis, dtype=float)
    if not np.linalg.norm(n) > 0:
        raise ValueError("rotation axis must be nonzero")
    n = n / np.linalg.norm(n)
    c, s = np.cos(angle), np.sin(angle)
    x = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return c * np.eye(3) + s * x + (1 - c) * np.outer(n, n)


def embed(R):
    L = np.eye(4)
    L[1:, 1:] = R
    return L


def boost(v):
    return LorentzTransform(boost_matrix(v))


def rotation(axis, angle):
    return LorentzTransform(embed(rotation_matrix(axis, angle)))


def parity():
    return LorentzTransform(np.diag([1.0, -1.0, -1.0, -1.0]))


def translation(a):
    return LorentzTransform(np.eye(4), a)


def null_vector(k):
    kv = k.vec
    return np.concatenate([[np.linalg.norm(kv)], kv])


def boost_fiber(b, x):
    """Closed-form boost action on (k, E), including the |k| / |k'| prefactor."""
    if not isinstance(b, BoostParameter):
        b = BoostParameter(b)
    v, g = b.v, b.gamma
    k, E = x.base, x.e
    kp = (boost_matrix(v) @ null_vector(k))[1:]
    kh = k.hat
    Ep = g * (E + np.cross(v, np.cross(kh, E))) - g * g / (g + 1) * np.dot(E, v) * v
    return FiberVector(WaveVector.from_array(kp), k.norm / np.linalg.norm(kp) * Ep)


def field_tensor(E, B):
    """Antisymmetric F with F^{0i} = E_i and F^{ij} = eps_{ijk} B_k."""
    F = np.zeros(np.shape(E)[:-1] + (4, 4), dtype=complex)
    F[..., 0, 1:] = E
    F[..., 1:, 0] = -np.asarray(E)
    F[..., 1:, 1:] = np.einsum("ijk,...k->...ij", EPS, B)
    return F


def tensor_action(L, x):
    """Generic action: transform F = F(E, k_hat x E) as a rank-2 tensor and read E' at k' = Lambda k."""
    if not isinstance(L, LorentzTransform):
        L = LorentzTransform(L)
    k = x.base
    k4 = L.lam @ null_vector(k)
    kp = k4[1:]
    kpn = np.linalg.norm(kp)
    if abs(k4[0] - kpn) > 1e-10 * max(1.0, kpn):
        raise FrequencyMismatch(f"transformed frequency {k4[0]} differs from |k'| = {kpn}")
    F = field_tensor(x.e, np.cross(k.hat, x.e))
    Fp = L.lam @ F @ L.lam.T
    Ep = k.norm / kpn * Fp[0, 1:]
    a = L.translation
    phase = np.exp(1j * (kp @ a[1:] - kpn * a[0])) if np.any(a) else 1.0
    return FiberVector(WaveVector.from_array(kp), phase * Ep)


def translate_fiber(a, x):
    """Space-time translation: multiply by e^{i(k.a - |k| a0)}."""
    a = np.asarray(a, dtype=float)
    k = x.base
    return FiberVector(k, np.exp(1j * (k.vec @ a[1:] - k.norm * a[0])) * x.e)


def minimal_rotation(khat):
    """Rotation taking z_hat to khat about the axis z_hat x khat; x_hat axis when khat = -z_hat."""
    khat = np.asarray(khat, dtype=float)
    khat = khat / np.linalg.norm(khat)
    axis = np.cross([0.0, 0.0, 1.0], khat)
    s = np.linalg.norm(axis)
    c = khat[2]
    if s < 1e-15:
        return np.eye(3) if c > 0 else rotation_matrix([1.0, 0.0, 0.0], np.pi)
    return rotation_matrix(axis / s, np.arctan2(s, c))


def little_group_element(kbar, theta, alpha, beta):
    """R exp(i alpha A + i beta B + i theta J_3) R^{-1}, stabilising (|kbar|, kbar)."""
    W = exp_generator(alpha * A_gen() + beta * B_gen() + theta * J(2))
    R = embed(minimal_rotation(kbar.hat))
    return LorentzTransform(R @ W @ R.T)


def weinberg_L(k):
    """L(k) = R_z(phi) R_y(theta) B_z(|k|) (active), mapping (1, 0, 0, 1) to (|k|, k)."""
    p = k.spherical()
    eta = np.log(k.norm)
    Bz = np.eye(4)
    Bz[0, 0] = Bz[3, 3] = np.cosh(eta)
    Bz[0, 3] = Bz[3, 0] = np.sinh(eta)
    R = rotation_matrix([0, 0, 1], p.phi) @ rotation_matrix([0, 1, 0], p.theta)
    return LorentzTransform(embed(R) @ Bz)


def frame_transition(theta, phi):
    """Unitary 3x3 map [v1, v2, k_hat] from the smooth global frame, for the continuity contrast."""
    v1, v2 = frame_arrays(theta, phi)
    kh = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    return np.stack([v1, v2, kh + 0j], axis=-1)


def wigner_discontinuity_report(epsilon, n_phi=8):
    """Spread over phi of Weinberg's L(k) and of the smooth frame at polar angle epsilon from each pole."""
    if not 0 < epsilon < 0.1:
        raise ValueError("epsilon must lie in (0, 0.1)")
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    w_spread = f_spread = 0.0
    for theta in (epsilon, np.pi - epsilon):
        Ls = [weinberg_L(WaveVector.from_array([np.sin(theta) * np.cos(p), np.sin(theta) * np.sin(p), np.cos(theta)])).lam
              for p in phis]
        Ts = [frame_transition(theta, p) for p in phis]
        for i in range(n_phi):
            for j in range(i + 1, n_phi):
                w_spread = max(w_spread, np.linalg.norm(Ls[i] - Ls[j]))
                f_spread = max(f_spread, np.linalg.norm(Ts[i] - Ts[j]))
    return {"epsilon": float(epsilon), "n_phi": int(n_phi), "phi": phis.tolist(),
            "weinberg_spread": float(w_spread), "frame_spread": float(f_spread)}


def random_proper_transform(rng, vmax=0.99):
    """Rotation x boost x rotation with Haar-random axes and |v| <= vmax."""
    def rot():
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        w, x, y, z = q
        return embed(np.array([[1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
                               [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
                               [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)]]))

    d = rng.normal(size=3)
    v = d / np.linalg.norm(d) * vmax * rng.uniform() ** (1 / 3)
    return LorentzTransform(rot() @ boost_matrix(v) @ rot())
