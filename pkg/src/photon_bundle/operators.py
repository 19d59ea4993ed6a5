"""Differential operators on sections and checks of their commutation relations.

An operator maps a section to a new section, so commutators compose
naturally: ``commutator(A, B)(s) = A(B(s)) - B(A(s))``.  Derivatives in k
(and in the boost parameter for K) come from nested dual numbers, which
makes the second derivatives needed by commutators exact.

Generators follow the passive convention of :mod:`photon_bundle.lorentz`:
S_a s = i e_a x s, L = -i k x grad, J = S + L, H = |k|, P = k, and K_a is
-i d/ds of the sectional boost action along exp(i s K_a).
"""

import numpy as np

from . import dual as D
from .geometry import PhotonBundleError
from .lorentz import EPS

AXES = {"x": 0, "y": 1, "z": 2}


class NonDifferentiableSection(PhotonBundleError, TypeError):
    pass


def _axis(a):
    return AXES[a] if isinstance(a, str) else int(a)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def knorm(k):
    return D.sqrt(dot(k, k))


def khat(k):
    r = knorm(k)
    return tuple(c / r for c in k)


def unit(a):
    e = [0.0, 0.0, 0.0]
    e[a] = 1.0
    return tuple(e)


def jet(s, k):
    """Value and Jacobian of s at k: returns (v, g) with g[c][i] = d s_i / d k_c."""
    tag, kd = D.seed(tuple(k))
    try:
        out = s(kd)
    except TypeError as exc:
        raise NonDifferentiableSection(f"section cannot be evaluated on dual numbers: {exc}") from exc
    v = tuple(D.primal(c, tag) for c in out)
    g = tuple(tuple(D.partial(c, tag, j) for c in out) for j in range(3))
    return v, g


def _ang(k, g):
    """(k x grad)_a applied componentwise, for a = 0, 1, 2."""
    return tuple(
        tuple(sum(EPS[a, b, c] * k[b] * g[c][i] for b in range(3) for c in range(3) if EPS[a, b, c]) for i in range(3))
        for a in range(3))


def S(a):
    e = unit(_axis(a))
    return lambda s: lambda k: vscale(1j, cross(e, s(k)))


def L(a):
    a = _axis(a)

    def op(s):
        def out(k):
            _, g = jet(s, k)
            return vscale(-1j, _ang(k, g)[a])
        return out
    return op


def J(a):
    a = _axis(a)
    e = unit(a)

    def op(s):
        def out(k):
            v, g = jet(s, k)
            return vadd(vscale(1j, cross(e, v)), vscale(-1j, _ang(k, g)[a]))
        return out
    return op


def J_all(s, k):
    v, g = jet(s, k)
    ang = _ang(k, g)
    return tuple(vadd(vscale(1j, cross(unit(a), v)), vscale(-1j, ang[a])) for a in range(3))


def chi(s):
    """Helicity k_hat . J."""
    def out(k):
        js = J_all(s, k)
        kh = khat(k)
        return tuple(sum(kh[a] * js[a][i] for a in range(3)) for i in range(3))
    return out


def Js(a):
    a = _axis(a)
    return lambda s: lambda k: vscale(khat(k)[a], chi(s)(k))


def Jo(a):
    a = _axis(a)

    def op(s):
        def out(k):
            return vsub(J(a)(s)(k), vscale(khat(k)[a], chi(s)(k)))
        return out
    return op


def H(s):
    return lambda k: vscale(knorm(k), s(k))


def P(a):
    a = _axis(a)
    return lambda s: lambda k: vscale(k[a], s(k))


def boosted_section(s, v):
    """[Sigma^s_{Lambda_v} s](k) = Sigma_{Lambda_v}[s(Lambda_v^{-1} k)] for a (possibly dual) velocity v."""
    def out(k):
        v2 = dot(v, v)
        g = 1.0 / D.sqrt(1.0 - v2)
        c = g * g / (g + 1.0)
        r = knorm(k)
        ks = vadd(vadd(k, vscale(g * r, v)), vscale(c * dot(v, k), v))
        E = s(ks)
        rs = knorm(ks)
        ksh = tuple(x / rs for x in ks)
        Ep = vsub(vscale(g, vadd(E, cross(v, cross(ksh, E)))), vscale(c * dot(E, v), v))
        return vscale(rs / r, Ep)
    return out


def K(a):
    a = _axis(a)

    def op(s):
        def out(k):
            tag, (sig,) = D.seed((0.0,))
            v = vscale(-sig, unit(a))
            w = boosted_section(s, v)(k)
            return tuple(-1j * D.partial(c, tag, 0) for c in w)
        return out
    return op


def K_all(s, k):
    return tuple(K(a)(s)(k) for a in range(3))


def projected(op):
    """op followed by removal of the component along k_hat."""
    def wrapped(s):
        def out(k):
            v = op(s)(k)
            kh = khat(k)
            return vsub(v, vscale(dot(kh, v), kh))
        return out
    return wrapped


def zero_op(s):
    return lambda k: vscale(0.0, s(k))


def add_ops(*terms):
    """Linear combination of operators from (coefficient, operator) pairs."""
    def op(s):
        def out(k):
            acc = None
            for c, T in terms:
                w = vscale(c, T(s)(k))
                acc = w if acc is None else vadd(acc, w)
            return acc
        return out
    return op


def commutator(A, B):
    def op(s):
        def out(k):
            return vsub(A(B(s))(k), B(A(s))(k))
        return out
    return op


def JK_residual(s):
    """(J_perp + k_hat x K) s, which vanishes on transverse sections."""
    def out(k):
        js = J_all(s, k)
        ks = K_all(s, k)
        kh = khat(k)
        chi_s = tuple(sum(kh[a] * js[a][i] for a in range(3)) for i in range(3))
        res = []
        for a in range(3):
            jperp = vsub(js[a], vscale(kh[a], chi_s))
            kx = tuple(sum(EPS[a, b, c] * kh[b] * ks[c][i] for b in range(3) for c in range(3) if EPS[a, b, c])
                       for i in range(3))
            res.append(vadd(jperp, kx))
        return res
    return out


def _stack(v, n):
    return np.stack([np.broadcast_to(np.asarray(D.value(c), dtype=complex), (n,)) for c in v], -1)


def commutator_check(A, B, expected, sections, points):
    """max over sections and points of |[A, B]s - expected(s)| / (1 + |s|)."""
    pts = np.asarray(points, dtype=float)
    k = tuple(pts[:, i] for i in range(3))
    n = len(pts)
    worst = 0.0
    C = commutator(A, B)
    for s in sections:
        base = np.linalg.norm(_stack(s(k), n), axis=-1)
        r = _stack(vsub(C(s)(k), expected(s)(k)), n)
        worst = max(worst, float(np.max(np.linalg.norm(r, axis=-1) / (1 + base))))
    return worst


def operator_residual(T, sections, points):
    """max over samples of |T s| / (1 + |s|) for an operator expected to vanish."""
    pts = np.asarray(points, dtype=float)
    k = tuple(pts[:, i] for i in range(3))
    n = len(pts)
    worst = 0.0
    for s in sections:
        base = np.linalg.norm(_stack(s(k), n), axis=-1)
        out = T(s)(k)
        vecs = out if isinstance(out, list) else [out]
        for v in vecs:
            worst = max(worst, float(np.max(np.linalg.norm(_stack(v, n), axis=-1) / (1 + base))))
    return worst


def chart_circular(sign):
    """Chart section e+- = (theta_hat +- i phi_hat)/sqrt(2) in Cartesian form (singular on the z axis)."""
    def out(k):
        kx, ky, kz = k
        rho = D.sqrt(kx * kx + ky * ky)
        r = knorm(k)
        th = (kx * kz / (rho * r), ky * kz / (rho * r), -rho / r)
        ph = (-ky / rho, kx / rho, 0.0 * kx)
        return tuple((a + 1j * sign * b) / np.sqrt(2) for a, b in zip(th, ph))
    return out


def analytic_section(coeffs):
    """sum over signs of p_sign(k) exp(-|k|^2 / 2) e_sign(k), with p a complex quadratic polynomial.

    ``coeffs`` is a (2, 10) complex array: monomials 1, kx, ky, kz, kx^2,
    ky^2, kz^2, kx ky, ky kz, kz kx for the + and - parts.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    ep, em = chart_circular(1), chart_circular(-1)

    def poly(c, k):
        kx, ky, kz = k
        mons = (1.0, kx, ky, kz, kx * kx, ky * ky, kz * kz, kx * ky, ky * kz, kz * kx)
        acc = c[0] * (1.0 + 0.0 * kx)
        for ci, m in zip(c[1:], mons[1:]):
            acc = acc + ci * m
        return acc

    def out(k):
        env = D.exp(-0.5 * dot(k, k))
        a = poly(coeffs[0], k) * env
        b = poly(coeffs[1], k) * env
        return vadd(vscale(a, ep(k)), vscale(b, em(k)))
    return out


def sample_sections(rng, n=5):
    return [analytic_section(rng.normal(size=(2, 10)) + 1j * rng.normal(size=(2, 10))) for _ in range(n)]


def sample_points(rng, n=50, band=0.3, rmin=0.5, rmax=2.0):
    """Points with polar angle in [band, pi - band], uniform azimuth and radius in [rmin, rmax]."""
    t = rng.uniform(band, np.pi - band, n)
    p = rng.uniform(0, 2 * np.pi, n)
    r = rng.uniform(rmin, rmax, n)
    return np.stack([r * np.sin(t) * np.cos(p), r * np.sin(t) * np.sin(p), r * np.cos(t)], -1)


def relation_table():
    """Named list of (A, B, expected) triples covering the Poincare and J_s / J_o relations."""
    rows = []
    ijk = lambda a, b: [(c, EPS[a, b, c]) for c in range(3) if EPS[a, b, c]]
    for a in range(3):
        for b in range(3):
            if a >= b:
                continue
            terms = ijk(a, b)
            rows.append((f"[J{a},J{b}]=i eps J", J(a), J(b), add_ops(*[(1j * e, J(c)) for c, e in terms])))
            rows.append((f"[K{a},K{b}]=-i eps J", K(a), K(b), add_ops(*[(-1j * e, J(c)) for c, e in terms])))
            rows.append((f"[P{a},P{b}]=0", P(a), P(b), zero_op))
            rows.append((f"[Js{a},Js{b}]=0", Js(a), Js(b), zero_op))
            rows.append((f"[Jo{a},Jo{b}]=i eps (Jo - Js)", Jo(a), Jo(b),
                         add_ops(*[(1j * e, Jo(c)) for c, e in terms], *[(-1j * e, Js(c)) for c, e in terms])))
    for a in range(3):
        for b in range(3):
            terms = ijk(a, b)
            rows.append((f"[J{a},K{b}]=i eps K", J(a), K(b), add_ops(*[(1j * e, K(c)) for c, e in terms]) if terms else zero_op))
            rows.append((f"[J{a},P{b}]=i eps P", J(a), P(b), add_ops(*[(1j * e, P(c)) for c, e in terms]) if terms else zero_op))
            rows.append((f"[K{a},P{b}]=i H delta", K(a), P(b), add_ops((1j, H)) if a == b else zero_op))
            rows.append((f"[Jo{a},Js{b}]=i eps Js", Jo(a), Js(b), add_ops(*[(1j * e, Js(c)) for c, e in terms]) if terms else zero_op))
        rows.append((f"[K{a},H]=i P", K(a), H, add_ops((1j, P(a)))))
        rows.append((f"[J{a},H]=0", J(a), H, zero_op))
        rows.append((f"[P{a},H]=0", P(a), H, zero_op))
        for name, X in (("J", J(a)), ("K", K(a)), ("P", P(a))):
            rows.append((f"[chi,{name}{a}]=0", chi, X, zero_op))
    rows.append(("[H,H]=0", H, H, zero_op))
    rows.append(("[chi,H]=0", chi, H, zero_op))
    return rows


def group_of(name):
    if name.startswith("[chi"):
        return "helicity"
    if "Js" in name or "Jo" in name:
        return "spin-orbit split"
    return "poincare"


def run_commutators(sections, points, jacobi=False):
    """Residual table: relation name -> max residual, including the JK relation and a Jacobi sample."""
    out = {}
    for name, A, B, exp_ in relation_table():
        out[name] = commutator_check(A, B, exp_, sections, points)
    out["J_perp + k_hat x K = 0"] = operator_residual(JK_residual, sections, points)
    if jacobi:
        out["Jacobi(Jo0,Jo1,Js2)"] = operator_residual(jacobi_op(Jo(0), Jo(1), Js(2)), sections, points)
    return out


def jacobi_op(A, B, C):
    return add_ops((1.0, commutator(A, commutator(B, C))), (1.0, commutator(B, commutator(C, A))),
                   (1.0, commutator(C, commutator(A, B))))
