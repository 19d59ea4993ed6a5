"""Verification suites shared by the command line and the test harness.

Each suite takes a numpy Generator and a tolerance table and returns a
``SuiteResult``: a payload of computed quantities plus a fixed, ordered list
of ``Check`` records.  A check passes iff its residual is within tolerance.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import berry, frames, helicity, lorentz, operators
from .geometry import FiberVector, SphereMesh, SphericalPoint, WaveVector, maxwell_spectrum

TOLERANCES = {
    "spectrum": 1e-10,
    "gram": 0.1,
    "equator": 1e-6,
    "frame_norm": 0.9,
    "real_part": 0.1,
    "chern_analytic": 1e-6,
    "chern_lattice": 0.0,
    "spin_chern": 0.0,
    "norm": 1e-11,
    "leakage": 1e-10,
    "oracle": 1e-12,
    "null_translation": 1e-10,
    "helicity_phase": 1e-10,
    "commutator": 1e-7,
    "weinberg": 0.5,
    "frame_spread": 1e-3,
    "frame_slope": 0.25,
}

CHERN_TARGETS = {"plus": -2.0, "minus": 2.0, "frame1": 0.0, "frame2": 0.0}
ZERO_MESHES = ((128, 256), (256, 512), (512, 1024))
WIGNER_EPSILONS = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class Check:
    name: str
    target: object
    value: float
    residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def as_dict(self):
        return {"name": self.name, "target": self.target, "value": self.value,
                "residual": self.residual, "tolerance": self.tolerance, "pass": self.passed}


def at_most(name, value, tol):
    value = float(value)
    return Check(name, 0.0, value, abs(value), float(tol))


def near(name, value, target, tol):
    value = float(value)
    return Check(name, float(target), value, abs(value - target), float(tol))


def above(name, value, bound):
    """Lower-bound check: residual is the shortfall below the bound, tolerance zero."""
    value = float(value)
    return Check(name, f"> {bound}", value, max(0.0, float(bound) - value), 0.0)


@dataclass
class SuiteResult:
    suite: str
    payload: dict
    checks: list
    wall_time: float = 0.0
    error: str = None
    meta: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.error is None and all(c.passed for c in self.checks)


def _tol(tols, name):
    return float((tols or {}).get(name, TOLERANCES[name]))


def spectrum_suite(rng, tols=None, k=None, n=100):
    """Eigenvalues of the 6x6 Maxwell matrix against {+-|k| (x2), 0 (x2)}."""
    ks = np.atleast_2d(k) if k is not None else rng.normal(size=(n, 3)) * 10.0 ** rng.uniform(-2, 2, size=(n, 1))
    worst, last = 0.0, None
    for kv in ks:
        w = WaveVector.from_array(kv)
        ev = np.sort(maxwell_spectrum(w))
        r = w.norm
        worst = max(worst, float(np.max(np.abs(ev - np.array([-r, -r, 0, 0, r, r]))) / r))
        last = ev
    payload = {"samples": int(len(ks)), "max_relative_error": worst}
    if k is not None:
        payload["k"] = [float(c) for c in ks[0]]
        payload["eigenvalues"] = [float(x) for x in last]
    return SuiteResult("spectrum", payload, [at_most("spectrum", worst, _tol(tols, "spectrum"))])


def frame_suite(rng, tols=None, mesh=(512, 1024)):
    """Gram determinant of the global frame over a mesh and the equatorial derivative mismatch."""
    m = SphereMesh.latlon(*mesh)
    det = frames.global_frame().gram_det(m.theta, m.phi)
    eq = frames.equator_mismatch(step=1e-4)
    mismatch = max(eq["chart"], eq["cartesian"])
    payload = {"mesh": m.label(), "min_gram_det": float(np.min(np.abs(det))), "equator": eq}
    return SuiteResult("frame", payload, [
        above("gram", payload["min_gram_det"], _tol(tols, "gram")),
        at_most("equator", mismatch, _tol(tols, "equator")),
        at_most("equator_jump", eq["jump"], _tol(tols, "equator")),
    ])


def zeros_suite(rng, tols=None, meshes=None, refine=False):
    """Minimum of |P+ v1| over refining meshes; |v1| itself stays bounded away from zero."""
    meshes = meshes or ZERO_MESHES
    v1 = frames.global_frame().v1
    scans, norms = [], []
    for shape in meshes:
        m = SphereMesh.latlon(*shape)
        scans.append(helicity.zero_constraint_scan(v1, helicity.PLUS, m, refine=refine))
        norms.append(helicity.norm_scan(v1, m).min_norm)
    payload = dict(scans[-1].as_dict())
    payload["sequence"] = [s.as_dict() for s in scans]
    checks = [above("frame_norm", min(norms), _tol(tols, "frame_norm"))]
    if len(scans) > 1:
        steps = np.diff([s.min_norm for s in scans])
        checks.append(Check("zero_trend", "decreasing", float(np.max(steps)), max(0.0, float(np.max(steps))), 0.0))
        worst, _ = helicity.real_part_scan(v1, SphereMesh.latlon(*meshes[-1]))
        payload["real_part_min"] = worst
        checks.append(at_most("real_part", worst, _tol(tols, "real_part")))
    return SuiteResult("zeros", payload, checks)


def chern_suite(rng, tols=None, bundle=None, method=None, mesh=None):
    """Chern numbers of the helicity and frame bundles and the spin Chern number."""
    bundles = [bundle] if bundle else list(CHERN_TARGETS)
    methods = [method] if method else ["analytic", "lattice"]
    rows, checks = [], []
    for meth in methods:
        m = mesh or ((64, 128) if meth == "analytic" else (16, 32))
        sm = m if isinstance(m, SphereMesh) else SphereMesh.latlon(*m)
        for b in bundles:
            r = berry.chern(b, meth, sm)
            rows.append({"bundle": b, **r.as_dict(), "raw": r.raw})
            checks.append(near(f"chern_{meth}[{b}]", r.value, CHERN_TARGETS[b], _tol(tols, f"chern_{meth}")))
    if bundle:
        payload = {"value": rows[0]["value"], "method": rows[0]["method"], "residual": rows[0]["residual"],
                   "mesh": rows[0]["mesh"], "bundle": bundle}
    else:
        payload = {"results": rows}
    if bundle is None and method in (None, "lattice"):
        sm = mesh if isinstance(mesh, SphereMesh) else SphereMesh.latlon(*(mesh or (16, 32)))
        sc = berry.spin_chern("lattice", sm)
        payload["spin_chern"] = sc
        checks.append(near("spin_chern", sc, 4.0, _tol(tols, "spin_chern")))
    return SuiteResult("chern", payload, checks)


def _random_fiber(rng):
    k = WaveVector.from_array(rng.normal(size=3) * 10.0 ** rng.uniform(-1, 1))
    e = rng.normal(size=3) + 1j * rng.normal(size=3)
    e -= k.hat * np.dot(k.hat, e)
    return FiberVector(k, e)


def boost_suite(rng, tols=None, samples=1000, vmax=0.99):
    """Unitarity, helicity invariance, oracle agreement and little-group action on fibers."""
    norm_err = leak = oracle = null = phase = 0.0
    for _ in range(samples):
        L = lorentz.random_proper_transform(rng, vmax)
        x = _random_fiber(rng)
        y = lorentz.tensor_action(L, x)
        norm_err = max(norm_err, abs(y.norm - x.norm) / x.norm)
        p = SphericalPoint(np.arccos(rng.uniform(-1, 1)), rng.uniform(0, 2 * np.pi))
        for s in (helicity.PLUS, helicity.MINUS):
            e = lorentz.tensor_action(L, helicity.circular_frame(p, s))
            leak = max(leak, float(np.linalg.norm(helicity.project_arrays(e.base.hat, e.e, -s))))

        d = rng.normal(size=3)
        v = d / np.linalg.norm(d) * vmax * rng.uniform() ** (1 / 3)
        a, b = lorentz.boost_fiber(v, x), lorentz.tensor_action(lorentz.boost(v), x)
        oracle = max(oracle, float(np.max(np.abs(a.e - b.e))) / x.norm,
                     float(np.max(np.abs(a.base.vec - b.base.vec))) / x.base.norm)

        kbar = x.base
        al, be = rng.normal(size=2)
        z = lorentz.tensor_action(lorentz.little_group_element(kbar, 0.0, al, be), x)
        null = max(null, float(np.max(np.abs(z.e - x.e))) / x.norm, float(np.max(np.abs(z.base.vec - kbar.vec))) / kbar.norm)
        th = rng.uniform(-np.pi, np.pi)
        q = kbar.spherical()
        if not q.at_pole:
            W = lorentz.little_group_element(kbar, th, 0.0, 0.0)
            for s in (helicity.PLUS, helicity.MINUS):
                e = FiberVector(kbar, helicity.circular_arrays(q.theta, q.phi, s))
                phase = max(phase, float(np.max(np.abs(lorentz.tensor_action(W, e).e - np.exp(1j * s * th) * e.e))))
    payload = {"max_norm_error": norm_err, "samples": int(samples), "epsilon": 1.0 - vmax,
               "max_leakage": leak, "max_oracle_error": oracle, "max_null_translation": null,
               "max_helicity_phase_error": phase}
    return SuiteResult("boost-check", payload, [
        at_most("norm", norm_err, _tol(tols, "norm")),
        at_most("leakage", leak, _tol(tols, "leakage")),
        at_most("oracle", oracle, _tol(tols, "oracle")),
        at_most("null_translation", null, _tol(tols, "null_translation")),
        at_most("helicity_phase", phase, _tol(tols, "helicity_phase")),
    ])


def commutator_suite(rng, tols=None, n_sections=5, n_points=50):
    """Residual of every commutation relation on analytic sections at sampled wave vectors."""
    sections = operators.sample_sections(rng, n_sections)
    points = operators.sample_points(rng, n_points)
    table = operators.run_commutators(sections, points)
    tol = _tol(tols, "commutator")
    payload = {"sections": n_sections, "points": n_points, "residuals": table}
    return SuiteResult("commutators", payload, [at_most(name, r, tol) for name, r in table.items()])


def wigner_suite(rng, tols=None, epsilons=WIGNER_EPSILONS, n_phi=8):
    """Weinberg's L(k) stays phi-dependent near the poles while the smooth frame transition does not."""
    reps = [lorentz.wigner_discontinuity_report(e, n_phi) for e in epsilons]
    w = [r["weinberg_spread"] for r in reps]
    f = [r["frame_spread"] for r in reps]
    ratio = np.array(f) / np.array(epsilons)
    slope = float((ratio.max() - ratio.min()) / ratio.mean())
    payload = {"max_norm_error": float(f[-1]), "samples": int(n_phi), "epsilon": [float(e) for e in epsilons],
               "weinberg_spread": w, "frame_spread": f, "frame_spread_over_epsilon": ratio.tolist()}
    return SuiteResult("wigner-demo", payload, [
        above("weinberg", min(w), _tol(tols, "weinberg")),
        at_most("frame_spread", f[-1], _tol(tols, "frame_spread")),
        at_most("frame_slope", slope, _tol(tols, "frame_slope")),
    ])


SUITES = {
    "spectrum": spectrum_suite,
    "frame": frame_suite,
    "zeros": zeros_suite,
    "chern": chern_suite,
    "boost-check": boost_suite,
    "commutators": commutator_suite,
    "wigner-demo": wigner_suite,
}


def rng_for(seed, suite):
    """PCG64 stream for a suite, keyed by the run seed and the suite's registry position."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), list(SUITES).index(suite)])))


def run_suite(name, seed=0, tols=None, **kwargs):
    t0 = time.perf_counter()
    res = SUITES[name](rng_for(seed, name), tols, **kwargs)
    res.wall_time = time.perf_counter() - t0
    return res
