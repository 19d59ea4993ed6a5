import numpy as np
import pytest

from photon_bundle import helicity as Hl
from photon_bundle.frames import global_frame
from photon_bundle.geometry import FiberVector, MeshTooCoarse, PoleSingularity, SphereMesh, SphericalPoint, WaveVector, sample
from photon_bundle.lorentz import rotation_matrix
from photon_bundle.operators import chart_circular


def random_unit(rng, n):
    x = rng.normal(size=(n, 3))
    return x / np.linalg.norm(x, axis=-1)[:, None]


def test_projector_algebra(rng):
    kh = random_unit(rng, 1000)
    Pp, Pm = Hl.helicity_projector(kh, Hl.PLUS), Hl.helicity_projector(kh, Hl.MINUS)
    perp = np.eye(3) - kh[:, :, None] * kh[:, None, :]
    assert np.max(np.abs(Pp @ Pp - Pp)) < 1e-13
    assert np.max(np.abs(Pm @ Pm - Pm)) < 1e-13
    assert np.max(np.abs(Pp @ Pm)) < 1e-13
    assert np.max(np.abs(Pp + Pm - perp)) < 1e-13
    assert np.max(np.abs(Pp - np.conj(np.swapaxes(Pp, 1, 2)))) < 1e-15


def test_projector_is_chart_independent(rng):
    kh = random_unit(rng, 200)
    R = rotation_matrix([0.3, -1.0, 0.5], 0.9)
    for s in (Hl.PLUS, Hl.MINUS):
        P = Hl.helicity_projector(kh, s)
        assert np.max(np.abs(Hl.chart_projector(kh, s) - P)) < 1e-13
        assert np.max(np.abs(Hl.chart_projector(kh, s, R) - P)) < 1e-13


def test_circular_frame():
    p = SphericalPoint(1.2, -0.4)
    for s in (Hl.PLUS, Hl.MINUS):
        e = Hl.circular_frame(p, s)
        assert e.norm == pytest.approx(1)
        assert np.allclose(np.cross(e.base.hat, e.e), -1j * s * e.e)
        assert np.allclose(Hl.project_helicity(e, s).e, e.e)
        assert np.allclose(Hl.project_helicity(e, -s).e, 0, atol=1e-15)
    with pytest.raises(PoleSingularity):
        Hl.circular_frame(SphericalPoint(0, 0), Hl.PLUS)
    with pytest.raises(ValueError):
        Hl.HelicitySign(0)
    assert int(-Hl.HelicitySign(1)) == -1


def test_helicity_eigenvalue_from_rotation():
    p = SphericalPoint(0.8, 2.3)
    h = 1e-6
    for s in (Hl.PLUS, Hl.MINUS):
        e = Hl.circular_frame(p, s)
        d = (Hl.helicity_rotation(e.base.hat, h, e.e) - Hl.helicity_rotation(e.base.hat, -h, e.e)) / (2 * h)
        assert np.max(np.abs(d - 1j * s * e.e)) < 1e-8
        a = 0.77
        assert np.allclose(Hl.helicity_rotation(e.base.hat, a, e.e), np.exp(1j * s * a) * e.e)


def test_decomposition_recovers_section(rng):
    v1 = global_frame().v1
    parts = Hl.decompose_section(v1)
    x = rng.normal(size=(100, 3))
    total = sample(parts.plus, x) + sample(parts.minus, x)
    assert np.max(np.abs(total - sample(v1, x))) < 1e-13


def test_little_group_action(rng):
    x = rng.normal(size=(100, 3))
    v1 = global_frame().v1
    assert np.allclose(sample(Hl.little_group_action(v1, 0.0), x), sample(v1, x))
    ep = chart_circular(1)
    assert np.allclose(sample(Hl.little_group_action(ep, np.pi), x), -sample(ep, x))
    a, b = 0.4, 1.3
    w = sample(Hl.little_group_action(v1, a), x)
    assert np.allclose(np.linalg.norm(w, axis=-1), np.linalg.norm(sample(v1, x), axis=-1))
    ab = sample(Hl.little_group_action(Hl.little_group_action(v1, a), b), x)
    assert np.allclose(ab, sample(Hl.little_group_action(v1, a + b), x))


def test_zero_scan_basics():
    ep = chart_circular(1)
    m = SphereMesh.latlon(16, 32)
    r = Hl.zero_constraint_scan(ep, Hl.MINUS, m)
    assert r.min_norm < 1e-15 and r.mesh == "16x32"
    zero = Hl.zero_constraint_scan(lambda k: (0.0 * k[0], 0.0 * k[0], 0.0 * k[0]), Hl.PLUS, m)
    assert zero.index == 0 and zero.min_norm == 0
    assert set(r.as_dict()) == {"min_norm", "theta", "phi", "mesh"}
    with pytest.raises(MeshTooCoarse):
        Hl.zero_constraint_scan(ep, Hl.PLUS, SphereMesh.latlon(2, 3))


def test_zero_scan_refinement_improves():
    v1 = global_frame().v1
    m = SphereMesh.latlon(32, 64)
    coarse = Hl.zero_constraint_scan(v1, Hl.PLUS, m)
    fine = Hl.zero_constraint_scan(v1, Hl.PLUS, m, refine=True)
    assert fine.min_norm <= coarse.min_norm
    assert Hl.norm_scan(v1, m).min_norm > 0.9


def test_real_part_scan_finds_small_values():
    worst, mins = Hl.real_part_scan(global_frame().v1, SphereMesh.latlon(128, 256))
    assert len(mins) == 8 and worst < 0.1


def test_projector_on_fiber_preserves_base():
    x = FiberVector(WaveVector(1, 2, 3), np.cross([1, 2, 3], [0, 1j, 1]))
    p = Hl.project_helicity(x, Hl.PLUS)
    assert p.base == x.base
    assert np.allclose(p.e + Hl.project_helicity(x, Hl.MINUS).e, x.e)
