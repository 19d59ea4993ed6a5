import numpy as np
import pytest

from photon_bundle import frames as F
from photon_bundle.geometry import SphereMesh, SphericalPoint, WaveVector, hdot, sample, unit_vector


def test_section_u_is_transverse_and_nonvanishing(rng):
    x = rng.normal(size=(500, 3))
    u = sample(F.u_components, x)
    assert np.max(np.abs(np.sum(x * u, -1))) < 1e-12
    n2 = hdot(u, u).real / np.sum(x * x, -1)
    assert np.min(n2) >= 1 - 1e-12
    assert F.section_u(WaveVector(0, 0, 1)).norm == pytest.approx(np.sqrt(2))


def test_hemisphere_frames():
    p = SphericalPoint(0.6, 1.1)
    v1, v2 = F.hemisphere_frame(F.UPPER, p)
    assert np.allclose([v1 @ v1, v2 @ v2, v1 @ v2], [1, 1, 0])
    with pytest.raises(F.WrongHemisphere):
        F.hemisphere_frame(F.LOWER, p)
    with pytest.raises(F.WrongHemisphere):
        F.hemisphere_frame(F.UPPER, SphericalPoint(2.5, 0))
    with pytest.raises(Exception):
        F.hemisphere_frame(F.UPPER, SphericalPoint(0, 0))


def test_clutching_relates_hemispheres():
    for phi in np.linspace(0, 2 * np.pi, 13):
        f = F.clutching(phi)
        up, lo = F.chart_columns(F.UPPER, phi), F.chart_columns(F.LOWER, phi)
        for a, b in zip(up, lo):
            assert np.allclose(a, f @ b)
        assert np.allclose(f @ f.T, np.eye(2))
    assert F.clutching_winding() == -2


def test_step_functions():
    assert F.h_step(0.0) == 0 and F.h_step(-1.0) == 0 and F.h_step(F.H_CUTOFF / 2) == 0
    assert F.h_step(1.0) == pytest.approx(np.exp(-1))
    t = np.linspace(np.pi / 2, np.pi, 201)
    g = F.g_step(t)
    assert g[0] == pytest.approx(np.pi / 2) and g[-1] == pytest.approx(np.pi)
    assert np.all(np.diff(g) >= 0)


def test_homotopy_endpoints_and_su2():
    phi = np.linspace(0, 2 * np.pi, 17)
    eq = F.rough_homotopy(np.pi / 2, phi)
    assert np.allclose(eq, np.array([F.clutching(p) for p in phi]))
    assert np.allclose(F.rough_homotopy(np.pi, phi), np.eye(2))
    th = np.linspace(np.pi / 2, np.pi, 9)[:, None]
    U = F.smooth_homotopy(th, phi[None, :])
    assert np.allclose(np.linalg.det(U), 1)
    assert np.allclose(U @ np.conj(np.swapaxes(U, -1, -2)), np.eye(2))
    with pytest.raises(F.DomainError):
        F.smooth_homotopy(1.0, 0.0)


def test_global_frame_is_unitary_everywhere():
    m = SphereMesh.latlon(64, 128)
    g = F.global_frame()
    assert np.max(np.abs(g.gram_det(m.theta, m.phi) - 1)) < 1e-12
    v1, v2 = F.frame_arrays(m.theta, m.phi)
    kh = m.points()
    assert np.max(np.abs(np.sum(kh * v1, -1))) < 1e-12 and np.max(np.abs(np.sum(kh * v2, -1))) < 1e-12


def test_global_frame_is_smooth_at_equator_and_poles():
    eq = F.equator_mismatch()
    assert eq["jump"] == 0 and eq["chart"] < 1e-6 and eq["cartesian"] < 1e-6
    phi = np.linspace(0, 2 * np.pi, 9)
    for t, (a, b) in ((0.0, ([0, 1, 0], [-1, 0, 0])), (np.pi, ([0, 1, 0], [1, 0, 0]))):
        v1, v2 = F.frame_arrays(np.full_like(phi, abs(t - 1e-7)), phi)
        assert np.max(np.abs(v1 - a)) < 1e-6 and np.max(np.abs(v2 - b)) < 1e-6
        w1, w2 = F.frame_arrays(t, 0.0)
        assert np.allclose(w1, a) and np.allclose(w2, b)


def test_section_callables_and_orthonormalisation(rng):
    g = F.global_frame(orthonormalize=True)
    x = rng.normal(size=(50, 3))
    v1, v2 = sample(g.v1, x), sample(g.v2, x)
    assert np.allclose(hdot(v1, v1), 1) and np.allclose(hdot(v1, v2), 0, atol=1e-12)
    a, b = g.at(WaveVector(0.1, 0.2, -2))
    assert a.norm == pytest.approx(1) and b.norm == pytest.approx(1)
    p = SphericalPoint(2.0, 0.5)
    assert np.allclose(F.frame_at(p)[0], F.frame_arrays(2.0, 0.5)[0])
    assert np.allclose(unit_vector(2.0, 0.5) @ F.frame_at(p)[1], 0)


def test_frame_is_scale_invariant(rng):
    g = F.global_frame()
    x = rng.normal(size=(20, 3))
    assert np.array_equal(sample(g.v1, x), sample(g.v1, 2 * x))


def test_equator_differences_converge_at_second_order():
    phi = np.linspace(0.1, 6.0, 7)
    d = lambda h: (np.concatenate(F.frame_arrays(np.pi / 2 + h, phi), -1)
                   - np.concatenate(F.frame_arrays(np.pi / 2 - h, phi), -1)) / (2 * h)
    hs = [4e-2, 2e-2, 1e-2]
    a, b, c = (d(h) for h in hs)
    slope = np.log2(np.max(np.abs(a - b)) / np.max(np.abs(b - c)))
    assert abs(slope - 2) < 0.2


def test_section_u_lower_bound(rng):
    x = rng.normal(size=(1000, 3))
    u = sample(F.u_components, x)
    bound = np.sqrt(x[:, 0] ** 2 + x[:, 1] ** 2 + 2 * x[:, 2] ** 2)
    assert np.allclose(np.linalg.norm(u, axis=-1), bound)
