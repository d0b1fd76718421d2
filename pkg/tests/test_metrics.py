import numpy as np
import pytest

from sketchrecon.geom import Mesh, marching_cubes, cell_centers, sample_surface
from sketchrecon.metrics import chamfer, iou, normal_consistency


def rotate_z(mesh, degrees):
    a = np.radians(degrees)
    rot = np.array(
        [[np.cos(a), -np.sin(a), 0], [np.sin(a), np.cos(a), 0], [0, 0, 1]]
    )
    return Mesh(mesh.vertices @ rot.T, mesh.faces)


def cube_mesh(side=0.4):
    c = cell_centers(48)
    field = np.all(np.abs(c) < side / 2, axis=-1).astype(np.float64)
    return marching_cubes(field, 0.5)


class TestIoU:
    def test_identical(self):
        g = np.random.default_rng(0).random((16, 16, 16)) < 0.3
        assert iou(g, g) == 1.0

    def test_disjoint(self):
        a = np.zeros((8, 8, 8), dtype=bool)
        b = np.zeros((8, 8, 8), dtype=bool)
        a[:4] = True
        b[4:] = True
        assert iou(a, b) == 0.0

    def test_counted_overlap(self):
        # two side-8 cubes offset by one cell: overlap 7x8x8
        a = np.zeros((16, 16, 16), dtype=bool)
        b = np.zeros((16, 16, 16), dtype=bool)
        a[0:8, 0:8, 0:8] = True
        b[1:9, 0:8, 0:8] = True
        expected = 448 / 576
        assert iou(a, b) == pytest.approx(expected, abs=1e-12)

    def test_both_empty(self):
        z = np.zeros((4, 4, 4), dtype=bool)
        assert iou(z, z) == 1.0

    def test_mismatch_rejected(self):
        with pytest.raises(ValueError):
            iou(np.zeros((4, 4, 4)), np.zeros((8, 8, 8)))

    def test_symmetric(self):
        rng = np.random.default_rng(1)
        a = rng.random((12, 12, 12)) < 0.4
        b = rng.random((12, 12, 12)) < 0.4
        assert iou(a, b) == iou(b, a)


class TestChamfer:
    def test_identical_sets(self):
        pts = np.random.default_rng(2).random((100, 3))
        assert chamfer(pts, pts) == 0.0

    def test_two_point_closed_form(self):
        d = 0.37
        a = np.array([[0.0, 0.0, 0.0]])
        b = np.array([[d, 0.0, 0.0]])
        assert chamfer(a, b) == pytest.approx(d * d, abs=1e-15)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(3)
        a = rng.random((50, 3))
        b = rng.random((60, 3))
        perm_a = a[rng.permutation(50)]
        perm_b = b[rng.permutation(60)]
        assert chamfer(a, b) == pytest.approx(chamfer(perm_a, perm_b), abs=1e-15)

    def test_symmetric(self):
        rng = np.random.default_rng(4)
        a = rng.random((40, 3))
        b = rng.random((40, 3))
        assert chamfer(a, b) == pytest.approx(chamfer(b, a), abs=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            chamfer(np.zeros((0, 3)), np.zeros((5, 3)))


class TestNormalConsistency:
    def test_self_consistency(self):
        mesh = cube_mesh()
        assert normal_consistency(mesh, mesh, n_samples=2000, seed=5) == pytest.approx(
            1.0, abs=1e-6
        )

    def test_tangentially_offset_plane(self):
        c = cell_centers(32)
        field = (c[..., 0] < 0).astype(np.float64)
        plane = marching_cubes(field, 0.5)
        shifted = Mesh(plane.vertices + np.array([0.0, 0.01, 0.01]), plane.faces)
        assert normal_consistency(plane, shifted, n_samples=2000, seed=6) == pytest.approx(
            1.0, abs=1e-6
        )

    def test_rotated_cube_matches_all_pairs_oracle(self):
        mesh = cube_mesh()
        rot = rotate_z(mesh, 45)
        n = 400
        got = normal_consistency(mesh, rot, n_samples=n, seed=7)

        pa, na = sample_surface(mesh, n, np.random.default_rng(7))
        pb, nb = sample_surface(rot, n, np.random.default_rng(7))
        d_ab = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2)
        idx_ab = np.argmin(d_ab, axis=1)
        idx_ba = np.argmin(d_ab, axis=0)
        cos_ab = np.abs(np.sum(na * nb[idx_ab], axis=1))
        cos_ba = np.abs(np.sum(nb * na[idx_ba], axis=1))
        expected = 0.5 * (cos_ab.mean() + cos_ba.mean())
        assert got == pytest.approx(expected, abs=1e-4)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            normal_consistency(Mesh(), cube_mesh())
