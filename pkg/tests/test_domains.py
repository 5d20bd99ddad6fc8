import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import transferred_gram
from zernkit.domains import (
    AnnulusBasis,
    AnnulusMap,
    EllipseBasis,
    EllipseMap,
    HexagonBasis,
    HexagonMap,
    make_basis,
    make_map,
    polygon_boundary_radius,
    polygon_fold,
    transfer_nodes,
)
from zernkit.errors import DomainError
from zernkit.samplings import carnicer_nodes, ocs_nodes

ALPHA = math.pi / 6


class TestBoundaryRadius:
    def test_edge_midpoint(self):
        assert polygon_boundary_radius(0.0, ALPHA) == pytest.approx(
            math.sqrt(3) / 2, abs=1e-15
        )

    def test_vertex(self):
        # fold(pi/6) = -pi/6, so the boundary radius reaches 1
        assert polygon_fold(np.pi / 6, ALPHA) == pytest.approx(-np.pi / 6)
        assert polygon_boundary_radius(np.pi / 6, ALPHA) == pytest.approx(1.0)

    @given(st.floats(min_value=0.0, max_value=2 * math.pi - 2 * ALPHA))
    @settings(max_examples=200)
    def test_periodicity(self, theta):
        a = polygon_boundary_radius(theta, ALPHA)
        b = polygon_boundary_radius(theta + 2 * ALPHA, ALPHA)
        assert abs(a - b) < 1e-12

    @given(st.floats(min_value=-10.0, max_value=10.0))
    @settings(max_examples=300)
    def test_range(self, theta):
        r = polygon_boundary_radius(theta, ALPHA)
        assert math.cos(ALPHA) - 1e-15 <= r <= 1.0 + 1e-15


class TestHexagonMap:
    def test_boundary_to_edge_midpoint(self):
        m = HexagonMap()
        r, t = m.forward_polar(1.0, 0.0)
        assert (r, t) == (pytest.approx(math.sqrt(3) / 2), 0.0)

    def test_origin_fixed(self):
        m = HexagonMap()
        assert m.forward_xy(0.0, 0.0) == (0.0, 0.0)

    def test_roundtrip_grid(self):
        m = HexagonMap()
        rng = np.random.default_rng(0)
        rho = np.sqrt(rng.random(1000))
        theta = 2 * np.pi * rng.random(1000)
        x, y = rho * np.cos(theta), rho * np.sin(theta)
        fx, fy = m.forward_xy(x, y)
        bx, by = m.inverse_xy(fx, fy)
        assert np.max(np.hypot(bx - x, by - y)) < 1e-13

    def test_inverse_rejects_outside(self):
        m = HexagonMap()
        with pytest.raises(DomainError):
            m.inverse_xy(0.99, 0.0)  # past the edge midpoint at sqrt(3)/2

    def test_inverse_jacobian(self):
        m = HexagonMap()
        assert m.inverse_jacobian_xy(0.1, 0.0) == pytest.approx(4.0 / 3.0)


class TestEllipseMap:
    def test_identity_when_unit(self):
        m = EllipseMap(1.0, 1.0)
        assert m.forward_xy(0.3, -0.4) == (0.3, -0.4)

    def test_axis_scaling(self):
        m = EllipseMap(2.0, 1.0)
        assert m.forward_xy(1.0, 0.0) == (2.0, 0.0)

    def test_axis_order_enforced(self):
        with pytest.raises(ValueError):
            EllipseMap(1.0, 2.0)

    def test_area_by_monte_carlo(self):
        big_a, big_b = 2.0, 1.0
        m = EllipseMap(big_a, big_b)
        rng = np.random.default_rng(123)
        pts = rng.uniform([-big_a, -big_b], [big_a, big_b], size=(1_000_000, 2))
        frac = np.mean(m.contains_xy(pts[:, 0], pts[:, 1]))
        area = frac * 4 * big_a * big_b
        assert area == pytest.approx(np.pi * big_a * big_b, rel=0.01)

    def test_roundtrip(self):
        m = EllipseMap(2.0, 1.0)
        rng = np.random.default_rng(1)
        u = rng.uniform(-0.7, 0.7, 500)
        v = rng.uniform(-0.7, 0.7, 500)
        fx, fy = m.forward_xy(u, v)
        bu, bv = m.inverse_xy(fx, fy)
        assert np.max(np.hypot(bu - u, bv - v)) < 1e-13


class TestAnnulusMap:
    def test_center_to_inner_circle(self):
        m = AnnulusMap(0.5, 1.0)
        assert m.forward_xy(0.0, 0.0) == (0.5, 0.0)

    def test_boundary_to_outer_circle(self):
        m = AnnulusMap(0.5, 1.0)
        x, y = m.forward_xy(np.cos(1.1), np.sin(1.1))
        assert np.hypot(x, y) == pytest.approx(1.0)

    def test_roundtrip(self):
        m = AnnulusMap(0.5, 1.0)
        rng = np.random.default_rng(2)
        rho = rng.random(1000)
        theta = 2 * np.pi * rng.random(1000)
        x, y = rho * np.cos(theta), rho * np.sin(theta)
        fx, fy = m.forward_xy(x, y)
        bx, by = m.inverse_xy(fx, fy)
        assert np.max(np.hypot(bx - x, by - y)) < 1e-13

    def test_inverse_rejects_outside(self):
        m = AnnulusMap(0.5, 1.0)
        with pytest.raises(DomainError):
            m.inverse_xy(0.25, 0.0)
        with pytest.raises(DomainError):
            m.inverse_xy(1.05, 0.0)

    def test_parameters_validated(self):
        with pytest.raises(ValueError):
            AnnulusMap(0.0, 1.0)
        with pytest.raises(ValueError):
            AnnulusMap(1.2, 1.0)

    def test_narrow_annulus_warns(self):
        with pytest.warns(UserWarning):
            AnnulusMap(0.96, 1.0)


class TestTransfer:
    def test_unit_ellipse_is_identity(self):
        nodes = ocs_nodes(5)
        moved = transfer_nodes(EllipseMap(1.0, 1.0), nodes)
        assert np.array_equal(moved.nodes, nodes.nodes)

    def test_hexagon_keeps_origin(self):
        nodes = ocs_nodes(10)  # innermost ring is the single origin node
        moved = transfer_nodes(HexagonMap(), nodes)
        assert moved.nodes[-1, 0] == 0.0
        assert moved.nodes[-1, 1] == 0.0

    def test_annulus_shifts_center_node(self):
        nodes = ocs_nodes(10)
        moved = transfer_nodes(AnnulusMap(0.5, 1.0), nodes, inner_eps=0.01)
        assert moved.nodes[-1, 0] == pytest.approx(0.51, abs=1e-15)
        assert moved.nodes[-1, 1] == 0.0

    def test_annulus_shift_only_for_exact_center(self):
        nodes = ocs_nodes(9)  # odd order: no origin node
        moved = transfer_nodes(AnnulusMap(0.5, 1.0), nodes, inner_eps=0.01)
        assert np.all(moved.rho > 0.5)
        assert np.min(moved.rho) > 0.5 + 0.01  # nothing was snapped to a + eps

    def test_order_preserved(self):
        nodes = carnicer_nodes(6)
        moved = transfer_nodes(HexagonMap(), nodes)
        # same angular order ring by ring
        assert np.array_equal(moved.theta, nodes.theta)

    def test_only_disk_sets_transfer(self):
        nodes = transfer_nodes(HexagonMap(), ocs_nodes(4))
        with pytest.raises(DomainError):
            transfer_nodes(HexagonMap(), nodes)


class TestBasisValues:
    def test_hexagon_plain_piston(self):
        b = HexagonBasis(4, "K")
        rng = np.random.default_rng(3)
        theta = 2 * np.pi * rng.random(50)
        rho = 0.9 * polygon_boundary_radius(theta, ALPHA) * rng.random(50)
        assert np.all(b.eval_polar(0, rho, theta) == 1.0)

    def test_hexagon_weighted_piston(self):
        b = HexagonBasis(4, "H")
        got = b.eval_polar(0, 0.5, 0.0)
        assert got == pytest.approx(2.0 / math.sqrt(3.0), abs=1e-15)

    def test_ellipse_piston(self):
        b = EllipseBasis(4, EllipseMap(2.0, 1.0))
        got = b.eval_xy(0, np.array([0.0, 1.5, -1.0]), np.array([0.0, 0.2, 0.3]))
        assert np.allclose(got, 1.0 / math.sqrt(2.0), atol=1e-15)

    def test_annulus_weighted_vanishes_on_inner_circle(self):
        b = AnnulusBasis(4, "O", AnnulusMap(0.5, 1.0))
        theta = np.linspace(0, 2 * np.pi, 13)
        for j in range(b.size):
            assert np.all(b.eval_polar(j, np.full_like(theta, 0.5), theta) == 0.0)

    def test_outside_domain_raises(self):
        with pytest.raises(DomainError):
            HexagonBasis(3, "K").eval_xy(0, 0.95, 0.0)
        with pytest.raises(DomainError):
            EllipseBasis(3, EllipseMap(2.0, 1.0)).eval_xy(0, 2.05, 0.0)
        with pytest.raises(DomainError):
            AnnulusBasis(3, "C", AnnulusMap(0.5, 1.0)).eval_xy(0, 0.3, 0.0)

    def test_weight_bounds_on_hexagon(self):
        theta = np.linspace(-7, 7, 20001)
        w = 1.0 / polygon_boundary_radius(theta, ALPHA)
        assert np.all(w >= 1.0 - 1e-15)
        assert np.all(w <= 2.0 * math.sqrt(3.0) / 3.0 + 1e-15)

    def test_family_domain_pairing(self):
        with pytest.raises(ValueError):
            HexagonBasis(3, "E")
        with pytest.raises(ValueError):
            AnnulusBasis(3, "K", AnnulusMap(0.5, 1.0))
        with pytest.raises(ValueError):
            make_basis("Q", 3)


@pytest.mark.parametrize(
    "family,kwargs",
    [
        ("K", {}),
        ("H", {}),
        ("E", {"domain_map": EllipseMap(2.0, 1.0)}),
        ("O", {"domain_map": AnnulusMap(0.5, 1.0)}),
        ("C", {"domain_map": AnnulusMap(0.5, 1.0)}),
    ],
)
def test_orthonormality_order_6(family, kwargs):
    basis = make_basis(family, 6, kwargs.get("domain_map"))
    gram = transferred_gram(basis)
    assert np.max(np.abs(gram - np.eye(basis.size))) < 1e-6


def test_make_map_dispatch():
    assert isinstance(make_map("hexagon"), HexagonMap)
    assert isinstance(make_map("ellipse", semi_major=2.0, semi_minor=1.0), EllipseMap)
    assert isinstance(make_map("annulus", inner=0.5, outer=1.0), AnnulusMap)
    with pytest.raises(ValueError):
        make_map("square")
