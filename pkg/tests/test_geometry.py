import math

import numpy as np
import pytest

from rifslab import (Affine2, AmbientBox, ClosedFormMap, Similarity,
                     UsageError, apply, compose, unit_box,
                     validate_lip_bounds)
from rifslab.errors import GeometryDomainError
from rifslab.geometry import CLOSED_FORMS


def test_unit_box_properties():
    b = unit_box(2)
    assert b.dim == 2
    assert b.diameter == pytest.approx(math.sqrt(2.0))
    assert b.center == (0.5, 0.5)
    assert b.corners().shape == (4, 2)


def test_box_rejects_bad_bounds():
    with pytest.raises(UsageError):
        AmbientBox((0.0, 0.0), (1.0,))
    with pytest.raises(UsageError):
        AmbientBox((0.0,), (0.0,))
    with pytest.raises(UsageError):
        AmbientBox((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))


def test_similarity_1d_evaluation():
    m = Similarity(1.0 / 3.0, (2.0 / 3.0,))
    assert apply(m, 0.0) == pytest.approx(2.0 / 3.0)
    assert apply(m, 1.0) == pytest.approx(1.0)
    assert m.lip_lo == m.lip_hi == pytest.approx(1.0 / 3.0)


def test_similarity_reflection_and_rotation():
    # quarter turn of the unit square scaled by 1/2 about the origin
    rot = Similarity(0.5, (0.5, 0.0), rotation_deg=90.0)
    x, y = apply(rot, (1.0, 0.0))
    assert x == pytest.approx(0.5)
    assert y == pytest.approx(0.5)
    refl = Similarity(0.5, (0.5,), reflect=True)
    assert apply(refl, 1.0) == pytest.approx(0.0)


def test_similarity_rejects_1d_rotation():
    with pytest.raises(UsageError):
        Similarity(0.5, (0.0,), rotation_deg=30.0)


def test_similarity_ratio_must_contract():
    with pytest.raises(UsageError):
        Similarity(1.0, (0.0,))
    with pytest.raises(UsageError):
        Similarity(0.0, (0.0,))


def test_affine2_lipschitz_is_singular_values():
    m = Affine2([[0.5, 0.0], [0.0, 0.25]], (0.0, 0.0))
    assert m.lip_hi == pytest.approx(0.5)
    assert m.lip_lo == pytest.approx(0.25)


def test_affine2_image_box_exact():
    m = Affine2([[0.5, 0.0], [0.0, 0.25]], (0.5, 0.75))
    boxes = unit_box(2).as_array()[None, :, :]
    out = m.image_box_array(boxes)[0]
    assert out[0].tolist() == [0.5, 1.0]
    assert out[1].tolist() == [0.75, 1.0]


def test_rotated_image_box_bounds_corners():
    m = Similarity(0.5, (0.5, 0.25), rotation_deg=30.0)
    boxes = unit_box(2).as_array()[None, :, :]
    out = m.image_box_array(boxes)[0]
    corners = unit_box(2).corners()
    moved = m.apply_array(corners)
    assert np.all(moved[:, 0] >= out[0, 0] - 1e-12)
    assert np.all(moved[:, 0] <= out[0, 1] + 1e-12)
    assert np.all(moved[:, 1] >= out[1, 0] - 1e-12)
    assert np.all(moved[:, 1] <= out[1, 1] + 1e-12)


def test_apply_rejects_outside_points():
    m = Similarity(0.5, (0.0,))
    with pytest.raises(GeometryDomainError):
        apply(m, 2.0)


def test_compose_order_is_left_outermost():
    f = Similarity(0.5, (0.5,))     # x -> x/2 + 1/2
    g = Similarity(0.5, (0.0,))     # x -> x/2
    fg = compose([f, g])
    # f(g(1)) = f(1/2) = 3/4, while g(f(1)) would be 1/2
    assert fg.apply_array(np.array([[1.0]]))[0, 0] == pytest.approx(0.75)
    assert fg.lip_hi_bound == pytest.approx(0.25)
    assert fg.lip_lo_bound == pytest.approx(0.25)


def test_compose_rejects_empty_and_mixed_dims():
    with pytest.raises(UsageError):
        compose([])
    with pytest.raises(UsageError):
        compose([Similarity(0.5, (0.0,)), Similarity(0.5, (0.0, 0.0))])


def test_closed_form_catalog_rejects_unknown():
    with pytest.raises(UsageError):
        ClosedFormMap("nonexistent_map")


@pytest.mark.parametrize("name", sorted(set(CLOSED_FORMS) - {"arch_top_mid"}))
def test_closed_form_stays_inside_unit_box(name):
    m = ClosedFormMap(name)
    box = unit_box(m.dim)
    pts = np.linspace(0.0, 1.0, 101)
    grid = pts[:, None] if m.dim == 1 else np.stack(
        np.meshgrid(pts, pts), axis=-1).reshape(-1, 2)
    assert box.contains(m.apply_array(grid))


def test_lifted_arch_escapes_the_unit_box():
    # cataloged for completeness but usable only on smaller domains; its
    # peak leaves the square, so no bundled system includes it
    m = ClosedFormMap("arch_top_mid")
    top = m.apply_array(np.array([[0.5, 1.0]]))
    assert top[0, 1] == pytest.approx(1.125)
    assert not unit_box(2).contains(top)


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_closed_form_box_arithmetic_covers_images(name):
    # the declared per-axis range must contain every sampled image
    m = ClosedFormMap(name)
    rng = np.random.default_rng(5)
    for _ in range(20):
        lo = rng.uniform(0.0, 0.8, m.dim)
        hi = lo + rng.uniform(0.05, 1.0 - lo.max(), m.dim)
        box = np.stack([lo, hi], axis=-1)[None, :, :]
        out = m.image_box_array(box)[0]
        samples = lo + rng.random((200, m.dim)) * (hi - lo)
        img = np.atleast_2d(m.apply_array(samples))
        for ax in range(m.dim):
            assert img[:, ax].min() >= out[ax, 0] - 1e-12
            assert img[:, ax].max() <= out[ax, 1] + 1e-12


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_declared_lipschitz_bounds_hold(name):
    rep = validate_lip_bounds(ClosedFormMap(name), 2000)
    assert rep.ok, (name, rep.observed_lo, rep.observed_hi)


def test_validate_lip_bounds_similarity_is_tight():
    rep = validate_lip_bounds(Similarity(1.0 / 3.0, (0.0,)), 500)
    assert rep.ok
    assert rep.observed_lo == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert rep.observed_hi == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_validate_lip_bounds_needs_samples():
    with pytest.raises(UsageError):
        validate_lip_bounds(Similarity(0.5, (0.0,)), 1)
