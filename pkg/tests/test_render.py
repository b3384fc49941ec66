import numpy as np
import pytest

from rifslab import (AmbientBox, RenderSpec, UsageError, render_ppm,
                     unit_box)


def header_of(data: bytes) -> bytes:
    return data[:data.index(b"255\n") + 4]


def pixels_of(data: bytes, spec: RenderSpec) -> np.ndarray:
    body = data[data.index(b"255\n") + 4:]
    return np.frombuffer(body, dtype=np.uint8).reshape(
        spec.height, spec.width, 3)


def test_spec_validation():
    with pytest.raises(UsageError):
        RenderSpec(0, 4, 0.1)
    with pytest.raises(UsageError):
        RenderSpec(4, 4, 0.0)
    with pytest.raises(UsageError):
        RenderSpec(4, 4, 0.1, foreground=(0, 0))
    with pytest.raises(UsageError):
        RenderSpec(4, 4, 0.1, background=(0, 0, 256))
    spec = RenderSpec(4, 2, 0.5)
    assert spec.foreground == (0, 0, 0)
    assert spec.background == (255, 255, 255)


def test_single_center_point():
    spec = RenderSpec(3, 3, 1.0)
    data = render_ppm(np.array([[0.5, 0.5]]), spec, unit_box(2))
    assert header_of(data) == b"P6\n3 3\n255\n"
    img = pixels_of(data, spec)
    dark = np.argwhere((img == 0).all(axis=2))
    assert dark.tolist() == [[1, 1]]


def test_vertical_axis_points_up():
    # larger y lands on an earlier (higher) pixel row
    spec = RenderSpec(1, 4, 1.0)
    img = pixels_of(render_ppm(np.array([[0.5, 0.99]]), spec, unit_box(2)),
                    spec)
    assert (img[0, 0] == 0).all()
    img = pixels_of(render_ppm(np.array([[0.5, 0.01]]), spec, unit_box(2)),
                    spec)
    assert (img[3, 0] == 0).all()


def test_one_dimensional_points_use_row_zero():
    spec = RenderSpec(8, 3, 1.0)
    img = pixels_of(render_ppm(np.array([[0.0], [0.99]]), spec, unit_box(1)),
                    spec)
    fg_rows = sorted(set(np.argwhere((img == 0).all(axis=2))[:, 0]))
    assert fg_rows == [0]
    assert (img[0, 0] == 0).all() and (img[0, 7] == 0).all()


def test_custom_colors_and_determinism():
    spec = RenderSpec(5, 5, 1.0, foreground=(10, 20, 30),
                      background=(200, 100, 0))
    pts = np.array([[0.1, 0.1], [0.9, 0.9]])
    a = render_ppm(pts, spec, unit_box(2))
    b = render_ppm(pts, spec, unit_box(2))
    assert a == b
    img = pixels_of(a, spec)
    vals = {tuple(px) for px in img.reshape(-1, 3)}
    assert vals == {(10, 20, 30), (200, 100, 0)}


def test_points_clamped_to_edge_pixels():
    spec = RenderSpec(4, 4, 1.0)
    box = AmbientBox((0.0, 0.0), (1.0, 1.0))
    img = pixels_of(render_ppm(np.array([[1.0, 0.0]]), spec, box), spec)
    assert (img[3, 3] == 0).all()


def test_render_input_checks():
    spec = RenderSpec(4, 4, 1.0)
    with pytest.raises(UsageError, match="nothing to render"):
        render_ppm(np.zeros((0, 2)), spec, unit_box(2))
    with pytest.raises(UsageError):
        render_ppm(np.zeros((3, 1)), spec, unit_box(2))
