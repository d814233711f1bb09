"""Phase portraits: domain coloring by arg f with exceptional-point markers.

Each pixel is colored by the argument of f at the pixel center through the
standard HSV wheel (arg 0 = red, increasing argument runs red, yellow,
green, cyan, blue, magenta) at full saturation and value.  Pixels where f is
undefined or has modulus below 1e-300 are painted neutral gray and counted.
The net number of hue cycles along a small circle in the image equals the
index of the enclosed point, which ``color_cycle_count`` extracts as a
visualization cross-check.

PPM (P6) is the canonical byte-exact output; PNG goes through matplotlib.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PortraitError

GRAY = (128, 128, 128)
MODULUS_FLOOR = 1e-300


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle in the plane plus the raster size."""

    lower_left: complex
    upper_right: complex
    width_px: int = 400
    height_px: int = 400

    def __post_init__(self):
        if not (
            self.upper_right.real > self.lower_left.real
            and self.upper_right.imag > self.lower_left.imag
        ):
            raise ValueError("upper_right must strictly dominate lower_left")
        if self.width_px < 16 or self.height_px < 16:
            raise ValueError("pixel counts must be at least 16")

    def pixel_centers(self) -> np.ndarray:
        dx = (self.upper_right.real - self.lower_left.real) / self.width_px
        dy = (self.upper_right.imag - self.lower_left.imag) / self.height_px
        xs = self.lower_left.real + (np.arange(self.width_px) + 0.5) * dx
        # Row 0 is the top of the image: highest imaginary part.
        ys = self.upper_right.imag - (np.arange(self.height_px) + 0.5) * dy
        return xs[None, :] + 1j * ys[:, None]

    def to_pixel(self, z: complex) -> tuple[int, int]:
        """(col, row) of the pixel containing z."""
        fx = (z.real - self.lower_left.real) / (
            self.upper_right.real - self.lower_left.real
        )
        fy = (self.upper_right.imag - z.imag) / (
            self.upper_right.imag - self.lower_left.imag
        )
        col = int(np.clip(np.floor(fx * self.width_px), 0, self.width_px - 1))
        row = int(np.clip(np.floor(fy * self.height_px), 0, self.height_px - 1))
        return col, row


@dataclass(frozen=True)
class Image:
    """Row-major RGB8 raster, top row first."""

    pixels: np.ndarray  # (height, width, 3) uint8
    gray_pixels: int = 0

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=np.uint8)
        if p.ndim != 3 or p.shape[2] != 3:
            raise ValueError("pixels must have shape (height, width, 3)")
        p.setflags(write=False)
        object.__setattr__(self, "pixels", p)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def _hue_to_rgb(hue: np.ndarray) -> np.ndarray:
    """HSV -> RGB at S = V = 1, vectorized; hue in [0, 1)."""
    h6 = (hue % 1.0) * 6.0
    k = h6.astype(int) % 6
    x = 1.0 - np.abs(h6 % 2.0 - 1.0)
    ones = np.ones_like(x)
    zeros = np.zeros_like(x)
    r = np.select([k == 0, k == 1, k == 2, k == 3, k == 4, k == 5],
                  [ones, x, zeros, zeros, x, ones])
    g = np.select([k == 0, k == 1, k == 2, k == 3, k == 4, k == 5],
                  [x, ones, ones, x, zeros, zeros])
    b = np.select([k == 0, k == 1, k == 2, k == 3, k == 4, k == 5],
                  [zeros, zeros, x, ones, ones, x])
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)


def _rgb_to_hue_angle(rgb: np.ndarray) -> float:
    """Inverse of the full-saturation wheel; returns the angle in [0, 2*pi)."""
    r, g, b = (float(v) / 255.0 for v in rgb)
    mx, mn = max(r, g, b), min(r, g, b)
    c = mx - mn
    if c <= 1e-9:
        raise PortraitError("achromatic pixel on sampling circle")
    if mx == r:
        h6 = ((g - b) / c) % 6.0
    elif mx == g:
        h6 = (b - r) / c + 2.0
    else:
        h6 = (r - g) / c + 4.0
    return (h6 / 6.0) * 2.0 * np.pi


def render(f, window: Window, markers=()) -> Image:
    """Phase portrait of ``f`` over ``window`` with black marker disks."""
    zg = window.pixel_centers()
    with np.errstate(all="ignore"):
        values = np.asarray(f(zg), dtype=complex)
    mods = np.abs(values)
    degenerate = ~np.isfinite(mods) | (mods < MODULUS_FLOOR)
    hue = np.where(degenerate, 0.0, np.angle(values)) / (2.0 * np.pi) % 1.0
    pixels = _hue_to_rgb(hue)
    pixels[degenerate] = GRAY
    gray_count = int(degenerate.sum())

    if markers:
        radius = max(1, int(round(0.01 * min(window.width_px, window.height_px))))
        rows = np.arange(window.height_px)[:, None]
        cols = np.arange(window.width_px)[None, :]
        for marker in markers:
            col, row = window.to_pixel(complex(marker))
            disk = (rows - row) ** 2 + (cols - col) ** 2 <= radius**2
            pixels[disk] = (0, 0, 0)
    return Image(pixels=pixels, gray_pixels=gray_count)


def color_cycle_count(
    image: Image, center_px: tuple[int, int], radius_px: int
) -> int:
    """Net hue cycles along a pixel circle, with the same pi/3 step bound as
    the winding tracker; positive direction is counterclockwise in the plane
    (image rows run downward)."""
    col0, row0 = center_px
    if radius_px < 2:
        raise PortraitError("radius too small")
    if (
        col0 - radius_px < 0
        or row0 - radius_px < 0
        or col0 + radius_px >= image.width
        or row0 + radius_px >= image.height
    ):
        raise PortraitError("sampling circle does not fit inside the image")
    samples = max(64, int(np.ceil(2.0 * np.pi * radius_px * 4)))
    angles = np.linspace(0.0, 2.0 * np.pi, samples + 1)
    cols = np.clip(np.round(col0 + radius_px * np.cos(angles)), 0, image.width - 1)
    rows = np.clip(np.round(row0 - radius_px * np.sin(angles)), 0, image.height - 1)
    hues = []
    for c, r in zip(cols.astype(int), rows.astype(int)):
        hues.append(_rgb_to_hue_angle(image.pixels[r, c]))
    hues = np.asarray(hues)
    steps = (np.diff(hues) + np.pi) % (2.0 * np.pi) - np.pi
    if np.any(np.abs(steps) >= np.pi / 3.0):
        raise PortraitError("hue unwrapping failed; radius too small")
    turns = float(steps.sum()) / (2.0 * np.pi)
    value = int(round(turns))
    if abs(turns - value) >= 0.25:
        raise PortraitError(f"hue cycles {turns:.3f} not close to an integer")
    return value


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------


def ppm_bytes(image: Image) -> bytes:
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def write_ppm(image: Image, path) -> None:
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(image))


def write_png(image: Image, path) -> None:
    """Raw-pixel PNG via matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.image as mpimg

    mpimg.imsave(path, np.asarray(image.pixels), format="png")


def save_figure(
    image: Image,
    window: Window,
    path,
    *,
    markers=(),
    title: str | None = None,
) -> None:
    """Annotated matplotlib figure of the portrait (axes in plane units)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    extent = (
        window.lower_left.real,
        window.upper_right.real,
        window.lower_left.imag,
        window.upper_right.imag,
    )
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(np.asarray(image.pixels), extent=extent, origin="upper")
    for marker in markers:
        marker = complex(marker)
        ax.plot(marker.real, marker.imag, "ko", markersize=5)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
