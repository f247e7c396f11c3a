#!/usr/bin/env python3
"""Regenerate data/sample.ppm, the bundled 256x256 test image.

The picture is a procedural still life: a lit backdrop, a table edge, and a
handful of shaded glossy blobs. It is smooth with sharp object boundaries,
which is the regime image completion experiments care about.
"""

import argparse
import pathlib

import numpy as np


def render(size: int = 256, seed: int = 20160401) -> np.ndarray:
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size].astype(np.float64) / (size - 1)

    # Backdrop: warm-to-cool vertical gradient with a soft light falloff.
    top = np.array([0.85, 0.78, 0.62])
    bottom = np.array([0.35, 0.28, 0.30])
    light = np.exp(-((x - 0.3) ** 2 + (y - 0.2) ** 2) / 0.35)[..., None]
    img = (1 - y[..., None]) * top + y[..., None] * bottom
    img = img * (0.75 + 0.25 * light)

    # Table top below a slanted edge.
    edge = 0.62 + 0.06 * x
    table = (y > edge)[..., None]
    wood = np.array([0.45, 0.27, 0.14]) * (0.85 + 0.15 * np.sin(40 * x + 6 * y))[..., None]
    img = np.where(table, wood, img)

    blobs = [
        # cx, cy, rx, ry, angle, color
        (0.30, 0.62, 0.17, 0.13, 0.3, (0.80, 0.10, 0.08)),
        (0.58, 0.66, 0.15, 0.12, -0.4, (0.25, 0.60, 0.12)),
        (0.78, 0.58, 0.12, 0.16, 0.2, (0.92, 0.72, 0.10)),
        (0.47, 0.45, 0.11, 0.09, 0.9, (0.70, 0.05, 0.12)),
        (0.17, 0.80, 0.10, 0.08, -0.2, (0.95, 0.55, 0.10)),
        (0.70, 0.82, 0.13, 0.09, 0.1, (0.15, 0.45, 0.10)),
    ]
    for cx, cy, rx, ry, ang, color in blobs:
        c, s = np.cos(ang), np.sin(ang)
        u = ((x - cx) * c + (y - cy) * s) / rx
        v = (-(x - cx) * s + (y - cy) * c) / ry
        r2 = u ** 2 + v ** 2
        inside = r2 < 1.0
        # Lambert-ish shading plus a specular highlight up and to the left.
        nz = np.sqrt(np.clip(1.0 - r2, 0.0, 1.0))
        shade = 0.35 + 0.65 * np.clip(-0.4 * u - 0.5 * v + 0.75 * nz, 0.0, 1.0)
        spec = np.exp(-((u + 0.35) ** 2 + (v + 0.45) ** 2) / 0.02)
        col = np.array(color)[None, None, :] * shade[..., None] + 0.8 * spec[..., None]
        img = np.where(inside[..., None], col, img)

    img += rng.normal(0.0, 0.01, img.shape)
    return np.clip(img, 0.0, 1.0)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "sample.ppm"))
    args = parser.parse_args()
    img = np.round(render() * 255).astype(np.uint8)
    h, w, _ = img.shape
    with open(args.out, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode())
        f.write(img.tobytes())


if __name__ == "__main__":
    main()
