#!/usr/bin/env python3
"""Regenerate the CC0 photo fixtures in fixtures/.

Each fixture is a 192x192 crop of a public-domain or CC0 photograph from
the scikit-image sample collection, resized with anti-aliasing so the crop
keeps photographic statistics, and written as a binary pixmap (P5 for
grayscale, P6 for color, maxval 255).

The committed pixmaps are the source of truth; this script documents their
provenance and lets them be rebuilt (byte output can drift across
scikit-image versions). Requires scikit-image and numpy.

Run from the repository root:  python3 scripts/make_fixtures.py
"""

import os

import numpy as np
from skimage import data, transform

SIZE = 192

# Name -> attribute of skimage.data. All entries are CC0 or public domain
# per the scikit-image data docstrings.
SOURCES = [
    "astronaut",
    "brick",
    "camera",
    "chelsea",
    "coffee",
    "grass",
    "gravel",
    "hubble_deep_field",
    "immunohistochemistry",
    "rocket",
]


def to_uint8(arr):
    arr = np.asarray(arr)
    if arr.ndim == 3 and arr.shape[2] == 4:
        arr = arr[:, :, :3]
    if arr.dtype == np.uint8:
        return arr
    arr = arr.astype(float)
    lo, hi = arr.min(), arr.max()
    return np.clip(np.round(255 * (arr - lo) / max(hi - lo, 1e-9)), 0, 255).astype(np.uint8)


def crop_resize(arr):
    h, w = arr.shape[:2]
    scale = SIZE / min(h, w)
    out_shape = (max(SIZE, int(round(h * scale))), max(SIZE, int(round(w * scale))))
    resized = transform.resize(arr, out_shape, anti_aliasing=True, preserve_range=True)
    resized = np.clip(np.round(resized), 0, 255).astype(np.uint8)
    y0 = (resized.shape[0] - SIZE) // 2
    x0 = (resized.shape[1] - SIZE) // 2
    return resized[y0 : y0 + SIZE, x0 : x0 + SIZE]


def save_pixmap(arr, path):
    with open(path, "wb") as f:
        if arr.ndim == 2:
            f.write(b"P5\n%d %d\n255\n" % (arr.shape[1], arr.shape[0]))
        else:
            f.write(b"P6\n%d %d\n255\n" % (arr.shape[1], arr.shape[0]))
        f.write(arr.tobytes())


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "fixtures")
    os.makedirs(out_dir, exist_ok=True)
    for name in SOURCES:
        arr = to_uint8(getattr(data, name)())
        arr = crop_resize(arr)
        ext = "pgm" if arr.ndim == 2 else "ppm"
        path = os.path.join(out_dir, f"{name}.{ext}")
        save_pixmap(arr, path)
        print(f"wrote {path} ({arr.shape[1]}x{arr.shape[0]}, {ext})")


if __name__ == "__main__":
    main()
