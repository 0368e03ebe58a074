"""Indexed PPM images of Fatou rasters."""

from __future__ import annotations

import numpy as np

from .classify import FATOU, JULIA, NEAR_IND, UNRESOLVED, FatouRaster

# Fatou component k uses COMPONENT_COLORS[(k - 1) % len(COMPONENT_COLORS)]
COMPONENT_COLORS = (
    (31, 119, 180), (255, 127, 14), (44, 160, 44), (148, 103, 189), (140, 86, 75),
    (227, 119, 194), (188, 189, 34), (23, 190, 207), (174, 199, 232), (255, 187, 120),
)
JULIA_COLOR = (0, 0, 0)
NEAR_IND_COLOR = (255, 0, 0)
UNRESOLVED_COLOR = (128, 128, 128)


def raster_rgb(r: FatouRaster) -> np.ndarray:
    img = np.empty(r.verdicts.shape + (3,), dtype=np.uint8)
    img[r.verdicts == JULIA] = JULIA_COLOR
    img[r.verdicts == NEAR_IND] = NEAR_IND_COLOR
    img[r.verdicts == UNRESOLVED] = UNRESOLVED_COLOR
    pal = np.array(COMPONENT_COLORS, dtype=np.uint8)
    fat = r.verdicts == FATOU
    img[fat] = pal[(r.components[fat] - 1) % len(pal)]
    return img


def write_ppm(path, r: FatouRaster) -> None:
    """Binary PPM; row 0 of the raster is the bottom image row."""
    img = raster_rgb(r)[::-1]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{img.shape[1]} {img.shape[0]}\n255\n".encode())
        fh.write(np.ascontiguousarray(img).tobytes())
