"""Raster test shapes shared by the test modules."""

import numpy as np


def bean_with_spot(thickness=1.0):
    """Thin closed band shaped like a bean with two left lobes, plus a spot.

    The band follows the boundary of the union of a large disc and two
    smaller discs on its left; the lower lobe reaches further left than the
    upper one. Returns the mask and the column range of the spot.
    """
    H, W = 64, 96
    rows, cols = np.mgrid[0:H, 0:W]
    x = cols + 0.5
    y = H - (rows + 0.5)
    discs = [((56.0, 32.0), 20.0), ((37.0, 42.0), 9.0), ((34.0, 22.0), 9.0)]
    sd = np.min([np.hypot(x - cx, y - cy) - r for (cx, cy), r in discs], axis=0)
    mask = np.abs(sd) <= thickness
    spot = np.hypot(x - 60.0, y - 5.5) <= 2.0
    return mask | spot, spot
