"""Brute-force references used to check the fast occlusion detector"""
__all__ = ['occlusion_oracle', 'iou']

import numpy as np

from dualfuse.imagecore import FlowField, BinaryMask
from dualfuse.viewtransition import InvalidFlowError

OWNER_TOL = 1e-9


def occlusion_oracle(f: FlowField) -> BinaryMask:
    """Wide pixels whose telephoto sample is taken by a nearer pixel.

    Every wide pixel is pushed to its telephoto position round(p + f(p));
    each telephoto pixel belongs to the largest |f| landing on it, and wide
    pixels with a smaller |f| at the same spot are occluded. Pixels landing
    outside the frame are never occluded.
    """
    if not f.fully_valid:
        raise InvalidFlowError("occlusion_oracle needs a fully valid flow")
    h, w = f.shape
    ys, xs = np.mgrid[0:h, 0:w]
    tx = np.floor(xs + f.u + 0.5).astype(np.int64)
    ty = np.floor(ys + f.v + 0.5).astype(np.int64)
    inside = (tx >= 0) & (tx < w) & (ty >= 0) & (ty < h)
    target = np.where(inside, ty * w + tx, 0)
    mag = f.magnitude()

    owner = np.full(h * w, -np.inf)
    np.maximum.at(owner, target[inside], mag[inside])
    occ = inside & (mag < owner[target] - OWNER_TOL)
    return BinaryMask(occ)


def iou(a: BinaryMask, b: BinaryMask) -> float:
    """Intersection over union; 1.0 when both masks are empty"""
    union = (a.bits | b.bits).sum()
    if union == 0:
        return 1.0
    return float((a.bits & b.bits).sum() / union)
