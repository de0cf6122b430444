"""Target flow: the locally averaged flow the view transition moves towards"""
__all__ = ['target_flow']

import logging

import numpy as np

from dualfuse.imagecore import FlowField, BinaryMask, FusionConfig, box_mean
from .transition_errors import InvalidFlowError

logger = logging.getLogger(__name__)

DENOMINATOR_EPS = 1e-6
# |f| must beat the local mean magnitude by more than summed-area rounding noise
FOREGROUND_TOL = 1e-9


def _class_mean(uv, weight, fallback, k):
    num = box_mean(uv * weight[..., None], k)
    den = box_mean(weight, k)
    ok = den >= DENOMINATOR_EPS
    out = fallback.copy()
    out[ok] = num[ok] / den[ok][:, None]
    return out, int((~ok).sum())


def target_flow(f: FlowField, cfg: FusionConfig) -> tuple[FlowField, BinaryMask]:
    """Blend of the local foreground and background mean flows.

    F_M is the k x k mean flow; a pixel is foreground when |f| > |F_M|.
    F_F and F_B are the mask-weighted means of each class (falling back to
    F_M where a class is absent from the window), and the target is the k x k
    mean of (F_F + F_B) / 2.
    Returns:
        (fstar, foreground mask)
    Raises:
        InvalidFlowError: f has invalid pixels
    """
    if not f.fully_valid:
        raise InvalidFlowError(f"target_flow needs a fully valid field, {int((~f.valid).sum())} pixel(s) invalid")
    k = cfg.kernel
    uv = f.stack()
    fm = box_mean(uv, k)
    fg = f.magnitude() > np.hypot(fm[..., 0], fm[..., 1]) + FOREGROUND_TOL

    weight = fg.astype(np.float64)
    ff, ff_fallback = _class_mean(uv, weight, fm, k)
    fb, fb_fallback = _class_mean(uv, 1.0 - weight, fm, k)
    logger.debug("target_flow k=%d: %d foreground px, fallback F_F %d px, F_B %d px", k, int(fg.sum()), ff_fallback, fb_fallback)

    fstar = box_mean((ff + fb) / 2, k)
    return FlowField.from_stack(fstar), BinaryMask(fg)
