"""Occlusion statistics and the transformation bound check, as key=value records"""
__all__ = ['transition_metrics', 'result_metrics', 'stage_time_values']

from typing import Optional

import numpy as np

from dualfuse.imagecore import FlowField, BinaryMask, DistanceMap, FusionConfig
from dualfuse.occlusion import compute_occlusion, occlusion_area_pct


def transition_metrics(f: FlowField, fto: FlowField, cfg: FusionConfig, fhat: Optional[FlowField] = None,
                       dist: Optional[DistanceMap] = None, occ_original: Optional[BinaryMask] = None,
                       occ_transformed: Optional[BinaryMask] = None) -> dict:
    """Occluded area of the original and transformed flows, and how far the
    adjustment went.

    occ_ratio is transformed / original (0 when the original has no
    occlusion). t_usage_pct is the share of overlap pixels that can take
    telephoto content. bound_excess = max(|fhat - f| - ratio * dist) per
    component, never positive for a clipped flow.
    """
    if occ_original is None:
        occ_original = compute_occlusion(f, cfg)
    if occ_transformed is None:
        occ_transformed = compute_occlusion(fto, cfg)
    before = occlusion_area_pct(occ_original)
    after = occlusion_area_pct(occ_transformed)
    values = {
        'occ_pct_original': before,
        'occ_pct_transformed': after,
        'occ_ratio': after / before if before > 0 else 0.0,
        't_usage_pct_original': 100.0 - before,
        't_usage_pct_transformed': 100.0 - after,
    }
    if fhat is not None:
        du = np.abs(fhat.u - f.u)
        dv = np.abs(fhat.v - f.v)
        values['max_transform'] = float(max(du.max(), dv.max()))
        if dist is not None:
            bound = cfg.ratio * dist.d
            values['bound_excess'] = float(max((du - bound).max(), (dv - bound).max()))
    return values


def result_metrics(result, cfg: FusionConfig) -> dict:
    """transition_metrics for a FusionResult"""
    return transition_metrics(result.flow, result.fto, cfg, result.fhat, result.distance,
                              result.occ_original, result.occ_transformed)


def stage_time_values(timings) -> dict:
    return {f"stage_time.{name}": float(seconds) for name, seconds in timings.items()}
