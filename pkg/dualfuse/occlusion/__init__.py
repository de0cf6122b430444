"""Occlusion detection from one backward flow, and soft blending weights"""

from .occlusion import NEIGHBORS, foreground_mask, compute_occlusion, soften_mask, occlusion_area_pct
