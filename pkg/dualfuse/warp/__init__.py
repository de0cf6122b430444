"""Backward / forward warping and the multi-offset warp average"""

from .warp import WarpResult, backward_warp, forward_warp, multi_warp_average
