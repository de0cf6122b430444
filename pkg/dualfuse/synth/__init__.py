"""Synthetic layered scenes with analytic ground truth, and brute-force oracles"""

from .synth_errors import SceneError, SceneSpecError
from .scene import Texture, Layer, SceneSpec, render_views, degrade_wide, generate_scene, default_suite
from .oracle import occlusion_oracle, iou
