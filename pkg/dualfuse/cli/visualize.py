"""Diagnostic figure of a fusion run (matplotlib, off-screen)"""
__all__ = ['OCCLUSION_COLOR', 'occlusion_overlay', 'flow_panel']

import logging
from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.colors import to_rgb
from matplotlib.figure import Figure

from dualfuse.imagecore import ImageBuffer, BinaryMask

logger = logging.getLogger(__name__)

OCCLUSION_COLOR = 'tab:red'


def occlusion_overlay(img: ImageBuffer, occ: BinaryMask, color=OCCLUSION_COLOR, alpha=0.6) -> np.ndarray:
    """RGB array of `img` with occluded pixels tinted"""
    rgb = np.repeat(img.data, 3, axis=2) if img.channels == 1 else img.data.copy()
    rgb[occ.bits] = (1 - alpha) * rgb[occ.bits] + alpha * np.array(to_rgb(color))
    return np.clip(rgb, 0.0, 1.0)


def flow_panel(path, result, dpi=100):
    """Save a 2 x 3 panel: input, adjusted and transformed flow magnitudes, the distance map and the
    occlusion of both flows over the wide overlap image"""
    panels = [
        ('|flow|', result.flow.magnitude(), 'viridis'),
        ('|adjusted flow|', result.fhat.magnitude(), 'viridis'),
        ('|transformed flow|', result.fto.magnitude(), 'viridis'),
        ('distance', result.distance.d, 'magma'),
        (f'occlusion, input flow ({result.occ_original.count()} px)',
         occlusion_overlay(result.wide_overlap, result.occ_original), None),
        (f'occlusion, transformed flow ({result.occ_transformed.count()} px)',
         occlusion_overlay(result.wide_overlap, result.occ_transformed), None),
    ]
    fig = Figure(figsize=(12, 7), dpi=dpi)
    FigureCanvasAgg(fig)
    for i, (title, data, cmap) in enumerate(panels):
        ax = fig.add_subplot(2, 3, i + 1)
        im = ax.imshow(data, cmap=cmap, interpolation='nearest')
        if cmap is not None:
            fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04)
        ax.set_title(title, fontsize=9)
        ax.set_axis_off()
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    logger.debug("Wrote %s", path)
