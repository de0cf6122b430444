"""The fusion pipeline: flow in, overlap and full-view images out.

Stages run in a fixed order on one thread. Each finished stage notifies
the pipeline's observers, which can log or time it.
"""
__all__ = ['STAGES', 'FusionResult', 'Pipeline', 'StageLogger', 'StageTimer', 'default_overlap_rect', 'run_fusion']

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from dualfuse.errors import FusionError
from dualfuse.imagecore import (ImageBuffer, FlowField, BinaryMask, DistanceMap, FusionConfig,
                                DimensionMismatchError, resize_bilinear)
from dualfuse.flowio import estimate_flow_diagnostic
from dualfuse.warp import multi_warp_average
from dualfuse.viewtransition import target_flow, distance_map, clip_flow, fill_empty, transform_flow, warp_tele
from dualfuse.occlusion import compute_occlusion
from dualfuse.toneblend import regional_histogram_match, fuse_overlap, compose_full_view
from dualfuse.utils.observe import Observable, Observer
from .cli_errors import StageError

logger = logging.getLogger(__name__)

STAGES = (
    'overlap', 'flow', 'target_flow', 'distance_map', 'clip_flow', 'transform_flow', 'warp_tele',
    'warp_wide', 'occlusion', 'tone_match', 'fuse_overlap', 'compose_full_view',
)


def default_overlap_rect(width, height) -> tuple[int, int, int, int]:
    """Centered rectangle of half the frame size, as (x, y, w, h)"""
    return width // 4, height // 4, max(1, width // 2), max(1, height // 2)


@dataclass(eq=False)
class FusionResult:
    """Every intermediate of one run (None for stages not run)"""
    flow: FlowField
    fstar: Optional[FlowField] = None
    foreground: Optional[BinaryMask] = None
    distance: Optional[DistanceMap] = None
    fhat: Optional[FlowField] = None
    fto: Optional[FlowField] = None
    tele_overlap: Optional[ImageBuffer] = None # warped telephoto
    tele_valid: Optional[BinaryMask] = None
    wide_overlap: Optional[ImageBuffer] = None # warped wide
    wide_hits: Optional[BinaryMask] = None
    occ_original: Optional[BinaryMask] = None
    occ_transformed: Optional[BinaryMask] = None
    matched: Optional[ImageBuffer] = None # tone-matched tele_overlap
    overlap: Optional[ImageBuffer] = None # fused overlap
    full: Optional[ImageBuffer] = None # fused full frame
    rect: Optional[tuple] = None
    timings: dict = field(default_factory=dict)


class Pipeline(Observable):
    """Runs the fusion stages for one configuration.

    After each stage `stage` and `elapsed` describe it and observers are
    notified. Failures surface as StageError naming the stage.
    """

    def __init__(self, cfg: Optional[FusionConfig] = None):
        super().__init__()
        self.cfg = cfg or FusionConfig()
        self.stage = None
        self.elapsed = 0.0
        self.timings = {}

    @Observable.observed
    def _finished(self, name, elapsed):
        self.stage = name
        self.elapsed = elapsed
        self.timings[name] = self.timings.get(name, 0.0) + elapsed

    def _run(self, name, func, *args, **kw):
        start = time.perf_counter()
        try:
            out = func(*args, **kw)
        except FusionError as e:
            raise StageError(name, str(e)) from e
        self._finished(name, time.perf_counter() - start)
        return out

    def _prepare_flow(self, wide: ImageBuffer, tele: ImageBuffer, flow: Optional[FlowField]) -> FlowField:
        estimated = flow is None
        if estimated:
            cfg = self.cfg
            flow = estimate_flow_diagnostic(wide, tele, cfg.flow_levels, cfg.search_radius, cfg.flow_block)
        elif flow.shape != wide.shape:
            raise DimensionMismatchError(f"flow {flow.shape} does not match the overlap grid {wide.shape}")
        if estimated and not flow.valid.any():
            logger.warning("Estimated flow has no confident pixels; using its displacement as is")
            flow = flow.with_valid(np.ones(flow.shape, bool))
        elif not flow.fully_valid:
            logger.warning("Flow has %d invalid px; filling them before the transition", int((~flow.valid).sum()))
            flow = fill_empty(flow)
        return flow

    def transition(self, f: FlowField, result: Optional[FusionResult] = None) -> FusionResult:
        """Flow-only stages: target flow, distance, clip and coordinate revision"""
        cfg = self.cfg
        result = result or FusionResult(flow=f)
        result.fstar, result.foreground = self._run('target_flow', target_flow, f, cfg)
        result.distance = self._run('distance_map', distance_map, f, cfg)
        result.fhat = self._run('clip_flow', clip_flow, f, result.fstar, result.distance, cfg.ratio)
        result.fto = self._run('transform_flow', transform_flow, f, result.fhat, cfg, f.magnitude())
        return result

    def _warp_wide(self, wide: ImageBuffer, f: FlowField, fhat: FlowField):
        disp = FlowField(fhat.u - f.u, fhat.v - f.v)
        warped = multi_warp_average(wide, disp, self.cfg, f.magnitude())
        holes = ~warped.validity.bits
        data = warped.image.data.copy()
        data[holes] = wide.data[holes] # unhit pixels keep the wide sample in place
        if holes.any():
            logger.debug("warp_wide: %d unhit px taken from the wide image", int(holes.sum()))
        return ImageBuffer(data), warped.validity

    def run(self, wide_full: ImageBuffer, tele: ImageBuffer, flow: Optional[FlowField] = None,
            rect: Optional[tuple] = None) -> FusionResult:
        """Fuse one wide / telephoto pair.
        Args:
            wide_full: the whole wide frame
            tele: telephoto image; resampled onto the overlap grid if sizes differ
            flow: backward flow on the overlap grid (estimated when None)
            rect: overlap (x, y, w, h) in wide_full pixels; centered half size by default
        Returns:
            FusionResult with every intermediate and per-stage timings
        Raises:
            StageError: naming the stage that failed
        """
        cfg = self.cfg
        self.timings = {}
        rect = tuple(rect) if rect is not None else default_overlap_rect(wide_full.width, wide_full.height)
        x, y, w, h = rect
        logger.info("Fusing %dx%d frame, overlap %dx%d at (%d, %d)", wide_full.width, wide_full.height, w, h, x, y)

        def crop():
            fw, fh = wide_full.width, wide_full.height
            if w < 1 or h < 1 or x < 0 or y < 0 or x + w > fw or y + h > fh:
                raise DimensionMismatchError(f"overlap rect {rect} does not fit the {fw}x{fh} wide frame")
            if tele.channels != wide_full.channels:
                raise DimensionMismatchError(f"tele has {tele.channels} channel(s), wide has {wide_full.channels}")
            tele_o = tele if tele.shape == (h, w) else resize_bilinear(tele, h, w)
            return wide_full.crop(x, y, w, h), tele_o

        wide, tele_o = self._run('overlap', crop)
        f = self._run('flow', self._prepare_flow, wide, tele_o, flow)
        result = self.transition(f, FusionResult(flow=f, rect=rect))

        result.tele_overlap, result.tele_valid = self._run('warp_tele', warp_tele, tele_o, result.fto, True)
        result.wide_overlap, result.wide_hits = self._run('warp_wide', self._warp_wide, wide, f, result.fhat)

        def occlusion():
            return compute_occlusion(f, cfg), compute_occlusion(result.fto, cfg)
        result.occ_original, result.occ_transformed = self._run('occlusion', occlusion)
        logger.info("Occluded area %.2f%% -> %.2f%%", 100 * result.occ_original.count() / f.size,
                    100 * result.occ_transformed.count() / f.size)

        usable = BinaryMask(result.tele_valid.bits & result.wide_hits.bits & ~result.occ_transformed.bits)
        result.matched = self._run('tone_match', regional_histogram_match,
                                   result.tele_overlap, result.wide_overlap, usable, cfg)
        result.overlap = self._run('fuse_overlap', fuse_overlap, result.tele_overlap, result.wide_overlap,
                                   result.occ_transformed, cfg, matched=result.matched)
        result.full = self._run('compose_full_view', compose_full_view, result.overlap, wide_full, (x, y), cfg)
        result.timings = dict(self.timings)
        return result


class StageLogger(Observer):
    """Logs every finished stage with its wall time"""

    def __init__(self, level=logging.INFO):
        self.level = level

    def update(self, observable):
        logger.log(self.level, "Stage %s done in %.3f s", observable.stage, observable.elapsed)


class StageTimer(Observer):
    """Collects stage wall times (seconds); repeated stages add up"""

    def __init__(self):
        self.times = {}

    def update(self, observable):
        self.times[observable.stage] = self.times.get(observable.stage, 0.0) + observable.elapsed


def run_fusion(wide_full: ImageBuffer, tele: ImageBuffer, flow: Optional[FlowField] = None,
               rect: Optional[tuple] = None, cfg: Optional[FusionConfig] = None, observers=()) -> FusionResult:
    """One-call wrapper around Pipeline.run"""
    pipeline = Pipeline(cfg)
    for observer in observers:
        pipeline.attach(observer)
    return pipeline.run(wide_full, tele, flow, rect)
