"""Tunable constants for the fusion pipeline"""
__all__ = ['FusionConfig']

import dataclasses
import logging
import math
from dataclasses import dataclass
from functools import wraps
from typing import Optional

from dualfuse.utils import keyvalue
from .core_errors import ConfigError

logger = logging.getLogger(__name__)

_TRUE = ('1', 'true', 'yes', 'on')
_FALSE = ('0', 'false', 'no', 'off')


@dataclass(frozen=True)
class FusionConfig:
    """All constants of the method, with their default values.

    kernel: box-filter window (pixels); even sizes round up to the next odd
    ratio: transformation budget per pixel of distance to the boundary
    gradient_threshold: flow-magnitude jump that marks a non-connected point
    rhe_block, rhe_stride: regional histogram matching tiling
    occ_soft_width, overlap_soft_width: blend ramp widths (pixels)
    offset_start, offset_end, offset_step: sub-pixel jitter grid of the W warp
    pyramid_levels: None picks the level count from the image size
    """
    kernel: int = 600
    ratio: float = 0.01
    gradient_threshold: float = 3.0
    rhe_block: int = 200
    rhe_stride: int = 30
    occ_soft_width: int = 15
    overlap_soft_width: int = 100
    offset_start: float = -0.5
    offset_end: float = 0.5
    offset_step: float = 0.2
    pyramid_levels: Optional[int] = None

    # diagnostic flow estimator
    flow_levels: int = 3
    search_radius: int = 4
    flow_block: int = 7

    min_block_valid: int = 16
    distance_mode: str = 'ray' # 'ray' | 'baseline'
    transition_value: str = 'literal' # 'literal' | 'ray'
    multi_warp: bool = True
    workers: int = 1

    DISTANCE_MODES = ('ray', 'baseline')
    TRANSITION_VALUES = ('literal', 'ray')

    def __post_init__(self):
        # frozen: normalize through object.__setattr__
        if isinstance(self.kernel, bool) or int(self.kernel) != self.kernel or self.kernel < 1:
            raise ConfigError(f"kernel must be a positive integer, got {self.kernel!r}")
        if self.kernel % 2 == 0:
            logger.debug("Even kernel %d rounded up to %d", self.kernel, self.kernel + 1)
            object.__setattr__(self, 'kernel', int(self.kernel) + 1)

        checks = [
            (self.ratio >= 0, f"ratio must be >= 0, got {self.ratio}"),
            (self.gradient_threshold >= 0, f"gradient_threshold must be >= 0, got {self.gradient_threshold}"),
            (self.rhe_block >= 1, f"rhe_block must be >= 1, got {self.rhe_block}"),
            (1 <= self.rhe_stride <= self.rhe_block, f"rhe_stride must be in [1, rhe_block], got {self.rhe_stride}"),
            (self.occ_soft_width >= 0, f"occ_soft_width must be >= 0, got {self.occ_soft_width}"),
            (self.overlap_soft_width >= 0, f"overlap_soft_width must be >= 0, got {self.overlap_soft_width}"),
            (self.offset_step > 0, f"offset_step must be > 0, got {self.offset_step}"),
            (self.offset_end >= self.offset_start, "offset_end must not be below offset_start"),
            (self.pyramid_levels is None or self.pyramid_levels >= 1, f"pyramid_levels must be >= 1, got {self.pyramid_levels}"),
            (self.flow_levels >= 1, f"flow_levels must be >= 1, got {self.flow_levels}"),
            (self.search_radius >= 0, f"search_radius must be >= 0, got {self.search_radius}"),
            (self.flow_block >= 1 and self.flow_block % 2 == 1, f"flow_block must be a positive odd size, got {self.flow_block}"),
            (self.min_block_valid >= 1, f"min_block_valid must be >= 1, got {self.min_block_valid}"),
            (self.distance_mode in self.DISTANCE_MODES, f"distance_mode must be one of {self.DISTANCE_MODES}, got {self.distance_mode!r}"),
            (self.transition_value in self.TRANSITION_VALUES, f"transition_value must be one of {self.TRANSITION_VALUES}, got {self.transition_value!r}"),
            (self.workers >= 1, f"workers must be >= 1, got {self.workers}"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def offset_grid(self) -> list[float]:
        """Jitter offsets start, start+step, ... up to end (inclusive), rounded to 1e-6.
        Defaults give [-0.5, -0.3, -0.1, 0.1, 0.3, 0.5].
        """
        n = math.floor((self.offset_end - self.offset_start) / self.offset_step + 1e-9) + 1
        return [round(self.offset_start + self.offset_step * i, 6) for i in range(n)]

    def replace(self, **changes) -> 'FusionConfig':
        """Copy with some fields changed; None values are ignored"""
        changes = {k: v for k, v in changes.items() if v is not None}
        try:
            return dataclasses.replace(self, **changes)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    def to_mapping(self) -> dict:
        values = dataclasses.asdict(self)
        if values['pyramid_levels'] is None:
            values['pyramid_levels'] = 'auto'
        return values

    @staticmethod
    def handle_error(func):
        """Wraps file and parse errors as ConfigError"""
        @wraps(func)
        def magic(*args, **kw):
            try:
                return func(*args, **kw)
            except OSError as e:
                raise ConfigError(f"Could not read config: {e}") from e
            except ValueError as e:
                raise ConfigError(f"Bad config: {e}") from e
        return magic

    @classmethod
    def _coerce(cls, name, raw):
        if not isinstance(raw, str):
            return raw
        kind = {f.name: f.type for f in dataclasses.fields(cls)}[name]
        text = raw.strip()
        if name == 'pyramid_levels':
            return None if text.lower() in ('auto', '') else int(text)
        if kind in (bool, 'bool'):
            if text.lower() in _TRUE:
                return True
            if text.lower() in _FALSE:
                return False
            raise ValueError(f"{name}: expected a boolean, got '{raw}'")
        if kind in (int, 'int'):
            return int(text)
        if kind in (float, 'float'):
            return float(text)
        return text

    @classmethod
    @handle_error
    def from_mapping(cls, values, base: Optional['FusionConfig'] = None) -> 'FusionConfig':
        """Build a config from raw (string or typed) values layered over `base`.
        Raises:
            ConfigError: unknown key or unparsable value
        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown config key(s): {', '.join(unknown)}")
        typed = {name: cls._coerce(name, raw) for name, raw in values.items()}
        base = base or cls()
        return dataclasses.replace(base, **typed)

    @classmethod
    @handle_error
    def from_file(cls, path, base: Optional['FusionConfig'] = None) -> 'FusionConfig':
        """Read a key=value config file (see utils.keyvalue)"""
        logger.debug("Reading config from %s", path)
        return cls.from_mapping(keyvalue.load(path), base)
