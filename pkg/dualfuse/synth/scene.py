"""Layered synthetic scenes seen by a wide and a telephoto camera.

A scene is a textured background plus rectangular layers, back to front.
Each layer (and the background) has a disparity: a scene point drawn at
wide pixel p appears at p - disparity in the telephoto view, so nearer
layers (larger disparity) move further up / left. The ground truth flow is
the backward flow on the wide grid, -disparity of the visible layer.

The telephoto view is rendered clean. The wide view is blurred, tone
shifted and noised to mimic the weaker camera.
"""
__all__ = ['Texture', 'Layer', 'SceneSpec', 'render_views', 'degrade_wide', 'generate_scene', 'default_suite']

import dataclasses
import logging
from dataclasses import dataclass, field
from functools import wraps
from typing import Optional

import numpy as np
from scipy import ndimage

from dualfuse.imagecore import ImageBuffer, FlowField, BinaryMask
from dualfuse.utils import keyvalue
from .synth_errors import SceneSpecError

logger = logging.getLogger(__name__)

NOISE_PERIOD = 64 # lattice size of the value noise


def handle_error(func):
    """Wraps parse and file errors as SceneSpecError"""
    @wraps(func)
    def magic(*args, **kw):
        try:
            return func(*args, **kw)
        except (ValueError, TypeError, IndexError) as e:
            raise SceneSpecError(f"Bad scene description: {e}") from e
        except OSError as e:
            raise SceneSpecError(f"Could not read scene: {e}") from e
    return magic


def _floats(text, n):
    values = tuple(float(s) for s in text.split(','))
    if len(values) != n:
        raise ValueError(f"expected {n} comma-separated numbers, got '{text}'")
    return values


def _num(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(int(v))


def _fmt(values):
    return ','.join(_num(v) for v in values)


@dataclass(frozen=True)
class Texture:
    """Procedural texture: color + contrast * (pattern - 0.5), pattern in [0, 1].

    checker: squares of `scale` px; gradient: sinusoid of period `scale` at a
    seeded angle; noise: bilinear value noise on a `scale` px lattice.
    """
    kind: str = 'noise'
    seed: int = 0
    scale: float = 8.0
    contrast: float = 0.5
    color: tuple = (0.5, 0.5, 0.5)

    KINDS = ('checker', 'gradient', 'noise')

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise SceneSpecError(f"Texture kind must be one of {self.KINDS}, got {self.kind!r}")
        if self.scale <= 0:
            raise SceneSpecError(f"Texture scale must be > 0, got {self.scale}")
        if len(self.color) != 3:
            raise SceneSpecError(f"Texture color needs 3 components, got {self.color}")

    def pattern(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64) / self.scale
        ys = np.asarray(ys, dtype=np.float64) / self.scale
        if self.kind == 'checker':
            return ((np.floor(xs) + np.floor(ys)) % 2).astype(np.float64)
        rng = np.random.default_rng(self.seed)
        if self.kind == 'gradient':
            angle = rng.uniform(0, np.pi)
            return 0.5 + 0.5 * np.sin(2 * np.pi * (xs * np.cos(angle) + ys * np.sin(angle)))
        lattice = rng.random((NOISE_PERIOD, NOISE_PERIOD))
        x0, y0 = np.floor(xs), np.floor(ys)
        fx, fy = xs - x0, ys - y0
        x0 = x0.astype(np.int64) % NOISE_PERIOD
        y0 = y0.astype(np.int64) % NOISE_PERIOD
        x1, y1 = (x0 + 1) % NOISE_PERIOD, (y0 + 1) % NOISE_PERIOD
        top = lattice[y0, x0] * (1 - fx) + lattice[y0, x1] * fx
        bottom = lattice[y1, x0] * (1 - fx) + lattice[y1, x1] * fx
        return top * (1 - fy) + bottom * fy

    def render(self, xs, ys) -> np.ndarray:
        """H x W x 3 colors at scene coordinates (xs, ys)"""
        p = self.pattern(xs, ys)[..., None] - 0.5
        return np.clip(np.asarray(self.color, dtype=np.float64) + self.contrast * p, 0.0, 1.0)

    def format(self) -> str:
        return f"{self.kind} {self.seed} {_num(self.scale)} {_num(self.contrast)} {_fmt(self.color)}"

    @classmethod
    def parse(cls, text) -> 'Texture':
        """`kind seed scale contrast r,g,b` (trailing fields optional)"""
        parts = text.split()
        if not parts:
            raise ValueError("empty texture")
        kw = {'kind': parts[0]}
        if len(parts) > 1:
            kw['seed'] = int(parts[1])
        if len(parts) > 2:
            kw['scale'] = float(parts[2])
        if len(parts) > 3:
            kw['contrast'] = float(parts[3])
        if len(parts) > 4:
            kw['color'] = _floats(parts[4], 3)
        if len(parts) > 5:
            raise ValueError(f"too many texture fields in '{text}'")
        return cls(**kw)


@dataclass(frozen=True)
class Layer:
    """Rectangle (x, y, w, h) in wide-frame pixels, moving by `disparity` (du, dv)"""
    rect: tuple
    disparity: tuple
    texture: Texture = field(default_factory=Texture)

    def covers(self, xs, ys) -> np.ndarray:
        x, y, w, h = self.rect
        return (xs >= x) & (xs < x + w) & (ys >= y) & (ys < y + h)

    def format(self) -> str:
        return f"{_fmt(self.rect)} {_fmt(self.disparity)} {self.texture.format()}"

    @classmethod
    def parse(cls, text) -> 'Layer':
        """`x,y,w,h du,dv <texture>`"""
        rect, disparity, texture = text.split(None, 2)
        return cls(tuple(int(v) for v in _floats(rect, 4)), _floats(disparity, 2), Texture.parse(texture))


@dataclass(frozen=True)
class SceneSpec:
    """Scene geometry plus the wide camera's degradations.

    Layers are listed back to front, and disparity magnitudes never shrink
    in that order (the background comes first). Every layer lies inside the
    frame and every |disparity| stays below min(width, height) / 4.
    """
    width: int = 256
    height: int = 256
    background: Texture = field(default_factory=Texture)
    background_disparity: tuple = (0.0, 0.0)
    layers: tuple = ()
    tone_offset: float = 0.0 # brightness added to the wide view
    tone_gain: float = 1.0 # contrast of the wide view
    noise_sigma: float = 0.0
    blur_sigma: float = 1.5
    seed: int = 0 # wide-view noise

    def __post_init__(self):
        object.__setattr__(self, 'layers', tuple(self.layers))
        object.__setattr__(self, 'background_disparity', tuple(float(v) for v in self.background_disparity))
        if self.width < 1 or self.height < 1:
            raise SceneSpecError(f"Scene size must be positive, got {self.width}x{self.height}")
        if self.noise_sigma < 0 or self.blur_sigma < 0 or self.tone_gain < 0:
            raise SceneSpecError("noise_sigma, blur_sigma and tone_gain must be >= 0")
        limit = min(self.width, self.height) / 4
        last = np.hypot(*self.background_disparity)
        if last >= limit:
            raise SceneSpecError(f"Background disparity {self.background_disparity} not below {limit}")
        for i, layer in enumerate(self.layers):
            x, y, w, h = layer.rect
            if w < 1 or h < 1 or x < 0 or y < 0 or x + w > self.width or y + h > self.height:
                raise SceneSpecError(f"Layer {i} rect {layer.rect} is outside the {self.width}x{self.height} frame")
            mag = np.hypot(*layer.disparity)
            if mag >= limit:
                raise SceneSpecError(f"Layer {i} disparity {layer.disparity} not below {limit}")
            if mag < last:
                raise SceneSpecError(f"Layer {i} disparity {layer.disparity} must not be below the layers behind it")
            last = mag

    def disparities(self) -> list[tuple]:
        """Background first, then layers back to front"""
        return [self.background_disparity] + [tuple(layer.disparity) for layer in self.layers]

    def to_mapping(self) -> dict:
        return {
            'width': self.width,
            'height': self.height,
            'background': self.background.format(),
            'background_disparity': _fmt(self.background_disparity),
            'layer': [layer.format() for layer in self.layers],
            'tone_offset': _num(self.tone_offset),
            'tone_gain': _num(self.tone_gain),
            'noise_sigma': _num(self.noise_sigma),
            'blur_sigma': _num(self.blur_sigma),
            'seed': self.seed,
        }

    @classmethod
    @handle_error
    def from_mapping(cls, values) -> 'SceneSpec':
        values = dict(values)
        known = {f.name for f in dataclasses.fields(cls)} - {'layers'} | {'layer'}
        unknown = sorted(set(values) - known)
        if unknown:
            raise SceneSpecError(f"Unknown scene key(s): {', '.join(unknown)}")

        def one(key):
            value = values[key]
            if isinstance(value, list):
                if len(value) != 1:
                    raise ValueError(f"'{key}' given {len(value)} times")
                value = value[0]
            return value

        kw = {}
        for key in ('width', 'height', 'seed'):
            if key in values:
                kw[key] = int(one(key))
        for key in ('tone_offset', 'tone_gain', 'noise_sigma', 'blur_sigma'):
            if key in values:
                kw[key] = float(one(key))
        if 'background' in values:
            kw['background'] = Texture.parse(one('background'))
        if 'background_disparity' in values:
            kw['background_disparity'] = _floats(one('background_disparity'), 2)
        layers = values.get('layer', [])
        kw['layers'] = tuple(Layer.parse(text) for text in ([layers] if isinstance(layers, str) else layers))
        return cls(**kw)

    @classmethod
    @handle_error
    def from_file(cls, path) -> 'SceneSpec':
        return cls.from_mapping(keyvalue.load(path, allow_repeat=True))

    def to_file(self, path):
        keyvalue.dump(path, self.to_mapping(), header='dualfuse synthetic scene')


def _front_layer(spec: SceneSpec, xs, ys) -> np.ndarray:
    """Index of the nearest layer covering each wide pixel; 0 is the background"""
    front = np.zeros(np.shape(xs), dtype=np.intp)
    for i, layer in enumerate(spec.layers, start=1):
        front[layer.covers(xs, ys)] = i
    return front


def render_views(spec: SceneSpec) -> tuple[ImageBuffer, ImageBuffer, FlowField, BinaryMask]:
    """Render the clean wide view and the telephoto view with their ground truth.
    Returns:
        (clean wide, tele, gt_flow, gt_occ); gt_occ marks wide pixels whose
        scene point lands inside the telephoto frame but behind a nearer layer
    """
    h, w = spec.height, spec.width
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)
    disp = np.array(spec.disparities(), dtype=np.float64)
    textures = [spec.background] + [layer.texture for layer in spec.layers]

    front = _front_layer(spec, xs, ys)
    wide = np.empty((h, w, 3))
    for i, tex in enumerate(textures):
        sel = front == i
        if sel.any():
            wide[sel] = tex.render(xs[sel], ys[sel])

    # telephoto pixel q shows the nearest layer i with q + d_i inside it
    tele = spec.background.render(xs + disp[0, 0], ys + disp[0, 1])
    for i, layer in enumerate(spec.layers, start=1):
        sx, sy = xs + disp[i, 0], ys + disp[i, 1]
        sel = layer.covers(sx, sy)
        if sel.any():
            tele[sel] = layer.texture.render(sx[sel], sy[sel])

    u = -disp[front, 0]
    v = -disp[front, 1]
    tx, ty = xs + u, ys + v
    occ = np.zeros((h, w), dtype=bool)
    in_frame = (tx >= 0) & (tx <= w - 1) & (ty >= 0) & (ty <= h - 1)
    for j, layer in enumerate(spec.layers, start=1):
        hidden = (front < j) & layer.covers(tx + disp[j, 0], ty + disp[j, 1])
        occ |= hidden & in_frame
    logger.debug("render_views %dx%d: %d layer(s), %d occluded px", w, h, len(spec.layers), int(occ.sum()))
    return ImageBuffer(wide), ImageBuffer(tele), FlowField(u, v), BinaryMask(occ)


def degrade_wide(clean: ImageBuffer, spec: SceneSpec) -> ImageBuffer:
    """Blur, tone shift and noise, in that order, then clip to [0, 1]"""
    a = clean.data
    if spec.blur_sigma > 0:
        a = ndimage.gaussian_filter(a, sigma=(spec.blur_sigma, spec.blur_sigma, 0), mode='nearest')
    a = spec.tone_gain * a + spec.tone_offset
    if spec.noise_sigma > 0:
        a = a + np.random.default_rng(spec.seed).normal(0.0, spec.noise_sigma, size=a.shape)
    return ImageBuffer(np.clip(a, 0.0, 1.0))


def generate_scene(spec: SceneSpec) -> tuple[ImageBuffer, ImageBuffer, FlowField, BinaryMask]:
    """Returns:
        (wide, tele, gt_flow, gt_occ)
    """
    clean, tele, gt_flow, gt_occ = render_views(spec)
    return degrade_wide(clean, spec), tele, gt_flow, gt_occ


def default_suite(count=10, size=1024, seed=0, *, tone_offset=0.0, noise_sigma=0.0,
                  blur_sigma: Optional[float] = None) -> list[SceneSpec]:
    """Seeded scenes with one tall interior object in front of a textured background.

    At size 1024: object 80-140 px wide and 180-260 px tall, left edge
    420-480, background disparity 2-6 px and a disparity step of 10-24 px,
    all horizontal. Geometry scales with `size`; disparities stay integral.
    """
    rng = np.random.default_rng(seed)
    s = size / 1024
    scenes = []
    for i in range(count):
        ow, oh = int(rng.integers(80, 141)), int(rng.integers(180, 261))
        ox, oy = int(rng.integers(420, 481)), int(rng.integers(380, 431))
        bg_d = int(rng.integers(2, 7))
        step = int(rng.integers(10, 25))
        bg_color = tuple(float(c) for c in rng.uniform(0.35, 0.55, 3))
        fg_color = tuple(float(c) for c in rng.uniform(0.4, 0.6, 3))
        obj = Layer(
            rect=(round(ox * s), round(oy * s), max(1, round(ow * s)), max(1, round(oh * s))),
            disparity=(float(max(1, round((bg_d + step) * s))), 0.0),
            texture=Texture('noise', seed=int(rng.integers(1 << 30)), scale=5.0, contrast=0.5, color=fg_color),
        )
        bg_disp = float(round(bg_d * s))
        if obj.disparity[0] <= bg_disp:
            obj = dataclasses.replace(obj, disparity=(bg_disp + 1.0, 0.0))
        scenes.append(SceneSpec(
            width=size, height=size,
            background=Texture('noise', seed=int(rng.integers(1 << 30)), scale=7.0, contrast=0.45, color=bg_color),
            background_disparity=(bg_disp, 0.0),
            layers=(obj,),
            tone_offset=tone_offset,
            noise_sigma=noise_sigma,
            blur_sigma=1.5 if blur_sigma is None else blur_sigma,
            seed=seed * 1000 + i,
        ))
    return scenes
