"""Command line entry point: `dualfuse fuse | metrics | synth`.

Settings come from FusionConfig defaults, then an optional --config file,
then flags. Exit status: 0 on success, 2 for missing inputs or bad usage,
1 when a stage fails.
"""
__all__ = ['build_parser', 'main']

import argparse
import logging
from pathlib import Path

from dualfuse import __version__
from dualfuse.errors import FusionError
from dualfuse.imagecore import FusionConfig, ConfigError
from dualfuse.flowio import read_image, write_image, read_flow, write_flow, write_mask, write_weights, write_distance
from dualfuse.synth import SceneSpec, generate_scene, default_suite
from dualfuse.toneblend import overlap_weights, full_view_weights
from dualfuse.utils import keyvalue, report
from .cli_errors import MissingInputError, StageError
from .metrics import transition_metrics, result_metrics, stage_time_values
from .pipeline import Pipeline, StageLogger, StageTimer
from .settings import setup_logging
from .visualize import flow_panel

logger = logging.getLogger(__name__)

# flag -> FusionConfig field
CONFIG_FLAGS = {
    'kernel': 'kernel',
    'ratio': 'ratio',
    'grad_threshold': 'gradient_threshold',
    'rhe_block': 'rhe_block',
    'rhe_stride': 'rhe_stride',
    'occ_soft': 'occ_soft_width',
    'overlap_soft': 'overlap_soft_width',
    'pyramid_levels': 'pyramid_levels',
    'distance_mode': 'distance_mode',
    'transition_value': 'transition_value',
    'multi_warp': 'multi_warp',
    'workers': 'workers',
}


def _rect(text):
    try:
        values = tuple(int(v) for v in text.split(','))
    except ValueError:
        values = ()
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"expected X,Y,W,H integers, got '{text}'")
    return values


def _add_config_flags(parser):
    group = parser.add_argument_group('fusion constants (defaults < --config file < flags)')
    group.add_argument('--config', type=Path, help="key=value file of fusion constants")
    group.add_argument('--kernel', type=int, help="box-filter window, pixels (600)")
    group.add_argument('--ratio', type=float, help="transformation budget per pixel of distance (0.01)")
    group.add_argument('--grad-threshold', type=float, help="flow jump marking a non-connected point (3.0)")
    group.add_argument('--rhe-block', type=int, help="histogram matching block size (200)")
    group.add_argument('--rhe-stride', type=int, help="histogram matching block stride (30)")
    group.add_argument('--occ-soft', type=int, help="occlusion soft-blend width, pixels (15)")
    group.add_argument('--overlap-soft', type=int, help="overlap seam width, pixels (100)")
    group.add_argument('--pyramid-levels', type=int, help="pyramid levels (from the image size)")
    group.add_argument('--distance-mode', choices=FusionConfig.DISTANCE_MODES, help="distance rule (ray)")
    group.add_argument('--transition-value', choices=FusionConfig.TRANSITION_VALUES,
                       help="value stored by the coordinate revision (literal)")
    group.add_argument('--single-warp', dest='multi_warp', action='store_const', const=False,
                       help="warp the wide image once instead of averaging jittered warps")
    group.add_argument('--workers', type=int, help="worker threads for the jittered warps (1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='dualfuse', description="Wide / telephoto view-transition fusion.")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0, help="-v for progress, -vv for debug output")
    sub = parser.add_subparsers(dest='command', required=True)

    fuse = sub.add_parser('fuse', parents=[common], help="fuse a wide / telephoto pair")
    fuse.add_argument('--wide', type=Path, help="full wide-angle frame (PNG / PPM)")
    fuse.add_argument('--tele', type=Path, help="telephoto image; resampled to the overlap size if needed")
    fuse.add_argument('--flow', type=Path, help="backward flow on the overlap grid (.flo); estimated if omitted")
    fuse.add_argument('--overlap-rect', type=_rect, metavar='X,Y,W,H',
                      help="overlap region in wide-frame pixels (centered, half size)")
    fuse.add_argument('--out', type=Path, default=Path('fused.png'),
                      help="full-view output; the overlap result goes to <stem>_overlap<suffix>")
    fuse.add_argument('--dump-intermediates', type=Path, metavar='DIR', help="write flows, masks and images here")
    _add_config_flags(fuse)

    metrics = sub.add_parser('metrics', parents=[common], help="occlusion statistics of a flow")
    metrics.add_argument('--flow', type=Path, help="backward flow on the overlap grid (.flo)")
    metrics.add_argument('--transformed-flow', type=Path, help="precomputed transformed flow (.flo); computed if omitted")
    metrics.add_argument('--wide', type=Path, help="with --tele and no --flow: run the whole pipeline")
    metrics.add_argument('--tele', type=Path)
    metrics.add_argument('--overlap-rect', type=_rect, metavar='X,Y,W,H')
    _add_config_flags(metrics)

    synth = sub.add_parser('synth', parents=[common], help="write a synthetic pair with ground truth")
    synth.add_argument('--out', type=Path, required=True, help="output directory")
    synth.add_argument('--seed', type=int, default=0, help="scene seed (0)")
    synth.add_argument('--size', type=int, default=512, help="scene width and height (512)")
    synth.add_argument('--scene', type=Path, help="key=value scene description instead of a seeded scene")
    return parser


def load_config(args) -> FusionConfig:
    cfg = FusionConfig.from_file(args.config) if args.config else FusionConfig()
    return cfg.replace(**{field: getattr(args, flag) for flag, field in CONFIG_FLAGS.items()})


def _input(path, flag):
    if path is None:
        raise MissingInputError(f"{flag} is required")
    if not Path(path).is_file():
        raise MissingInputError(f"{flag} {path}: no such file")
    return path


def _read(func, path, flag):
    try:
        return func(_input(path, flag))
    except MissingInputError:
        raise
    except FusionError as e:
        raise StageError('read', str(e)) from e


def _pipeline(cfg):
    pipeline = Pipeline(cfg)
    timer = StageTimer()
    stage_log = StageLogger()
    pipeline.attach(timer)
    pipeline.attach(stage_log)
    return pipeline, (timer, stage_log)


def dump_intermediates(folder, result, wide_full, cfg):
    """Write every intermediate of a run into `folder`"""
    folder = Path(folder)
    folder.mkdir(parents=True, exist_ok=True)
    for name in ('flow', 'fstar', 'fhat', 'fto'):
        write_flow(folder / f'{name}.flo', getattr(result, name))
    write_mask(folder / 'foreground.pgm', result.foreground)
    write_distance(folder / 'distance.pgm', result.distance)
    write_mask(folder / 'occ_original.pgm', result.occ_original)
    write_mask(folder / 'occ_transformed.pgm', result.occ_transformed)
    write_image(folder / 'tele_overlap.png', result.tele_overlap)
    write_image(folder / 'wide_overlap.png', result.wide_overlap)
    write_image(folder / 'tele_matched.png', result.matched)
    write_weights(folder / 'weights_overlap.pgm', overlap_weights(result.occ_transformed, cfg))
    write_weights(folder / 'weights_full.pgm', full_view_weights(wide_full.shape, result.rect, cfg.overlap_soft_width))
    flow_panel(folder / 'flow_panel.png', result)
    keyvalue.dump(folder / 'config.txt', cfg.to_mapping(), header='fusion constants of this run')
    logger.info("Intermediates written to %s", folder)


def cmd_fuse(args) -> int:
    cfg = load_config(args)
    wide_full = _read(read_image, args.wide, '--wide')
    tele = _read(read_image, args.tele, '--tele')
    flow = _read(read_flow, args.flow, '--flow') if args.flow is not None else None
    if flow is None:
        report.showwarning('fuse', "no --flow given, estimating one with the diagnostic block matcher")

    pipeline, _observers = _pipeline(cfg)
    result = pipeline.run(wide_full, tele, flow, args.overlap_rect)

    out = Path(args.out)
    overlap_path = out.with_name(f"{out.stem}_overlap{out.suffix}")
    try:
        write_image(out, result.full)
        write_image(overlap_path, result.overlap)
        if args.dump_intermediates:
            dump_intermediates(args.dump_intermediates, result, wide_full, cfg)
    except FusionError as e:
        raise StageError('write', str(e)) from e
    logger.info("Wrote %s and %s", out, overlap_path)
    report.showvalues({**result_metrics(result, cfg), **stage_time_values(result.timings)})
    return 0


def cmd_metrics(args) -> int:
    cfg = load_config(args)
    pipeline, (timer, _) = _pipeline(cfg)
    if args.flow is None:
        if args.wide is None and args.tele is None:
            raise MissingInputError("--flow (or --wide and --tele) is required")
        wide_full = _read(read_image, args.wide, '--wide')
        tele = _read(read_image, args.tele, '--tele')
        values = result_metrics(pipeline.run(wide_full, tele, None, args.overlap_rect), cfg)
    else:
        f = _read(read_flow, args.flow, '--flow')
        if not f.fully_valid:
            raise StageError('read', f"{args.flow}: flow has invalid pixels")
        if args.transformed_flow is not None:
            fto = _read(read_flow, args.transformed_flow, '--transformed-flow')
            values = transition_metrics(f, fto, cfg)
        else:
            values = result_metrics(pipeline.transition(f), cfg)
    report.showvalues({**values, **stage_time_values(timer.times)})
    return 0


def cmd_synth(args) -> int:
    spec = SceneSpec.from_file(_input(args.scene, '--scene')) if args.scene else default_suite(1, args.size, args.seed)[0]
    wide, tele, gt_flow, gt_occ = generate_scene(spec)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_image(out / 'wide.png', wide)
        write_image(out / 'tele.png', tele)
        write_flow(out / 'gt_flow.flo', gt_flow)
        write_mask(out / 'gt_occ.pgm', gt_occ)
        spec.to_file(out / 'scene.txt')
    except (FusionError, OSError) as e:
        raise StageError('write', str(e)) from e
    report.showinfo('synth', f"{spec.width}x{spec.height} scene written to {out}")
    return 0


COMMANDS = {
    'fuse': cmd_fuse,
    'metrics': cmd_metrics,
    'synth': cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (MissingInputError, ConfigError) as e:
        report.showerror(args.command, str(e))
        return 2
    except FusionError as e: # StageError included
        report.showerror(args.command, str(e))
        return 1
