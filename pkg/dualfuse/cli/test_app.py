import pytest

from dualfuse.imagecore import ImageBuffer, FlowField
from dualfuse.flowio import read_image, write_image, write_flow
from .app import build_parser, load_config, main

SMALL = ['--kernel', '31', '--rhe-block', '32', '--rhe-stride', '16', '--pyramid-levels', '3', '--overlap-soft', '10']


def values(text):
    return dict(line.split('=', 1) for line in text.splitlines() if '=' in line)


@pytest.fixture
def scene_dir(tmp_path):
    assert main(['synth', '--out', str(tmp_path / 'scene'), '--size', '128', '--seed', '2']) == 0
    return tmp_path / 'scene'


def test_synth_writes_pair(capsys, scene_dir):
    for name in ('wide.png', 'tele.png', 'gt_flow.flo', 'gt_occ.pgm', 'scene.txt'):
        assert (scene_dir / name).is_file()
    assert read_image(scene_dir / 'wide.png').shape == (128, 128)
    assert "[Info] synth: 128x128 scene written to" in capsys.readouterr().err

def test_synth_from_scene_file(scene_dir, tmp_path):
    again = tmp_path / 'again'
    assert main(['synth', '--out', str(again), '--scene', str(scene_dir / 'scene.txt')]) == 0
    assert (read_image(again / 'wide.png').data == read_image(scene_dir / 'wide.png').data).all()

def test_fuse(scene_dir, tmp_path, capsys):
    out = tmp_path / 'out' / 'fused.png'
    dump = tmp_path / 'dump'
    code = main(['fuse', '--wide', str(scene_dir / 'wide.png'), '--tele', str(scene_dir / 'tele.png'),
                 '--flow', str(scene_dir / 'gt_flow.flo'), '--overlap-rect', '0,0,128,128',
                 '--out', str(out), '--dump-intermediates', str(dump), *SMALL])
    assert code == 0
    assert out.is_file() and (out.parent / 'fused_overlap.png').is_file()
    for name in ('fhat.flo', 'fto.flo', 'occ_transformed.pgm', 'tele_matched.png', 'flow_panel.png', 'config.txt'):
        assert (dump / name).is_file()
    report = values(capsys.readouterr().out)
    assert 'occ_pct_original' in report and 'stage_time.compose_full_view' in report
    assert float(report['bound_excess']) <= 0

def test_metrics_uniform_flow(tmp_path, capsys):
    write_flow(tmp_path / 'f.flo', FlowField.constant(40, 50, 2, -1))
    assert main(['metrics', '--flow', str(tmp_path / 'f.flo'), '--kernel', '11']) == 0
    report = values(capsys.readouterr().out)
    assert float(report['occ_pct_original']) == 0 and float(report['occ_ratio']) == 0
    assert 'stage_time.clip_flow' in report

def test_metrics_transformed_flow(tmp_path, capsys):
    write_flow(tmp_path / 'f.flo', FlowField.constant(40, 50, 2, -1))
    code = main(['metrics', '--flow', str(tmp_path / 'f.flo'), '--transformed-flow', str(tmp_path / 'f.flo')])
    assert code == 0
    report = values(capsys.readouterr().out)
    assert 'occ_pct_transformed' in report and 'bound_excess' not in report

def test_missing_input(tmp_path, capsys):
    assert main(['fuse', '--tele', str(tmp_path / 'tele.png')]) == 2
    assert "[Error] fuse: --wide is required" in capsys.readouterr().err

def test_missing_file(tmp_path, capsys):
    assert main(['metrics', '--flow', str(tmp_path / 'nope.flo')]) == 2
    assert "no such file" in capsys.readouterr().err

def test_unreadable_image(scene_dir, tmp_path, capsys):
    garbage = tmp_path / 'garbage.png'
    garbage.write_bytes(b'not an image at all')
    assert main(['fuse', '--wide', str(garbage), '--tele', str(scene_dir / 'tele.png')]) == 1
    assert "read:" in capsys.readouterr().err

def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / 'cfg.txt'
    cfg.write_text("kernal = 51\n")
    write_flow(tmp_path / 'f.flo', FlowField.constant(8, 8))
    assert main(['metrics', '--flow', str(tmp_path / 'f.flo'), '--config', str(cfg)]) == 2
    assert "kernal" in capsys.readouterr().err

def test_config_layering(tmp_path):
    cfg = tmp_path / 'cfg.txt'
    cfg.write_text("# tuned\nkernel = 51\nratio = 0.02\n")
    args = build_parser().parse_args(['metrics', '--config', str(cfg), '--ratio', '0.05', '--single-warp'])
    loaded = load_config(args)
    assert loaded.kernel == 51 and loaded.ratio == 0.05
    assert loaded.multi_warp is False and loaded.rhe_block == 200

def test_bad_rect():
    with pytest.raises(SystemExit):
        build_parser().parse_args(['fuse', '--overlap-rect', '1,2,3'])

def test_fuse_featureless_without_flow(tmp_path, capsys):
    write_image(tmp_path / 'flat.png', ImageBuffer.full(64, 64, 0.5))
    code = main(['fuse', '--wide', str(tmp_path / 'flat.png'), '--tele', str(tmp_path / 'flat.png'),
                 '--overlap-rect', '0,0,64,64', '--out', str(tmp_path / 'fused.png'), *SMALL])
    assert code == 0
    assert "[Warning] fuse: no --flow given" in capsys.readouterr().err
    assert (tmp_path / 'fused.png').is_file()
