import numpy as np

from dualfuse.imagecore import FlowField, FusionConfig
from .distance import non_connected_points, baseline_distance, distance_map


def ray_oracle(nc, y, x):
    h, w = nc.shape
    rays = [
        (nc[y, :x], x),
        (nc[y, x + 1:], w - 1 - x),
        (nc[:y, x], y),
        (nc[y + 1:, x], h - 1 - y),
    ]
    open_rays = [length for path, length in rays if not path.any()]
    return min(open_rays) if open_rays else max(h, w)


def test_smooth_flow_is_baseline():
    d = distance_map(FlowField.constant(5, 5, 1, 1), FusionConfig())
    assert d.d[2, 2] == 2 and d.d[0, 0] == 0
    assert (d.d == baseline_distance(5, 5).d).all()

def test_floating_object_decoupled():
    u = np.zeros((9, 9))
    u[3:6, 3:6] = 10.0
    f = FlowField(u, np.zeros((9, 9)))
    d = distance_map(f, FusionConfig())
    assert d.d[4, 4] == 9
    base = baseline_distance(9, 9)
    assert base.d[4, 4] == 4 and base.d[3, 3] == 3
    assert d.d[3, 3] == 9
    nc = non_connected_points(f, 3.0).bits
    for y in range(9):
        for x in range(9):
            assert d.d[y, x] == ray_oracle(nc, y, x)

def test_object_attached_to_bottom():
    u = np.zeros((20, 20))
    u[8:, 8:12] = 10.0 # a figure standing on the lower border
    d = distance_map(FlowField(u, np.zeros((20, 20))), FusionConfig())
    assert d.d[12, 9] == 7 # only the down ray is open
    assert baseline_distance(20, 20).d[12, 9] == 7
    assert d.d[9, 9] == 10 > baseline_distance(20, 20).d[9, 9]

def test_never_below_baseline_and_zero_ring():
    rng = np.random.default_rng(0)
    u = np.round(rng.random((30, 40)) * 2) * 5
    d = distance_map(FlowField(u, np.zeros((30, 40))), FusionConfig())
    base = baseline_distance(30, 40)
    assert (d.d >= base.d).all() and d.d.max() <= 40
    ring = np.ones((30, 40), bool)
    ring[1:-1, 1:-1] = False
    assert (d.d[ring] == 0).all()

def test_baseline_mode():
    u = np.zeros((9, 9))
    u[3:6, 3:6] = 10.0
    d = distance_map(FlowField(u, np.zeros((9, 9))), FusionConfig(distance_mode='baseline'))
    assert (d.d == baseline_distance(9, 9).d).all()

def test_non_connected_threshold():
    u = np.zeros((3, 4))
    u[:, 2:] = 3.0
    f = FlowField(u, np.zeros((3, 4)))
    assert non_connected_points(f, 3.0).count() == 0
    nc = non_connected_points(f, 2.9).bits
    assert nc[:, 1:3].all() and not nc[:, [0, 3]].any()
