"""View transition: move the telephoto warp from the wide view at the overlap
border towards the telephoto view inside it, within a bounded budget"""

from .transition_errors import TransitionError, InvalidFlowError, EmptyFlowError
from .target import target_flow
from .distance import non_connected_points, baseline_distance, distance_map
from .transition import clip_flow, fill_empty, transform_flow, warp_tele
