"""Spatial (SLCS) and mean-field model checking for collective adaptive systems."""
from .closure import ClosureSpace, Direction, PointSet, SpaceRelation, closure, frontier, from_relation, interior
from .kernels import BACKEND
from .slcs import SpatialModel, propagate_sat, sat_set, surrounded_bruteforce, surrounded_sat
from .temporal import SnapshotModel, st_sat_set

__version__ = "0.1.0"
