"""Exact arithmetic for the Higman-Thompson groups and a certified ping-pong pair in T_n."""

from .cantor import (
    CantorPoint,
    Membership,
    VElement,
    apply_point,
    canonicalize,
    classify,
    compose,
    discontinuity_points,
    invert,
    make_element,
    order_of,
)
from .circle import Arc, PLCircleMap, compose_maps, fixed_points, from_circle_map, invert_map, to_circle_map
from .numerics import Q, circle_distance, is_n_adic, nrat, power_of_n_exponent
from .pingpong import PingPongSystem, build_system, verify_pingpong

__version__ = "0.1.0"

__all__ = [
    "apply_point",
    "Arc",
    "build_system",
    "canonicalize",
    "CantorPoint",
    "circle_distance",
    "classify",
    "compose",
    "compose_maps",
    "discontinuity_points",
    "fixed_points",
    "from_circle_map",
    "invert",
    "invert_map",
    "is_n_adic",
    "make_element",
    "Membership",
    "nrat",
    "order_of",
    "PingPongSystem",
    "PLCircleMap",
    "power_of_n_exponent",
    "Q",
    "to_circle_map",
    "VElement",
    "verify_pingpong",
]
