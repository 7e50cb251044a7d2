"""Dual bin packing: exact weights, greedy heuristics, an exact DP, an
approximation scheme, its tape-advice online version and the reduction from
binary separation used for advice lower bounds."""

from .advice import AdviceParams, AdviceString, build_advice, decode_advice, encode_advice, simulate
from .core import Instance, Packing, Weight, parse_instance, serialize_instance, verify_packing
from .exact import GroupedInstance, brute_force_opt, solve_grouped_dp
from .greedy import first_fit, first_fit_increasing, rsff
from .ptas import ptas_solve
from .reduction import BSPInstance, entropy_lower_bound, reduce_and_run

__all__ = [
    "AdviceParams",
    "AdviceString",
    "BSPInstance",
    "GroupedInstance",
    "Instance",
    "Packing",
    "Weight",
    "brute_force_opt",
    "build_advice",
    "decode_advice",
    "encode_advice",
    "entropy_lower_bound",
    "first_fit",
    "first_fit_increasing",
    "parse_instance",
    "ptas_solve",
    "reduce_and_run",
    "rsff",
    "serialize_instance",
    "simulate",
    "solve_grouped_dp",
    "verify_packing",
]
