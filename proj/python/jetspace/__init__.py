"""Jet-space Carnot groups, sphere embeddings, and Lipschitz-form integrals."""

import json as _json

from ._core import (  # noqa: F401
    BodyFunction,
    Expr,
    JetPoint,
    SpherePoint,
    add_expr,
    box_distance,
    case_i_lower_bound,
    comass_check,
    compose,
    const_expr,
    coord_expr,
    cos_expr,
    cylinder_proj,
    dilate,
    embed_circle,
    embed_sphere,
    enumerate_indices,
    enumerate_up_to,
    eval_expr,
    exp_expr,
    flat_exp_expr,
    gradient,
    homogeneous_norm,
    index_count,
    index_factorial,
    index_leq,
    inverse,
    jet_eval,
    jet_to_point,
    lambda_inv,
    lambda_map,
    make_body,
    make_bump,
    make_fk,
    monomial,
    mul_expr,
    obstruction_integral,
    polar_lift,
    pow_expr,
    recip_expr,
    scaling_study_json,
    segment_lip_bound,
    sin_expr,
    sqrt_expr,
    stokes_suite,
    sub_expr,
)
from ._core import distortion_scan_json as _distortion_scan_json
from ._core import group_check_json as _group_check_json
from ._core import jet_check_json as _jet_check_json

__version__ = "0.1.0"


def distortion_scan(map, dim=2, order=1, pairs=10000, seed=0):
    """Stratified pair scan of a named map; returns the report as a dict."""
    return _json.loads(_distortion_scan_json(map, dim, order, pairs, seed))


def group_check(n, k, trials=1000, seed=0):
    """Randomized group-law checks; returns per-property max deviations."""
    return _json.loads(_group_check_json(n, k, trials, seed))


def jet_check(n, k, points=100, seed=0):
    """Finite-difference validation of first-order jet derivatives."""
    return _json.loads(_jet_check_json(n, k, points, seed))


def scaling_study(dim, order, m_values, resolution=16):
    """Boundary-integral scaling table with the fitted growth exponent."""
    return scaling_study_json(dim, order, list(m_values), resolution)
