"""Outer length billiard: dynamics, Mather beta-function coefficients and caustics."""

import json

from ._core import (
    Curve,
    CurveSpec,
    OlbError,
    beta,
    caustic_drift,
    generating_function,
    generating_jet,
    isoperimetric_defect,
    iterate,
    lazutkin_step,
    lazutkin_x,
    mather_criterion,
    minimize_orbit,
    pair_from_point,
    step,
    tangent_intersection,
    taylor_H,
    theoretical_coeffs,
)
from ._core import fit_coeffs_json as _fit_coeffs_json


def fit_coeffs(curve, q, powers=(1, 3, 5, 7, 9)):
    """Minimal q-gons for every q and a least-squares fit of beta(1/q); returns a dict."""
    return json.loads(_fit_coeffs_json(curve, list(q), list(powers)))


__all__ = [
    "Curve",
    "CurveSpec",
    "OlbError",
    "beta",
    "caustic_drift",
    "fit_coeffs",
    "generating_function",
    "generating_jet",
    "isoperimetric_defect",
    "iterate",
    "lazutkin_step",
    "lazutkin_x",
    "mather_criterion",
    "minimize_orbit",
    "pair_from_point",
    "step",
    "tangent_intersection",
    "taylor_H",
    "theoretical_coeffs",
]
