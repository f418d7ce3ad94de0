"""The explicit four-dimensional almost (H,G)-manifolds, as declarative data.

Every entry is a plain JSON-compatible dict: component functions are expression
strings (grammar in :mod:`hhgeom.expr`), the almost complex structures are given
by the images of the frame vectors, and the expected invariants are closed-form
expressions in the chart coordinates.  :func:`from_data` turns such a dict into a
validated :class:`ExampleSpec`; :func:`load_file` does the same for a JSON file.

Expected-value keys use the flat record naming of :mod:`hhgeom.runner`:
``norm_N.1``, ``tau_star.2``, ``R.1221``, ``rho.22``, ``k.12``, ``nu`` ...
"""

import copy
import json
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .chart import ChartMetric, Embedding, FrameField, orthonormality_residual, snapshots
from .errors import GeometryError, UnknownExample, ValidationError
from .expr import ExprSystem
from .homogeneous import LieAlgebraBasis, jacobi_residual, lie_snapshot, matrix_from_entries, structure_constants
from .hstructure import HTriple, standard_h, verify_compatibility

STANDARD_H = {"J1": [2, -1, -4, 3], "J2": [3, 4, -1, -2]}
H_43 = {"J1": [2, -1, 4, -3], "J2": [3, -4, -1, 2]}
H_45 = {"J1": [2, -1, -4, 3], "J2": [3, 4, -1, -2]}

ENGEL_FRAME = [["1", "0", "0", "0"], ["0", "1", "u1", "u3"], ["0", "0", "-1", "0"], ["0", "0", "0", "-1"]]

# The sign of the dx2 dx3 cross term printed for the first Engel metric is
# inconsistent with its stated orthonormal frame; this is the printed version,
# kept for the discrepancy regression test.  The catalog uses g23 = +u1.
ENGEL_A_METRIC_AS_PRINTED = [
    ["1", "0", "0", "0"],
    ["0", "1 - u1**2 - u3**2", "-u1", "u3"],
    ["0", "-u1", "-1", "0"],
    ["0", "u3", "0", "-1"],
]

ENGEL_A_METRIC = [
    ["1", "0", "0", "0"],
    ["0", "1 - u1**2 - u3**2", "u1", "u3"],
    ["0", "u1", "-1", "0"],
    ["0", "u3", "0", "-1"],
]

ENGEL_A_CURVATURE = {
    "R.1221": "3/4", "R.1331": "1/4", "R.2142": "-1/4", "R.2442": "-1/4",
    "R.3143": "-1/4", "R.3443": "1/4", "R.2332": "1", "tau": "0",
}

LIE_GENERATORS = [
    {"1,3": 1},
    {"1,2": 1, "2,1": -1},
    {"2,3": 1},
    {"4,4": 1},
]

_ENTRIES = [
    {
        "id": "engel_a",
        "title": "Engel manifold, isotropic hyper-Kähler, neither hypercomplex nor symplectic (J1 := J')",
        "kind": "chart",
        "eps": [1, 1, -1, -1],
        "metric": ENGEL_A_METRIC,
        "frame": ENGEL_FRAME,
        "H": STANDARD_H,
        "points": [[0.3, 0.2, 0.5, 0.1], [-0.4, 1.1, 0.2, -0.7]],
        "sample_box": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
        "tolerance": "chart",
        "expected": dict(ENGEL_A_CURVATURE, **{
            "norm_F.1": "0", "norm_N.1": "8", "tau_star.1": "-2",
            "norm_F.2": "0", "norm_N.2": "0", "tau_star.2": "0",
            "norm_F.3": "0", "norm_N.3": "-8", "tau_star.3": "0",
        }),
        "classes": {
            "kaehler.1": False, "kaehler.2": False, "kaehler.3": False,
            "integrable.1": False, "integrable.2": False, "integrable.3": False,
            "isotropic_kaehler.1": True, "isotropic_kaehler.2": True, "isotropic_kaehler.3": True,
            "lie_form_nonzero.1": True, "lie_form_nonzero.2": True, "lie_form_nonzero.3": True,
            "main_W.1": False, "almost_kaehler.1": False,
        },
    },
    {
        "id": "engel_a_j",
        "variant_of": "engel_a",
        "title": "Engel manifold, first metric, with J1 := J",
        "kind": "chart",
        "eps": [1, 1, -1, -1],
        "metric": ENGEL_A_METRIC,
        "frame": ENGEL_FRAME,
        "H": {"J1": [2, -1, 4, -3], "J2": [3, -4, -1, 2]},
        "points": [[0.3, 0.2, 0.5, 0.1], [-0.4, 1.1, 0.2, -0.7]],
        "sample_box": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
        "tolerance": "chart",
        "expected": dict(ENGEL_A_CURVATURE),
        "classes": {
            "kaehler.1": False, "kaehler.2": False, "kaehler.3": False,
            "integrable.1": False, "integrable.2": False, "integrable.3": False,
            "isotropic_kaehler.1": True, "isotropic_kaehler.2": True, "isotropic_kaehler.3": True,
            "lie_form_nonzero.1": True, "lie_form_nonzero.2": True, "lie_form_nonzero.3": True,
            "main_W.1": False, "almost_kaehler.1": False,
        },
    },
    {
        "id": "engel_b",
        "title": "Engel manifold, isotropic hyper-Kähler, non-integrable but symplectic (H)",
        "kind": "chart",
        "eps": [1, -1, 1, -1],
        "metric": [
            ["1", "0", "0", "0"],
            ["0", "-(1 - u1**2 + u3**2)", "-u1", "u3"],
            ["0", "-u1", "1", "0"],
            ["0", "u3", "0", "-1"],
        ],
        "frame": ENGEL_FRAME,
        "H": {"J1": [3, 4, -1, -2], "J2": [2, -1, -4, 3]},
        "points": [[0.3, 0.2, 0.5, 0.1], [-0.4, 1.1, 0.2, -0.7]],
        "sample_box": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
        "tolerance": "chart",
        "expected": {
            "norm_N.1": "0", "norm_N.2": "8", "norm_N.3": "-8",
            "norm_F.1": "0", "norm_F.2": "0", "norm_F.3": "0",
            "tau": "0", "tau_star.1": "0", "tau_star.2": "0", "tau_star.3": "0",
        },
        "classes": {
            "kaehler.1": False, "kaehler.2": False, "kaehler.3": False,
            "integrable.1": False, "integrable.2": False, "integrable.3": False,
            "isotropic_kaehler.1": True, "isotropic_kaehler.2": True, "isotropic_kaehler.3": True,
            "almost_kaehler.1": True,
        },
    },
    {
        "id": "engel_b_prime",
        "variant_of": "engel_b",
        "title": "Engel manifold, second metric, with the structure H'",
        "kind": "chart",
        "eps": [1, -1, 1, -1],
        "metric": [
            ["1", "0", "0", "0"],
            ["0", "-(1 - u1**2 + u3**2)", "-u1", "u3"],
            ["0", "-u1", "1", "0"],
            ["0", "u3", "0", "-1"],
        ],
        "frame": ENGEL_FRAME,
        "H": {"J1": [3, -4, -1, 2], "J2": [2, -1, 4, -3]},
        "points": [[0.3, 0.2, 0.5, 0.1], [-0.4, 1.1, 0.2, -0.7]],
        "sample_box": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
        "tolerance": "chart",
        "expected": {
            "norm_N.1": "0", "norm_N.2": "8", "norm_N.3": "-8",
            "norm_F.1": "0", "norm_F.2": "0", "norm_F.3": "0",
            "tau": "0", "tau_star.1": "0", "tau_star.2": "0", "tau_star.3": "0",
        },
        "classes": {
            "kaehler.1": False, "kaehler.2": False, "kaehler.3": False,
            "integrable.1": False, "integrable.2": False, "integrable.3": False,
            "isotropic_kaehler.1": True, "isotropic_kaehler.2": True, "isotropic_kaehler.3": True,
            "almost_kaehler.1": True,
        },
    },
    {
        "id": "semi_space",
        "title": "Real semi-space x1 > 0 with the conformally flat metric",
        "kind": "chart",
        "eps": [1, 1, -1, -1],
        "metric": [
            ["1/u1**2", "0", "0", "0"],
            ["0", "1/u1**2", "0", "0"],
            ["0", "0", "-1/u1**2", "0"],
            ["0", "0", "0", "-1/u1**2"],
        ],
        "frame": [["u1", "0", "0", "0"], ["0", "u1", "0", "0"], ["0", "0", "u1", "0"], ["0", "0", "0", "u1"]],
        "H": H_43,
        "domain": ["u1 > 0"],
        "points": [[0.5, 0.1, -0.2, 0.3], [1.0, 0.0, 0.0, 0.0], [2.0, -0.5, 0.4, 1.0]],
        "sample_box": [[0.3, 3], [-2, 2], [-2, 2], [-2, 2]],
        "tolerance": "chart",
        "expected": {
            "k_const": "-1",
            "norm_N.1": "0", "norm_N.2": "0", "norm_N.3": "0",
            "norm_F.1": "8", "norm_theta.1": "4",
            "norm_F.2": "-16", "norm_F.3": "-16", "norm_theta.2": "-16", "norm_theta.3": "-16",
            "tau": "-12", "tau_star.1": "4", "tau_star.2": "0", "tau_star.3": "0",
        },
        "classes": {
            "integrable.1": True, "integrable.2": True, "integrable.3": True, "hypercomplex": True,
            "main_W.1": True, "main_W.2": True, "main_W.3": True, "in_W": True,
            "isotropic_kaehler.1": False, "isotropic_kaehler.2": False, "isotropic_kaehler.3": False,
            "einstein": True,
        },
    },
    {
        "id": "quarter_space",
        "title": "Real quarter-space x1 > 0, x3 > 0",
        "kind": "chart",
        "eps": [1, 1, -1, -1],
        "metric": [
            ["1/u1**2", "0", "0", "0"],
            ["0", "1/u1**2", "0", "0"],
            ["0", "0", "-1/u3**2", "0"],
            ["0", "0", "0", "-1/u3**2"],
        ],
        "frame": [["u1", "0", "0", "0"], ["0", "u1", "0", "0"], ["0", "0", "u3", "0"], ["0", "0", "0", "u3"]],
        "H": H_43,
        "domain": ["u1 > 0", "u3 > 0"],
        "points": [[1.0, 0.0, 1.0, 0.0], [1.3, 0.2, 0.8, -0.1]],
        "sample_box": [[0.3, 3], [-2, 2], [0.3, 3], [-2, 2]],
        "tolerance": "chart",
        "expected": {
            "R.1221": "-1", "R.3443": "1",
            "rho.11": "-1", "rho.22": "-1", "rho.33": "-1", "rho.44": "-1",
            "k.12": "-1", "k.34": "1",
            "tau": "0", "tau_star.1": "0", "tau_star.2": "0", "tau_star.3": "0",
            "norm_N.1": "0", "norm_F.1": "0", "norm_theta.1": "0",
            "norm_N.2": "0", "norm_F.2": "0", "norm_theta.2": "0",
            "norm_N.3": "0", "norm_F.3": "0", "norm_theta.3": "0",
        },
        "classes": {
            "kaehler.1": True, "kaehler.2": False, "kaehler.3": False,
            "integrable.1": True, "integrable.2": False, "integrable.3": False,
            "isotropic_kaehler.1": True, "isotropic_kaehler.2": True, "isotropic_kaehler.3": True,
        },
    },
    {
        "id": "cylinder_pseudo",
        "title": "Real pseudo-hyper-cylinder in R^5_2",
        "kind": "embedding",
        "eps": [1, 1, -1, -1],
        "embedding": ["u1", "cosh(u4)*cos(u2)", "cosh(u4)*sin(u2)", "sinh(u4)*cos(u3)", "sinh(u4)*sin(u3)"],
        "ambient": [1, 1, 1, -1, -1],
        "frame": [["1", "0", "0", "0"], ["0", "1/cosh(u4)", "0", "0"],
                  ["0", "0", "1/sinh(u4)", "0"], ["0", "0", "0", "1"]],
        "H": H_45,
        "domain": ["u4 > 0"],
        "points": [[0.1, 0.2, 0.3, 0.5], [0.0, 0.0, 0.0, 1.0], [-0.3, 1.0, 2.0, 2.0]],
        "sample_box": [[-2, 2], [-3, 3], [-3, 3], [0.3, 2]],
        "tolerance": "embedded",
        "expected_defs": {"t": "tanh(u4)", "c": "coth(u4)"},
        "expected": {
            "norm_N.1": "-8*t**2", "norm_F.1": "-4*t**2", "norm_nablaJ.1": "-4*t**2", "norm_theta.1": "-t**2",
            "norm_N.2": "-8*c**2", "norm_theta.2": "(2*t + c)**2",
            "norm_F.2": "4*(2*t**2 + c**2)", "norm_nablaJ.2": "4*(2*t**2 + c**2)",
            "norm_N.3": "-8*(t - c)**2", "norm_theta.3": "(t + c)**2",
            "norm_F.3": "4*(t**2 + c**2)", "norm_nablaJ.3": "4*(t**2 + c**2)",
            "R.2332": "-1", "R.2442": "-t**2", "R.3443": "c**2",
            "rho.22": "1 + t**2", "rho.33": "-1 - c**2", "rho.44": "-t**2 - c**2",
            "tau": "2*(1 + t**2 + c**2)",
            "tau_star.1": "0", "tau_star.2": "0", "tau_star.3": "0",
        },
        # (u2, u3, u4) span a unit pseudo-sphere, so that block has constant curvature 1
        "errata": {
            "R.2442": "-1", "R.3443": "1",
            "rho.22": "2", "rho.33": "-2", "rho.44": "-2",
            "tau": "6", "tau_star.1": "-2",
        },
        "classes": {
            "integrable.1": False, "integrable.2": False, "integrable.3": False,
            "lie_form_nonzero.1": True, "lie_form_nonzero.2": True, "lie_form_nonzero.3": True,
        },
    },
    {
        "id": "cx_cylinder",
        "title": "Complex cylinder (Z1)^2 + (Z2)^2 = 1",
        "kind": "embedding",
        "eps": [1, 1, -1, -1],
        "embedding": ["cos(u1)*cosh(u3)", "sin(u1)*cosh(u3)", "u2",
                      "sin(u1)*sinh(u3)", "-cos(u1)*sinh(u3)", "u4"],
        "ambient": [1, 1, 1, -1, -1, -1],
        "frame": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
        "H": STANDARD_H,
        "points": [[0.3, 0.2, 0.5, 0.1], [-1.2, 0.7, -0.4, 2.0]],
        "sample_box": [[-3, 3], [-3, 3], [-2, 2], [-3, 3]],
        "tolerance": "embedded",
        "expected": {
            "norm_F.1": "0", "norm_F.2": "0", "norm_F.3": "0",
            "norm_N.1": "0", "norm_N.2": "0", "norm_N.3": "0",
            "tau": "0",
        },
        "classes": {
            "kaehler.1": True, "kaehler.2": True, "kaehler.3": True,
            "pseudo_hyper_kaehler": True, "flat": True,
        },
    },
    {
        "id": "cx_cone",
        "title": "Complex cone (Z1)^2 + (Z2)^2 - (Z3)^2 = 0",
        "kind": "embedding",
        "eps": [1, 1, -1, -1],
        "defs": {"r2": "u1**2 + u3**2", "lam": "u1/r2", "mu": "u3/r2"},
        "embedding": [
            "u1*cos(u2)*cosh(u4) - u3*sin(u2)*sinh(u4)",
            "u1*sin(u2)*cosh(u4) + u3*cos(u2)*sinh(u4)",
            "u1",
            "u1*sin(u2)*sinh(u4) + u3*cos(u2)*cosh(u4)",
            "-u1*cos(u2)*sinh(u4) + u3*sin(u2)*cosh(u4)",
            "u3",
        ],
        "ambient": [1, 1, 1, -1, -1, -1],
        "frame": [["1/sqrt(2)", "0", "0", "0"], ["0", "lam", "0", "mu"],
                  ["0", "0", "1/sqrt(2)", "0"], ["0", "-mu", "0", "lam"]],
        "H": STANDARD_H,
        "domain": ["u1**2 + u3**2 > 0"],
        "points": [[1.0, 0.7, 0.4, 0.3], [0.6, -0.2, -0.9, 0.5]],
        "sample_box": [[-1.5, 1.5], [-3, 3], [-1.5, 1.5], [-1.5, 1.5]],
        "tolerance": "embedded",
        "expected_defs": {"r2": "u1**2 + u3**2", "lam": "u1/r2", "mu": "u3/r2"},
        "expected": {
            "norm_F.2": "16*(mu**2 - lam**2)", "norm_nablaJ.2": "16*(mu**2 - lam**2)",
            "norm_theta.2": "8*(mu**2 - lam**2)",
            "norm_F.3": "4*(mu**2 - lam**2)", "norm_nablaJ.3": "4*(mu**2 - lam**2)",
            "norm_theta.3": "2*(mu**2 - lam**2)",
            "norm_N.1": "0", "norm_N.2": "0", "norm_N.3": "0", "norm_F.1": "0",
        },
        # J1 is parallel and an isometry, so the J3 norms equal the J2 norms
        "errata": {
            "norm_F.3": "16*(mu**2 - lam**2)", "norm_nablaJ.3": "16*(mu**2 - lam**2)",
            "norm_theta.3": "8*(mu**2 - lam**2)",
        },
        "classes": {
            "flat": True, "hypercomplex": True,
            "integrable.1": True, "integrable.2": True, "integrable.3": True,
            "kaehler.1": True, "main_W.2": False, "main_W.3": False,
            "lie_form_nonzero.2": True, "lie_form_nonzero.3": True,
        },
    },
    {
        "id": "cx_sphere",
        "title": "Complex unit sphere (Z1)^2 + (Z2)^2 + (Z3)^2 = 1",
        "kind": "embedding",
        "eps": [1, 1, -1, -1],
        "defs": {
            "D": "cos(u1)**2 + sinh(u3)**2",
            "lam": "cos(u1)*cosh(u3)/D",
            "mu": "sin(u1)*sinh(u3)/D",
        },
        "embedding": [
            "cos(u1)*cos(u2)*cosh(u3)*cosh(u4) - sin(u1)*sin(u2)*sinh(u3)*sinh(u4)",
            "cos(u1)*sin(u2)*cosh(u3)*cosh(u4) + sin(u1)*cos(u2)*sinh(u3)*sinh(u4)",
            "sin(u1)*cosh(u3)",
            "cos(u1)*sin(u2)*cosh(u3)*sinh(u4) + sin(u1)*cos(u2)*sinh(u3)*cosh(u4)",
            "-cos(u1)*cos(u2)*cosh(u3)*sinh(u4) + sin(u1)*sin(u2)*sinh(u3)*cosh(u4)",
            "-cos(u1)*sinh(u3)",
        ],
        "ambient": [1, 1, 1, -1, -1, -1],
        "frame": [["1", "0", "0", "0"], ["0", "lam", "0", "mu"],
                  ["0", "0", "1", "0"], ["0", "-mu", "0", "lam"]],
        "H": STANDARD_H,
        "domain": ["cos(u1)**2 + sinh(u3)**2 > 0"],
        "points": [[0.3, 0.5, 0.8, 0.2], [0.0, 0.4, 1.0, -0.3], [-0.7, 1.2, -0.4, 0.6]],
        "sample_box": [[-1.2, 1.2], [-3, 3], [-1, 1], [-1, 1]],
        "tolerance": "embedded",
        "expected_defs": {
            "D": "cos(u1)**2 + sinh(u3)**2",
            "nu": "(sinh(2*u3)**2 - sin(2*u1)**2)/(4*D**4)",
            "nus": "sin(2*u1)*sinh(2*u3)/(2*D**4)",
        },
        "expected": {
            "nu": "nu", "nu_star2": "nus",
            "tau": "8*nu", "tau_star.1": "0", "tau_star.2": "8*nus", "tau_star.3": "0",
            "norm_N.1": "-32*nu", "norm_nablaJ.1": "-16*nu", "norm_theta.1": "-4*nu",
            "norm_N.3": "-32*nu", "norm_nablaJ.3": "16*nu", "norm_theta.3": "4*nu",
        },
        # the induced metric is that of the complex unit sphere: nu = 1, nu*_2 = 0;
        # the printed nu with D**2 in place of D**4 is the quantity the norm chain uses
        "errata_defs": {
            "D": "cos(u1)**2 + sinh(u3)**2",
            "w": "(sinh(2*u3)**2 - sin(2*u1)**2)/(4*D**2)",
        },
        "errata": {
            "nu": "1", "nu_star2": "0", "tau": "8", "tau_star.2": "0",
            "norm_N.1": "-32*w", "norm_nablaJ.1": "-16*w", "norm_F.1": "-16*w", "norm_theta.1": "-4*w",
            "norm_N.3": "-32*w", "norm_nablaJ.3": "16*w", "norm_theta.3": "4*w",
        },
        "classes": {
            "kaehler.2": True, "integrable.1": False, "integrable.3": False,
            "lie_form_nonzero.1": True, "lie_form_nonzero.3": True,
        },
    },
    {
        "id": "lie_a",
        "title": "Lie group, complex w.r.t. J2 but non-hypercomplex, signature (++--)",
        "kind": "lie_algebra",
        "eps": [1, 1, -1, -1],
        "generators": LIE_GENERATORS,
        "H": STANDARD_H,
        "tolerance": "lie",
        "expected": {
            "R.1221": "1", "R.1331": "1", "R.2332": "-1",
            "norm_N.1": "-8", "norm_nablaJ.1": "-4", "norm_theta.1": "-1",
            "norm_nablaJ.2": "8", "norm_theta.2": "4", "norm_N.2": "0",
            "norm_N.3": "-8", "norm_nablaJ.3": "12", "norm_theta.3": "1",
            "tau": "2", "tau_star.1": "-2", "tau_star.2": "0", "tau_star.3": "0",
        },
        "classes": {
            "integrable.1": False, "integrable.2": True, "integrable.3": False,
            "lie_form_nonzero.1": True, "lie_form_nonzero.2": True, "lie_form_nonzero.3": True,
        },
    },
    {
        "id": "lie_b",
        "title": "Lie group, flat Kähler w.r.t. J1 but non-hypercomplex, signature (+-+-)",
        "kind": "lie_algebra",
        "eps": [1, -1, 1, -1],
        "generators": LIE_GENERATORS,
        "H": {"J1": [3, 4, -1, -2], "J2": [-4, 3, -2, 1]},
        "tolerance": "lie",
        "expected": {
            "norm_N.2": "-8", "norm_nablaJ.2": "4", "norm_F.2": "4", "norm_theta.2": "1",
            "norm_N.3": "-8", "norm_nablaJ.3": "4", "norm_F.3": "4", "norm_theta.3": "1",
            "norm_F.1": "0", "tau": "0",
        },
        "classes": {
            "flat": True, "kaehler.1": True,
            "integrable.2": False, "integrable.3": False,
        },
    },
]

CATALOG = {e["id"]: e for e in _ENTRIES}

# comparison tolerances per entry class: (zero tests, relative formula matches)
TOLERANCES = {
    "chart": (1e-8, 1e-6),
    "lie": (1e-10, 1e-6),
    "embedded": (1e-6, 1e-4),
}
_DEFAULT_TOLERANCE = {"embedding": "embedded", "lie_algebra": "lie"}
ORTHONORMALITY_TOL = {"chart": 1e-10, "lie": 1e-10, "embedded": 1e-8}


_ALIAS = re.compile(r"^(norm_(?:N|F|theta|nablaJ)|tau_star)(\d)$")


def canonical_key(key):
    """Normalise ``norm_N2`` to ``norm_N.2``; other keys pass through."""
    m = _ALIAS.match(key)
    return f"{m.group(1)}.{m.group(2)}" if m else key


class ExpectedValues(dict):
    """Expected invariants at a point; also answers the undotted key spelling."""

    def __missing__(self, key):
        alt = canonical_key(key)
        if alt != key and alt in self:
            return self[alt]
        raise KeyError(key)


def list_examples():
    return sorted(CATALOG)


def get_data(example_id):
    try:
        return copy.deepcopy(CATALOG[example_id])
    except KeyError:
        raise UnknownExample(example_id) from None


def _matrix_callable(system, rows):
    compiled = [[system.compile(s) for s in row] for row in rows]

    def fn(u):
        env = system.environment(u)
        return [[c(env) for c in row] for row in compiled]
    return fn


def _vector_callable(system, items):
    compiled = [system.compile(s) for s in items]

    def fn(u):
        env = system.environment(u)
        return [c(env) for c in compiled]
    return fn


def _h_from_data(h):
    if h == "standard":
        return standard_h()
    return HTriple.from_images(h["J1"], h["J2"])


@dataclass
class ExampleSpec:
    id: str
    title: str
    kind: str
    eps: np.ndarray
    H: HTriple
    metric: Optional[object] = None        # ChartMetric or Embedding
    frame: Optional[FrameField] = None
    basis: Optional[LieAlgebraBasis] = None
    guard: Callable = None
    default_points: np.ndarray = None
    sample_box: Optional[np.ndarray] = None
    expected: dict = field(default_factory=dict)
    expected_classes: dict = field(default_factory=dict)
    errata: dict = field(default_factory=dict)
    tolerance: str = "chart"
    variant_of: Optional[str] = None
    data: dict = field(default_factory=dict, repr=False)

    @property
    def needs_points(self):
        return self.kind != "lie_algebra"

    def snapshots(self, points=None):
        if self.kind == "lie_algebra":
            return [lie_snapshot(self.basis)]
        pts = self.default_points if points is None else np.atleast_2d(np.asarray(points, dtype=float))
        bad = ~self.guard(pts)
        if np.any(bad):
            raise GeometryError(f"{self.id}: point {pts[np.argmax(bad)].tolist()} outside the domain")
        return snapshots(self.metric, self.frame, pts)

    def expected_at(self, point, reference="printed"):
        """Closed-form targets at ``point``.

        ``reference="printed"`` gives the printed values; ``"corrected"`` overlays
        the entry's errata (values re-derived where the printed ones are wrong).
        """
        u = [0.0] * 4 if point is None else [float(x) for x in point]
        system = ExprSystem(self.data.get("expected_defs", {}))
        env = system.environment(u)
        out = ExpectedValues((k, float(system.compile(src)(env))) for k, src in self.expected.items())
        if reference == "corrected" and self.errata:
            system = ExprSystem(self.data.get("errata_defs", self.data.get("expected_defs", {})))
            env = system.environment(u)
            out.update({k: float(system.compile(src)(env)) for k, src in self.errata.items()})
        elif reference not in ("printed", "corrected"):
            raise ValueError(f"unknown reference {reference!r}")
        return out

    def tolerances(self):
        return TOLERANCES[self.tolerance]


def from_data(data, validate=True):
    """Build (and by default validate) an :class:`ExampleSpec` from a declarative dict."""
    data = copy.deepcopy(data)
    ex_id = data.get("id", "<unnamed>")
    try:
        kind = data["kind"]
        eps = np.asarray(data["eps"], dtype=float)
        system = ExprSystem(data.get("defs", {}))
        spec = ExampleSpec(
            id=ex_id,
            title=data.get("title", ex_id),
            kind=kind,
            eps=eps,
            H=_h_from_data(data.get("H", "standard")),
            expected=dict(data.get("expected", {})),
            expected_classes=dict(data.get("classes", {})),
            errata=dict(data.get("errata", {})),
            tolerance=data.get("tolerance", _DEFAULT_TOLERANCE.get(kind, "chart")),
            variant_of=data.get("variant_of"),
            data=data,
        )
        if kind == "lie_algebra":
            gens = np.array([matrix_from_entries(
                4, {tuple(int(i) for i in k.split(",")): v for k, v in m.items()})
                for m in data["generators"]])
            spec.basis = LieAlgebraBasis(gens, tuple(eps))
            spec.default_points = np.zeros((0, 4))
        else:
            frame_rows = data["frame"]  # one list of coordinate components per frame vector
            coeffs = _matrix_callable(system, frame_rows)
            spec.frame = FrameField(lambda u, f=coeffs: [list(col) for col in zip(*f(u))], tuple(eps))
            if kind == "chart":
                spec.metric = ChartMetric(_matrix_callable(system, data["metric"]))
            elif kind == "embedding":
                spec.metric = Embedding(_vector_callable(system, data["embedding"]),
                                        tuple(data["ambient"]))
            else:
                raise ValidationError(ex_id, f"unknown construction kind {kind!r}")
            guards = [system.compile(s, allow_compare=True) for s in data.get("domain", [])]

            def guard(points, guards=guards, system=system):
                pts = np.atleast_2d(np.asarray(points, dtype=float))
                ok = np.all(np.isfinite(pts), axis=1)
                if guards:
                    with np.errstate(all="ignore"):
                        env = system.environment([pts[:, k] for k in range(4)])
                        for gexpr in guards:
                            ok &= np.asarray(gexpr(env), dtype=bool)
                return ok
            spec.guard = guard
            spec.default_points = np.atleast_2d(np.asarray(data["points"], dtype=float))
            if "sample_box" in data:
                spec.sample_box = np.asarray(data["sample_box"], dtype=float)
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(ex_id, f"malformed entry: {exc}") from None
    if validate:
        validate_spec(spec)
    return spec


def validate_spec(spec):
    """Structural validation; raises :class:`ValidationError` naming the failing check."""
    q = spec.H.quaternion_residual()
    if q > 1e-12:
        raise ValidationError(spec.id, "H is not an almost hypercomplex triple", q)
    try:
        verify_compatibility(spec.H, spec.eps)
    except GeometryError as exc:
        raise ValidationError(spec.id, f"H incompatible with the metric: {exc}") from None
    if spec.kind == "lie_algebra":
        try:
            c = structure_constants(spec.basis)
        except GeometryError as exc:
            raise ValidationError(spec.id, str(exc)) from None
        jac = jacobi_residual(c)
        if jac > 1e-12:
            raise ValidationError(spec.id, "Jacobi identity", jac)
        return spec
    pts = spec.default_points
    if not np.all(spec.guard(pts)):
        raise ValidationError(spec.id, "default point outside the domain guard")
    if spec.kind == "embedding":
        ranks = np.linalg.matrix_rank(spec.metric.jacobian(pts))
        if np.any(ranks < 4):
            raise ValidationError(spec.id, "embedding Jacobian is rank deficient")
    try:
        snaps = spec.snapshots(pts)
    except GeometryError as exc:
        raise ValidationError(spec.id, str(exc)) from None
    worst = max(orthonormality_residual(s) for s in snaps)
    if worst > ORTHONORMALITY_TOL[spec.tolerance]:
        raise ValidationError(spec.id, "frame is not orthonormal for the metric", worst)
    return spec


def build(example_id, validate=True):
    return from_data(get_data(example_id), validate=validate)


def expected(example_id, point=None, reference="printed"):
    return build(example_id, validate=False).expected_at(point, reference)


def to_json(spec_or_data, indent=2):
    data = spec_or_data.data if isinstance(spec_or_data, ExampleSpec) else spec_or_data
    return json.dumps(data, indent=indent, ensure_ascii=False)


def load_file(path, validate=True):
    with open(path, encoding="utf-8") as fh:
        return from_data(json.load(fh), validate=validate)
