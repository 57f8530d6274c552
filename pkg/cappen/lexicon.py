# Copyright 2026 The cappen Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License.  You may obtain a copy of
# the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
# License for the specific language governing permissions and limitations under
# the License.

"""The cappen lexicon: names, file formats and default tolerances."""
from __future__ import unicode_literals

# Support surface kinds.
SURFACE_PLANE = "plane"
SURFACE_GRAPH = "graph"
SURFACE_AXISYMMETRIC = "axisymmetric"
SURFACE_CATENOID_EXTENSION = "catenoid_extension"

# Axisymmetric profile families.
PROFILE_CATENOID = "catenoid"
PROFILE_PRESCRIBED_CURVATURE = "prescribed_curvature"

# Graph end families.
PSI_FLAT = "flat"
PSI_LOG = "log"
PSI_CATENOID = "catenoid"

# Mesh file format.
CAPMESH_HEADER = "capmesh v1"

# Degeneracy floor on triangle quality (inradius / longest edge).
DEFAULT_QUALITY_FLOOR = 1e-3

# Boundary vertices with sin(theta) below this are tangent to S.
TANGENCY_FLOOR = 1e-6

# Quadrature.
CIRCLE_NODES = 512
LEGENDRE_NODES = 16
LEGENDRE_PANEL = 0.25

# Closest point projection.
PROJECTION_MAX_STEPS = 50
PROJECTION_TOL = 1e-13

# Exterior mass extrapolation I(r) = m + c r^-q.
MASS_EXPONENT_BOUNDS = (0.5, 2.0)
MASS_MIN_RADIUS_RATIO = 1.2

# Solver defaults.
DEFAULT_TOL_GRAD = 1e-6
# Relative change of J_t over STALL_WINDOW iterations that counts as stalled.
DEFAULT_TOL_ENERGY = 1e-9
STALL_WINDOW = 20
# A run that exhausts its iterations while its area keeps falling below
# SHRINK_FRACTION of the seed, by at least SHRINK_RATE per window, collapses.
SHRINK_FRACTION = 0.5
SHRINK_RATE = 1e-3
DEFAULT_TOL_ANGLE = 2e-2
DEFAULT_MAX_ITERS = 500
DEFAULT_SHRINK = 0.5
DEFAULT_ARMIJO = 1e-4
DEFAULT_COLLAPSE_FRACTION = 1e-3
DEFAULT_T_MAX = 3.0
DEFAULT_T_STEP = 0.1

# Monotonicity slack used by the sweep validation and summaries.
MONOTONE_SLACK = 1e-3
LATERAL_SLACK = 1e-9
MIN_RADIUS_GRACE = 1e-3

# Sweep summaries: max m_f may exceed m by this much. Sampled H(S) below
# -H_SIGN_FLOOR violates the mean convexity hypothesis.
MF_MASS_SLACK = 1e-2
H_SIGN_FLOOR = 1e-8
POSITIVE_MASS_FLOOR = 1e-8

# Coarse area estimate |Sigma cap B_r| <= 4 pi r^2 (1 + eps).
COARSE_AREA_EPS = 1e-2

# Finite difference verification.
FD_STEPS = (1e-4, 1e-5)
FD_FIRST_TOL = 1e-6
FD_SECOND_TOL = 1e-4
# Q(f) against the discrete second variation, per (2 pi / n)^2 for n
# boundary vertices on S.
FORM_RESOLUTION_FACTOR = 1.0
FORM_CROSS_CHECK_TOL = 1e-4
MIN_BOUNDARY_VERTICES = 8

# Eigen solver.
EIGEN_TOL = 1e-8
DENSE_EIGEN_LIMIT = 2500

# Flux and neck.
FLUX_HOMOTOPY_RTOL = 1e-6
FLUX_HOMOTOPY_ATOL = 1e-9
NECK_TOLERANCE = 3e-2

# Sweep CSV schema.
SWEEP_COLUMNS = ("t", "area", "lateral_area", "mf", "residual", "grad_norm",
                 "kappa", "components", "min_radius", "iters")

# Verdicts.
VERDICT_CATENOID_OR_PLANE = "catenoid-or-plane candidate"
VERDICT_NEITHER = "not a catenoid or plane"

PASS = "PASS"
FAIL = "FAIL"

# CLI exit codes.
EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_BAD_CONFIG = 2
EXIT_MONOTONICITY_FAIL = 3
EXIT_NON_CONVERGENCE = 4
EXIT_RESOLUTION = 5

# Output files.
SWEEP_CSV = "sweep.csv"
SWEEP_SUMMARY = "sweep_summary.json"
MASS_SUMMARY = "mass.json"
FLUX_SUMMARY = "flux.json"
VERIFY_REPORT = "verify.yaml"
PLOT_MF = "mf_vs_t.png"
PLOT_PROFILE = "upsilon_vs_s.png"

# Environment.
LOG_ENV = "CAPPEN_LOG"
SLOW_TESTS_ENV = "CAPPEN_SLOW_TESTS"

# Discrete profile checks along a sweep.
COMPARISON_EPS = 5e-2
SLOPE_TOL = 1e-2
