import math
import os

# Surface energy density prefactor, and the decay rate of the planar boundary-layer profile
FOURTH_ROOT_24 = 24 ** 0.25
PROFILE_RATE = 1.5 ** 0.25

SQRT_2_3 = math.sqrt(2. / 3.)
SQRT_3_2 = math.sqrt(1.5)

# Default output directory for figure data and CSV dumps
OUTPUT_DIR = os.getenv('ANCHORING_OUTPUT_DIR', os.getcwd())

# Q-tensor algebra
ZERO_NORM_TOL = 1e-14
DEGENERACY_TOL = 1e-9  # relative to |Q|

# Boundary-layer profile
PROFILE_R_MAX = 40.
PROFILE_POINTS = 10001
UNIT_DIRECTOR_TOL = 1e-8

# Surfaces and quadrature
UNIT_NORMAL_TOL = 1e-12
AREA_RTOL = 1e-6
MIN_TRIANGLE_AREA = 1e-12
MIN_RESOLUTION = 8
DEFAULT_RESOLUTION = 128
MESH_MERGE_TOL = 1e-9

# Energy engines
SWITCH_DELTA = 1e-3
DEGENERATE_LOCUS_TOL = 1e-12

# Orientation search
LATTICE_POINTS = 2048
AXIAL_LATTICE_POINTS = 129
AXIS_SAMPLE_RESOLUTION = 8  # flat faces: the rule is exact at any resolution
CENSUS_POINTS = 256
ORIENT_RESOLUTION = 64
MAX_ITERATIONS = 500
NEWTON_ITERATIONS = 50
ORIENT_TOL = 1e-8
POLISH_TOL = 1e-5
ARMIJO = 1e-4
NEWTON_MAX_STEP = 0.2
CLUSTER_RADIUS = 1e-3
HESSIAN_STEP = 1e-4
GRADIENT_STEP = 1e-6
MONOTONE_TOL = 1e-3

# Tangent fields and defects
DEGREE_TOL = 1e-3
MAX_REFINEMENTS = 4
DEFECT_RADIUS_FACTOR = 0.25
PROJECTION_TOL = 1e-10
FIELD_MESH_RESOLUTION = 128
