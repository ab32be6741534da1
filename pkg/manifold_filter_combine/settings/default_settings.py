# -*- coding: utf-8 -*-

# graph construction
INTRINSIC_DIM = 2
EPS_SCALE = 1.9
KNN_SCALE = 1.0
CHECK_INVARIANTS = False

# eigensolver
KAPPA = 64
DENSE_SOLVER_MAX_N = 2048
SOLVER_TOL = 1e-8
SOLVER_RESIDUAL_TOL = 1e-6

# chebyshev filtering
CHEBYSHEV_DEGREE = 30
LAMBDA_MAX_SAFETY = 1.05
POWER_ITERATIONS = 300

# experiments
N_GRID = [512, 1024, 2048, 4096]
TRIALS = 10
EIGENTRACK_COUNT = 8
BASE_SEED = 0
JOBS = 1
FAILED_TRIAL_LIMIT = 0.5

# acceptance gates, frozen before any tuning
EIGENVALUE_GATE = 0.2
DECAY_GATE = 2.0
DEPTH_RATIO_GATE = 3.5
BERNSTEIN_GATE = 0.05
