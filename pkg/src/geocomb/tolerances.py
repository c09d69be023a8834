"""Global numeric tolerances.

All geometry runs in 64-bit floats; every checker reports the residual it
achieved against these budgets.
"""

TOL_METRIC = 1e-9   # metric axioms, admissibility, extremality
TOL_SAMPLE = 1e-6   # path resampling agreement
TOL_GEO = 1e-7      # geodesic defect / consistency certificates
TOL_ID = 1e-4       # identification of cover points (sup distance)
TOL_LIP = 1e-9      # slack allowed on sampled Lipschitz constants

N_MAX_PROJECT = 10_000   # extremal-projection iteration cap
N_MAX_PERTURB = 200      # alternating midpoint iteration cap
DEPTH_MAX_SOLVER = 12    # dyadic subdivision cap for hull geodesics
DELTA_MIN_STEP = 1e-6    # smallest continuation step before declaring a stall
