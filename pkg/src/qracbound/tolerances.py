"""Numerical tolerances shared by every module.

Keep all thresholds here so there is a single place to tune them.
"""

#: Maximum |H - H^dagger| entry accepted as Hermitian.
HERM_TOL = 1e-12
#: Reconstruction / round-trip accuracy expected from the eigensolver.
RECON_TOL = 1e-10
#: A matrix is positive semidefinite when its smallest eigenvalue is >= -PSD_TOL.
PSD_TOL = 1e-9

#: Jacobi stops once the off-diagonal Frobenius norm drops below this
#: (relative to max(1, ||H||_F)).
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

#: Eigenvalues within this (relative) distance of the largest one are treated
#: as one degenerate top eigenspace.
TOP_DEGEN_TOL = 1e-12
#: Eigenvalues >= -ZERO_EIG_TOL count as non-negative for projector selection.
ZERO_EIG_TOL = 1e-12

#: Tolerance for the geometric membership / boundary checks.
GEOM_TOL = 1e-9
