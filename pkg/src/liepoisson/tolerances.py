"""Numeric thresholds used across the package.

Every tolerance that appears in a contract lives here, so that tests and
library code agree on one set of numbers.
"""

# Residual allowed when an object is built from exactly specified data
# (structure constants, skew coefficients, section consistency).
CONSTRUCTION_TOL = 1e-12

# Residual allowed when verifying an algebraic identity numerically
# (duality, Jacobi of a valid algebra, closed forms vs. brute force).
VERIFICATION_TOL = 1e-10

# Compatibility of cocycle data: below PASS the extension is accepted,
# above FAIL it is rejected, in between the verdict is "indeterminate".
COMPATIBILITY_PASS = 1e-8
COMPATIBILITY_FAIL = 1e-6

# A pairing gram counts as invertible when smallest/largest singular
# value exceeds this ratio.
GRAM_CONDITION_TOL = 1e-10

# Largest principal angle (as projector-difference norm) below which two
# subspaces count as equal.
SUBSPACE_TOL = 1e-8

# Relative step for central finite differences, and the accuracy expected
# of a finite-difference gradient against an analytic one.
FD_STEP = 1e-5
FD_CHECK_TOL = 1e-5
