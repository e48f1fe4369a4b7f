# Dimensions of secant varieties of Gr(3,7) by Jacobian rank at a random point.
import numpy as np

from grassdim import SecantParams, dimension, rationals
from grassdim.terracini import jacobian, sample_point

# sigma_2(Gr(3,7)): two general 3-planes in C^7
rep = dimension(SecantParams(7, 3, 2, 0))
print("sigma_2(Gr(3,7))   cone", rep.cone_dim, "proj", rep.proj_dim, "ranks", rep.ranks)

# force the two planes to share a line
rep = dimension(SecantParams(7, 3, 2, 1))
print("sigma_2^1(Gr(3,7)) cone", rep.cone_dim, "proj", rep.proj_dim)
print("  virtual", rep.virtual_dim, "expected", rep.expected_dim, "fiber", rep.fiber_dim)
print("  dimfam count (virtual, ignores the defective fibre):", rep.dimfam_value)

# the Jacobian itself: 35 Pluecker coordinates by 35 source variables
pt = sample_point(SecantParams(7, 3, 2, 1), rationals(), np.random.default_rng(0))
J = jacobian(pt)
print("Jacobian shape", J.shape, "first row", J.tolist()[0][:7], "...")

# same rank over Q, no reduction mod p involved
print("over QQ:", dimension(SecantParams(7, 3, 2, 1), rationals()).cone_dim)

# 5n - 16 for sigma_2^1(Gr(3,n))
for n in range(6, 10):
    d = dimension(SecantParams(n, 3, 2, 1)).proj_dim
    print(f"n={n}: proj {d}, 5n-16 = {5 * n - 16}")
