# Recover the common subspace E and the fibre form t from a point of sigma_2^1.
import numpy as np

from grassdim import SecantParams, rationals, sample_point
from grassdim.exterior import (
    PlueckerVector,
    embed_fiber,
    fiber_coordinates,
    proportionality,
    recover_overlap,
)
from grassdim.terracini import pluecker_sum

QQ = rationals()

# e0e1e2 + e0e3e4: two 3-planes sharing the line through e0
w = PlueckerVector.basis(5, (0, 1, 2), QQ) + PlueckerVector.basis(5, (0, 3, 4), QQ)
E = recover_overlap(w, 1)
t = fiber_coordinates(w, E)
print("E =", E.tolist())
print("t =", t.terms(), "on the 4-dim quotient")
print("e0 ^ t == w:", embed_fiber(E, t) == w)

# a random point of sigma_2^1(Gr(3,7)) over Q
pt = sample_point(SecantParams(7, 3, 2, 1), QQ, np.random.default_rng(3))
w = pluecker_sum(pt)
E = recover_overlap(w, 1)
t = fiber_coordinates(w, E)
c = proportionality(embed_fiber(E, t), w)
print("shared row   ", list(pt.shared[0]))
print("recovered E  ", [str(x) for x in E.tolist()[0]])
print("  (a rescaling of the shared row)")
print("round trip scale", c)
