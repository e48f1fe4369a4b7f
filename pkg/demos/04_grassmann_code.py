# The Grassmann code of Gr(3,6) over F_2 and the SL_6(F_2) orbits on trivectors.
import time

import numpy as np

from grassdim import finite_codes as fc

P = fc.count_points(6, 3, 2)
G = fc.generator_matrix(6, 3, 2)
print("points", P, "generator", G.shape)

# column weights of the code generated by G
weights = G.data.sum(axis=0)
vals, counts = np.unique(weights, return_counts=True)
print("column weights", dict(zip(vals.tolist(), counts.tolist())))

# orbits of the normal forms
for label, form in fc.SEED_FORMS.items():
    print(f"{label:>10} {form:<22} {len(fc.orbit_closure(fc.parse_seed_form(form))):>7}")

t0 = time.perf_counter()
table = fc.classify_all()
print(f"classified in {time.perf_counter() - t0:.2f}s")
for o in table.orbits:
    print(f"{o.label:>10} {o.size:>7}  first mask {fc.format_seed_form(o.seed)}")
print("total", table.total, "== 2^20 - 1:", table.is_complete)

check = fc.fiber_count_check()
print("63 * (1023 - 155) =", check.lhs, "orbit", check.rhs)
