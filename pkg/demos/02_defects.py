# Defective secants: oracle against expected and fiber-bundle predictions.
from grassdim import SecantParams, dimension, predict
from grassdim.formulas import secant_dim_conjectural

print("known defective secants (projective dims)")
for n, k, s in [(6, 2, 2), (7, 2, 2), (8, 2, 3), (7, 3, 3), (8, 4, 3), (8, 4, 4), (9, 3, 4)]:
    rep = dimension(SecantParams(n, k, s))
    table = secant_dim_conjectural(n, k, s)
    print(f"  sigma_{s}(Gr({k},{n})): oracle {rep.proj_dim:>3}  expected {rep.expected_dim:>3}"
          f"  table {table.dim:>3} ({table.source.value})")

# restricted secants inherit the defect of the fibre sigma_s(Gr(k-r, n-r))
print("sigma_3^1(Gr(4,8)):", dimension(SecantParams(8, 4, 3, 1)).proj_dim, "vs expected",
      predict(8, 4, 3, 1).expected_dim)

# two 6-planes in C^8 always meet in a 4-plane, whatever r we ask for
for r in range(1, 5):
    rep = dimension(SecantParams(8, 6, 2, r))
    print(f"sigma_2^{r}(Gr(6,8)): {rep.proj_dim}  expected {rep.expected_dim}  fiber {rep.fiber_dim}")

# 7n-18 would give 31 for sigma_3^1(Gr(3,7)); the other counts side by side
p = predict(7, 3, 3, 1)
rep = dimension(SecantParams(7, 3, 3, 1))
print("sigma_3^1(Gr(3,7)): oracle", rep.proj_dim, "fiber", p.fiber_dim, "dimfam", p.dimfam_value)
