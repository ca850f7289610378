"""The Gauss-sum prime statistic H, Vaughan's identity and the support limit."""

from eisencubic import EisensteinInt, h_grid, vaughan_decompose, verify_ha_identity
from eisencubic.characters import all_lambdas
from eisencubic.hsums import geometric_grid, max_support

rep = h_grid(geometric_grid(1e3, 1e5, 6))
for z, h in zip(rep.Z, rep.H):
    print(f"Z = {z:9.0f}: H = {h.real:+10.3f} {h.imag:+10.3f}i")
print(f"log-log slope {rep.slope:.3f}, 95% CI ({rep.slope_ci[0]:.3f}, {rep.slope_ci[1]:.3f})")

Z = 1000
v = vaughan_decompose(Z, EisensteinInt(-2, -3), Z ** (1 / 3), all_lambdas()[4])
print(f"\nVaughan at Z = {Z}: residual {v.identity_residual:.1e}, Sigma_4 = {v.sigma['4']}")
for k, s in v.sigma.items():
    print(f"  Sigma_{k:3s} = {s:.4f}")

print(f"\nh_a factorization mismatch: {verify_ha_identity(EisensteinInt(-2, -3), EisensteinInt(1, -3)):.1e}")
v, term = max_support()
print(f"largest admissible support {v}, limited by the exponent pair {term}")
