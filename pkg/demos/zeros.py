"""The L-function of a cubic character: functional equation and zeros to height 20."""

from eisencubic import EisensteinInt, classify, fe_residual, find_zeros
from eisencubic.lfunction import hardy_z, ldata_for_fe, ldata_for_height

chi = classify(EisensteinInt(1, 9))
print(f"character of conductor norm {chi.conductor.norm()}")

grid = [complex(0.2, 3.0), complex(0.5, 10.0), complex(1.3, 1.0)]
ld = ldata_for_fe(chi, grid)
for s in grid:
    print(f"  functional equation residual at s = {s}: {fe_residual(ld, s, ld.conjugate()):.1e}")

ld = ldata_for_height(chi, 20.0)
zl = find_zeros(ld, 20.0)
print(f"\n{len(zl)} zeros with 0 < gamma <= 20 (winding count {zl.winding_count}):")
for g in zl.zeros:
    print(f"  {g:.10f}   Z(gamma) = {hardy_z(ld, g):+.1e}")
