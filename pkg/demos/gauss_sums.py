"""Cubic Gauss sums: direct sums, the factored evaluation and root numbers."""

import math

from eisencubic import EisensteinInt, classify, gauss_direct, gauss_fast, root_number, root_number_direct

n1, n2 = EisensteinInt(-2, -3), EisensteinInt(1, -3)  # norms 7 and 13
r = EisensteinInt(2, 5)  # norm 19, prime to both moduli
for n in (n1, n2, n1 * n2, n1 * n1):
    d, f = gauss_direct(r, n).value, gauss_fast(r, n).value
    print(f"g({r}, {n}): direct {d:.6f}, fast {f:.6f}, |g|^2 / N = {abs(d) ** 2 / n.norm():.6f}")

print("\nroot numbers of a few thin-family characters")
for n in (EisensteinInt(1, 9), EisensteinInt(10, 9), EisensteinInt(19, 0)):
    chi = classify(n)
    W1, W2 = root_number(chi).value, root_number_direct(chi).value
    N = chi.conductor.norm()
    print(f"  n = {n}: W / sqrt(N) = {W1 / math.sqrt(N):.6f}, direct agrees to {abs(W1 - W2):.1e}")
