"""Eisenstein integers, primary primes and the cubic residue symbol."""

from eisencubic import EisensteinInt, cubic_symbol_fast, cubic_symbol_slow, factor, prime_table
from eisencubic.characters import symbol_at_prime

z = EisensteinInt(91, 30)
f = factor(z)
print(f"{z} has norm {z.norm()}")
print("  unit", f.unit, "power of (1 - w):", f.lambda_exp)
for p, e in f.factors:
    print(f"  {p} ^ {e}   (norm {p.norm()})")
assert f.recompose() == z

table = prime_table(1000)
print(f"\n{len(table)} primary primes of norm <= 1000; the first few:")
print("  ", ", ".join(f"{p} [{p.norm()}]" for p in table.primes[:8]))

a, n = EisensteinInt(5, -7), EisensteinInt(-34, -27)
print(f"\n({a}/{n})_3 fast = {cubic_symbol_fast(a, n)}, slow = {cubic_symbol_slow(a, n)}")

p, q = table.primes[5], table.primes[11]
print(f"reciprocity: ({p}/{q}) = {symbol_at_prime(p, q)}, ({q}/{p}) = {symbol_at_prime(q, p)}")
