"""Family sizes, the one-level density and the non-vanishing proportion."""

from fractions import Fraction

from eisencubic import family_mass, fejer, gaussian, nonvanishing_bound, one_level_density_primeside

w = gaussian()
for X in (1e4, 1e5, 1e6):
    m = family_mass("thin", w, X)
    print(f"X = {X:.0e}: {m.count} members, A(X) = {m.A:.2f}, predicted {m.predicted:.2f}, ratio {m.ratio:.4f}")

phi = fejer(0.5)
print("\none-level density with the Fejer kernel, v = 1/2 (phi_hat(0) = 2):")
for X in (1e4, 1e5, 1e6):
    rep = one_level_density_primeside("thin", w, phi, X)
    print(f"  X = {X:.0e}: D = {rep.D_primeside:.4f}, conductor {rep.conductor_term:.4f}, "
          f"Gamma {rep.gamma_term:.4f}, primes {sum(rep.prime_terms.values()):.4f}")

nv = nonvanishing_bound("thin", Fraction(13, 11))
print(f"\nproportion of non-vanishing at v = 13/11: {nv.asymptotic}")
