"""Fermat quotients seen through cyclotomic values.

A prime l not dividing m*a divides Phi~_m(a) exactly when a has order m
mod l, and l^2 divides it exactly when q_l(a) = 0.  For a = 14 the prime 29
is the only square among the factors of Phi~_m(14), m <= 40.
"""
from thetareg.fermat_lab import factor_phi_tilde, fermat_mean_scan, repeated_primes, square_law

for m in (6, 28, 35):
    a = 8 if m == 6 else (14 if m == 28 else 12)
    f = factor_phi_tilde(a, m)
    print(f"Phi~_{m}({a}) = {f.phi_tilde} = " + " * ".join(f"{q}^{e}" if e > 1 else str(q) for q, e in f.factors))

print("\nsquare law at l=29, a=14:", square_law(14, 29))
print("repeated primes of Phi~_m(14), m <= 40:", repeated_primes(14, 40))

ms = fermat_mean_scan(839, 100_000)
print(f"\nq_p(839)/p over {ms.n} primes: mean {ms.mean:.5f}, zeros {ms.zeros}")
print("decile histogram:", ms.histogram)
