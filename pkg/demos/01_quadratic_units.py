"""Where does the regulator of a real quadratic unit vanish?

For eta = 5 + 2 sqrt(6) (a unit of norm 1) the trace character is null at
every prime, since alpha(N(eta)) = alpha(1) = 0.  The interesting character
is chi, whose regulator is 2v for alpha = u + v sqrt(6); it vanishes only
at a handful of primes.
"""
from thetareg import alpha_of, parse_field, regulator_report
from thetareg.scanner import ScanConfig, scan, suspected_trivial

fld = parse_field("quad:6")
eps = fld.element([2, 5])  # 2x + 5, highest degree first

for p in (5, 7, 11, 523):
    a = alpha_of(eps, p, fld)
    rep = regulator_report(a)
    print(f"p={p:4d}  alpha={a.high_rows()[0]}  residues={rep.residues}")

res = scan(ScanConfig(fld, eps, 10_000, chars=("all",)))
print("\nprimes below 10^4 with a vanishing chi-regulator:",
      [h.p for h in res.hits if "chi" in h.chars])
print("characters null at every tested prime:", suspected_trivial(res))
