"""Relations among the conjugates of alpha in the D6 sextic field.

At a prime where the degree-2 character chi2 vanishes, the conjugates of
alpha satisfy F_p-linear relations.  They form a G-module whose dimension
is 2 * delta, and each relation lifts to a p-th power statement mod p^2.
"""
from thetareg import alpha_of, parse_field, regulator_report
from thetareg.scanner import ScanConfig, scan

fld = parse_field("d6")
print("group order:", fld.group.labels)

eta = fld.element([1, -3, 0, -7, 1, -1])  # x^5 - 3x^4 - 7x^2 + x - 1
res = scan(ScanConfig(fld, eta, 100_000, chars=("chi2",)))
for hit in res.hits:
    print(f"p={hit.p:6d}  delta={hit.report.delta}  lifts={hit.lift}")
    for c in hit.report.kernel:
        print("          relation", c)

# a rare case: L^theta of dimension 4 (delta = 2)
eta2 = fld.element([3, -20, 15, 16, 9, 21])
rep = regulator_report(alpha_of(eta2, 7, fld))
print("\np=7, second eta: delta =", rep.delta, " kernel dim =", len(rep.kernel))
for row in alpha_of(eta2, 7, fld).high_rows():
    print("   ", row)
