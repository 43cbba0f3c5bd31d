# The induction step needs a handful of real inequalities in p = log_4(3).
# Each one is checked here with outward-rounded intervals and written out as
# a certificate that can be re-checked later.

from localdiff import prover

# f1(x) = x^p + x^2p + 1 - (x+1)^2p touches zero at x = 1, so plain bisection
# can never finish there.  Near 1 we switch to a Taylor argument:
# f1 >= c2 (x-1)^2 - (M/6)|x-1|^3 with c2 = p^2 - 3p/4 and |f1'''| < M = 1/10.
cert = prover.certify_f1_nonneg()
by_method = {}
for box in cert.boxes:
    by_method[box.method] = by_method.get(box.method, 0) + 1
print("f1:", cert.status, by_method)
for premise in cert.premises:
    print("   ", premise.to_line())

# The reduction to (1/10, 10) only works because 1 + 10^p beats 12^p, by a hair.
print("1 + 10^p - 12^p in", prover.domain_reduction_margin())

# The other pieces.
for name in ("f0", "gamma-reduction", "subadditivity"):
    c = prover.CLAIMS[name]()
    print(f"{name}: {c.status}, {len(c.boxes)} boxes")

# Certificates are plain text; round-trip one and re-check it at 128 bits.
text = cert.to_text()
print(text.splitlines()[:6])
again = prover.Certificate.from_text(text)
print("re-validated:", prover.validate_certificate(again).ok)

# Finally the integer form used at every node of the recursion:
# (ac)^p + (ad)^p + (bc)^p >= ((a+b)(c+d))^p.  Equality cases (a=b, c=d)
# are decided exactly through 4^p = 3; the rest by float enclosures.
report = prover.check_tight_inequality_grid(30)
print("\n".join(report.lines()))
