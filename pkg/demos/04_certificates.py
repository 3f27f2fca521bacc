"""Partition certificates: why an intersection answer is right."""

from trieset import compute_delta, compute_xi, validate

S1 = [1, 3, 7, 8, 9, 10, 11, 12]
S2 = [2, 5, 7, 12, 15]
delta, cert = compute_delta([S1, S2], 16)
print("delta =", delta)
for iv in cert.intervals:
    print("  ", iv)
print("valid:", validate(cert, [S1, S2]))

# runs of answers can share an interval
family = [list(range(7, 16)), list(range(5, 15)),
          [4, 5, 6, 7, 8, 9, 11, 12, 13, 14], list(range(8, 16))]
xi, run_cert = compute_xi(family, 16)
delta, _ = compute_delta(family, 16)
print(f"\nxi = {xi}, delta = {delta}")
for iv in run_cert.intervals:
    print("  ", iv)
