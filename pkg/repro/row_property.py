"""Every monomial of S_l contains at most one factor from the bottom row."""

from critcenter import check_row_property, ss_vectors

ok = True
for n in range(1, 6):
    family = ss_vectors(n)
    checks = [check_row_property(s, n)[0] for s in family.S]
    print(f"n={n}: {checks}")
    ok = ok and all(checks)
print("OK" if ok else "FAILED")
