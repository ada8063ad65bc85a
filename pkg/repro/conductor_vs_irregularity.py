"""Pole bounds from conductor annihilation and the attained irregularity."""

from critcenter import conductor_irregularity_report

ok = True
for n in (1, 2, 3):
    for m in (1, 2):
        report = conductor_irregularity_report(n, m, scan_window=1)
        print(
            f"n={n} m={m}: pole bounds {report['pole_bounds']} "
            f"witness irregularity {report['witness_irregularity']} "
            f"(budget {report['irregularity_bound']})"
        )
        ok = ok and report["witness_irregularity"] == m - 1
        ok = ok and report["vanishing_verified"]
print("OK" if ok else "FAILED")
