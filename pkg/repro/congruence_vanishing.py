"""Congruence-profile vanishing: S_{l,[N]} v_0 = 0 for N >= l m."""

from critcenter import root_fn_constant, vanishing_report

ok = True
for (n, m) in [(2, 1), (2, 2), (3, 1)]:
    report = vanishing_report(n, root_fn_constant(n, m), scan_window=2)
    print(
        f"n={n} m={m}: thresholds {report['thresholds_theoretical']} "
        f"verified {report['verified']}"
    )
    ok = ok and all(report["verified"])
print("OK" if ok else "FAILED")
