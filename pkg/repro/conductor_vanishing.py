"""Conductor-profile vanishing: S_{l,[N]} v_0 = 0 for N >= m + l - 1."""

from critcenter import root_fn_km0, ss_operator_act, vanishing_report

ok = True
for (n, m) in [(2, 1), (2, 2), (3, 1)]:
    rf = root_fn_km0(n, m)
    report = vanishing_report(n, rf, scan_window=2)
    attained = not ss_operator_act(n, 1, m - 1, rf).is_zero()
    print(
        f"n={n} m={m}: thresholds {report['thresholds_theoretical']} "
        f"verified {report['verified']} threshold attained at l=1: {attained}"
    )
    ok = ok and all(report["verified"]) and attained
print("OK" if ok else "FAILED")
