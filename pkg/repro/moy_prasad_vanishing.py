"""Filtration-point profiles: x = 0 recovers congruence; a generic point."""

from fractions import Fraction

from critcenter import root_fn_constant, root_fn_moy_prasad, vanishing_report

ok = True
for (n, m) in [(2, 1), (2, 2), (3, 1)]:
    rf = root_fn_moy_prasad(n, [0] * n, m - 1)
    same = rf == root_fn_constant(n, m)
    report = vanishing_report(n, rf, scan_window=1)
    print(f"x=0, r={m-1}: equals congruence depth {m}: {same}; verified {report['verified']}")
    ok = ok and same and all(report["verified"])

generic = root_fn_moy_prasad(2, [Fraction(1, 2), 0], 0)
report = vanishing_report(2, generic, scan_window=2)
print(
    f"x=(1/2,0), r=0: depth matrix {generic.as_matrix()} thresholds "
    f"{report['thresholds_theoretical']} verified {report['verified']}"
)
ok = ok and all(report["verified"])
print("OK" if ok else "FAILED")
