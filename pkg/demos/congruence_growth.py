"""Principal congruence covers of the modular group.

Index grows like p^3 while the shortest kernel geodesic grows like log p,
so the systole is roughly linear in log area.  Run: python3 demos/congruence_growth.py
"""

from semiarith.congruence import SL2Z, fit_slope, growth_table

rows = growth_table(SL2Z, [3, 5, 7, 11, 13, 17], 8)
print("%4s %6s %10s %12s  %s" % ("p", "index", "area/pi", "min length", "status"))
for r in rows:
    row = r.csv_row()
    print("%4s %6s %10s %12s  %s" % (row["p"], row["index"], row["area_over_pi"],
                                     row["min_kernel_length"], row["status"]))
print("fitted slope of length against log area: %.4f" % fit_slope(rows))
