"""Brute-force infimum of the probe over the integer (d1, d2) grid.

The minimum moves with kappa: just above 1 it runs to the corner of the
grid (both caps binding), around kappa ~ 3 it prefers d1 = 1 with a large
d2, and for big kappa it settles on tiny degrees of freedom. Small caps
keep this demo quick; the full 1999 x 1999 reproduction is

    fconc table

which also prints the reference values and flags the one inconsistent row.
"""

import time

from fconc import GridSpec, grid_infimum, infimum

caps = GridSpec(d1_max=120, d2_max=120)
print(f"caps: d1 <= {caps.d1_max}, 3 <= d2 <= {caps.d2_max}\n")

for kappa in (0.5, 1.0, 1.001, 1.5, 3.0, 16.0):
    t0 = time.perf_counter()
    res = grid_infimum(kappa, caps)
    dt = time.perf_counter() - t0
    print(
        f"kappa = {kappa:<7g} min = {res.grid_min:.9f} at "
        f"(d1, d2) = ({res.argmin_d1}, {res.argmin_d2})   [{dt:.2f}s]"
    )

# The full probe adds the b -> infinity limit curve and, for kappa <= 1,
# the exact closed-form verdict that the grid numbers only approach.
print()
for kappa in (0.5, 1.0, 2.0):
    res = infimum(kappa, caps)
    verdict = "conjectured > 1/2" if res.exact_inf is None else f"= {res.exact_inf} (not attained)"
    print(
        f"kappa = {kappa:<4g} grid {res.grid_min:.6f}, limit curve {res.limit_min:.6f}, "
        f"combined {res.combined_inf_estimate:.6f}, exact infimum {verdict}"
    )
