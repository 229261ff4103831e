"""The identity suite that keeps the numerics honest.

Every claim the library leans on is re-checked numerically: the b -> b+1
recurrence of the incomplete beta, strict monotonicity in b and in kappa,
convergence to the lower-gamma limit, and agreement between the continued
fraction and a tanh-sinh quadrature that shares no code with it.
"""

from fconc import quad_inc_beta, reg_inc_beta, run_suite

# two completely independent evaluations of the same integral
x, a, b = 0.9411764705882353, 0.5, 1.5   # the (d1, d2) = (1, 3), kappa = 16 point
cf = reg_inc_beta(x, a, b)
qd = quad_inc_beta(x, a, b)
print("continued fraction :", f"{cf:.15f}")
print("tanh-sinh oracle   :", f"{qd:.15f}")
print("difference         :", f"{abs(cf - qd):.3e}")

print("\nfull verification suite (quick profile):")
report = run_suite("quick")
for c in report.checks:
    print(f"  {c.name:<34} samples={c.samples:<5} max residual={c.max_residual:.3e}  "
          f"{'pass' if c.passed else 'FAIL'}")
print(f"overall: {'PASS' if report.overall else 'FAIL'} (seed {report.seed})")
