"""How much mass does an F distribution put below a multiple of its mean?

Walks through the basic objects: degrees of freedom, the mean d2/(d2-2),
the threshold q(a, b, kappa) that turns the question into an incomplete
beta evaluation, and the probe probability itself.
"""

from fconc import FParams, cdf, mean, prob_leq_kappa_mean, threshold

p = FParams(d1=2, d2=4)
print(f"F({p.d1}, {p.d2}): mean = {mean(p)}")

# At kappa = 1 the question is "how much mass sits below the mean?"
# For d1 = 2 there is a closed form: 1 - (d2/(2x+d2))^(d2/2).
for kappa in (0.5, 1.0, 1.5, 4.0):
    v = prob_leq_kappa_mean(p, kappa)
    print(f"  P(X <= {kappa:>4} * mean) = {v:.12f}")

# The threshold identity: the probe is the F CDF evaluated at kappa * mean,
# but formed as kappa*a / (kappa*a + b - 1) to avoid cancellation.
s = p.shape()
kappa = 1.5
q = threshold(s, kappa)
print(f"\nshape (a, b) = ({s.a}, {s.b}), threshold q = {q:.12f}")
print(f"probe path : {prob_leq_kappa_mean(p, kappa):.15f}")
print(f"cdf path   : {float(cdf(kappa * mean(p), p)):.15f}")

# Mass below the mean always exceeds 1/2 (measure concentration), and the
# excess shrinks as both degrees of freedom grow.
print("\nP(X <= mean) along a diagonal of growing degrees of freedom:")
for d in (3, 10, 100, 1000):
    v = prob_leq_kappa_mean(FParams(d, d + 2), 1.0)
    print(f"  d1 = {d:>5}, d2 = {d+2:>5}: {v:.9f}")
