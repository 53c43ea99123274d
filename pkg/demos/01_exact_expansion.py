#!/usr/bin/env python3
"""Walk through the exact expansion of the normalized remainder.

The target function F(q) = sum_m q^(m(m+1)/2)/(q;q)_m^2 satisfies, as
s -> 0 with q = exp(-s),

    F(e^-s) = sqrt(s / (2 pi sqrt5)) * exp(pi^2/(5s)) * R(s),

and this demo computes the series R(s) ~ 1 + sum_j b_j s^j exactly: every
b_j is an element of Q(sqrt5), produced by Gaussian-moment integration of
an exact series in t = sqrt(s).
"""

from unclosed.expansion import compute_expansion
from unclosed.series import exponent_series

J = 8

print("=== the exponent series, leading terms ===")
# powers through t^m are complete once summands up to index m+1 are included
ser = exponent_series(5, 4)
for m in ser.powers():
    print(f"  t^{m}: {ser.coeff(m)!r}")
print()

print(f"=== exact coefficients through order {J} ===")
result = compute_expansion(J, precision=30)
for j, (exact, flt) in enumerate(zip(result.b, result.b_float)):
    print(f"  b_{j:<2} = {exact.render():<28} ~ {flt}")
print()

print("=== exponential form (formal log of the same series) ===")
for j, (exact, flt) in enumerate(zip(result.c, result.c_float), start=1):
    print(f"  c_{j:<2} = {exact.render():<28} ~ {flt}")
print()

print("=== growth of |b_j|^(1/j): a convergent series would level off ===")
for j, root in enumerate(result.growth, start=1):
    bar = "#" * int(root * 60)
    print(f"  j={j:<2} {root:8.5f} {bar}")
