"""
What does the infinite order look like?
=======================================

With infinitely many items the order can look like the positive integers,
the negative integers, the rationals, or a stack of these.  Which one you
get depends on where the sizes accumulate and on the Dirichlet series
sum_i exp(-x w(i)).
"""

import math

from sizebiased import classifier, sizes

families = [
    sizes.geometric(0.5),
    sizes.geometric(2.0),
    sizes.constant(1.0),
    sizes.power(-2.0),
    sizes.power(-0.5),
    sizes.log_power(0.5),
    sizes.log_power(1.0),
    sizes.log_power(2.0),
    sizes.log_plus_two_log_log(),
    sizes.karamata_stirling(0.5),
    sizes.karamata_stirling(2.0),
]
for desc in families:
    kind, ev, _ = classifier.classify_descriptor(desc)
    print(f"{desc!r:<45} {kind.value:<12} {ev.fired_case.value}")

# For w(i) = log(i+1) the series is a shifted zeta function: it converges
# for x > 1 and diverges at x = 1.
w = sizes.log_power(1.0)
print("sum (i+1)^-2 up to 10^6:", classifier.dirichlet_partial(w, 2.0, 10**6), "vs", math.pi**2 / 6 - 1)
for n in (10**3, 10**5):
    print(f"sum (i+1)^-1 up to {n}:", round(classifier.dirichlet_partial(w, 1.0, n), 3))
est = classifier.abscissa_numeric(w, i_max=10**6)
print("numeric abscissa:", round(est.value, 4), "confident:", est.confident)

# Tables of sizes can only be classified heuristically.
table = sizes.explicit_table([0.5**i for i in range(1, 61)])
print(classifier.classification_report(table)["type"], "(heuristic)")
