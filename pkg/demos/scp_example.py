"""Strong comparison for the M(g) family: additivity, dual classification,
dual characteristic and the integral test, for a few choices of g."""

import numpy as np

from smp_toolkit import monotonicity as mono
from smp_toolkit.functions import GFunction, parse_g

n = 2
for g in (GFunction("neg_linear", delta=0.5), mono.extension_of(parse_g("loginv")),
          GFunction("neg_sqrt"), GFunction("neg_rational")):
    rep = mono.scp_report(g, n, trials=500)
    print(f"{rep.g:40s} {rep.scp}")
    for gate in rep.gates:
        print("    ", gate)

# -sqrt(x) is convex, so g(1 + 1) > g(1) + g(1) and M(g) is not additive
g = GFunction("neg_sqrt")
print("g(2) =", g(2.0), " g(1) + g(1) =", 2 * g(1.0))

lam = np.array([0.0, 0.5, 1.0, 2.0])
print("dual characteristic of M(-sqrt) at", lam, "->", mono.mg_dual_char(g, n, lam).values)
