"""Sort a handful of subequations into generic / borderline / counterexample
and, for the borderline ones, decide the strong maximum principle."""

from smp_toolkit import characteristic as ch
from smp_toolkit import subequations as sub
from smp_toolkit.functions import GFunction, ScalarFn, parse_g

n = 3
specs = [
    sub.Pos(n),
    sub.Subaffine(n),
    sub.HalfSpace(n, 1.0),
    sub.Pucci(n, 1.0, 2.0),
    sub.SigmaPsiK(n, 1 / 3, 1),
    sub.MinMaxF(n, ScalarFn("sqrt")),
    sub.MinMaxF(n, ScalarFn("linear")),
    sub.Mg(n, GFunction("neg_sqrt")),
    sub.Dual(sub.Mg(n, parse_g("loginv"))),
]

print(f"{'spec':55s} {'case':15s} SMP")
for spec in specs:
    c = ch.classify(spec)
    v = ch.smp_verdict(spec)
    print(f"{spec.describe():55s} {c.case:15s} {v.verdict}")

# the rationale chain behind one verdict
v = ch.smp_verdict(sub.MinMaxF(n, ScalarFn("sqrt")))
print()
for step in v.rationale:
    print(" -", step)
