"""Build the radial function that breaks the maximum principle for f = sqrt
and compare it with the closed form (sqrt(t0) - sqrt(t))^2."""

import math
import sys

import numpy as np

from smp_toolkit import counterexample as ce
from smp_toolkit import radial
from smp_toolkit.functions import ScalarFn

f = ScalarFn("sqrt")
rec = ce.build_counterexample(f)
rf = rec.psi
print(f"s0 = {rec.s0:.12f}  (2 log 2 = {2 * math.log(2):.12f})")
print(f"t0 = {rec.t0:.12f}")

inside = (rf.ts > 1) & (rf.ts < rec.t0)
closed = (math.sqrt(rec.t0) - np.sqrt(rf.ts[inside])) ** 2
print("max |psi' - closed form| =", np.max(np.abs(rf.psi1[inside] - closed)))
res = radial.radial_residual(f, rf)
print("max |psi'' + f(psi'/t)| on (1, t0) =", np.nanmax(np.abs(res[inside])))
print("increasing and subharmonic:", radial.verify_monotone_radial(f, rf, "up").holds)
print("interior maximum without being constant:", radial.smp_witness_check(rf))

# a linear f has a divergent integral, so no such profile exists
try:
    ce.build_counterexample(ScalarFn("linear"))
except ce.Refusal as exc:
    print("linear f:", exc)

if len(sys.argv) > 1:
    print("bundle written to", rec.write_bundle(sys.argv[1]))
