"""A tour of the state divergences on one qubit pair and what happens under noise."""

import numpy as np

from qcdisc import channels as ch
from qcdisc import divergences as dv

rho = np.array([[0.8, 0.3], [0.3, 0.2]], dtype=complex)
sigma = np.array([[0.6, 0.2j], [-0.2j, 0.4]])

kinds = [dv.RELATIVE, dv.MAX, dv.CHERNOFF, dv.TRACE_DIST, dv.FIDELITY, dv.BURES,
         dv.petz(0.5), dv.sandwiched(0.5), dv.sandwiched(2.0), dv.log_euclidean(0.5)]

print(f"{'kind':<22}{'clean':>12}{'depolarized':>14}")
noisy = ch.depolarizing(0.3)
for k in kinds:
    before = dv.divergence(k, rho, sigma)
    after = dv.divergence(k, noisy(rho), noisy(sigma))
    print(f"{str(k):<22}{before:12.6f}{after:14.6f}")

# the Renyi families sandwich the relative entropy near order one
D = dv.relative_entropy(rho, sigma)
for a in (0.5, 0.9, 0.999, 1.001, 1.1, 2.0):
    print(f"alpha={a:<6} petz={dv.petz_renyi(rho, sigma, a):.6f} "
          f"sandwiched={dv.sandwiched_renyi(rho, sigma, a):.6f} relative={D:.6f}")

# a pure state against a state without its support
pure = np.array([[1, 0], [0, 0]], dtype=complex)
print("D(|0><0| || |1><1|) =", dv.relative_entropy(pure, np.diag([0, 1]).astype(complex)))
