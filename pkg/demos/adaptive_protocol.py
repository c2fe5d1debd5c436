"""See-saw search for adaptive two-round strategies and the meta-converse check."""

import numpy as np

from qcdisc import channels as ch
from qcdisc import divergences as dv
from qcdisc import exponents as ex
from qcdisc import protosim as ps
from qcdisc import sampling as sp
from qcdisc.chandiv import dmax_channel

rng = np.random.default_rng(3)
N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
M = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=4))
opts = ps.ProtocolOptions(multistarts=8)

for n in (1, 2, 3):
    strat, out = ps.optimize_strategy(N, M, n, mode=ex.Setting.chernoff(), opts=opts)
    base = out.extras["baseline"].symmetric_error()
    holds, slack = ps.meta_converse_check(out, n, dv.MAX, dmax_channel(N, M))
    print(f"n={n} adaptive error {out.symmetric_error():.6f} vs product {base:.6f}; "
          f"meta-converse holds={holds} slack={slack:.4f}")

# unitaries with a perfectly distinguishing input need no adaptivity at all
X = ch.unitary_channel(np.array([[0, 1], [1, 0]], dtype=complex))
I = ch.identity_channel(2)
_, out = ps.optimize_strategy(X, I, 1, opts=opts)
print("identity vs bit flip, one use:", out.symmetric_error())
