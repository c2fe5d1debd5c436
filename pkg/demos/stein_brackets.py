"""Stein exponent brackets for channel pairs where the bracket closes and one where it may not."""

import numpy as np

from qcdisc import channels as ch
from qcdisc import exponents as ex
from qcdisc import sampling as sp
from qcdisc.chandiv import SearchOptions

rng = np.random.default_rng(7)
opts = SearchOptions(multistarts=8)
setting = ex.Setting.stein(0.1)

pairs = {
    "erasure 0.1 vs 0.4": (ch.make_erasure(0.1), ch.make_erasure(0.4)),
    "dephasing": (ch.make_dephasing([0.8, 0.2]), ch.make_dephasing([0.6, 0.4])),
    "cq, two letters": (ch.make_cq([sp.random_state(2, rng) for _ in range(2)]),
                        ch.make_cq([sp.random_state(2, rng) for _ in range(2)])),
    "random vs replacer": (ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2)),
                           ch.make_replacer(sp.random_state(2, rng), 2)),
    "two random channels": (ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2)),
                            ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=4))),
}

for name, (N, M) in pairs.items():
    rep = ex.bounds_report(N, M, setting, opts=opts)
    print(f"{name:<22} [{rep.lower:.6f}, {rep.upper:.6f}]  tight={rep.tight}  "
          f"lower by {rep.lower_tag}, upper by {rep.upper_tag}")

# finite block lengths pay a converse penalty that fades like 1/n
N, M = pairs["erasure 0.1 vs 0.4"]
for n in (1, 10, 100, 1000):
    rep = ex.bounds_report(N, M, setting, n=n, opts=opts)
    print(f"n={n:<5} upper={rep.upper:.6f} ({rep.upper_tag})")
