import math

import numpy as np
import pytest

from qcdisc import chandiv as cd
from qcdisc import channels as ch
from qcdisc import divergences as dv
from qcdisc import exponents as ex
from qcdisc import linmat as lm
from qcdisc import protosim as ps
from qcdisc import sampling as sp
from qcdisc.exceptions import DimError, DomainError

LIGHT = ps.ProtocolOptions(multistarts=2, baseline_starts=2, outer_rounds=8)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def random_strategy(rng, a, b, n, r=2):
    psi = sp.random_pure(r * a, rng)
    ads = [ch.QuantumChannel(sp.random_kraus(r * b, r * a, rng, rank=2)) for _ in range(n - 1)]
    return ps.AdaptiveStrategy(n, [r] * n, np.outer(psi, psi.conj()), ads)


def test_identical_channels_single_round(rng):
    N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
    Q = np.diag([1.0, 0.3, 0.0, 0.5])
    strat = random_strategy(rng, 2, 2, 1)
    strat.final_measurement = Q
    out = ps.run_protocol(N, N, strat)
    assert out.alpha_n + out.beta_n == pytest.approx(1.0, abs=1e-12)
    assert ps.run_protocol(N, N, random_strategy(rng, 2, 2, 1)).symmetric_error() == pytest.approx(0.5, abs=1e-9)


def test_replacer_helstrom(rng):
    t0, t1 = sp.random_state(2, rng), sp.random_state(2, rng)
    out = ps.run_protocol(ch.make_replacer(t0, 2), ch.make_replacer(t1, 2), random_strategy(rng, 2, 2, 1))
    want = 0.5 * (1 - 0.5 * np.abs(np.linalg.eigvalsh(t0 - t1)).sum())
    assert out.symmetric_error() == pytest.approx(want, abs=1e-9)


def test_parallel_embedding(rng):
    N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=3))
    psi = sp.random_pure(4, rng)
    for n in (2, 3):
        strat, _ = ps.parallel_embedding(psi, 2, 2, n)
        out = ps.run_protocol(N, N, strat)
        one = ch.apply_pure(N, psi, 2)
        assert np.abs(out.final_states[0] - lm.kron(*([one] * n))).max() < 1e-9


def test_perfectly_distinguishable_unitaries():
    _, out = ps.optimize_strategy(ch.unitary_channel(X), ch.unitary_channel(Z), 1, opts=LIGHT)
    assert out.symmetric_error() <= 1e-6


def test_adaptive_not_worse_than_baseline():
    N, M = ch.make_gad(0.3, 0.0), ch.make_gad(0.6, 0.0)
    _, out = ps.optimize_strategy(N, M, 2, opts=LIGHT)
    base = out.extras["baseline"]
    assert out.extras["value"] <= base.extras["value"] + 1e-8


def test_single_round_matches_baseline(rng):
    N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
    M = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
    _, out = ps.optimize_strategy(N, M, 1, opts=LIGHT)
    base = ps.nonadaptive_baseline(N, M, 1, opts=LIGHT)
    assert out.extras["value"] == pytest.approx(base.extras["value"], abs=1e-6)


def test_meta_converse_cq(rng):
    N = ch.make_cq([sp.random_state(2, rng) for _ in range(2)])
    M = ch.make_cq([sp.random_state(2, rng) for _ in range(2)])
    _, out = ps.optimize_strategy(N, M, 2, opts=LIGHT)
    dstar = max(dv.relative_entropy(a, b) for a, b in zip(N.outputs, M.outputs))
    holds, slack = ps.meta_converse_check(out, 2, dv.RELATIVE, dstar)
    assert holds and slack >= -1e-6
    holds, _ = ps.meta_converse_check(out, 2, dv.MAX, cd.dmax_channel(N, M))
    assert holds


def test_identical_channels_meta_converse(rng):
    N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
    out = ps.run_protocol(N, N, random_strategy(rng, 2, 2, 2))
    holds, slack = ps.meta_converse_check(out, 2, dv.RELATIVE, 0.0)
    assert holds and slack >= -1e-9


def test_neyman_pearson(rng):
    rho, tau = sp.random_state(3, rng), sp.random_state(3, rng)
    Q = ps.neyman_pearson_test(rho, tau, 0.1)
    alpha, beta = ps._errors(Q, rho, tau)
    assert alpha == pytest.approx(0.1, abs=1e-8)
    ev = np.linalg.eigvalsh(Q)
    assert ev[0] >= -1e-9 and ev[-1] <= 1 + 1e-9
    # no projector {rho - t tau > 0} with type I error <= 0.1 does better
    for t in np.geomspace(1e-3, 1e3, 200):
        P = ps.helstrom_measurement(rho, t * tau, 0.5)
        a, b = ps._errors(P, rho, tau)
        if a <= 0.1:
            assert beta <= b + 1e-9


def test_stein_mode(rng):
    N = ch.make_cq([sp.random_state(2, rng) for _ in range(2)])
    M = ch.make_cq([sp.random_state(2, rng) for _ in range(2)])
    opts = ps.ProtocolOptions(multistarts=1, baseline_starts=1, outer_rounds=4)
    _, out = ps.optimize_strategy(N, M, 1, mode=ex.Setting.stein(0.2), opts=opts)
    assert out.alpha_n <= 0.2 + 1e-8
    assert ps.error_exponent(ex.Setting.stein(0.2), out, 1) > 0


def test_energy_audit(rng):
    traj = [(sp.random_state(4, rng), 2) for _ in range(3)]
    ledger, ok = ps.energy_audit(traj, np.eye(2), 1.0)
    assert ok and np.allclose(ledger.energies, 1.0)
    H = np.diag([0.5, 2.0])
    ground = np.kron(sp.random_state(2, rng), np.diag([1.0, 0.0]))
    ledger, _ = ps.energy_audit([(ground, 2)] * 2, H)
    assert ledger.average == pytest.approx(0.5)
    ledger, _ = ps.energy_audit(traj, H)
    want = [np.trace(H @ lm.partial_trace(s, [1], [2, 2])).real for s, _ in traj]
    assert np.allclose(ledger.energies, want)


def test_validation(rng):
    N = ch.identity_channel(2)
    with pytest.raises(DomainError):
        ps.optimize_strategy(N, N, 4)
    strat = random_strategy(rng, 2, 2, 2)
    strat.memory_dims = [2, 3]
    with pytest.raises(DimError):
        strat.validate(N)
