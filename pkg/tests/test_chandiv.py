import math

import numpy as np
import pytest

from qcdisc import chandiv as cd
from qcdisc import channels as ch
from qcdisc import divergences as dv
from qcdisc import sampling as sp

FAST = cd.SearchOptions(multistarts=4, restarts=1, nm_maxiter=300)


def random_channel(rng, a=2, b=2, full=False):
    return ch.QuantumChannel(sp.random_kraus(a, b, rng, rank=a * b if full else 2))


def test_identical_channels_give_zero(rng):
    N = random_channel(rng)
    for kind in (dv.RELATIVE, dv.MAX, dv.sandwiched(2.0)):
        assert cd.channel_divergence(kind, N, N).value == 0.0


def test_cq_pair_collapse(rng):
    N = ch.make_cq([sp.random_state(2, rng) for _ in range(3)])
    M = ch.make_cq([sp.random_state(2, rng) for _ in range(3)])
    vals = [dv.relative_entropy(a, b) for a, b in zip(N.outputs, M.outputs)]
    res = cd.channel_divergence(dv.RELATIVE, N, M)
    assert res.value == pytest.approx(max(vals), abs=1e-12)
    assert res.certification.kind == cd.EXACT
    up = cd.amortized_upper(dv.sandwiched(2.0), N, M)
    want = max(dv.sandwiched_renyi(a, b, 2.0) for a, b in zip(N.outputs, M.outputs))
    assert up.value == pytest.approx(want, abs=1e-10)


def test_gad_scan_oracle():
    N, M = ch.make_gad(0.2, 0.3), ch.make_gad(0.3, 0.6)
    z = np.linspace(0, 1, 1001)
    psis = np.zeros((len(z), 4), dtype=complex)
    psis[:, 0], psis[:, 3] = np.sqrt(z), np.sqrt(1 - z)
    grid = np.max(dv.relative_entropy(ch.apply_pure(N, psis, 2), ch.apply_pure(M, psis, 2)))
    val = cd.channel_divergence(dv.RELATIVE, N, M).value
    assert val >= grid - 1e-12
    assert val - grid < 1e-6


def test_dmax_erasure_formula():
    p, q = 0.2, 0.5
    want = math.log2(max((1 - p) / (1 - q), p / q))
    assert cd.dmax_channel(ch.make_erasure(p), ch.make_erasure(q)) == pytest.approx(want, abs=1e-10)


def test_dmax_matches_bisection(rng):
    for _ in range(5):
        N, M = random_channel(rng, 2, 3), random_channel(rng, 2, 3, full=True)
        assert abs(cd.dmax_channel(N, M) - cd.dmax_bisection(N, M)) < 1e-8


def test_amortized_samples_below_dmax(rng):
    N, M = random_channel(rng), random_channel(rng, full=True)
    samples = cd.amortized_samples(dv.MAX, N, M, 2, 200, rng)
    assert np.nanmax(samples) <= cd.dmax_channel(N, M) + 1e-6


def test_env_param_upper_for_gad():
    N, M = ch.make_gad(0.5, 0.2), ch.make_gad(0.5, 0.7)
    up = cd.amortized_upper(dv.RELATIVE, N, M)
    assert up.candidates[cd.ENV_PARAM] == pytest.approx(dv.binary_divergence(0.2, 0.7, dv.RELATIVE), abs=1e-12)


def test_unknown_rule(rng):
    N, M = random_channel(rng), random_channel(rng, full=True)
    up = cd.amortized_upper(dv.petz(0.5), N, M)
    assert up.rule == cd.UNKNOWN and up.value == math.inf


def test_amortized_lower_search_not_below_plain(rng):
    N, M = random_channel(rng), random_channel(rng, full=True)
    plain = cd.channel_divergence(dv.RELATIVE, N, M, opts=FAST).value
    amort = cd.amortized_lower_search(dv.RELATIVE, N, M, r_dim_cap=2, opts=FAST).value
    assert amort >= plain - 1e-6
    assert amort <= cd.amortized_upper(dv.RELATIVE, N, M).value + 1e-6


def test_gad_grid_diagonal_zero():
    cells = cd.gad_bounds_grid(0.5, 0.5, np.linspace(0, 1, 3))
    for c in cells:
        if c.p1 == c.p2:
            assert abs(c.lower) < 1e-8 and abs(c.upper) < 1e-8
        assert c.diff >= -1e-8


def test_energy_constraint():
    N = ch.make_gad(0.4, 0.3)
    M = ch.make_gad(0.6, 0.5)
    c = cd.EnergyConstraint(np.diag([0.0, 1.0]), 0.0)
    res = cd.channel_divergence(dv.RELATIVE, N, M, constraint=c, opts=FAST)
    psi = np.asarray(res.optimizer_state).reshape(2, 2)
    assert np.abs(psi[:, 1]).max() < 1e-6  # input confined to |0> on A
    zero = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    want = dv.relative_entropy(ch.apply_pure(N, zero, 2), ch.apply_pure(M, zero, 2))
    assert res.value == pytest.approx(want, abs=1e-6)
    with pytest.raises(Exception):
        cd.EnergyConstraint(np.diag([1.0, 2.0]), 0.5)
