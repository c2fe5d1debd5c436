import math

import numpy as np
import pytest

from qcdisc import chandiv as cd
from qcdisc import channels as ch
from qcdisc import divergences as dv
from qcdisc import exponents as ex
from qcdisc import sampling as sp
from qcdisc.exceptions import DomainError, Inconsistent, Unsupported

FAST = cd.SearchOptions(multistarts=4, restarts=1, nm_maxiter=300)


def cq_pair(rng, nx=3, d=2):
    return (ch.make_cq([sp.random_state(d, rng) for _ in range(nx)]),
            ch.make_cq([sp.random_state(d, rng) for _ in range(nx)]))


def test_identical_channels(rng):
    N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
    for st in (ex.Setting.stein(0.1), ex.Setting.chernoff(), ex.Setting.hoeffding(0.3)):
        rep = ex.bounds_report(N, N, st)
        assert rep.lower == rep.upper == 0 and rep.tight


def test_cq_stein_tight(rng):
    N, M = cq_pair(rng)
    rep = ex.bounds_report(N, M, ex.Setting.stein(0.05))
    want = max(dv.relative_entropy(a, b) for a, b in zip(N.outputs, M.outputs))
    assert rep.tight and rep.lower == pytest.approx(want, abs=1e-12)
    assert rep.upper == pytest.approx(want, abs=1e-6)


def test_cq_strong_converse_formula(rng):
    N, M = cq_pair(rng)
    r = 1.5 + max(dv.relative_entropy(a, b) for a, b in zip(N.outputs, M.outputs))
    rep = ex.cq_exponents(N, M, ex.Setting.han_kobayashi(r))
    alphas = np.concatenate([1 + np.geomspace(1e-4, 100, 4000)])
    direct = max(
        (a - 1) / a * (r - max(dv.sandwiched_renyi(x, y, a) for x, y in zip(N.outputs, M.outputs)))
        for a in alphas
    )
    dmax = max(dv.max_relative_entropy(x, y) for x, y in zip(N.outputs, M.outputs))
    direct = max(direct, r - dmax)
    assert rep.lower == pytest.approx(direct, abs=1e-6)


def test_sc_lower_dmax_fallback(rng):
    N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
    M = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=4))
    r = cd.dmax_channel(N, M) + 1
    assert ex.sc_exponent_lower(N, M, r, FAST).value >= 1 - 1e-12


def test_single_letter(rng):
    nu, mu = sp.random_state(2, rng), sp.random_state(2, rng)
    N, M = ch.make_cq([nu]), ch.make_cq([mu])
    assert ex.cq_exponents(N, M, ex.Setting.stein(0.1)).lower == pytest.approx(dv.relative_entropy(nu, mu))
    assert ex.cq_exponents(N, M, ex.Setting.chernoff()).lower == pytest.approx(dv.chernoff(nu, mu))


def test_classical_hoeffding_tight(rng):
    outs_n = [np.diag(rng.dirichlet(np.ones(2))) for _ in range(2)]
    outs_m = [np.diag(rng.dirichlet(np.ones(2))) for _ in range(2)]
    N, M = ch.make_cq(outs_n), ch.make_cq(outs_m)
    rep = ex.cq_exponents(N, M, ex.Setting.hoeffding(0.4))
    assert rep.tight
    assert rep.details["flat"] == pytest.approx(rep.lower, abs=1e-6)


def test_cq_chernoff_factor_two(rng):
    for _ in range(20):
        N, M = cq_pair(rng, nx=int(rng.integers(1, 4)))
        rep = ex.cq_exponents(N, M, ex.Setting.chernoff())
        assert rep.upper <= 2 * rep.lower + 1e-6


def test_flat_hoeffding_to_chernoff(rng):
    N, M = cq_pair(rng, nx=2)
    flat = lambda r: ex.cq_exponents(N, M, ex.Setting.hoeffding(r)).details["flat"]
    got = ex.hoeffding_to_chernoff(flat, r_max=4.0)
    want = max(dv.chernoff_flat(a, b) for a, b in zip(N.outputs, M.outputs))
    assert got == pytest.approx(want, abs=1e-5)
    assert ex.hoeffding_to_chernoff(lambda r: 0.7) == pytest.approx(0.7, abs=1e-8)
    with pytest.raises(Inconsistent):
        ex.hoeffding_to_chernoff(lambda r: 0.5 + r * (r < 0.3), r_max=1.0)


def test_seizable_pairs():
    p, q = 0.2, 0.6
    rep = ex.bounds_report(ch.make_erasure(p), ch.make_erasure(q), ex.Setting.stein(0.1))
    assert rep.tight and rep.lower == pytest.approx(dv.binary_divergence(p, q, dv.RELATIVE), abs=1e-10)
    a, b = np.array([0.5, 0.3, 0.2]), np.array([0.2, 0.2, 0.6])
    rep = ex.bounds_report(ch.make_dephasing(a), ch.make_dephasing(b), ex.Setting.stein(0.1))
    assert rep.tight and rep.lower == pytest.approx(np.sum(a * np.log2(a / b)), abs=1e-10)


def test_replacer_targets(rng):
    t1, t2 = sp.random_state(2, rng), sp.random_state(2, rng)
    rep = ex.bounds_report(ch.make_replacer(t1, 2), ch.make_replacer(t2, 2), ex.Setting.stein(0.1))
    assert rep.lower == pytest.approx(dv.relative_entropy(t1, t2), abs=1e-6)
    rep = ex.bounds_report(ch.identity_channel(2), ch.make_replacer(np.eye(2) / 2, 2), ex.Setting.stein(0.1), opts=FAST)
    assert rep.tight and rep.lower == pytest.approx(2.0, abs=1e-6)


def test_gad_bracket_matches_grid():
    N, M = ch.make_gad(0.2, 0.3), ch.make_gad(0.3, 0.7)
    rep = ex.stein_report(N, M, 0.1)
    cell = cd.gad_bounds_grid(0.2, 0.3, [0.3, 0.7])[1]
    assert rep.lower == pytest.approx(cell.lower, abs=1e-9)
    assert rep.upper <= cell.upper + 1e-9


def test_finite_n_reports(rng):
    N = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=2))
    M = ch.QuantumChannel(sp.random_kraus(2, 2, rng, rank=4))
    for n in (5, 50):
        rep = ex.stein_report(N, M, 0.1, n=n, opts=FAST)
        assert rep.consistent and not rep.tight
    with pytest.raises(Unsupported):
        ex.bounds_report(N, M, ex.Setting.hoeffding(0.1), n=10)


def test_setting_validation():
    with pytest.raises(DomainError):
        ex.Setting.stein(1.0)
    with pytest.raises(DomainError):
        ex.Setting.hoeffding(-0.1)


def test_clipping():
    v = ex.sc_sup(0.1, lambda a: 1.0, 1.0)
    assert v.value == 0 and v.trivial and v.raw < 0
