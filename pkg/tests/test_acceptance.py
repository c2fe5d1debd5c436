"""Acceptance criteria, one test each, at the documented tolerances."""

import math
import time

import numpy as np

from qcdisc import chandiv as cd
from qcdisc import channels as ch
from qcdisc import divergences as dv
from qcdisc import exponents as ex
from qcdisc import protosim as ps
from qcdisc import sampling as sp
from qcdisc.cli import main

SEED = 42


def random_channel(rng, a, b, rank=None):
    least = -(-a // b)
    rank = rank or int(rng.integers(least, a * b + 1))
    return ch.QuantumChannel(sp.random_kraus(a, b, rng, rank=rank))


def close(x, y, tol):
    return x == y or abs(x - y) <= tol


# orders that satisfy data processing (Petz up to 2, sandwiched from 1/2, log-Euclidean up to 1)
DP_KINDS = [
    dv.RELATIVE, dv.MAX, dv.CHERNOFF, dv.CHERNOFF_FLAT, dv.TRACE_DIST, dv.FIDELITY, dv.C_DIST, dv.BURES,
    dv.petz(0.0), dv.petz(0.3), dv.petz(0.7), dv.petz(1.5), dv.petz(2.0),
    dv.sandwiched(0.5), dv.sandwiched(0.7), dv.sandwiched(1.5), dv.sandwiched(3.0), dv.sandwiched(math.inf),
    dv.log_euclidean(0.3), dv.log_euclidean(0.7),
    dv.hilbert(1.5), dv.hilbert(3.0),
]
FAITHFUL_KINDS = DP_KINDS + [dv.petz(3.0), dv.sandwiched(0.3), dv.log_euclidean(1.5)]


def test_01_divergence_suite():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst_dp = worst_faith = worst_chain = 0.0
    for _ in range(300):
        d = int(rng.integers(2, 7))
        e = int(rng.integers(2, 7))
        rho = sp.random_state(d, rng, rank=int(rng.integers(1, d + 1)))
        sigma = sp.random_state(d, rng)
        N = random_channel(rng, d, e)
        r2, s2 = N(rho), N(sigma)
        for kind in DP_KINDS:
            before, after = dv.divergence(kind, rho, sigma), dv.divergence(kind, r2, s2)
            if not (np.isposinf(before) or after == before):
                worst_dp = max(worst_dp, after - before)
        for kind in FAITHFUL_KINDS:
            worst_faith = max(worst_faith, abs(dv.divergence(kind, rho, rho)))
        for a in (0.3, 0.7, 1.5, 3.0):
            P = dv.petz_renyi(rho, sigma, a)
            T = dv.sandwiched_renyi(rho, sigma, a)
            F = dv.log_euclidean_renyi(rho, sigma, a)
            chain = [a * P, T, P, F] if a < 1 else [F, T, P, a * P]
            for lo, hi in zip(chain, chain[1:]):
                if not (lo == hi or np.isposinf(hi)):
                    worst_chain = max(worst_chain, lo - hi)
    elapsed = time.perf_counter() - start
    assert worst_dp <= 1e-8
    assert worst_faith <= 1e-8
    assert worst_chain <= 1e-8
    assert elapsed < 60


def test_02_limits_at_one():
    rng = np.random.default_rng(SEED)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng)
        D = dv.relative_entropy(rho, sigma)
        assert abs(dv.sandwiched_renyi(rho, sigma, 1 + 1e-4) - D) <= 1e-3
        assert abs(dv.sandwiched_renyi(rho, sigma, 1 - 1e-4) - D) <= 1e-3
        assert abs(dv.log_euclidean_renyi(rho, sigma, 1 - 1e-4) - D) <= 1e-2


def test_03_dmax_collapse():
    rng = np.random.default_rng(SEED)
    for _ in range(100):
        a, b = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        N, M = random_channel(rng, a, b), random_channel(rng, a, b)
        top = cd.dmax_channel(N, M)
        assert close(top, cd.dmax_bisection(N, M), 1e-8)
        psis = sp.random_pures(1000, a * a, rng)
        vals = dv.max_relative_entropy(ch.apply_pure(N, psis, a), ch.apply_pure(M, psis, a))
        assert np.all((vals <= top + 1e-9) | (vals == top))
        phi = np.eye(a, dtype=complex).reshape(-1) / np.sqrt(a)
        at_phi = dv.max_relative_entropy(ch.apply_pure(N, phi, a), ch.apply_pure(M, phi, a))
        assert close(top, at_phi, 1e-9)


CQ_KINDS = [dv.RELATIVE, dv.petz(0.5), dv.petz(1.5), dv.petz(2.0), dv.sandwiched(0.5), dv.sandwiched(2.0),
            dv.sandwiched(math.inf)]


def test_04_cq_amortization_collapse():
    rng = np.random.default_rng(SEED)
    for _ in range(50):
        nx, d = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        N = ch.make_cq([sp.random_state(d, rng, rank=int(rng.integers(1, d + 1))) for _ in range(nx)])
        M = ch.make_cq([sp.random_state(d, rng) for _ in range(nx)])
        dr = 4 * nx
        rhos = sp.random_states(2000, dr, rng, rank=int(rng.integers(1, dr + 1)))
        sigmas = sp.random_states(2000, dr, rng, rank=int(rng.integers(1, dr + 1)))
        for kind in CQ_KINDS:
            letters = cd.cq_letter_values(kind, N, M)
            best = float(np.max(letters))
            samples = cd.amortized_samples(kind, N, M, 4, 2000, rng, rhos, sigmas)
            finite = samples[~np.isnan(samples)]
            assert np.all(finite <= best + 1e-7) or np.isposinf(best)
            x = int(np.argmax(letters))
            basis = np.zeros((dr, dr), dtype=complex)
            basis[x, x] = 1.0  # |0>_R |x*>_A
            at_x = cd.amortized_objective(kind, N, M, basis, basis, 4)
            assert close(at_x, best, 1e-8)


def test_05_stein_brackets():
    rng = np.random.default_rng(SEED)
    opts = cd.SearchOptions(multistarts=8)
    for _ in range(100):
        a, b = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        N, M = random_channel(rng, a, b), random_channel(rng, a, b)
        rep = ex.stein_report(N, M, 0.1, opts=opts)
        assert rep.lower <= rep.upper + 1e-6 or rep.lower == rep.upper
    tight_pairs = []
    for _ in range(10):
        nx, d = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        tight_pairs.append((ch.make_cq([sp.random_state(d, rng) for _ in range(nx)]),
                            ch.make_cq([sp.random_state(d, rng) for _ in range(nx)])))
        p, q = rng.uniform(0.01, 0.99, 2)
        tight_pairs.append((ch.make_erasure(p, d), ch.make_erasure(q, d)))
        tight_pairs.append((ch.make_dephasing(rng.dirichlet(np.ones(d))), ch.make_dephasing(rng.dirichlet(np.ones(d)))))
        tight_pairs.append((random_channel(rng, 2, d), ch.make_replacer(sp.random_state(d, rng), 2)))
    for N, M in tight_pairs:
        rep = ex.bounds_report(N, M, ex.Setting.stein(0.1), opts=opts)
        assert rep.tight, (N, M, rep)
        assert abs(rep.upper - rep.lower) <= 1e-6


def test_06_gad_reproduction():
    start = time.perf_counter()
    grid = np.linspace(0.0, 1.0, 21)
    for eta1, eta2 in ((0.2, 0.3), (0.5, 0.5)):
        cells = cd.gad_bounds_grid(eta1, eta2, grid)
        assert len(cells) == 441
        for c in cells:
            assert c.diff >= -1e-8
            if eta1 == eta2 and c.p1 == c.p2:
                assert abs(c.lower) <= 1e-8 and abs(c.upper) <= 1e-8
            if eta1 == eta2:
                assert c.env_upper >= c.lower - 1e-8 or c.env_upper == c.lower
    assert time.perf_counter() - start < 600


def test_07_meta_converse():
    rng = np.random.default_rng(SEED)
    opts = ps.ProtocolOptions(multistarts=4, baseline_starts=4)
    for _ in range(20):
        N, M = random_channel(rng, 2, 2), random_channel(rng, 2, 2)
        bound = cd.dmax_channel(N, M)
        for n in (1, 2):
            _, out = ps.optimize_strategy(N, M, n, opts=opts)
            lhs = dv.binary_divergence(1 - out.alpha_n, out.beta_n, dv.RELATIVE)
            assert lhs <= n * bound + 1e-6 or np.isposinf(bound)
    for _ in range(10):
        nx = int(rng.integers(1, 4))
        N = ch.make_cq([sp.random_state(2, rng) for _ in range(nx)])
        M = ch.make_cq([sp.random_state(2, rng) for _ in range(nx)])
        dstar = max(dv.relative_entropy(x, y) for x, y in zip(N.outputs, M.outputs))
        for n in (1, 2):
            _, out = ps.optimize_strategy(N, M, n, opts=opts)
            lhs = dv.binary_divergence(1 - out.alpha_n, out.beta_n, dv.RELATIVE)
            assert lhs <= n * dstar + 1e-6


def test_08_appendix_suites():
    rng = np.random.default_rng(SEED)
    for _ in range(1000):
        d = int(rng.integers(2, 7))
        A = sp.random_psd(d, rng, rank=int(rng.integers(1, d + 1))) * rng.uniform(0.1, 3)
        B = sp.random_psd(d, rng, rank=int(rng.integers(1, d + 1))) * rng.uniform(0.1, 3)
        assert dv.fvdg_check(A, B).slack >= -1e-10
    for metric in ("hilbert", "fidelity"):
        for _ in range(200):
            d, e = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng)
            omega = sp.random_state(e, rng)
            P = random_channel(rng, d, e)
            pr, ps_ = P(rho), P(sigma)
            kinds = [dv.hilbert(a) for a in (1.5, 3.0)] if metric == "hilbert" else [dv.C_DIST, dv.BURES]
            for k in kinds:
                lhs = dv.divergence(k, pr, omega)
                rhs = dv.divergence(k, rho, sigma) + dv.divergence(k, ps_, omega)
                assert lhs <= rhs + 1e-7


def test_09_cq_chernoff_factor_two():
    rng = np.random.default_rng(SEED)
    for _ in range(100):
        nx, d = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        N = ch.make_cq([sp.random_state(d, rng, rank=int(rng.integers(1, d + 1))) for _ in range(nx)])
        M = ch.make_cq([sp.random_state(d, rng) for _ in range(nx)])
        rep = ex.cq_exponents(N, M, ex.Setting.chernoff())
        assert rep.lower <= rep.upper + 1e-6
        assert rep.upper <= 2 * rep.lower + 1e-6


def test_10_check_all_deterministic(tmp_path, capsys):
    logs = []
    for i in range(2):
        path = tmp_path / f"log{i}.txt"
        assert main(["check", "all", "--seed", "42", "--out", str(path)]) == 0
        logs.append(path.read_bytes())
    capsys.readouterr()
    assert logs[0] == logs[1]
