import math

import numpy as np
import pytest

from qcdisc import divergences as dv
from qcdisc import linmat as lm
from qcdisc import sampling as sp
from qcdisc.exceptions import DomainError

ZERO = np.diag([1.0, 0.0]).astype(complex)
ONE = np.diag([0.0, 1.0]).astype(complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)
MIXED = np.eye(2, dtype=complex) / 2


def _diag_pair(rng, d):
    p, q = rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(d))
    return p, q, np.diag(p).astype(complex), np.diag(q).astype(complex)


def test_relative_entropy_examples(rng):
    rho = sp.random_state(3, rng)
    assert abs(dv.relative_entropy(rho, rho)) < 1e-12
    assert math.isclose(dv.relative_entropy(ZERO, MIXED), 1.0, abs_tol=1e-12)
    assert dv.relative_entropy(ZERO, ONE) == math.inf


def test_petz_examples(rng):
    rho = sp.random_state(3, rng)
    assert abs(dv.petz_renyi(rho, sp.random_state(3, rng), 0.0)) < 1e-12
    # Tr[|0><0| |+><+|] = 1/2, so D_1/2 = -2 log2(1/2)
    assert math.isclose(dv.petz_renyi(ZERO, PLUS, 0.5), 2.0, abs_tol=1e-10)


def test_sandwiched_half_is_fidelity(rng):
    for _ in range(100):
        d = int(rng.integers(2, 5))
        rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng, rank=int(rng.integers(1, d + 1)))
        assert abs(dv.sandwiched_renyi(rho, sigma, 0.5) + math.log2(dv.fidelity(rho, sigma))) < 1e-9


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.5, 2.0, 3.0])
def test_commuting_pairs_are_classical(rng, alpha):
    p, q, rho, sigma = _diag_pair(rng, 4)
    want = math.log2(np.sum(p**alpha * q ** (1 - alpha))) / (alpha - 1)
    for fn in (dv.petz_renyi, dv.sandwiched_renyi):
        assert math.isclose(fn(rho, sigma, alpha), want, abs_tol=1e-10)
    if alpha < 1:
        assert math.isclose(dv.log_euclidean_renyi(rho, sigma, alpha), want, abs_tol=1e-10)


def test_max_relative_entropy(rng):
    rho = sp.random_state(3, rng)
    assert abs(dv.max_relative_entropy(rho, rho)) < 1e-12
    assert math.isclose(dv.max_relative_entropy(ZERO, MIXED), 1.0, abs_tol=1e-12)
    sigma = sp.random_state(3, rng)
    lo, hi = -10.0, 10.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if np.linalg.eigvalsh(2.0**mid * sigma - rho)[0] >= 0:
            hi = mid
        else:
            lo = mid
    assert abs(dv.max_relative_entropy(rho, sigma) - hi) < 1e-8


def test_log_euclidean(rng):
    rho, sigma = sp.random_state(3, rng), sp.random_state(3, rng)
    assert abs(dv.log_euclidean_renyi(rho, sigma, 1 - 1e-4) - dv.relative_entropy(rho, sigma)) < 1e-3
    assert dv.log_euclidean_renyi(rho, sigma, 0.5) >= dv.petz_renyi(rho, sigma, 0.5) - 1e-9


def test_log_euclidean_singular_limit(rng):
    rho, sigma = sp.random_state(3, rng, rank=2), sp.random_state(3, rng, rank=2)
    exact = dv.log_euclidean_renyi(rho, sigma, 0.6)
    approx = dv.log_euclidean_regularized(rho, sigma, 0.6, 1e-13)  # converges only like 1/log(eps)
    assert abs(exact - approx) < 1e-5


def test_chernoff(rng):
    rho = sp.random_state(3, rng)
    assert abs(dv.chernoff(rho, rho)) < 1e-12
    assert dv.chernoff(ZERO, ONE) == math.inf
    p, q, r, s = _diag_pair(rng, 3)
    grid = np.linspace(0, 1, 100001)
    want = -np.min(np.log2([np.sum(p**a * q ** (1 - a)) for a in grid]))
    assert abs(dv.chernoff(r, s) - want) < 1e-8
    assert dv.chernoff_flat(r, s) == pytest.approx(want, abs=1e-6)


def test_hilbert(rng):
    rho, sigma = sp.random_state(3, rng), sp.random_state(3, rng)
    for a in (1.5, 3.0, math.inf):
        assert abs(dv.hilbert_alpha(rho, rho, a)) < 1e-10
    tn = np.sum(np.abs(np.linalg.eigvalsh(rho - sigma)))
    assert abs(dv.hilbert_alpha(rho, sigma, 1 + 1e-6) - tn / (2 * math.log(2))) < 1e-4
    a = 2.5
    t = dv.hilbert_ratio(rho, sigma, a)
    ev = np.linalg.eigvalsh(rho - t * sigma)
    g = (1 - t) / a + (1 - 1 / a) * ev[ev > 0].sum()
    assert abs(g) < 1e-10
    with pytest.raises(DomainError):
        dv.hilbert_alpha(rho, sigma, 0.5)


def test_metrics(rng):
    m = dv.metrics(ZERO, ZERO)
    assert np.allclose(m, (0, 1, 0, 0), atol=1e-12)
    m = dv.metrics(ZERO, ONE)
    assert np.allclose(m, (1, 0, 1, math.sqrt(2)), atol=1e-12)
    for _ in range(50):
        rho, sigma = sp.random_state(3, rng), sp.random_state(3, rng)
        m = dv.metrics(rho, sigma)
        assert m.trace_distance <= math.sqrt(1 - m.fidelity) + 1e-12
        assert 1 - math.sqrt(m.fidelity) <= m.trace_distance + 1e-12


def test_binary_divergence(rng):
    assert dv.binary_divergence(0.3, 0.3, dv.RELATIVE) == 0
    assert math.isclose(dv.binary_divergence(1.0, 0.2, dv.RELATIVE), -math.log2(0.2))
    for kind in (dv.RELATIVE, dv.petz(0.5), dv.sandwiched(2.0), dv.MAX):
        p, q = rng.uniform(0.05, 0.95, 2)
        matrix = dv.divergence(kind, np.diag([p, 1 - p]), np.diag([q, 1 - q]))
        assert math.isclose(dv.binary_divergence(p, q, kind), matrix, abs_tol=1e-10)


def test_divergence_sphere(rng):
    rho = sp.random_state(2, rng)
    assert dv.divergence_sphere(rho, rho, 0.3).value <= 1e-12
    # commuting pair: min D(t||rho) over D(t||sigma) <= r, by a dense scan of qubit diagonal t
    p, q = 0.8, 0.25
    r = 0.1
    ts = np.linspace(1e-6, 1 - 1e-6, 200001)
    kl = lambda x, y: x * np.log2(x / y) + (1 - x) * np.log2((1 - x) / (1 - y))
    ok = kl(ts, q) <= r
    want = np.min(kl(ts[ok], p))
    got = dv.divergence_sphere(np.diag([p, 1 - p]), np.diag([q, 1 - q]), r)
    assert got.interior
    assert abs(got.value - want) < 1e-4


def test_fvdg_examples(rng):
    rho = sp.random_state(3, rng)
    res = dv.fvdg_check(rho, rho)
    assert abs(res.slack) < 1e-10
    res = dv.fvdg_check(rho, np.zeros((3, 3)))
    assert abs(res.slack) < 1e-10


def test_parse_kind():
    assert dv.parse_kind("petz:0.5") == dv.petz(0.5)
    assert dv.parse_kind("sandwiched", 2.0) == dv.sandwiched(2.0)
    assert dv.parse_kind("max") == dv.MAX


def test_batched_evaluation(rng):
    rhos = sp.random_states(5, 3, rng)
    sigmas = sp.random_states(5, 3, rng)
    batch = dv.relative_entropy(rhos, sigmas)
    assert np.allclose(batch, [dv.relative_entropy(r, s) for r, s in zip(rhos, sigmas)])
    batch = dv.chernoff(rhos, sigmas)
    assert np.allclose(batch, [dv.chernoff(r, s) for r, s in zip(rhos, sigmas)])
