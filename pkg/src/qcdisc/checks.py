"""Seeded property suites behind ``qcdisc check``.

Each property runs a fixed number of random trials and records a margin
(positive when the property holds with room to spare).  The log contains no
timings, so equal seeds give byte-identical logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import chandiv as cd
from . import channels as ch
from . import divergences as dv
from . import exponents as ex
from . import linmat as lm
from . import protosim as ps
from . import sampling as sp

SUITES = ("linmat", "divergences", "channels", "chandiv", "exponents", "protosim")


@dataclass
class PropertyResult:
    suite: str
    name: str
    trials: int = 0
    worst: float = math.inf
    violations: list[str] = field(default_factory=list)

    def check(self, margin: float, what: str = ""):
        """Record one trial; ``margin < 0`` (or NaN) is a violation."""
        self.trials += 1
        margin = float(margin)
        if np.isnan(margin):
            margin = -math.inf
        self.worst = min(self.worst, margin)
        if margin < 0:
            self.violations.append(f"{self.suite}.{self.name}: {what} (margin {margin:.3e})")

    @property
    def passed(self) -> bool:
        return not self.violations

    def line(self) -> str:
        ok = self.trials - len(self.violations)
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.suite}.{self.name}: {ok}/{self.trials} trials, worst margin {self.worst:.3e}"


def _rng(seed: int, suite: str, prop: str) -> np.random.Generator:
    """Per-property generator, so suites and properties do not perturb each other."""
    tag = sum((i + 1) * ord(c) for i, c in enumerate(f"{suite}/{prop}"))
    return np.random.default_rng([seed, tag])


def _random_channel(d_in: int, d_out: int, rng, full: bool = False) -> ch.QuantumChannel:
    """Random channel; ``full`` gives a full-rank Choi matrix, so max-divergences against it are finite."""
    least = -(-d_in // d_out)
    rank = d_in * d_out if full else int(rng.integers(least, d_in * d_out + 1))
    return ch.QuantumChannel(sp.random_kraus(d_in, d_out, rng, rank=rank))


def _leq(x: float, y: float, tol: float) -> float:
    """Margin of ``x <= y + tol``; equal infinities count as equal."""
    if x == y:
        return tol
    return y + tol - x


def _close(x: float, y: float, tol: float) -> float:
    if x == y:
        return tol
    return tol - abs(x - y)


# --------------------------------------------------------------------------
# linmat
# --------------------------------------------------------------------------


def _linmat(seed: int) -> list[PropertyResult]:
    S = "linmat"
    out = []
    p = PropertyResult(S, "eig_round_trip")
    rng = _rng(seed, S, p.name)
    for _ in range(200):
        d = int(rng.integers(2, 9))
        M = sp.random_hermitian(d, rng)
        w, V = lm.herm_eig(M)
        err = np.abs(lm.reconstruct(w, V) - M).max()
        p.check(1e-9 * (1 + np.abs(M).max()) - err, f"d={d}")
    out.append(p)

    p = PropertyResult(S, "partial_trace_positive_and_trace_preserving")
    rng = _rng(seed, S, p.name)
    for _ in range(100):
        da, db = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        P = sp.random_psd(da * db, rng)
        red = lm.partial_trace(P, [0], [da, db])
        p.check(1e-10 * (1 + np.trace(P).real) - abs(np.trace(red) - np.trace(P)), "trace")
        p.check(np.linalg.eigvalsh(lm.hermitian_part(red))[0] + 1e-10, "positivity")
    out.append(p)

    p = PropertyResult(S, "exp_of_log_composition")
    rng = _rng(seed, S, p.name)
    for _ in range(100):
        d = int(rng.integers(2, 7))
        M = sp.random_psd(d, rng) + 0.1 * np.eye(d)
        L = lm.mat_fn(M, np.log)
        back = lm.mat_fn(L, np.exp)
        p.check(1e-8 * (1 + np.abs(M).max()) - np.abs(back - M).max(), f"d={d}")
    out.append(p)

    p = PropertyResult(S, "schatten_monotone")
    rng = _rng(seed, S, p.name)
    for _ in range(100):
        d = int(rng.integers(2, 7))
        M = sp.ginibre(d, d, rng)
        norms = [lm.schatten_norm(M, q) for q in (1, 1.5, 2, 3, np.inf)]
        p.check(min(norms[i] - norms[i + 1] for i in range(len(norms) - 1)) + 1e-10, f"d={d}")
    out.append(p)
    return out


# --------------------------------------------------------------------------
# divergences
# --------------------------------------------------------------------------

DP_KINDS = [
    dv.RELATIVE, dv.MAX, dv.CHERNOFF, dv.TRACE_DIST, dv.FIDELITY, dv.C_DIST, dv.BURES,
    dv.petz(0.5), dv.petz(1.5), dv.petz(2.0), dv.sandwiched(0.5), dv.sandwiched(2.0), dv.sandwiched(5.0),
    dv.log_euclidean(0.3), dv.log_euclidean(0.7), dv.hilbert(2.0), dv.hilbert(5.0),
]
ALL_KINDS = DP_KINDS + [dv.petz(3.0), dv.sandwiched(0.3), dv.log_euclidean(1.5), dv.CHERNOFF_FLAT]


def _divergences(seed: int) -> list[PropertyResult]:
    S = "divergences"
    out = []
    p = PropertyResult(S, "data_processing")
    rng = _rng(seed, S, p.name)
    for _ in range(60):
        d, e = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng)
        N = _random_channel(d, e, rng)
        r2, s2 = N(rho), N(sigma)
        for k in DP_KINDS:
            p.check(dv.divergence(k, rho, sigma) - dv.divergence(k, r2, s2) + 1e-8, str(k))
    out.append(p)

    p = PropertyResult(S, "faithfulness")
    rng = _rng(seed, S, p.name)
    for _ in range(30):
        rho = sp.random_state(int(rng.integers(2, 6)), rng)
        for k in ALL_KINDS:
            p.check(1e-9 - abs(dv.divergence(k, rho, rho)), str(k))
    out.append(p)

    p = PropertyResult(S, "ordering_chain")
    rng = _rng(seed, S, p.name)
    for _ in range(100):
        d = int(rng.integers(2, 7))
        rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng)
        for a in (0.3, 0.7, 1.5, 3.0):
            P = dv.petz_renyi(rho, sigma, a)
            T = dv.sandwiched_renyi(rho, sigma, a)
            F = dv.log_euclidean_renyi(rho, sigma, a)
            chain = [a * P, T, P, F] if a < 1 else [F, T, P, a * P]
            p.check(min(chain[i + 1] - chain[i] for i in range(3)) + 1e-8, f"alpha={a}")
    out.append(p)

    p = PropertyResult(S, "tensor_stability")
    rng = _rng(seed, S, p.name)
    for _ in range(15):
        rho, sigma, omega = (sp.random_state(2, rng) for _ in range(3))
        for k in ALL_KINDS:
            a = dv.divergence(k, rho, sigma)
            b = dv.divergence(k, np.kron(rho, omega), np.kron(sigma, omega))
            p.check(1e-9 * (1 + abs(a)) - abs(a - b), str(k))
    out.append(p)

    p = PropertyResult(S, "direct_sum")
    rng = _rng(seed, S, p.name)
    for _ in range(30):
        nx, d = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        px = rng.dirichlet(np.ones(nx))
        rs = [sp.random_state(d, rng) for _ in range(nx)]
        ss = [sp.random_state(d, rng) for _ in range(nx)]
        big_r = sum(px[x] * np.kron(lm.projector(lm.ket(x, nx)), rs[x]) for x in range(nx))
        big_s = sum(px[x] * np.kron(lm.projector(lm.ket(x, nx)), ss[x]) for x in range(nx))
        want = sum(px[x] * dv.relative_entropy(rs[x], ss[x]) for x in range(nx))
        p.check(1e-9 - abs(dv.relative_entropy(big_r, big_s) - want))
    out.append(p)

    p = PropertyResult(S, "chernoff_symmetry")
    rng = _rng(seed, S, p.name)
    for _ in range(50):
        d = int(rng.integers(2, 6))
        rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng, rank=int(rng.integers(1, d + 1)))
        p.check(1e-8 - abs(dv.chernoff(rho, sigma) - dv.chernoff(sigma, rho)))
    out.append(p)

    p = PropertyResult(S, "limits_at_one")
    rng = _rng(seed, S, p.name)
    for _ in range(30):
        d = int(rng.integers(2, 6))
        rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng)
        D = dv.relative_entropy(rho, sigma)
        p.check(1e-3 - abs(dv.sandwiched_renyi(rho, sigma, 1 + 1e-4) - D), "sandwiched above")
        p.check(1e-3 - abs(dv.sandwiched_renyi(rho, sigma, 1 - 1e-4) - D), "sandwiched below")
        p.check(1e-2 - abs(dv.log_euclidean_renyi(rho, sigma, 1 - 1e-4) - D), "log-Euclidean")
    out.append(p)

    p = PropertyResult(S, "triangle_inequalities")
    rng = _rng(seed, S, p.name)
    for _ in range(40):
        d, e = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        rho, sigma = sp.random_state(d, rng), sp.random_state(d, rng)
        omega = sp.random_state(e, rng)
        P = _random_channel(d, e, rng)
        pr, ps_ = P(rho), P(sigma)
        for a in (1.5, 3.0):
            k = dv.hilbert(a)
            p.check(dv.divergence(k, rho, sigma) + dv.divergence(k, ps_, omega) - dv.divergence(k, pr, omega) + 1e-7, str(k))
            t = dv.sandwiched(a)
            p.check(dv.divergence(t, rho, sigma) + dv.max_relative_entropy(ps_, omega) - dv.divergence(t, pr, omega) + 1e-7, str(t))
        for k in (dv.C_DIST, dv.BURES):
            p.check(dv.divergence(k, rho, sigma) + dv.divergence(k, ps_, omega) - dv.divergence(k, pr, omega) + 1e-7, str(k))
    out.append(p)

    p = PropertyResult(S, "fvdg_psd")
    rng = _rng(seed, S, p.name)
    for _ in range(200):
        d = int(rng.integers(2, 7))
        A = sp.random_psd(d, rng, rank=int(rng.integers(1, d + 1)))
        B = sp.random_psd(d, rng, rank=int(rng.integers(1, d + 1))) * rng.uniform(0.1, 3)
        p.check(dv.fvdg_check(A, B).slack + 1e-10, f"d={d}")
    out.append(p)
    return out


# --------------------------------------------------------------------------
# channels
# --------------------------------------------------------------------------


def _family_draw(kind: str, rng):
    if kind == "erasure":
        return ch.make_erasure(float(rng.uniform(0, 1)), int(rng.integers(2, 4)))
    if kind == "dephasing":
        d = int(rng.integers(2, 4))
        return ch.make_dephasing(rng.dirichlet(np.ones(d)))
    if kind == "gad":
        return ch.make_gad(float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
    return ch.make_cq([sp.random_state(2, rng) for _ in range(int(rng.integers(2, 4)))])


def _channels(seed: int) -> list[PropertyResult]:
    S = "channels"
    out = []
    p = PropertyResult(S, "trace_preserving_and_choi_marginal")
    rng = _rng(seed, S, p.name)
    for _ in range(40):
        fam = ("erasure", "dephasing", "gad", "cq")[int(rng.integers(0, 4))]
        for N in (_family_draw(fam, rng), _random_channel(int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng)):
            K = N.kraus
            tp = np.abs(np.einsum("kba,kbc->ac", K.conj(), K) - np.eye(N.dim_in)).max()
            p.check(1e-9 - tp, "sum K^dagger K")
            J = ch.choi(N)
            marg = lm.partial_trace(J, [0], [N.dim_in, N.dim_out])
            p.check(1e-9 - np.abs(marg - np.eye(N.dim_in) / N.dim_in).max(), "Choi marginal")
    out.append(p)

    p = PropertyResult(S, "environment_forms_agree")
    rng = _rng(seed, S, p.name)
    for _ in range(10):
        for fam in ("erasure", "dephasing", "gad", "cq"):
            N = _family_draw(fam, rng)
            E = ch.env_parametrized_forms(N)
            a = N.dim_in
            for i in range(a):
                for j in range(a):
                    X = np.zeros((a, a), dtype=complex)
                    X[i, j] = 1.0
                    via_env = E.interaction(np.kron(X, E.env_state))
                    p.check(1e-9 - np.abs(via_env - N(X)).max(), fam)
    out.append(p)

    p = PropertyResult(S, "seize_recovers_environment")
    rng = _rng(seed, S, p.name)
    for _ in range(50):
        for fam in ("erasure", "dephasing"):
            N = _family_draw(fam, rng)
            p.check(1e-9 - np.abs(ch.seize_environment(fam, N) - N.env_state).max(), fam)
    out.append(p)

    p = PropertyResult(S, "superchannel_cptp")
    rng = _rng(seed, S, p.name)
    for _ in range(50):
        a, b = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        r = int(rng.integers(1, 3))
        N = _random_channel(a, b, rng)
        c, e = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        pre = _random_channel(c, r * a, rng)
        post = _random_channel(r * b, e, rng)
        T = ch.superchannel_apply(pre, post, N)
        K = T.kraus
        p.check(1e-9 - np.abs(np.einsum("kba,kbc->ac", K.conj(), K) - np.eye(T.dim_in)).max(), "trace preserving")
        p.check(np.linalg.eigvalsh(lm.hermitian_part(ch.choi(T)))[0] + 1e-9, "complete positivity")
    out.append(p)
    return out


# --------------------------------------------------------------------------
# chandiv
# --------------------------------------------------------------------------

_LIGHT = cd.SearchOptions(multistarts=4, restarts=1, nm_maxiter=300, max_iter=150)


def _chandiv(seed: int) -> list[PropertyResult]:
    S = "chandiv"
    out = []
    p = PropertyResult(S, "dmax_dominates_inputs")
    rng = _rng(seed, S, p.name)
    for _ in range(10):
        a, b = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        N, M = _random_channel(a, b, rng), _random_channel(a, b, rng, full=True)
        top = cd.dmax_channel(N, M)
        psis = sp.random_pures(200, a * a, rng)
        vals = dv.max_relative_entropy(ch.apply_pure(N, psis, a), ch.apply_pure(M, psis, a))
        p.check(top - np.max(vals) + 1e-8, "sampled inputs")
        phi = np.eye(a, dtype=complex).reshape(-1) / np.sqrt(a)
        at_phi = dv.max_relative_entropy(ch.apply_pure(N, phi, a), ch.apply_pure(M, phi, a))
        p.check(1e-9 - abs(top - at_phi), "maximally entangled input")
        p.check(1e-8 - abs(top - cd.dmax_bisection(N, M)), "bisection")
    out.append(p)

    p = PropertyResult(S, "amortized_not_below_plain")
    rng = _rng(seed, S, p.name)
    for _ in range(2):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng, full=True)
        plain = cd.channel_divergence(dv.RELATIVE, N, M, opts=_LIGHT).value
        amort = cd.amortized_lower_search(dv.RELATIVE, N, M, r_dim_cap=2, opts=_LIGHT).value
        p.check(_leq(plain, amort, 1e-6))
    out.append(p)

    p = PropertyResult(S, "superchannel_data_processing")
    rng = _rng(seed, S, p.name)
    for _ in range(2):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng, full=True)
        pre = _random_channel(2, 2 * 2, rng)
        post = _random_channel(2 * 2, 2, rng)
        TN, TM = ch.superchannel_apply(pre, post, N), ch.superchannel_apply(pre, post, M)
        up = cd.amortized_upper(dv.RELATIVE, N, M, opts=_LIGHT)
        low = cd.amortized_lower_search(dv.RELATIVE, TN, TM, r_dim_cap=2, opts=_LIGHT).value
        p.check(up.value - low + 1e-6, up.rule)
    out.append(p)

    p = PropertyResult(S, "stability_under_identity")
    rng = _rng(seed, S, p.name)
    for _ in range(5):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng, full=True)
        IN, IM = ch.identity_channel(2).tensor(N), ch.identity_channel(2).tensor(M)
        p.check(_close(cd.dmax_channel(IN, IM), cd.dmax_channel(N, M), 1e-7), "max-divergence")
        plain = cd.channel_divergence(dv.RELATIVE, N, M, opts=_LIGHT)
        # the optimizer for (N, M), padded with |0> on the extra reference and input
        v = np.asarray(plain.optimizer_state).reshape(2, 2)
        full = np.zeros((2, 2, 2, 2), dtype=complex)  # (R', R, A', A)
        full[0, :, 0, :] = v
        full = full.reshape(-1)
        ext = dv.relative_entropy(ch.apply_pure(IN, full, 4), ch.apply_pure(IM, full, 4))
        p.check(1e-7 - abs(ext - plain.value), "relative entropy")
    out.append(p)

    p = PropertyResult(S, "joint_convexity")
    rng = _rng(seed, S, p.name)
    for _ in range(3):
        N1, N2 = _random_channel(2, 2, rng), _random_channel(2, 2, rng)
        M1, M2 = _random_channel(2, 2, rng, full=True), _random_channel(2, 2, rng, full=True)
        t = float(rng.uniform(0.1, 0.9))
        mix = lambda A, B: ch.QuantumChannel(np.concatenate([np.sqrt(t) * A.kraus, np.sqrt(1 - t) * B.kraus]))
        low = cd.channel_divergence(dv.RELATIVE, mix(N1, N2), mix(M1, M2), opts=_LIGHT).value
        ups = t * cd.amortized_upper(dv.RELATIVE, N1, M1).value + (1 - t) * cd.amortized_upper(dv.RELATIVE, N2, M2).value
        p.check(ups - low + 1e-6)
    out.append(p)

    p = PropertyResult(S, "covariant_scan_matches_search")
    rng = _rng(seed, S, p.name)
    opts = cd.SearchOptions(multistarts=8, exploit_structure=False)
    for _ in range(3):
        N = ch.make_gad(float(rng.uniform(0.1, 0.9)), float(rng.uniform(0.1, 0.9)))
        M = ch.make_gad(float(rng.uniform(0.1, 0.9)), float(rng.uniform(0.1, 0.9)))
        scan, _ = cd.covariant_scan(dv.RELATIVE, N, M)
        search = cd.channel_divergence(dv.RELATIVE, N, M, opts=opts).value
        p.check(1e-5 - abs(scan - search))
    out.append(p)
    return out


# --------------------------------------------------------------------------
# exponents
# --------------------------------------------------------------------------


def _random_cq(rng, nx=None, d=None) -> ch.CqChannel:
    nx = nx or int(rng.integers(1, 4))
    d = d or int(rng.integers(2, 4))
    return ch.make_cq([sp.random_state(d, rng, rank=int(rng.integers(1, d + 1))) for _ in range(nx)])


def _cq_pair(rng):
    nx, d = int(rng.integers(1, 4)), int(rng.integers(2, 4))
    return _random_cq(rng, nx, d), ch.make_cq([sp.random_state(d, rng) for _ in range(nx)])


def _exponents(seed: int) -> list[PropertyResult]:
    S = "exponents"
    out = []
    p = PropertyResult(S, "reports_consistent")
    rng = _rng(seed, S, p.name)
    for _ in range(4):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng, full=True)
        for rep in (
            ex.stein_report(N, M, 0.1, opts=_LIGHT),
            ex.stein_report(N, M, 0.1, n=10, opts=_LIGHT),
            ex.chernoff_report(N, M, 0.5, opts=_LIGHT),
            ex.chernoff_report(N, M, 0.3, n=10, opts=_LIGHT),
        ):
            p.check(_leq(rep.lower, rep.upper, ex.REPORT_TOL), str(rep.setting))
    for _ in range(4):
        N, M = _cq_pair(rng)
        for st in (ex.Setting.stein(0.2), ex.Setting.han_kobayashi(1.0), ex.Setting.hoeffding(0.2), ex.Setting.chernoff()):
            rep = ex.cq_exponents(N, M, st)
            p.check(_leq(rep.lower, rep.upper, ex.REPORT_TOL), str(st))
    out.append(p)

    p = PropertyResult(S, "stein_bracket_order")
    rng = _rng(seed, S, p.name)
    for _ in range(20):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng, full=True)
        D = cd.channel_divergence(dv.RELATIVE, N, M, opts=_LIGHT).value
        p.check(_leq(D, cd.dmax_channel(N, M), 1e-7))
    out.append(p)

    p = PropertyResult(S, "cq_strong_stein_threshold")
    rng = _rng(seed, S, p.name)
    for _ in range(8):
        N, M = _cq_pair(rng)
        D = max(dv.relative_entropy(a, b) for a, b in zip(N.outputs, M.outputs))
        if not np.isfinite(D):
            continue
        above = ex.sc_exponent_lower(N, M, D + 0.05)
        p.check(above.value, "exponent positive above the Stein value")
        below = ex.cq_exponents(N, M, ex.Setting.han_kobayashi(max(D - 0.05, 1e-3)))
        p.check(-below.details["raw"] + 1e-12, "raw exponent non-positive below the Stein value")
    out.append(p)

    p = PropertyResult(S, "monotone_in_rate")
    rng = _rng(seed, S, p.name)
    rates = [0.05, 0.2, 0.5, 1.0, 2.0]
    for _ in range(3):
        N, M = _cq_pair(rng)
        hk = [ex.cq_exponents(N, M, ex.Setting.han_kobayashi(r)).lower for r in rates]
        ho = [ex.cq_exponents(N, M, ex.Setting.hoeffding(r)).lower for r in rates]
        for i in range(len(rates) - 1):
            p.check(hk[i + 1] - hk[i] + 1e-9, "strong converse exponent non-decreasing")
            if np.isfinite(ho[i + 1]):
                p.check(ho[i] - ho[i + 1] + 1e-9, "Hoeffding exponent non-increasing")
    out.append(p)

    p = PropertyResult(S, "chernoff_prior_term")
    rng = _rng(seed, S, p.name)
    for _ in range(3):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng, full=True)
        a = ex.chernoff_report(N, M, 0.5, opts=_LIGHT)
        b = ex.chernoff_report(N, M, 0.2, opts=_LIGHT)
        c = ex.chernoff_report(N, M, 0.2, n=5, opts=_LIGHT)
        p.check(1e-12 - abs(a.upper - b.upper), "asymptotic upper independent of the prior")
        p.check(1e-12 - abs(c.upper - b.upper + math.log2(0.2 * 0.8) / 5), "finite-n prior term")
    out.append(p)

    p = PropertyResult(S, "cq_chernoff_factor_two")
    rng = _rng(seed, S, p.name)
    for _ in range(30):
        N, M = _cq_pair(rng)
        rep = ex.cq_exponents(N, M, ex.Setting.chernoff())
        p.check(2 * rep.lower + 1e-6 - rep.upper)
    out.append(p)
    return out


# --------------------------------------------------------------------------
# protosim
# --------------------------------------------------------------------------


def _random_strategy(N, n: int, r: int, rng) -> ps.AdaptiveStrategy:
    a, b = N.dim_in, N.dim_out
    psi = sp.random_pure(r * a, rng)
    ads = [_random_channel(r * b, r * a, rng) for _ in range(n - 1)]
    return ps.AdaptiveStrategy(n, [r] * n, np.outer(psi, psi.conj()), ads)


def _protosim(seed: int) -> list[PropertyResult]:
    S = "protosim"
    out = []
    p = PropertyResult(S, "round_states_valid")
    rng = _rng(seed, S, p.name)
    for _ in range(10):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng)
        strat = _random_strategy(N, int(rng.integers(1, 4)), 2, rng)
        res = ps.run_protocol(N, M, strat)
        for state, _ in res.trajectory + [(res.final_states[0], 0), (res.final_states[1], 0)]:
            p.check(1e-9 - abs(np.trace(state).real - 1), "unit trace")
            p.check(np.linalg.eigvalsh(lm.hermitian_part(state))[0] + 1e-9, "positivity")
    out.append(p)

    p = PropertyResult(S, "helstrom_trace_distance")
    rng = _rng(seed, S, p.name)
    for _ in range(20):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng)
        strat = _random_strategy(N, int(rng.integers(1, 3)), 2, rng)
        q = float(rng.uniform(0.1, 0.9))
        res = ps.run_protocol(N, M, strat, p=q)
        rho, tau = res.final_states
        want = 0.5 * (1 - lm.trace_norm_hermitian(q * rho - (1 - q) * tau))
        p.check(1e-9 - abs(res.symmetric_error(q) - want))
    out.append(p)

    p = PropertyResult(S, "np_rescaling_monotone")
    rng = _rng(seed, S, p.name)
    for _ in range(20):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng)
        strat = _random_strategy(N, 2, 2, rng)
        res = ps.run_protocol(N, M, strat)
        rho, tau = res.final_states
        lam = float(rng.uniform(0.05, 0.95))
        a0, b0 = ps._errors(res.measurement, rho, tau)
        a1, b1 = ps._errors(lam * res.measurement, rho, tau)
        p.check(b0 - b1 + 1e-12, "type II error decreases")
        p.check(a1 - a0 + 1e-12, "type I error increases")
    out.append(p)

    p = PropertyResult(S, "parallel_embedding")
    rng = _rng(seed, S, p.name)
    for _ in range(5):
        N, M = _random_channel(2, 2, rng), _random_channel(2, 2, rng)
        psi = sp.random_pure(4, rng)
        strat, _ = ps.parallel_embedding(psi, 2, 2, 2)
        res = ps.run_protocol(N, M, strat)
        on = ch.apply_pure(N, psi, 2)
        p.check(1e-9 - np.abs(res.final_states[0] - np.kron(on, on)).max())
    out.append(p)

    conv = PropertyResult(S, "meta_converse")
    adapt = PropertyResult(S, "adaptive_not_worse")
    rng = _rng(seed, S, conv.name)
    opts = ps.ProtocolOptions(multistarts=2, baseline_starts=2, outer_rounds=6)
    pairs = [(_random_channel(2, 2, rng), _random_channel(2, 2, rng))]
    pairs.append(_cq_pair(rng))
    for N, M in pairs:
        up = cd.amortized_upper(dv.RELATIVE, N, M)
        for n in (1, 2):
            _, res = ps.optimize_strategy(N, M, n, opts=opts)
            holds, slack = ps.meta_converse_check(res, n, dv.RELATIVE, up)
            conv.check(slack + 1e-6, f"n={n} {up.rule}")
            base = res.extras["baseline"]
            adapt.check(base.extras["value"] - res.extras["value"] + 1e-8, f"n={n}")
    out += [conv, adapt]
    return out


_RUNNERS: dict[str, Callable[[int], list[PropertyResult]]] = {
    "linmat": _linmat,
    "divergences": _divergences,
    "channels": _channels,
    "chandiv": _chandiv,
    "exponents": _exponents,
    "protosim": _protosim,
}


def run_suite(name: str, seed: int = 42) -> list[PropertyResult]:
    """Run one suite (or ``"all"``) and return its property results."""
    if name == "all":
        return [r for s in SUITES for r in _RUNNERS[s](seed)]
    if name not in _RUNNERS:
        raise KeyError(name)
    return _RUNNERS[name](seed)


def format_log(results: list[PropertyResult], seed: int) -> str:
    lines = [f"seed {seed}"]
    lines += [r.line() for r in results]
    failed = [v for r in results for v in r.violations]
    total = sum(r.trials for r in results)
    lines.append(f"{len(results) - sum(not r.passed for r in results)}/{len(results)} properties passed, {total} trials")
    if failed:
        lines.append("first violations:")
        lines += ["  " + v for v in failed[:10]]
    return "\n".join(lines) + "\n"
