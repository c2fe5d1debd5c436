"""Bounds on error exponents of channel discrimination.

Four settings are covered: Stein (type II exponent under a type I cap),
Han-Kobayashi (strong converse exponent), Hoeffding (type I exponent under a
type II rate) and Chernoff (symmetric error).  Each report brackets the
optimal exponent between an achievable value and a certified converse, and is
marked tight only for channel families where the two provably coincide:
classical-quantum pairs, environment-seizable pairs and replacer targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import divergences as dv
from .chandiv import (
    CQ_COLLAPSE,
    ENV_PARAM,
    REPLACER,
    UNKNOWN,
    EnergyConstraint,
    SearchOptions,
    _is_cq_pair,
    _seizable_pair,
    amortized_upper,
    channel_divergence,
    dmax_channel,
)
from .channels import (
    CqChannel,
    QuantumChannel,
    ReplacerChannel,
    apply_pure,
    channels_equal,
    environment_state,
    make_replacer,
    shared_interaction,
)
from .exceptions import DomainError, Inconsistent, Unsupported
from .optimize import grid_refine_max

REPORT_TOL = 1e-6

STEIN = "STEIN"
HAN_KOBAYASHI = "HAN_KOBAYASHI"
HOEFFDING = "HOEFFDING"
CHERNOFF = "CHERNOFF"

# orders above one: 1 + 2^k from just above one up to 33, then 64 (infinity is added separately)
ALPHAS_ABOVE_ONE = np.concatenate([1.0 + 2.0 ** np.arange(-12, 6, dtype=float), [64.0]])
# orders in (0, 1): 101 uniform interior points, plus a few points close to the ends
ALPHAS_BELOW_ONE = np.unique(
    np.concatenate([[1e-6, 1e-4, 1e-3, 3e-3], np.linspace(0.0, 1.0, 103)[1:-1], [1 - 1e-3, 1 - 1e-4]])
)


@dataclass(frozen=True)
class Setting:
    """A discrimination setting with its parameter (type I cap, rate or prior)."""

    tag: str
    parameter: float

    def __post_init__(self):
        t, x = self.tag, self.parameter
        if t == STEIN and not 0 < x < 1:
            raise DomainError("the type I cap must lie in (0, 1)")
        if t in (HAN_KOBAYASHI, HOEFFDING) and not x > 0:
            raise DomainError("the rate must be positive")
        if t == CHERNOFF and not 0 < x < 1:
            raise DomainError("the prior must lie in (0, 1)")
        if t not in (STEIN, HAN_KOBAYASHI, HOEFFDING, CHERNOFF):
            raise DomainError(f"unknown setting {t!r}")

    @classmethod
    def stein(cls, eps: float) -> "Setting":
        return cls(STEIN, float(eps))

    @classmethod
    def han_kobayashi(cls, r: float) -> "Setting":
        return cls(HAN_KOBAYASHI, float(r))

    @classmethod
    def hoeffding(cls, r: float) -> "Setting":
        return cls(HOEFFDING, float(r))

    @classmethod
    def chernoff(cls, p: float = 0.5) -> "Setting":
        return cls(CHERNOFF, float(p))

    def __str__(self) -> str:
        return f"{self.tag}({self.parameter:g})"


@dataclass
class BoundsReport:
    """Bracket ``lower <= exponent <= upper`` with the strategy and rule behind each side."""

    setting: Setting
    n: float
    lower: float
    lower_tag: str
    upper: float
    upper_tag: str
    tight: bool
    details: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        if np.isposinf(self.upper) and np.isposinf(self.lower):
            return 0.0
        return float(self.upper - self.lower)

    @property
    def consistent(self) -> bool:
        return self.lower <= self.upper + REPORT_TOL


class ExponentValue(NamedTuple):
    """A supremum over orders: clipped at zero, with the raw value and the optimizing order."""

    value: float
    raw: float
    trivial: bool
    alpha: float


def binary_entropy(eps: float) -> float:
    if eps <= 0 or eps >= 1:
        return 0.0
    return float(-eps * math.log2(eps) - (1 - eps) * math.log2(1 - eps))


def _clip(raw: float, alpha: float) -> ExponentValue:
    if raw < 0:
        return ExponentValue(0.0, float(raw), True, float(alpha))
    return ExponentValue(float(raw), float(raw), False, float(alpha))


def sc_sup(r: float, dfun: Callable[[float], float], d_inf: float | None = None, alphas=ALPHAS_ABOVE_ONE) -> ExponentValue:
    """``sup_{a > 1} ((a-1)/a) (r - dfun(a))``, with the ``a = inf`` endpoint ``r - d_inf`` when given."""

    def f(xs):
        out = []
        for a in np.atleast_1d(xs):
            d = float(dfun(float(a)))
            out.append(-math.inf if np.isposinf(d) else (a - 1.0) / a * (r - d))
        return np.array(out)

    a_best, v = grid_refine_max(f, alphas[0], alphas[-1], grid=alphas)
    if d_inf is not None and not np.isposinf(d_inf) and r - d_inf > v:
        a_best, v = math.inf, r - d_inf
    return _clip(v, a_best)


def hoeffding_sup(r: float, dfun: Callable[[float], float], d_zero: float | None = None, alphas=ALPHAS_BELOW_ONE) -> ExponentValue:
    """``sup_{a in (0,1)} ((a-1)/a) (r - dfun(a))``.

    The supremum is ``+inf`` when ``r`` lies below the order-zero value
    ``d_zero`` (the prefactor diverges as ``a -> 0``).
    """
    if d_zero is not None and r < d_zero:
        return ExponentValue(math.inf, math.inf, False, 0.0)

    def f(xs):
        out = []
        for a in np.atleast_1d(xs):
            d = float(dfun(float(a)))
            out.append(math.inf if np.isposinf(d) else (a - 1.0) / a * (r - d))
        return np.array(out)

    a_best, v = grid_refine_max(f, alphas[0], alphas[-1], grid=alphas)
    return _clip(v, a_best)


# --------------------------------------------------------------------------
# state exponents (exact for pairs of states)
# --------------------------------------------------------------------------


def state_sc_exponent(rho, sigma, r: float) -> ExponentValue:
    """Strong converse exponent of a state pair: sandwiched orders above one."""
    return sc_sup(r, lambda a: dv.sandwiched_renyi(rho, sigma, a), dv.max_relative_entropy(rho, sigma))


def state_hoeffding_exponent(rho, sigma, r: float) -> ExponentValue:
    """Hoeffding exponent of a state pair: Petz orders in ``(0, 1)``."""
    return hoeffding_sup(r, lambda a: dv.petz_renyi(rho, sigma, a), dv.petz_renyi(rho, sigma, 0.0))


def _zero_report(setting: Setting, n: float, tag: str = "IDENTICAL") -> BoundsReport:
    if setting.tag == HAN_KOBAYASHI:
        r = setting.parameter
        return BoundsReport(setting, n, r, tag, r, tag, True)
    return BoundsReport(setting, n, 0.0, tag, 0.0, tag, True)


def env_seizable_exponents(theta_n, theta_m, setting: Setting) -> BoundsReport:
    """Exponents of environment-seizable pairs: those of the environment states, all tight."""
    tag = "ENV_SEIZABLE"
    t, x = setting.tag, setting.parameter
    details: dict = {}
    if t == STEIN:
        v = float(dv.relative_entropy(theta_n, theta_m))
    elif t == HAN_KOBAYASHI:
        e = state_sc_exponent(theta_n, theta_m, x)
        v, details = e.value, {"raw": e.raw, "trivial": e.trivial, "alpha": e.alpha}
    elif t == HOEFFDING:
        e = state_hoeffding_exponent(theta_n, theta_m, x)
        v, details = e.value, {"raw": e.raw, "trivial": e.trivial, "alpha": e.alpha}
    else:
        v = float(dv.chernoff(theta_n, theta_m))
    return BoundsReport(setting, math.inf, v, tag, v, tag, True, details)


# --------------------------------------------------------------------------
# classical-quantum channels
# --------------------------------------------------------------------------


def _letters_commute(N: CqChannel, M: CqChannel) -> bool:
    return all(np.abs(a @ b - b @ a).max() <= 1e-12 for a, b in zip(N.outputs, M.outputs))


def _letter_max(fn, N: CqChannel, M: CqChannel) -> float:
    return float(max(fn(a, b) for a, b in zip(N.outputs, M.outputs)))


def product_chernoff(states_a, states_b) -> float:
    """Chernoff divergence of ``⊗_x a_x`` and ``⊗_x b_x`` from the per-factor ``log Q`` (additive)."""
    if any(dv._hs_overlap(a, b) <= dv.ORTHOGONAL_TOL for a, b in zip(states_a, states_b)):
        return math.inf
    fns = [dv.petz_log2_q(a, b) for a, b in zip(states_a, states_b)]
    _, v = grid_refine_max(lambda al: -sum(f(al) for f in fns), 0.0, 1.0)
    return float(v)


def cq_exponents(N: CqChannel, M: CqChannel, setting: Setting) -> BoundsReport:
    """Asymptotic exponents of classical-quantum channel pairs.

    Stein and Han-Kobayashi values are exact (the best letter); Hoeffding and
    Chernoff are brackets, tight only for a single letter or commuting outputs.
    """
    if not _is_cq_pair(N, M):
        raise Unsupported("cq_exponents needs a pair of cq channels over the same alphabet")
    t, x = setting.tag, setting.parameter
    single = N.alphabet == 1
    if t == STEIN:
        v = _letter_max(dv.relative_entropy, N, M)
        return BoundsReport(setting, math.inf, v, CQ_COLLAPSE, v, CQ_COLLAPSE, True)
    if t == HAN_KOBAYASHI:
        e = sc_sup(
            x,
            lambda a: _letter_max(lambda p, q: dv.sandwiched_renyi(p, q, a), N, M),
            _letter_max(dv.max_relative_entropy, N, M),
        )
        return BoundsReport(
            setting, math.inf, e.value, CQ_COLLAPSE, e.value, CQ_COLLAPSE, True,
            {"raw": e.raw, "trivial": e.trivial, "alpha": e.alpha},
        )
    if t == HOEFFDING:
        petz_max = lambda a: _letter_max(lambda p, q: dv.petz_renyi(p, q, a), N, M)
        lower = hoeffding_sup(x, petz_max, petz_max(0.0))
        flat_max = lambda a: _letter_max(lambda p, q: dv.log_euclidean_renyi(p, q, a), N, M)
        flat = hoeffding_sup(x, flat_max, flat_max(0.0))
        petz_sum = lambda a: float(sum(dv.petz_renyi(p, q, a) for p, q in zip(N.outputs, M.outputs)))
        summed = hoeffding_sup(x, petz_sum, petz_sum(0.0))
        upper, tag = (flat.value, "FLAT_RENYI") if flat.value <= summed.value else (summed.value, "ENV_PARAM")
        return BoundsReport(
            setting, math.inf, lower.value, "PRODUCT_BEST_LETTER", upper, tag,
            single or _letters_commute(N, M),
            {"flat": flat.value, "env_sum": summed.value, "lower_raw": lower.raw},
        )
    # Chernoff
    lower = _letter_max(dv.chernoff, N, M)
    cands = {
        "FIDELITY": _letter_max(lambda p, q: dv.divergence(dv.FIDELITY, p, q), N, M),
        "ENV_PARAM": product_chernoff(N.outputs, M.outputs),
        "FLAT_CHERNOFF": _letter_max(dv.chernoff_flat, N, M),
    }
    tag = min(cands, key=cands.get)
    return BoundsReport(setting, math.inf, lower, "PRODUCT_BEST_LETTER", cands[tag], tag, single, {"candidates": cands})


# --------------------------------------------------------------------------
# general channel pairs
# --------------------------------------------------------------------------


def _structured_tight(N, M) -> bool:
    return _is_cq_pair(N, M) or _seizable_pair(N, M) is not None or isinstance(M, ReplacerChannel)


def _renyi_strong_converse(N, M, eps: float, n: float, opts: SearchOptions) -> tuple[float, float]:
    """``min_a D~^A_a + a/(n(a-1)) log2 1/(1-eps)`` over the order grid; returns ``(value, order)``."""
    penalty = math.log2(1.0 / (1.0 - eps)) / n
    best, best_a = math.inf, math.nan
    for a in ALPHAS_ABOVE_ONE:
        up = amortized_upper(dv.sandwiched(a), N, M, opts=opts).value
        v = up + a / (a - 1.0) * penalty
        if v < best:
            best, best_a = v, float(a)
    return best, best_a


def stein_report(
    N: QuantumChannel, M: QuantumChannel, eps: float, n: float = math.inf, opts: SearchOptions | None = None
) -> BoundsReport:
    """Stein exponent bracket: product-strategy achievability against weak and strong converses.

    For finite ``n`` the converses carry their ``1/n`` corrections; the
    asymptotic report (``n = inf``) drops them.
    """
    setting = Setting.stein(eps)
    opts = opts or SearchOptions()
    if channels_equal(N, M):
        return _zero_report(setting, n)
    low = channel_divergence(dv.RELATIVE, N, M, opts=opts)
    up = amortized_upper(dv.RELATIVE, N, M, opts=opts)
    dmax = dmax_channel(N, M)
    finite = not np.isinf(n)
    cands: dict[str, float] = {}
    if up.rule != UNKNOWN:
        extra = binary_entropy(eps) / n if finite else 0.0
        cands["WEAK_CONVERSE"] = (up.value + extra) / (1.0 - eps)
    cands["DMAX_STRONG_CONVERSE"] = dmax + (math.log2(1.0 / (1.0 - eps)) / n if finite else 0.0)
    renyi_rules = [k for k in (CQ_COLLAPSE, ENV_PARAM, REPLACER) if k in up.candidates]
    details: dict = {"amortized_rule": up.rule, "amortized_candidates": dict(up.candidates), "dmax": dmax}
    if renyi_rules:
        if finite:
            v, a = _renyi_strong_converse(N, M, eps, n, opts)
            cands["RENYI_STRONG_CONVERSE"] = v
            details["renyi_order"] = a
        else:
            # the sandwiched collapses tend to the relative-entropy one as the order decreases to one
            cands["RENYI_STRONG_CONVERSE"] = min(up.candidates[k] for k in renyi_rules)
    tag = min(cands, key=cands.get)
    upper = float(cands[tag])
    details["candidates"] = cands
    tight = (not finite) and _structured_tight(N, M) and abs(upper - low.value) <= REPORT_TOL
    return BoundsReport(setting, n, float(low.value), str(low.certification), upper, tag, tight, details)


def sc_exponent_lower(N: QuantumChannel, M: QuantumChannel, r: float, opts: SearchOptions | None = None) -> ExponentValue:
    """Lower bound on the strong converse exponent from certified sandwiched amortized upper bounds.

    The order-infinity endpoint ``r - D_max`` is always part of the supremum.
    """
    if not r > 0:
        raise DomainError("the rate must be positive")
    opts = opts or SearchOptions()
    return sc_sup(r, lambda a: amortized_upper(dv.sandwiched(a), N, M, opts=opts).value, dmax_channel(N, M))


def chernoff_report(
    N: QuantumChannel, M: QuantumChannel, p: float = 0.5, n: float = math.inf, opts: SearchOptions | None = None
) -> BoundsReport:
    """Chernoff exponent bracket: channel Chernoff divergence against fidelity and max-divergence converses."""
    setting = Setting.chernoff(p)
    opts = opts or SearchOptions()
    finite = not np.isinf(n)
    prior = -math.log2(p * (1.0 - p)) / n if finite else 0.0
    if channels_equal(N, M):
        return _zero_report(setting, n)
    if _is_cq_pair(N, M):
        base = cq_exponents(N, M, setting)
        return BoundsReport(setting, n, base.lower, base.lower_tag, base.upper + prior, base.upper_tag, base.tight and not finite, base.details)
    fam = _seizable_pair(N, M)
    if fam is not None:
        base = env_seizable_exponents(N.env_state, M.env_state, setting)
        return BoundsReport(setting, n, base.lower, base.lower_tag, base.upper + prior, base.upper_tag, not finite, base.details)
    low = channel_divergence(dv.CHERNOFF, N, M, opts=opts)
    cands = {"DMAX": dmax_channel(N, M), "DMAX_REVERSED": dmax_channel(M, N)}
    fid = amortized_upper(dv.FIDELITY, N, M, opts=opts)
    if fid.rule != UNKNOWN:
        cands["FIDELITY_" + fid.rule] = fid.value
    if not finite and shared_interaction(N, M):
        cands["ENV_CHERNOFF"] = float(dv.chernoff(environment_state(N), environment_state(M)))
    cands = {k: v + prior for k, v in cands.items()}
    tag = min(cands, key=cands.get)
    return BoundsReport(setting, n, float(low.value), str(low.certification), float(cands[tag]), tag, False, {"candidates": cands})


def hoeffding_to_chernoff(
    bound_fn: Callable[[float], float], r_max: float | None = None, tol: float = 1e-8, n_check: int = 33
) -> float:
    """``sup{r : B(r) >= r}`` for a non-increasing rate function ``B``, by bisection.

    ``B`` is sampled on a grid first; samples that increase with ``r`` raise
    ``Inconsistent``.
    """
    hi = 1.0 if r_max is None else float(r_max)
    while bound_fn(hi) >= hi:
        hi *= 2.0
        if hi > 1e6:
            return math.inf
    grid = np.linspace(0.0, hi, n_check)[1:]
    vals = np.array([bound_fn(r) for r in grid], dtype=float)
    for k in range(len(vals) - 1):
        if vals[k + 1] > vals[k] + 1e-9 and not np.isposinf(vals[k]):
            raise Inconsistent(f"rate function increases between r={grid[k]:g} and r={grid[k + 1]:g}")
    above = np.nonzero(vals >= grid)[0]
    lo = float(grid[above[-1]]) if len(above) else 0.0
    hi = float(grid[above[-1] + 1]) if len(above) else float(grid[0])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bound_fn(mid) >= mid:
            lo = mid
        else:
            hi = mid
    return lo


def _candidate_inputs(N: QuantumChannel, M: QuantumChannel, opts: SearchOptions) -> list[np.ndarray]:
    a = N.dim_in
    phi = np.eye(a, dtype=complex).reshape(-1) / np.sqrt(a)
    best = channel_divergence(dv.RELATIVE, N, M, opts=opts).optimizer_state
    return [phi, np.asarray(best)]


def _general_hk(N, M, setting: Setting, opts: SearchOptions) -> BoundsReport:
    r = setting.parameter
    low = sc_exponent_lower(N, M, r, opts)
    a = N.dim_in
    ups = []
    for psi in _candidate_inputs(N, M, opts):
        ups.append(state_sc_exponent(apply_pure(N, psi, a), apply_pure(M, psi, a), r).value)
    upper = min(ups)
    return BoundsReport(
        setting, math.inf, low.value, "AMORTIZED_RENYI", upper, "PRODUCT_STRATEGY", False,
        {"raw": low.raw, "trivial": low.trivial, "alpha": low.alpha},
    )


def _general_hoeffding(N, M, setting: Setting, opts: SearchOptions) -> BoundsReport:
    r = setting.parameter
    a = N.dim_in
    lows = [
        state_hoeffding_exponent(apply_pure(N, psi, a), apply_pure(M, psi, a), r).value
        for psi in _candidate_inputs(N, M, opts)
    ]
    lower = max(lows)
    if shared_interaction(N, M):
        upper = state_hoeffding_exponent(environment_state(N), environment_state(M), r).value
        tag = ENV_PARAM
    else:
        upper, tag = math.inf, UNKNOWN
    return BoundsReport(setting, math.inf, lower, "PRODUCT_STRATEGY", upper, tag, False)


def replacer_exponents(
    N: QuantumChannel,
    tau,
    setting: Setting,
    constraint: EnergyConstraint | None = None,
    opts: SearchOptions | None = None,
) -> BoundsReport:
    """Exponents for discriminating ``N`` from the replacer channel preparing ``tau``.

    Stein and Han-Kobayashi values are single-letter (the amortized
    divergences collapse); other settings fall back to the generic brackets.
    """
    opts = opts or SearchOptions()
    R = make_replacer(tau, N.dim_in)
    t, x = setting.tag, setting.parameter
    if t == STEIN:
        v = float(channel_divergence(dv.RELATIVE, N, R, constraint=constraint, opts=opts).value)
        return BoundsReport(setting, math.inf, v, REPLACER, v, REPLACER, True)
    if t == HAN_KOBAYASHI:
        d_inf = float(channel_divergence(dv.MAX, N, R, constraint=constraint, opts=opts).value)
        e = sc_sup(x, lambda a: channel_divergence(dv.sandwiched(a), N, R, constraint=constraint, opts=opts).value, d_inf)
        return BoundsReport(setting, math.inf, e.value, REPLACER, e.value, REPLACER, True, {"raw": e.raw, "trivial": e.trivial, "alpha": e.alpha})
    if t == CHERNOFF:
        return chernoff_report(N, R, x, opts=opts)
    return _general_hoeffding(N, R, setting, opts)


def bounds_report(
    N: QuantumChannel,
    M: QuantumChannel,
    setting: Setting,
    n: float = math.inf,
    constraint: EnergyConstraint | None = None,
    opts: SearchOptions | None = None,
) -> BoundsReport:
    """Dispatch to the sharpest available report for the pair and setting."""
    opts = opts or SearchOptions()
    t = setting.tag
    if t in (HAN_KOBAYASHI, HOEFFDING) and not np.isinf(n):
        raise Unsupported(f"{t} bounds are asymptotic only")
    if channels_equal(N, M):
        return _zero_report(setting, n)
    if isinstance(M, ReplacerChannel) and (constraint is not None or t in (STEIN, HAN_KOBAYASHI)) and np.isinf(n):
        return replacer_exponents(N, M.tau, setting, constraint, opts)
    if t == STEIN:
        return stein_report(N, M, setting.parameter, n, opts)
    if t == CHERNOFF:
        return chernoff_report(N, M, setting.parameter, n, opts)
    if _is_cq_pair(N, M):
        return cq_exponents(N, M, setting)
    if _seizable_pair(N, M) is not None:
        return env_seizable_exponents(N.env_state, M.env_state, setting)
    if t == HAN_KOBAYASHI:
        return _general_hk(N, M, setting, opts)
    return _general_hoeffding(N, M, setting, opts)
