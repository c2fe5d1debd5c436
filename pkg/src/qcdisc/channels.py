"""Quantum channels in Kraus form, the channel families used for discrimination,
and structural predicates on channel pairs.

Bipartite operators are ordered reference-first: a state on ``R ⊗ A`` has
shape ``(|R||A|, |R||A|)`` and channels act on the last factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .exceptions import DimError, DomainError, Unsupported
from .linmat import (
    as_density_matrix,
    as_psd,
    dag,
    hermitian_part,
    herm_eig,
    ket,
    kron,
    maximally_entangled,
    partial_trace,
    projector,
    support_mask,
)
from .sampling import child_seeds, random_pure

TP_TOL = 1e-9


class QuantumChannel:
    """CPTP map given by Kraus operators of shape ``(k, dim_out, dim_in)``."""

    family = "kraus"

    def __init__(self, kraus, check: bool = True):
        K = np.asarray(kraus, dtype=complex)
        if K.ndim == 2:
            K = K[None]
        if K.ndim != 3:
            raise DimError("Kraus operators must form a (k, dim_out, dim_in) array")
        self.kraus = K
        if check and not self.is_trace_preserving():
            raise DomainError("Kraus operators are not trace preserving")

    @property
    def dim_in(self) -> int:
        return self.kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self.kraus.shape[1]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim_in={self.dim_in}, dim_out={self.dim_out}, kraus_rank={len(self.kraus)})"

    def is_trace_preserving(self, tol: float = TP_TOL) -> bool:
        S = np.einsum("kba,kbc->ac", self.kraus.conj(), self.kraus)
        return bool(np.abs(S - np.eye(self.dim_in)).max() <= tol)

    def apply(self, state: np.ndarray, r_dim: int = 1) -> np.ndarray:
        """Apply ``id_R ⊗ N`` to a state (or stack of states) on ``R ⊗ A``."""
        return apply(self, state, r_dim)

    __call__ = apply

    def choi(self) -> np.ndarray:
        return choi(self)

    def compose(self, first: "QuantumChannel") -> "QuantumChannel":
        """The channel ``self ∘ first``."""
        if first.dim_out != self.dim_in:
            raise DimError("composition dimension mismatch")
        K = np.einsum("jcb,kba->jkca", self.kraus, first.kraus)
        return QuantumChannel(K.reshape(-1, self.dim_out, first.dim_in), check=False)

    def tensor(self, other: "QuantumChannel") -> "QuantumChannel":
        K = np.einsum("iab,jcd->ijacbd", self.kraus, other.kraus)
        return QuantumChannel(
            K.reshape(-1, self.dim_out * other.dim_out, self.dim_in * other.dim_in), check=False
        )

    def with_identity(self, r_dim: int) -> "QuantumChannel":
        """``id_R ⊗ N`` as a channel on ``R ⊗ A``."""
        return identity_channel(r_dim).tensor(self)

    def adjoint(self, op: np.ndarray) -> np.ndarray:
        """Heisenberg-picture action ``sum_i K_i^dagger X K_i``."""
        return np.einsum("kba,...bc,kcd->...ad", self.kraus.conj(), op, self.kraus)


def lifted_kraus(ch: QuantumChannel, r_dim: int) -> np.ndarray:
    """Kraus operators of ``id_R ⊗ N`` (cached per reference dimension)."""
    cache = ch.__dict__.setdefault("_lifted", {})
    if r_dim not in cache:
        if r_dim == 1:
            cache[r_dim] = ch.kraus
        else:
            eye = np.eye(r_dim)
            cache[r_dim] = np.array([np.kron(eye, k) for k in ch.kraus])
    return cache[r_dim]


def apply(ch: QuantumChannel, state: np.ndarray, r_dim: int = 1) -> np.ndarray:
    """Output of ``id_R ⊗ N`` on a state (or stack) over ``R ⊗ A``."""
    state = np.asarray(state)
    a = ch.dim_in
    if state.shape[-1] != r_dim * a or state.shape[-2] != r_dim * a:
        raise DimError(f"state of dim {state.shape[-1]} does not match |R|={r_dim}, |A|={a}")
    K = lifted_kraus(ch, r_dim)
    return np.sum(K @ state[..., None, :, :] @ dag(K), axis=-3)


def apply_pure(ch: QuantumChannel, psi: np.ndarray, r_dim: int) -> np.ndarray:
    """Output of ``id_R ⊗ N`` on pure inputs (stack ``(..., |R||A|)``), cheaper than ``apply``."""
    psi = np.asarray(psi)
    a, b = ch.dim_in, ch.dim_out
    batch = psi.shape[:-1]
    P = psi.reshape(batch + (r_dim, a))
    W = np.einsum("kba,...ra->...krb", ch.kraus, P)
    W = W.reshape(batch + (len(ch.kraus), r_dim * b))
    return np.einsum("...ki,...kj->...ij", W, W.conj())


def choi(ch: QuantumChannel) -> np.ndarray:
    """Choi state ``(id ⊗ N)(Phi)`` on ``R ⊗ B`` with the normalized maximally entangled input."""
    return apply(ch, maximally_entangled(ch.dim_in), ch.dim_in)


def channels_equal(N: QuantumChannel, M: QuantumChannel, tol: float = 1e-12) -> bool:
    if (N.dim_in, N.dim_out) != (M.dim_in, M.dim_out):
        return False
    return bool(np.abs(choi(N) - choi(M)).max() <= tol)


def kraus_from_stinespring(V: np.ndarray, dim_out: int) -> np.ndarray:
    """Kraus operators of ``rho -> Tr_F[V rho V^dagger]`` where V maps into ``B ⊗ F``."""
    d_tot, d_in = V.shape
    if d_tot % dim_out:
        raise DimError("isometry output dimension is not a multiple of dim_out")
    f = d_tot // dim_out
    return np.transpose(V.reshape(dim_out, f, d_in), (1, 0, 2))


# --------------------------------------------------------------------------
# channel families
# --------------------------------------------------------------------------


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel(np.eye(d, dtype=complex)[None], check=False)


def unitary_channel(U: np.ndarray) -> QuantumChannel:
    U = np.asarray(U, dtype=complex)
    return QuantumChannel(U[None])


def trace_channel(d: int) -> QuantumChannel:
    return QuantumChannel(np.eye(d, dtype=complex)[:, None, :])


def state_preparation(rho: np.ndarray) -> QuantumChannel:
    """Channel from a trivial (one-dimensional) input preparing ``rho``."""
    rho = as_density_matrix(rho)
    w, V = herm_eig(rho, check=False)
    keep = w > 0
    K = (V[:, keep] * np.sqrt(w[keep])).T[:, :, None]
    return QuantumChannel(K)


class CqChannel(QuantumChannel):
    """Classical-quantum channel: measures in the computational basis, emits ``outputs[x]``."""

    family = "cq"

    def __init__(self, outputs: Sequence[np.ndarray]):
        outs = [as_density_matrix(o) for o in outputs]
        if not outs:
            raise DomainError("a cq channel needs at least one letter")
        d = outs[0].shape[0]
        if any(o.shape != (d, d) for o in outs):
            raise DimError("cq outputs must share a dimension")
        self.outputs = np.array(outs)
        ks = []
        for x, nu in enumerate(outs):
            w, V = herm_eig(nu, check=False)
            for i in np.nonzero(w > 0)[0]:
                ks.append(np.sqrt(w[i]) * np.outer(V[:, i], ket(x, len(outs))))
        super().__init__(np.array(ks))

    @property
    def alphabet(self) -> int:
        return len(self.outputs)


class ReplacerChannel(QuantumChannel):
    """Discards the input and prepares ``tau``."""

    family = "replacer"

    def __init__(self, tau: np.ndarray, dim_in: int):
        self.tau = as_density_matrix(tau)
        w, V = herm_eig(self.tau, check=False)
        ks = [
            np.sqrt(w[i]) * np.outer(V[:, i], ket(a, dim_in))
            for i in np.nonzero(w > 0)[0]
            for a in range(dim_in)
        ]
        super().__init__(np.array(ks))


class EnvParamChannel(QuantumChannel):
    """Channel ``rho -> P(rho ⊗ theta)`` for an interaction ``P: A ⊗ E -> B`` and environment ``theta``.

    ``family`` and ``params`` identify the constructor; two channels of the
    same family with equal ``interaction_key`` share the interaction ``P``.
    """

    def __init__(
        self,
        interaction: QuantumChannel,
        env_state: np.ndarray,
        family: str = "env",
        params: dict | None = None,
        kraus: np.ndarray | None = None,
        interaction_key=None,
    ):
        self.interaction = interaction
        self.env_state = as_density_matrix(env_state)
        e = self.env_state.shape[0]
        if interaction.dim_in % e:
            raise DimError("interaction input must factor as |A|·|E|")
        self.family = family
        self.params = dict(params or {})
        self.interaction_key = interaction_key
        if kraus is None:
            kraus = _kraus_with_environment(interaction, self.env_state)
        super().__init__(kraus)

    @property
    def env_dim(self) -> int:
        return self.env_state.shape[0]


def _kraus_with_environment(P: QuantumChannel, theta: np.ndarray) -> np.ndarray:
    e = theta.shape[0]
    a = P.dim_in // e
    w, V = herm_eig(theta, check=False)
    ks = []
    for k in np.nonzero(w > 0)[0]:
        # P_j (I_A ⊗ |e_k>) maps A -> B
        emb = np.kron(np.eye(a), V[:, k][:, None])
        ks.extend(np.sqrt(w[k]) * (P.kraus @ emb))
    return np.array(ks)


def _check_prob(p: float, name: str = "p"):
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")


def gad_kraus(eta: float, p: float) -> np.ndarray:
    _check_prob(eta, "eta")
    _check_prob(p)
    se, sf = np.sqrt(eta), np.sqrt(1 - eta)
    return np.array(
        [
            np.sqrt(p) * np.array([[1, 0], [0, se]]),
            np.sqrt(p) * np.array([[0, sf], [0, 0]]),
            np.sqrt(1 - p) * np.array([[se, 0], [0, 1]]),
            np.sqrt(1 - p) * np.array([[0, 0], [sf, 0]]),
        ],
        dtype=complex,
    )


def _gad_interaction(eta: float) -> QuantumChannel:
    # environment bit 0 selects damping towards |0>, bit 1 towards |1>
    K0 = gad_kraus(eta, 1.0)[:2]
    K1 = gad_kraus(eta, 0.0)[2:]
    ks = [np.kron(k, ket(0, 2)[None, :].conj()) for k in K0]
    ks += [np.kron(k, ket(1, 2)[None, :].conj()) for k in K1]
    return QuantumChannel(np.array(ks))


def make_gad(eta: float, p: float) -> EnvParamChannel:
    """Generalized amplitude damping with transmissivity ``eta`` and environment parameter ``p``."""
    return EnvParamChannel(
        _gad_interaction(eta),
        np.diag([p, 1 - p]),
        family="gad",
        params={"eta": float(eta), "p": float(p)},
        kraus=gad_kraus(eta, p),
        interaction_key=("gad", float(eta)),
    )


def _erasure_interaction(d: int) -> QuantumChannel:
    """Controlled-SWAP of the input (embedded in d+1 levels) with a register prepared in ``|e>``.

    The environment qubit controls the swap; control and register are then
    discarded, leaving the first system as output.
    """
    D = d + 1
    emb = np.zeros((D, d))
    emb[:d, :d] = np.eye(d)
    # A ⊗ E -> A' ⊗ E ⊗ E' with E' prepared in |e> = |d>
    prep = np.kron(np.kron(emb, np.eye(2)), ket(d, D).real[:, None])
    I = np.eye(D)
    T = np.zeros((D, 2, D, D, 2, D))
    T[:, 0, :, :, 0, :] = np.einsum("ac,bd->abcd", I, I)
    T[:, 1, :, :, 1, :] = np.einsum("ad,bc->abcd", I, I)
    cswap = T.reshape(2 * D * D, 2 * D * D)
    V = (cswap @ prep).reshape(D, 2, D, 2 * d)
    return QuantumChannel(np.transpose(V, (1, 2, 0, 3)).reshape(2 * D, D, 2 * d))


def make_erasure(p: float, d: int = 2) -> EnvParamChannel:
    """Erasure channel ``rho -> (1-p) rho + p |e><e|`` with output dimension ``d+1``."""
    _check_prob(p)
    if d < 1:
        raise DomainError("dimension must be positive")
    D = d + 1
    emb = np.zeros((D, d), dtype=complex)
    emb[:d, :d] = np.eye(d)
    ks = [np.sqrt(1 - p) * emb]
    ks += [np.sqrt(p) * np.outer(ket(d, D), ket(i, d)) for i in range(d)]
    return EnvParamChannel(
        _erasure_interaction(d),
        np.diag([1 - p, p]),
        family="erasure",
        params={"p": float(p), "d": int(d)},
        kraus=np.array(ks),
        interaction_key=("erasure", int(d)),
    )


def clock_operator(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def _dephasing_interaction(d: int) -> QuantumChannel:
    Z = clock_operator(d)
    # controlled unitary sum_i Z^i ⊗ |i><i|, then trace out E
    ks = [np.kron(np.linalg.matrix_power(Z, i), ket(i, d)[None, :].conj()) for i in range(d)]
    return QuantumChannel(np.array(ks))


def make_dephasing(probs: Sequence[float], d: int | None = None) -> EnvParamChannel:
    """Generalized dephasing ``rho -> sum_i p_i Z^i rho Z^-i`` with the clock operator ``Z``."""
    probs = np.asarray(probs, dtype=float)
    d = len(probs) if d is None else d
    if len(probs) != d:
        raise DomainError("probability vector length must equal the dimension")
    if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
        raise DomainError("invalid probability vector")
    Z = clock_operator(d)
    ks = [np.sqrt(probs[i]) * np.linalg.matrix_power(Z, i) for i in range(d)]
    return EnvParamChannel(
        _dephasing_interaction(d),
        np.diag(probs),
        family="dephasing",
        params={"probs": [float(x) for x in probs], "d": int(d)},
        kraus=np.array(ks),
        interaction_key=("dephasing", int(d)),
    )


def make_replacer(tau: np.ndarray, dim_in: int) -> ReplacerChannel:
    return ReplacerChannel(tau, dim_in)


def make_cq(states: Sequence[np.ndarray]) -> CqChannel:
    return CqChannel(states)


def _cq_interaction(n_letters: int, d: int) -> QuantumChannel:
    """Measure X, then output the x-th environment register; other registers are traced."""
    ks = []
    for x in range(n_letters):
        others = [y for y in range(n_letters) if y != x]
        for idx in np.ndindex(*[d] * len(others)):
            factors = []
            it = iter(idx)
            for y in range(n_letters):
                if y == x:
                    factors.append(np.eye(d))
                else:
                    factors.append(ket(next(it), d)[None, :])
            K = np.kron(ket(x, n_letters)[None, :], kron(*factors))
            ks.append(K)
    return QuantumChannel(np.array(ks, dtype=complex))


def env_parametrized_forms(ch: QuantumChannel) -> EnvParamChannel:
    """Environment-parametrized realization ``(P, theta)`` of a typed channel.

    Supports erasure, dephasing, generalized amplitude damping and cq
    channels.  The returned channel's Kraus operators are derived from the
    interaction and environment state, not copied from ``ch``.
    """
    fam = getattr(ch, "family", "kraus")
    if fam == "erasure":
        P, theta, key = _erasure_interaction(ch.params["d"]), ch.env_state, ch.interaction_key
    elif fam == "dephasing":
        P, theta, key = _dephasing_interaction(ch.params["d"]), ch.env_state, ch.interaction_key
    elif fam == "gad":
        P, theta, key = _gad_interaction(ch.params["eta"]), ch.env_state, ch.interaction_key
    elif fam == "cq":
        n, d = ch.alphabet, ch.outputs.shape[1]
        P = _cq_interaction(n, d)
        theta = kron(*ch.outputs)
        key = ("cq", n, d)
    else:
        raise Unsupported(f"no environment-parametrized form for family {fam!r}")
    params = dict(getattr(ch, "params", {}))
    return EnvParamChannel(P, theta, family=fam, params=params, interaction_key=key)


def environment_state(ch: QuantumChannel) -> np.ndarray:
    """Environment state ``theta`` of a typed environment-parametrized channel."""
    if isinstance(ch, EnvParamChannel):
        return ch.env_state
    if isinstance(ch, CqChannel):
        return kron(*ch.outputs)
    raise Unsupported("channel carries no environment state")


def shared_interaction(N: QuantumChannel, M: QuantumChannel) -> bool:
    """True when both channels are environment-parametrized by the same interaction."""
    if isinstance(N, CqChannel) and isinstance(M, CqChannel):
        return N.outputs.shape == M.outputs.shape
    if isinstance(N, EnvParamChannel) and isinstance(M, EnvParamChannel):
        if N.interaction_key is not None and N.interaction_key == M.interaction_key:
            return True
        if N.env_dim == M.env_dim:
            return channels_equal(N.interaction, M.interaction, tol=1e-12)
    return False


SEIZABLE = ("erasure", "dephasing", "choi")


def seizing_strategy(kind: str, ch: QuantumChannel) -> tuple[np.ndarray, int, QuantumChannel]:
    """Input state on ``R ⊗ A``, reference dimension and post-processing channel that recover ``theta``."""
    if kind == "erasure":
        d = ch.dim_in
        D = d + 1
        rho = projector(ket(0, d))
        # relabel: |e> -> |1>, every other level -> |0>
        ks = [np.outer(ket(0, 2), ket(i, D)) for i in range(d)] + [np.outer(ket(1, 2), ket(d, D))]
        return rho, 1, QuantumChannel(np.array(ks))
    if kind == "dephasing":
        d = ch.dim_in
        plus = np.ones(d, dtype=complex) / np.sqrt(d)
        # Z^i |+> = F|i> with F the discrete Fourier transform; undo it
        F = np.exp(2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d) / np.sqrt(d)
        return projector(plus), 1, unitary_channel(dag(F))
    if kind == "choi":
        d = ch.dim_in
        return maximally_entangled(d), d, identity_channel(d * ch.dim_out)
    raise Unsupported(f"unknown seizing kind {kind!r}")


def seize_environment(kind: str, ch: QuantumChannel) -> np.ndarray:
    """Run the seizing strategy for ``kind`` on ``ch`` and return the recovered environment state."""
    if kind in ("erasure", "dephasing") and getattr(ch, "family", None) not in (kind, "kraus", "env"):
        raise Unsupported(f"channel family {ch.family!r} is not seizable as {kind}")
    rho, r, post = seizing_strategy(kind, ch)
    out = apply(ch, rho, r)
    return post(out)


# --------------------------------------------------------------------------
# predicates
# --------------------------------------------------------------------------


@dataclass
class DistinguishabilityReport:
    """Outcome of the two-part perfect-distinguishability criterion.

    ``condition_a`` is True only with a certified witness input whose output
    supports intersect trivially; False means no witness was found by the
    search, not a proof that none exists.
    """

    distinguishable: bool
    condition_a: bool
    condition_b: bool
    witness: np.ndarray | None
    support_cosine: float
    orthogonal_witness: bool
    span_residual: float
    starts: int = 0
    notes: list = field(default_factory=list)


def _identity_in_kraus_span(N: QuantumChannel, M: QuantumChannel) -> tuple[bool, float]:
    a = N.dim_in
    vecs = np.einsum("iba,jbc->ijac", N.kraus.conj(), M.kraus).reshape(-1, a * a)
    Q, R = np.linalg.qr(vecs.T)
    diag = np.abs(np.diag(R)) if R.size else np.zeros(0)
    scale = diag.max() if diag.size else 1.0
    Q = Q[:, diag > 1e-12 * max(scale, 1.0)]
    v = np.eye(a).reshape(-1)
    resid = float(np.linalg.norm(v - Q @ (dag(Q) @ v)))
    return resid < 1e-9 * np.sqrt(a), resid


def _support_cosine(N: QuantumChannel, M: QuantumChannel, psi: np.ndarray) -> tuple[float, bool]:
    a = N.dim_in
    outs = [apply_pure(ch, psi, a) for ch in (N, M)]
    bases = []
    for o in outs:
        w, V = np.linalg.eigh(hermitian_part(o))
        bases.append(V[:, support_mask(w)])
    s = np.linalg.svd(dag(bases[0]) @ bases[1], compute_uv=False)
    top = float(s.max()) if s.size else 0.0
    return top, top < 1e-9


def perfectly_distinguishable(
    N: QuantumChannel, M: QuantumChannel, starts: int = 64, seed: int = 42
) -> DistinguishabilityReport:
    """Test whether finitely many adaptive uses discriminate N and M without error.

    Two conditions must hold: (a) some input ``psi_RA`` gives output states
    whose supports intersect only in zero, and (b) the identity is not in the
    span of ``{N_i^dagger M_j}``.  Condition (a) is searched by minimizing the
    largest principal-angle cosine between the output supports over
    ``starts`` random inputs (half product, half generic); a cosine below
    ``1 - 1e-6`` certifies a trivial intersection.
    """
    if (N.dim_in, N.dim_out) != (M.dim_in, M.dim_out):
        raise DimError("channels must share input and output dimensions")
    b_holds, resid = _identity_in_kraus_span(N, M)
    cond_b = not b_holds
    a = N.dim_in
    best_cos, best_psi, ortho = np.inf, None, False
    for i, ss in enumerate(child_seeds(seed, starts)):
        rng = np.random.default_rng(ss)
        if i % 2 == 0:
            psi = np.kron(random_pure(a, rng), random_pure(a, rng))
        else:
            psi = random_pure(a * a, rng)

        def obj(x):
            v = x[: a * a] + 1j * x[a * a :]
            n = np.linalg.norm(v)
            if n < 1e-12:
                return 1.0
            return _support_cosine(N, M, v / n)[0]

        x0 = np.concatenate([psi.real, psi.imag])
        c0 = obj(x0)
        res = minimize(obj, x0, method="Nelder-Mead", options={"maxiter": 200, "xatol": 1e-8, "fatol": 1e-12})
        cand = [(c0, x0), (float(res.fun), res.x)]
        for c, x in cand:
            if c < best_cos:
                v = x[: a * a] + 1j * x[a * a :]
                best_cos, best_psi = c, v / np.linalg.norm(v)
        if best_cos < 1e-9:
            break
    if best_psi is not None:
        best_cos, ortho = _support_cosine(N, M, best_psi)
    cond_a = best_cos < 1.0 - 1e-6
    return DistinguishabilityReport(
        distinguishable=bool(cond_a and cond_b),
        condition_a=bool(cond_a),
        condition_b=bool(cond_b),
        witness=best_psi if cond_a else None,
        support_cosine=float(best_cos),
        orthogonal_witness=bool(ortho),
        span_residual=resid,
        starts=starts,
    )


def joint_covariance_check(
    N: QuantumChannel,
    M: QuantumChannel,
    group_in: Sequence[np.ndarray],
    group_out: Sequence[np.ndarray],
    tol: float = 1e-9,
) -> bool:
    """Check ``N(U_g . U_g^dagger) = V_g N(.) V_g^dagger`` (same for M) for every group element."""
    if len(group_in) != len(group_out):
        raise DimError("group representations must have equal length")
    for ch in (N, M):
        for U, V in zip(group_in, group_out):
            U = np.asarray(U)
            V = np.asarray(V)
            if U.shape != (ch.dim_in, ch.dim_in) or V.shape != (ch.dim_out, ch.dim_out):
                raise DimError("group element dimension mismatch")
            lhs = ch.compose(unitary_channel(U))
            rhs = unitary_channel(V).compose(ch)
            if np.abs(choi(lhs) - choi(rhs)).max() > tol:
                return False
    return True


def superchannel_apply(pre: QuantumChannel, post: QuantumChannel, ch: QuantumChannel) -> QuantumChannel:
    """``Omega_{BE->D} ∘ (N_{A->B} ⊗ id_E) ∘ Lambda_{C->AE}``."""
    if pre.dim_out % ch.dim_in:
        raise DimError("pre-processing output must factor as |A|·|E|")
    e = pre.dim_out // ch.dim_in
    if post.dim_in != ch.dim_out * e:
        raise DimError("post-processing input must be |B|·|E|")
    mid = ch.tensor(identity_channel(e))
    return post.compose(mid.compose(pre))


def pauli_matrices() -> list[np.ndarray]:
    return [
        np.eye(2, dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]


def pauli_channel(probs: Sequence[float]) -> QuantumChannel:
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (4,) or np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
        raise DomainError("need four probabilities")
    return QuantumChannel(np.array([np.sqrt(p) * P for p, P in zip(probs, pauli_matrices())]))


def depolarizing(q: float, d: int = 2) -> QuantumChannel:
    """``rho -> (1-q) rho + q I/d`` via a twirl over the clock-and-shift group."""
    _check_prob(q, "q")
    Z = clock_operator(d)
    X = np.roll(np.eye(d), 1, axis=0)
    ks = [np.sqrt(1 - q + q / d**2) * np.eye(d)]
    for i in range(d):
        for j in range(d):
            if i == 0 and j == 0:
                continue
            ks.append(np.sqrt(q) / d * np.linalg.matrix_power(X, i) @ np.linalg.matrix_power(Z, j))
    return QuantumChannel(np.array(ks, dtype=complex))


class Hamiltonian:
    """PSD Hamiltonian on the channel input."""

    def __init__(self, H: np.ndarray):
        self.matrix = as_psd(H)

    @property
    def ground_energy(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])
