"""JSON files for states, channels and protocol strategies.

Complex entries are ``[re, im]`` pairs and floats are written in Python's
shortest round-trip form, so reading a written file and writing it again
reproduces it byte for byte.

Channel schema::

    {"dim_in": n, "dim_out": m, "kraus": [[[re, im], ...], ...]}   # row-major, flattened
    {"type": "cq", "outputs": [<matrix>, ...]}
    {"type": "replacer", "dim_in": n, "tau": <matrix>}
    {"type": "erasure", "p": p, "d": d}
    {"type": "dephasing", "probs": [...], "d": d}
    {"type": "gad", "eta": eta, "p": p}

A ``<matrix>`` is a list of rows of ``[re, im]`` pairs.  State files hold
either a bare matrix or ``{"type": "state", "matrix": <matrix>}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import (
    CqChannel,
    EnvParamChannel,
    QuantumChannel,
    ReplacerChannel,
    make_dephasing,
    make_erasure,
    make_gad,
)
from .exceptions import DimError, DomainError
from .linmat import as_density_matrix


def _pairs(a: np.ndarray):
    a = np.asarray(a, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in a.reshape(-1)]


def matrix_to_json(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [_pairs(row) for row in M]


def matrix_from_json(obj, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Nested rows of pairs, or a flat row-major list of pairs when ``shape`` is given."""
    a = np.asarray(obj, dtype=float)
    if a.shape[-1] != 2:
        raise DomainError("matrix entries must be [re, im] pairs")
    M = a[..., 0] + 1j * a[..., 1]
    if M.ndim == 1:
        if shape is None:
            d = int(round(np.sqrt(M.size)))
            if d * d != M.size:
                raise DimError("flat matrix without a square size")
            shape = (d, d)
        M = M.reshape(shape)
    if M.ndim != 2:
        raise DimError("matrix must be two-dimensional")
    return M


def state_to_json(rho: np.ndarray) -> dict:
    return {"type": "state", "matrix": matrix_to_json(rho)}


def state_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        if obj.get("type", "state") != "state":
            raise DomainError(f"expected a state, found {obj.get('type')!r}")
        obj = obj["matrix"]
    rho = matrix_from_json(obj)
    as_density_matrix(rho)
    return rho


def channel_to_json(ch: QuantumChannel) -> dict:
    if isinstance(ch, CqChannel):
        return {"type": "cq", "outputs": [matrix_to_json(o) for o in ch.outputs]}
    if isinstance(ch, ReplacerChannel):
        return {"type": "replacer", "dim_in": ch.dim_in, "tau": matrix_to_json(ch.tau)}
    if isinstance(ch, EnvParamChannel) and ch.family in ("erasure", "dephasing", "gad"):
        return {"type": ch.family, **ch.params}
    return {"dim_in": ch.dim_in, "dim_out": ch.dim_out, "kraus": [_pairs(K) for K in ch.kraus]}


def channel_from_json(obj: dict) -> QuantumChannel:
    if not isinstance(obj, dict):
        raise DomainError("a channel file must hold a JSON object")
    t = obj.get("type", "kraus")
    if t == "cq":
        raw = np.array([matrix_from_json(o) for o in obj["outputs"]])
        ch = CqChannel(raw)
        ch.outputs = raw  # keep the file's bits
        return ch
    if t == "replacer":
        raw = matrix_from_json(obj["tau"])
        ch = ReplacerChannel(raw, int(obj["dim_in"]))
        ch.tau = raw
        return ch
    if t == "erasure":
        return make_erasure(float(obj["p"]), int(obj.get("d", 2)))
    if t == "dephasing":
        return make_dephasing([float(x) for x in obj["probs"]], obj.get("d"))
    if t == "gad":
        return make_gad(float(obj["eta"]), float(obj["p"]))
    if t != "kraus":
        raise DomainError(f"unknown channel type {t!r}")
    n, m = int(obj["dim_in"]), int(obj["dim_out"])
    K = np.array([matrix_from_json(k, (m, n)) for k in obj["kraus"]])
    if K.shape[1:] != (m, n):
        raise DimError("Kraus operators do not match dim_in/dim_out")
    return QuantumChannel(K)


def strategy_to_json(strategy) -> dict:
    Q = strategy.final_measurement
    return {
        "type": "strategy",
        "n": strategy.n,
        "memory_dims": [int(r) for r in strategy.memory_dims],
        "initial_state": matrix_to_json(strategy.initial_state),
        "adaptors": [channel_to_json(ad) for ad in strategy.adaptors],
        "final_measurement": None if Q is None else matrix_to_json(Q),
    }


def strategy_from_json(obj: dict):
    from .protosim import AdaptiveStrategy

    if obj.get("type") != "strategy":
        raise DomainError("not a strategy file")
    Q = obj.get("final_measurement")
    return AdaptiveStrategy(
        int(obj["n"]),
        [int(r) for r in obj["memory_dims"]],
        matrix_from_json(obj["initial_state"]),
        [channel_from_json(a) for a in obj["adaptors"]],
        None if Q is None else matrix_from_json(Q),
    )


def dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def write_json(path, obj: dict):
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def load_channel(path) -> QuantumChannel:
    return channel_from_json(read_json(path))


def load_state(path) -> np.ndarray:
    return state_from_json(read_json(path))


def save_channel(path, ch: QuantumChannel):
    write_json(path, channel_to_json(ch))


def save_state(path, rho: np.ndarray):
    write_json(path, state_to_json(rho))
