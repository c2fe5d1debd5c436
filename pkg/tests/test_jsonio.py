import numpy as np
import pytest

from qcdisc import channels as ch
from qcdisc import jsonio
from qcdisc import protosim as ps
from qcdisc import sampling as sp
from qcdisc.exceptions import QcdError


def _round_trip(tmp_path, obj, save, load):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save(a, obj)
    save(b, load(a))
    assert a.read_bytes() == b.read_bytes()
    return load(a)


def test_state_round_trip(tmp_path, rng):
    rho = sp.random_state(3, rng)
    back = _round_trip(tmp_path, rho, jsonio.save_state, jsonio.load_state)
    assert np.array_equal(back, rho)


@pytest.mark.parametrize("make", [
    lambda rng: ch.QuantumChannel(sp.random_kraus(2, 3, rng, rank=2)),
    lambda rng: ch.make_cq([sp.random_state(2, rng) for _ in range(3)]),
    lambda rng: ch.make_replacer(sp.random_state(2, rng), 3),
    lambda rng: ch.make_erasure(0.3, 3),
    lambda rng: ch.make_dephasing([0.1, 0.2, 0.7]),
    lambda rng: ch.make_gad(0.25, 0.6),
])
def test_channel_round_trip(tmp_path, rng, make):
    N = make(rng)
    back = _round_trip(tmp_path, N, jsonio.save_channel, jsonio.load_channel)
    assert type(back) is type(N)
    assert ch.channels_equal(back, N, tol=0.0)


def test_strategy_round_trip(rng):
    strat, _ = ps.parallel_embedding(sp.random_pure(4, rng), 2, 2, 2)
    obj = jsonio.strategy_to_json(strat)
    back = jsonio.strategy_from_json(obj)
    assert jsonio.dumps(jsonio.strategy_to_json(back)) == jsonio.dumps(obj)


def test_bad_inputs(tmp_path):
    with pytest.raises(QcdError):
        jsonio.channel_from_json({"type": "mystery"})
    with pytest.raises(QcdError):
        jsonio.state_from_json([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]])
