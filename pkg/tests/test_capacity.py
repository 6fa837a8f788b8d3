import json
from fractions import Fraction

import pytest

from fotpi.capacity import (NetworkError, NetworkSpec, broadcast_spec, compile_Qk, free_names, network_model,
                            point_to_point_spec)
from fotpi.formula import free_vars
from fotpi.parser import parse, to_text

BSC = {0: {0: "3/4", 1: "1/4"}, 1: {0: "1/4", 1: "3/4"}}


@pytest.fixture(scope="module")
def broadcast():
    return compile_Qk(broadcast_spec())


def test_free_variables_exact(broadcast):
    assert set(free_vars(broadcast.formula)) == set(free_names(3))
    assert broadcast.free == tuple(free_names(3))


def test_text_roundtrip_and_determinism(broadcast):
    text = to_text(broadcast.formula)
    assert parse(text) == broadcast.formula
    assert to_text(compile_Qk(broadcast_spec()).formula) == text


def test_level_independent_of_channel(broadcast):
    noisy = {0: {(0, 0): "1/2", (0, 1): "1/2"}, 1: {(1, 1): "1"}}
    assert compile_Qk(broadcast_spec(noisy)).level == broadcast.level


def test_note_and_anchor(broadcast):
    assert "closure" in broadcast.note
    assert "X1..X3" in broadcast.input_anchor
    assert set(broadcast.conjuncts) >= {"w", "x", "y", "z", "pe"}


def test_point_to_point_compiles():
    c = compile_Qk(point_to_point_spec(BSC, {0: "1/2", 1: "1/2"}))
    assert c.k == 1 and set(free_vars(c.formula)) == set(free_names(1))
    assert c.level.pi >= 1


def test_non_stochastic_rejected():
    with pytest.raises(NetworkError):
        point_to_point_spec({0: {0: "1/2"}, 1: {1: 1}}, {0: 1})
    with pytest.raises(NetworkError):
        point_to_point_spec(BSC, {0: "1/2", 1: "1/3"})


def test_missing_channel_row():
    with pytest.raises(NetworkError):
        NetworkSpec(1, {(0,): 1}, {((0,), 0): {((0,), 0): 1}}, [[0, 1]], {0: 1}, {(0,): {(0,): 1}})


def test_wrong_arity():
    with pytest.raises(NetworkError):
        NetworkSpec(2, {(0,): 1}, {}, [[0], [0]], {0: 1}, {(0,): {(0,): 1}})


def test_from_dict_roundtrip(tmp_path):
    spec = broadcast_spec()
    doc = {"k": 3,
           "source": [[list(w), str(p)] for w, p in spec.source.items()],
           "decoding": [[list(w), list(z), str(p)] for w, row in spec.decoding.items() for z, p in row.items()],
           "channel": [[list(x), s, list(y), s2, str(p)] for (x, s), row in spec.channel.items()
                       for (y, s2), p in row.items()],
           "input_alphabets": spec.input_alphabets, "initial_state": [[0, "1"]]}
    p = tmp_path / "net.json"
    p.write_text(json.dumps(doc))
    back = NetworkSpec.load(p)
    assert back.source == spec.source and back.channel == spec.channel and back.decoding == spec.decoding


def test_malformed_dict():
    with pytest.raises(NetworkError):
        NetworkSpec.from_dict({"k": 1})


def test_network_model_laws():
    spec = point_to_point_spec(BSC, {0: "1/2", 1: "1/2"})
    m = network_model(spec)
    assert set(m.vars) == set(free_names(1))
    from fotpi.formula import Var, join
    assert m.pmf(join(Var("X1"), Var("Y1")))[(0, 1)] == Fraction(1, 8)
    with pytest.raises(NetworkError):
        network_model(spec, {(0,): 1})
