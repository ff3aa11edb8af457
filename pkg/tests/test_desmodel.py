import random
from pathlib import Path

import pytest

from diagfp.desmodel import (Component, DesModel, Observation, model_to_json,
                             parse_model, parse_observation, random_walk,
                             render_model, render_observation,
                             trace_hypothesis, trace_in_model,
                             trace_matches_observation)
from diagfp.errors import DiagError, ModelFormatError
from diagfp.hypothesis import MHS, SHS, SQHS, multi_hyp, seq_hyp, set_hyp

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def oneshot():
    return parse_model((FIXTURES / "oneshot.des").read_text())


def test_parse_oneshot_shape(oneshot):
    assert len(oneshot.components) == 1
    comp = oneshot.components[0]
    assert comp.states == ("q0", "q1", "q2")
    assert len(comp.trans) == 2
    assert oneshot.observable == ("o1",)
    assert oneshot.faults == ("f",)


def test_parse_observation(oneshot):
    obs = parse_observation("o1\n", oneshot)
    assert obs.sequence == ("o1",)
    assert parse_observation("", oneshot).sequence == ()
    assert parse_observation("# nothing\n\n", oneshot).sequence == ()


def test_parse_errors_carry_line_numbers():
    bad = "component c\nstates s0\ninit s0\ntrans s0 e s9\nend\n"
    with pytest.raises(ModelFormatError) as err:
        parse_model(bad)
    assert err.value.line == 4
    with pytest.raises(ModelFormatError):
        parse_model("observable o1\nfaults f\n")  # no components


def test_observable_fault_rejected():
    text = ("component c\nstates s0 s1\ninit s0\ntrans s0 f s1\nend\n"
            "observable f\nfaults f\n")
    with pytest.raises(ModelFormatError):
        parse_model(text)


def test_unknown_fault_event_rejected():
    text = ("component c\nstates s0 s1\ninit s0\ntrans s0 e s1\nend\n"
            "observable e\nfaults zz\n")
    with pytest.raises(ModelFormatError):
        parse_model(text)


def test_observation_rejects_non_observable(oneshot):
    with pytest.raises(ModelFormatError) as err:
        parse_observation("o1\nf\n", oneshot)
    assert err.value.line == 2


def test_roundtrip_render_parse(oneshot):
    text = render_model(oneshot)
    assert parse_model(text) == oneshot
    assert render_model(parse_model(text)) == text
    obs = Observation(("o1", "o1"))
    assert parse_observation(render_observation(obs), oneshot) == obs


def test_trace_in_model(oneshot):
    assert trace_in_model(["f", "o1"], oneshot)
    assert trace_in_model([], oneshot)
    assert not trace_in_model(["o1"], oneshot)
    assert not trace_in_model(["f", "f"], oneshot)
    with pytest.raises(DiagError):
        trace_in_model(["nope"], oneshot)


def test_trace_hypothesis(oneshot):
    sq = oneshot.space(SQHS)
    assert trace_hypothesis(["f", "o1"], oneshot, sq) == seq_hyp(["f"])
    assert trace_hypothesis(["o1"], oneshot, oneshot.space(SHS)) == set_hyp([])
    model = parse_model(
        "component c\nstates s\ninit s\ntrans s f1 s\ntrans s f2 s\nend\n"
        "observable\nfaults f1 f2\n")
    got = trace_hypothesis(["f1", "f2", "f1"], model, model.space(MHS))
    assert got == multi_hyp({"f1": 2, "f2": 1})


def test_trace_matches_observation(oneshot):
    obs = Observation(("o1",))
    assert trace_matches_observation(["f", "o1"], oneshot, obs)
    assert not trace_matches_observation(["o1", "o1"], oneshot, obs)
    assert trace_matches_observation([], oneshot, Observation(()))


def test_synchronisation_blocks_without_local_transition():
    # both components know "sync"; second only allows it from s1
    text = ("component a\nstates a0 a1\ninit a0\ntrans a0 sync a1\nend\n"
            "component b\nstates b0 b1\ninit b0\ntrans b0 u b1\n"
            "trans b1 sync b1\nend\n"
            "observable sync\nfaults u\n")
    model = parse_model(text)
    assert not trace_in_model(["sync"], model)
    assert trace_in_model(["u", "sync"], model)


def test_multiple_initial_states():
    text = ("component a\nstates a0 a1 a2\ninit a0 a1\n"
            "trans a1 o a2\nend\nobservable o\nfaults\n")
    model = parse_model(text)
    assert model.components[0].init == ("a0", "a1")
    assert trace_in_model(["o"], model)
    assert trace_in_model([], model)


def _project(trace, alphabet):
    return [e for e in trace if e in alphabet]


def test_random_walks_stay_in_model():
    rng = random.Random(2)
    text = ("component a\nstates a0 a1\ninit a0\ntrans a0 x a1\n"
            "trans a1 y a0\nend\n"
            "component b\nstates b0 b1\ninit b0\ntrans b0 y b1\n"
            "trans b1 z b0\nend\n"
            "observable x z\nfaults y\n")
    model = parse_model(text)
    for _ in range(1000):
        walk = random_walk(model, rng, rng.randrange(8))
        assert trace_in_model(walk, model)
        # synchronisation consistency: each per-component projection replays
        for comp in model.components:
            local = set(comp.init)
            for e in _project(walk, comp.alphabet):
                local = {t for s in local for t in comp.moves(s, e)}
            assert local


def test_model_json_mirrors_structure(oneshot):
    js = model_to_json(oneshot)
    assert js["faults"] == ["f"]
    assert js["components"][0]["trans"] == [["q0", "f", "q1"], ["q1", "o1", "q2"]]
