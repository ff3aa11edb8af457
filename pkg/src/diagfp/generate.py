"""Deterministic DES instance generation for the acceptance corpus.

An instance is a random network of small automata plus an observation taken
from a random walk of the model, which guarantees at least one consistent
behaviour (hence a non-empty diagnosis).  Generation retries deterministically
until the instance passes desk-scale quality gates (oracle completes within a
modest budget in every space, the diagnosis is not degenerate either way).

The sidecar metadata records the certified oracle bound and a steps-per-obs
value at which the generating walk (with margin) fits the SAT shape; the
acceptance suite re-verifies that bound against the explicit solver.
"""

from __future__ import annotations

import json
import random

from .desmodel import (DesModel, Observation, parse_model, random_walk,
                       render_model, render_observation)
from .errors import DiagError, StateBudgetExceeded
from .explicit import certified_bound, oracle_diagnose
from .hypothesis import MHS, SHS, SQHS

LIMITS = {"components": 4, "states": 5, "faults": 3, "obs_len": 5}

_GATE_STATE_BUDGET = 300_000
_MAX_MINIMAL = 14


def _walk_steps_per_obs(model: DesModel, walk) -> int:
    """Smallest steps-per-obs at which the walk fits the pinned SAT shape."""
    observable = set(model.observable)
    gaps, cur = [], 0
    for e in walk:
        if e in observable:
            gaps.append(cur)
            cur = 0
        else:
            cur += 1
    need = 2
    for gap in gaps:
        need = max(need, gap + 1)
    need = max(need, cur)  # trailing events occupy steps_per_obs slots
    return need


def _try_build(rng: random.Random, n_components: int, n_states: int,
               n_faults: int, obs_len: int):
    n_obs_events = rng.randint(1, 3)
    observables = [f"o{i}" for i in range(1, n_obs_events + 1)]
    faults = [f"f{i}" for i in range(1, n_faults + 1)]
    quiet = ["u1"] if rng.random() < 0.4 else []
    events = observables + faults + quiet

    lines = []
    used = set()
    n_comp = rng.randint(1, n_components)
    for ci in range(n_comp):
        ns = rng.randint(2, n_states)
        states = [f"c{ci}s{j}" for j in range(ns)]
        lines.append(f"component c{ci}")
        lines.append("states " + " ".join(states))
        n_init = 1 if rng.random() < 0.8 else rng.randint(1, min(2, ns))
        lines.append("init " + " ".join(states[:n_init]))
        n_trans = rng.randint(ns, 2 * ns + 1)
        for _ in range(n_trans):
            src = rng.choice(states)
            dst = rng.choice(states)
            e = rng.choice(events)
            used.add(e)
            lines.append(f"trans {src} {e} {dst}")
        lines.append("end")
    observables = [e for e in observables if e in used]
    faults = [e for e in faults if e in used]
    if not faults:
        return None
    lines.append("observable " + " ".join(observables))
    lines.append("faults " + " ".join(faults))
    model = parse_model("\n".join(lines) + "\n")

    full = random_walk(model, rng, rng.randint(1, 2 * obs_len + 2))
    walk, emitted = [], 0
    for e in full:
        if e in model.observable:
            if emitted == obs_len:
                break
            emitted += 1
        walk.append(e)
    obs = Observation(tuple(e for e in walk if e in model.observable))
    return model, obs, walk


def generate_instance(seed: int, n_components: int = 3, n_states: int = 4,
                      n_faults: int = 3, obs_len: int = 4) -> dict:
    """Seeded instance; returns model/observation texts plus sidecar data."""
    if (n_components > LIMITS["components"] or n_states > LIMITS["states"]
            or n_faults > LIMITS["faults"] or obs_len > LIMITS["obs_len"]):
        raise DiagError("generation parameters outside documented limits")
    rng = random.Random(f"diagfp-{seed}")
    for _ in range(10_000):
        built = _try_build(rng, n_components, n_states, n_faults, obs_len)
        if built is None:
            continue
        model, obs, walk = built
        try:
            minimal = {}
            ok = True
            for kind in (SHS, MHS, SQHS):
                got = oracle_diagnose(model, obs, model.space(kind),
                                      state_budget=_GATE_STATE_BUDGET)
                if not got or len(got) > _MAX_MINIMAL:
                    ok = False
                    break
                minimal[kind] = [h.canon() for h in got]
            if not ok:
                continue
        except StateBudgetExceeded:
            continue
        steps = min(8, _walk_steps_per_obs(model, walk) + 1)
        meta = {
            "schema": "diagfp/1",
            "seed": seed,
            "params": {"components": n_components, "states": n_states,
                       "faults": n_faults, "obs_len": obs_len},
            "oracle_bound": certified_bound(model, obs),
            "steps_per_obs": steps,
            "walk": list(walk),
            "minimal_diagnosis": minimal,
        }
        return {"model": render_model(model), "obs": render_observation(obs),
                "meta": json.dumps(meta, indent=2, sort_keys=True) + "\n"}
    raise DiagError(f"no viable instance for seed {seed}")


def load_instance(texts: dict):
    model = parse_model(texts["model"])
    from .desmodel import parse_observation
    obs = parse_observation(texts["obs"], model)
    meta = json.loads(texts["meta"])
    return model, obs, meta
