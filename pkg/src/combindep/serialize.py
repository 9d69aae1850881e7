"""JSON round trips for subshift specs, measures and set tuples.

Words are digit strings when the alphabet has at most 10 symbols and integer
arrays otherwise.
"""
from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .measures import Bernoulli, Empirical, Markov, MeasureModel, parry_measure, point_mass
from .symbolic import BorelLikeSet, CylinderSet, SetTuple, SubshiftSpec, as_word


def word_out(w, k: int):
    return "".join(str(a) for a in w) if k <= 10 else [int(a) for a in w]


def word_in(w) -> tuple:
    return as_word(w)


def spec_to_json(spec: SubshiftSpec) -> dict:
    out = {"alphabet": spec.k, "kind": spec.kind}
    if spec.kind == "sft":
        out["forbidden"] = [word_out(w, spec.k) for w in spec.forbidden]
    if spec.kind == "generator":
        out["name"] = spec.name
        out["params"] = dict(spec.params)
    return out


def spec_from_json(d: dict) -> SubshiftSpec:
    k = int(d["alphabet"])
    kind = d.get("kind", "full")
    if kind == "full":
        return SubshiftSpec.full_shift(k)
    if kind == "sft":
        return SubshiftSpec.sft(k, [word_in(w) for w in d["forbidden"]])
    if kind == "generator":
        return SubshiftSpec.generator(d["name"], k, **d.get("params", {}))
    raise ValueError(f"unknown subshift kind {kind!r}")


def measure_to_json(m: MeasureModel) -> dict:
    if isinstance(m, Bernoulli):
        return {"kind": "bernoulli", "weights": list(m.weights)}
    if isinstance(m, Markov):
        return {"kind": "markov", "transition": m.transition.tolist(),
                "stationary": m.stationary.tolist()}
    if isinstance(m, Empirical):
        return {"kind": "empirical", "segment": word_out(m.segment, m.k), "max_len": m.max_len, "k": m.k}
    raise TypeError(f"cannot serialise {type(m).__name__}")


def measure_from_json(d: dict, spec: SubshiftSpec | None = None) -> MeasureModel:
    kind = d["kind"]
    if kind == "bernoulli":
        return Bernoulli(tuple(d["weights"]))
    if kind == "markov":
        if "stationary" in d:
            return Markov(np.asarray(d["transition"]), np.asarray(d["stationary"]))
        return Markov.from_transition(d["transition"])
    if kind == "empirical":
        seg = word_in(d["segment"])
        return Empirical(seg, int(d.get("max_len", len(seg))), int(d.get("k", spec.k if spec else 2)))
    if kind == "parry":
        if spec is None:
            raise ValueError("a Parry measure needs its subshift spec")
        return parry_measure(spec)
    if kind == "point_mass":
        return point_mass(int(d.get("symbol", 0)), spec.k if spec else int(d.get("k", 2)),
                          int(d.get("length", 64)))
    raise ValueError(f"unknown measure kind {kind!r}")


def cylinder_to_json(c: CylinderSet, k: int) -> dict:
    return {"anchor": c.anchor, "word": word_out(c.word, k)}


def cylinder_from_json(d) -> CylinderSet:
    if isinstance(d, str):
        word, _, anchor = d.partition("@")
        return CylinderSet(as_word(word), int(anchor or 0))
    return CylinderSet(word_in(d["word"]), int(d.get("anchor", 0)))


def set_from_json(d) -> BorelLikeSet:
    if isinstance(d, (str, dict)):
        d = [d]
    return BorelLikeSet(tuple(cylinder_from_json(c) for c in d))


def tuple_to_json(A: SetTuple, k: int) -> list:
    return [[cylinder_to_json(c, k) for c in comp.cylinders] for comp in A.components]


def tuple_from_json(d: list) -> SetTuple:
    return SetTuple(tuple(set_from_json(c) for c in d))


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def config_schema() -> dict:
    return json.loads(resources.files("combindep").joinpath("config.schema.json").read_text())
