"""Run entropy, independence, shattering and l1 computations from JSON configs.

Exit codes: 0 ok, 1 verification failure, 2 configuration error, 3 budget
exhausted (a partial report flagged ``"partial": true`` is still written).
"""
from __future__ import annotations

import argparse
import copy
import csv
import inspect
import io
import json
import math
import sys

import jsonschema
import numpy as np

from . import serialize as ser
from .entropy import (cpa_from_partition, dynamical_entropy_curve, hcpa_upper_estimate,
                      sequence_entropy_curve)
from .errors import BudgetExceeded, CombindepError, DepthCapExceeded, PremiseFailed
from .independence import (DEFAULT_CAP, EVERYTHING, ExactAtoms, GreedyAdversary, detect_ie_pair,
                           max_independence_subset, upper_density_estimate)
from .l1 import CylinderFunction, FunctionFamily, l1_constant, l1_isomorphism_set, perturb_and_test
from .measures import Markov
from .shattering import (PatternSet, cover_bound, density_lemma_search, km_threshold,
                         largest_shattered_subset, separated_to_shattered)
from .symbolic import Partition, generate_segment, symbol_partition
from .systems import golden_mean_system
from .tame import build_tame_example, check_schedule, pair_coverage, v_disjointness
from .verify import SUITES

OK, VERIFY_FAILED, CONFIG_ERROR, BUDGET_EXHAUSTED = 0, 1, 2, 3

GOLDEN = {"alphabet": 2, "kind": "sft", "forbidden": ["11"]}

DEFAULTS = {
    "entropy": {"spec": GOLDEN, "measure": {"kind": "parry"},
                "parameters": {"mode": "curve", "windows": [1, 2, 4, 8], "depth": 1, "delta": 0.1}},
    "independence": {"spec": GOLDEN, "measure": {"kind": "parry"},
                     "parameters": {"mode": "max", "tuple": ["0@0", "1@0"], "window": [0, 8],
                                    "delta": 0.25, "family": "exact", "r": 1}},
    "shatter": {"parameters": {"mode": "largest", "k": 2}},
    "l1": {"spec": {"alphabet": 2, "kind": "full"}, "measure": {"kind": "bernoulli", "weights": [0.5, 0.5]},
           "parameters": {"mode": "isomorphism", "function": {"anchor": 0, "values": {"0": 0.0, "1": 1.0}},
                          "window": [0, 6], "lambda": 2.0, "delta": 0.1, "trials": 10}},
    "example": {"parameters": {"name": "tame", "L": 1000}},
    "verify": {"parameters": {"suite": "sauer"}},
}


class ConfigError(Exception):
    pass


# -- configuration ------------------------------------------------------------

def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict) and key == "parameters":
            out[key] = {**out[key], **val}
        else:
            out[key] = copy.deepcopy(val)
    return out


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def resolve_config(args) -> dict:
    file_cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(file_cfg, dict):
            raise ConfigError("config must be a JSON object")
        if file_cfg.get("command", args.command) != args.command:
            raise ConfigError(f"config is for {file_cfg['command']!r}, not {args.command!r}")
    cfg = _merge({"version": 1, "command": args.command, "seed": 0, "budget": None,
                  **DEFAULTS[args.command]}, file_cfg)
    params = {}
    if getattr(args, "suite", None):
        params["suite"] = args.suite
    for name in ("n", "k", "instances"):
        if getattr(args, name, None) is not None:
            params[name] = getattr(args, name)
    for item in args.param or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        params[key] = _parse_value(val)
    cfg = _merge(cfg, {"parameters": params})
    for name in ("seed", "budget", "out", "csv"):
        if getattr(args, name, None) is not None:
            cfg[name] = getattr(args, name)
    try:
        jsonschema.validate(cfg, ser.config_schema())
    except jsonschema.ValidationError as e:
        raise ConfigError(f"invalid config: {e.message}") from e
    return cfg


def _system(cfg):
    try:
        spec = ser.spec_from_json(cfg["spec"])
        m = ser.measure_from_json(cfg["measure"], spec) if "measure" in cfg else None
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad spec or measure: {e}") from e
    return spec, m


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


# -- commands -------------------------------------------------------------------

def cmd_entropy(cfg):
    spec, m = _system(cfg)
    p = cfg["parameters"]
    depth = int(p.get("depth", 1))
    P = symbol_partition(spec) if depth == 1 else Partition.cylinders(spec, depth)
    mode = p.get("mode", "curve")
    windows = [int(n) for n in p.get("windows", [1, 2, 4, 8])]
    rows = []
    if mode == "curve":
        vals = dynamical_entropy_curve(P, m, windows)
        rows = [{"n": n, "value": v} for n, v in zip(windows, vals)]
        res = {"curve": rows}
        if isinstance(m, Markov):
            res["entropy_rate"] = m.entropy_rate()
    elif mode == "sequence":
        seq = [int(s) for s in p["sequence"]]
        vals = sequence_entropy_curve(P, m, seq, int(p.get("n_max", len(seq))))
        rows = [{"n": i + 1, "value": v} for i, v in enumerate(vals)]
        res = {"curve": rows}
    elif mode == "cpa":
        reps = [cpa_from_partition(P, m, n, float(p["delta"])).to_dict() for n in windows]
        rows, res = reps, {"cpa": reps}
    elif mode == "hcpa":
        rows = hcpa_upper_estimate([P], m, float(p["delta"]), windows)
        res = {"hcpa": rows}
    else:
        raise ConfigError(f"unknown entropy mode {mode!r}")
    return res, rows, OK


def cmd_independence(cfg):
    spec, m = _system(cfg)
    p = cfg["parameters"]
    A = ser.tuple_from_json(p["tuple"])
    a, b = (int(x) for x in p["window"])
    F = range(a, b)
    cap = cfg.get("budget") or DEFAULT_CAP
    segment = None
    if spec.is_generator:
        pad = max(len(c.word) + abs(c.anchor) for comp in A.components for c in comp.cylinders)
        segment = generate_segment(spec, a - pad, b + pad + int(p.get("segment_extra", 2048)))
    mode = p.get("mode", "max")
    if mode == "max":
        try:
            res = max_independence_subset(spec, A, F, EVERYTHING, segment=segment, cap=cap)
        except BudgetExceeded as e:
            part = e.partial
            out = {"J": list(part.J) if part else [], "lower_bound": True, "reason": str(e)}
            return out, [{"s": s} for s in out["J"]], BUDGET_EXHAUSTED
        out = {"J": list(res.J), "size": res.size, "lower_bound": res.lower_bound,
               "certificate": res.certificate.to_dict()}
        return out, [{"s": s} for s in res.J], OK
    family = GreedyAdversary(int(p.get("r", 1))) if p.get("family") == "greedy" else ExactAtoms(int(p.get("r", 1)))
    if mode == "density":
        windows = [range(a, c) for c in p.get("window_ends", [b])]
        est = upper_density_estimate(spec, A, float(p["delta"]), m, windows, family, segment=segment, cap=cap)
        reps = [r.to_dict() for r in est["reports"]]
        return ({"reports": reps, "max": est["max"], "min": est["min"]},
                [{"window": f"{r['window'][0]}..{r['window'][-1]}", "phi_hat": r["phi_hat"],
                  "density": r["density"]} for r in reps], OK)
    if mode == "ie-pair":
        windows = [range(0, c) for c in p.get("window_ends", [b - a])]
        res = detect_ie_pair(spec, m, p["x1"], p["x2"], int(p.get("radius", 0)), float(p["delta"]),
                             windows, family=family, cap=cap)
        return res, [{"depth": lv["depth"], "max": lv["max"]} for lv in res["levels"]], OK
    raise ConfigError(f"unknown independence mode {mode!r}")


def _pattern_set(p):
    k = int(p.get("k", 2))
    pats = [ser.word_in(w) for w in p.get("patterns", [])]
    n = int(p["n"]) if "n" in p else (len(pats[0]) if pats else 0)
    return PatternSet.of(pats, k, n)


def cmd_shatter(cfg):
    p = cfg["parameters"]
    mode = p.get("mode", "largest")
    if mode == "km":
        n, k = int(p["n"]), int(p.get("k", 2))
        rows = [{"t": t, "threshold": km_threshold(n, k, t)} for t in range(1, n + 1)]
        return {"n": n, "k": k, "thresholds": rows}, rows, OK
    if mode == "separated":
        E = np.asarray(p["vectors"], dtype=float)
        res = separated_to_shattered(E, float(p["delta"]), int(p.get("m", 64)), int(p.get("min_size", 1)))
        out = {"found": res is not None}
        if res:
            out.update({"t": res["t"], "epsilon": res["epsilon"], "J": list(res["J"]), "side": res["side"]})
        return out, [out], OK
    S = _pattern_set(p)
    if mode == "largest":
        I, s = largest_shattered_subset(S)
        out = {"I": list(I), "size": s, "patterns": len(S)}
    elif mode == "cover":
        r = cover_bound(S)
        out = {**r, "I": list(r["I"])}
    elif mode == "density":
        I = density_lemma_search(S, float(p["a_target"]), float(p["b"]))
        out = {"found": I is not None, "I": list(I) if I is not None else None}
    else:
        raise ConfigError(f"unknown shatter mode {mode!r}")
    return out, [out], OK


def cmd_l1(cfg):
    p = cfg["parameters"]
    mode = p.get("mode", "isomorphism")
    if mode == "constant":
        fam = FunctionFamily.from_dict(p["weights"], p["functions"])
        rep = l1_constant(fam).to_dict()
        return rep, [{"label": s, "coefficient": c} for s, c in rep["optimizer"].items()], OK
    spec, m = _system(cfg)
    fd = p["function"]
    f = CylinderFunction({ser.word_in(w): float(v) for w, v in fd["values"].items()}, int(fd.get("anchor", 0)))
    a, b = (int(x) for x in p["window"])
    lam = float(p["lambda"])
    if mode == "isomorphism":
        try:
            I = l1_isomorphism_set(spec, f, m, range(a, b), lam, budget=cfg.get("budget"))
        except BudgetExceeded as e:
            out = {"I": list(e.partial or ()), "lower_bound": True, "reason": str(e)}
            return out, [{"s": s} for s in out["I"]], BUDGET_EXHAUSTED
        return {"I": list(I), "density": len(I) / (b - a), "lambda": lam}, [{"s": s} for s in I], OK
    if mode == "perturb":
        res = perturb_and_test(spec, f, m, range(a, b), float(p["delta"]), lam, int(p.get("trials", 10)),
                               int(cfg["seed"]), threshold=float(p.get("threshold", 0.5)))
        return res, [{"trial": i, "density": d} for i, d in enumerate(res["densities"])], OK
    raise ConfigError(f"unknown l1 mode {mode!r}")


def cmd_example(cfg):
    p = cfg["parameters"]
    name = p.get("name", "tame")
    if name == "tame":
        ex = build_tame_example(int(p.get("L", 1000)))
        bad = check_schedule(ex)
        cov = pair_coverage(ex, int(p.get("d_max", 4)))
        out = {**ex.to_dict(), "schedule_violations": bad, "ones_density": ex.ones_density(),
               "pair_coverage": {str(d): v for d, v in cov.items()},
               "v_disjointness": {**(vd := v_disjointness(ex)), "violations": [list(v) for v in vd["violations"]]}}
        rows = [{"n": blk["n"], "a": blk["a"], "a_prime": blk["a_prime"], "h": blk["h"], "branch": blk["branch"]}
                for blk in out["schedule"]]
        return out, rows, VERIFY_FAILED if bad else OK
    if name == "golden-mean":
        spec, m = golden_mean_system()
        out = {"spec": ser.spec_to_json(spec), "measure": ser.measure_to_json(m),
               "entropy_rate": m.entropy_rate(), "log_golden_ratio": math.log((1 + math.sqrt(5)) / 2)}
        return out, [{"symbol": i, "mu": float(v)} for i, v in enumerate(m.stationary)], OK
    if name == "full-shift":
        k = int(p.get("k", 2))
        w = p.get("weights", [1 / k] * k)
        out = {"spec": {"alphabet": k, "kind": "full"}, "measure": {"kind": "bernoulli", "weights": w},
               "entropy": -math.fsum(x * math.log(x) for x in w if x > 0)}
        return out, [{"symbol": i, "mu": x} for i, x in enumerate(w)], OK
    raise ConfigError(f"unknown example {name!r}")


def cmd_verify(cfg):
    p = dict(cfg["parameters"])
    suite = p.pop("suite", "sauer")
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    fn = SUITES[suite]
    accepted = inspect.signature(fn).parameters
    unknown = sorted(set(p) - set(accepted))
    if unknown:
        raise ConfigError(f"suite {suite!r} does not take {unknown}")
    res = fn(**p, seed=int(cfg["seed"]))
    row = {k: res[k] for k in ("suite", "instances", "failures")}
    return res, [row], VERIFY_FAILED if res["failures"] else OK


COMMANDS = {"entropy": cmd_entropy, "independence": cmd_independence, "shatter": cmd_shatter,
            "l1": cmd_l1, "example": cmd_example, "verify": cmd_verify}


# -- plumbing -------------------------------------------------------------------

def _jsonify(x):
    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonify(x.tolist())
    if isinstance(x, np.generic):
        return _jsonify(x.item())
    if isinstance(x, float):
        return _num(x)
    return x


def _csv_text(rows) -> str:
    if not rows:
        return ""
    fields = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def run(cfg: dict) -> int:
    """Execute a resolved config and write its report. Returns the exit code."""
    status = {OK: "ok", VERIFY_FAILED: "verification_failed", BUDGET_EXHAUSTED: "budget_exhausted"}
    try:
        result, rows, code = COMMANDS[cfg["command"]](cfg)
    except ConfigError:
        raise
    except BudgetExceeded as e:
        part = e.partial
        result = {"reason": str(e), "partial_result": repr(part) if part is not None else None}
        rows, code = [], BUDGET_EXHAUSTED
    except DepthCapExceeded as e:
        result, rows, code = {"reason": str(e)}, [], BUDGET_EXHAUSTED
    except PremiseFailed as e:
        result, rows, code = {"reason": str(e), "premise_failed": True}, [], VERIFY_FAILED
    except (CombindepError, KeyError, ValueError) as e:
        raise ConfigError(f"{type(e).__name__}: {e}") from e
    report = {"config": cfg, "status": status[code], "partial": code == BUDGET_EXHAUSTED,
              "result": result}
    text = ser.dumps(_jsonify(report))
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.get("csv"):
        with open(cfg["csv"], "w") as fh:
            fh.write(_csv_text(_jsonify(rows)))
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="also write a CSV table of the main rows")
    common.add_argument("--seed", type=int)
    common.add_argument("--budget", type=int, help="enumeration cap (sigma assignments or search nodes)")
    common.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="override one parameter; VALUE is parsed as JSON when possible")
    parser = argparse.ArgumentParser(prog="combindep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {"entropy": "entropy curves, cover numbers and low-rank approximations",
             "independence": "maximal independence sets and their densities",
             "shatter": "shattered sets, cover numbers and separated families",
             "l1": "l1 constants of function families",
             "example": "regenerate a canonical example system"}
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    v = sub.add_parser("verify", parents=[common], help="run a randomized or exhaustive check suite")
    v.add_argument("suite", nargs="?", choices=sorted(SUITES))
    v.add_argument("--n", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--instances", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return run(cfg)
    except ConfigError as e:
        print(f"combindep: {e}", file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
