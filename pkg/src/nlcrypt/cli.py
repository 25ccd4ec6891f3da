"""Command-line front end.

    nlcrypt bc binding --n 2 --blocks 10 --trials 100000 --seed 42
    nlcrypt oracle lemma1 --n 3
    nlcrypt demo ww-reduction --delay --trials 1000

Every output document embeds the fully resolved ``config``; passing that
document back with ``--config`` reproduces the run exactly.

Exit codes: 0 clean / within bound, 1 a bound was violated, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from typing import Optional

from . import oracles
from .errors import InvalidArgument, ResourceLimit
from .harness import Scenario, dumps, no_signaling_audit, run_scenario
from .stats import VIOLATES

ACTIONS = {
    "bc": ("honest", "binding", "guess"),
    "ot": ("honest", "attack"),
    "demo": ("erasure", "ww-reduction"),
    "oracle": ("lemma1", "binomial"),
    "audit": ("no-signaling",),
}

_KIND = {
    ("bc", "honest"): "BCHonest",
    ("bc", "binding"): "BCBinding",
    ("bc", "guess"): "BCGuess",
    ("ot", "honest"): "OTHonest",
    ("ot", "attack"): "OTBobAttack",
    ("demo", "erasure"): "ErasureDemo",
    ("demo", "ww-reduction"): "WWDemo",
    ("audit", "no-signaling"): "NoSignalingCheck",
}

_DEFAULTS = {"trials": 10_000, "format": "json", "workers": 1, "timing": False}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, help="number of independent runs (default 10000)")
    p.add_argument("--seed", type=int, help="64-bit seed; drawn from OS entropy if omitted")
    p.add_argument("--out", help="write per-trial records to this file as JSON Lines")
    p.add_argument("--format", choices=("json", "jsonl", "table"))
    p.add_argument("--config", help="JSON config (or a previous output document); flags override it")
    p.add_argument("--workers", type=int, help="processes to fan trials out over")
    p.add_argument("--timing", action="store_true", default=None, help="include runtime_ms in the summary")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlcrypt", description="NL-box commitment and OT simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    bc = sub.add_parser("bc", help="bit commitment scenarios")
    bc.add_argument("action", choices=ACTIONS["bc"])
    bc.add_argument("--n", type=int, help="per-block parameter (2n+1 boxes per block)")
    bc.add_argument("--blocks", "--k", dest="k", type=int, help="number of blocks k")
    bc.add_argument("--delayed-blocks", dest="k_star", type=int, help="binding: blocks using the delay strategy")
    bc.add_argument("--k0", type=int, help="binding: flip-strategy blocks committed to 0")
    bc.add_argument("--y", help="guess: fixed verifier string (default: most informative)")
    _common(bc)

    ot = sub.add_parser("ot", help="oblivious transfer scenarios")
    ot.add_argument("action", choices=ACTIONS["ot"])
    ot.add_argument("--n", type=int, help="surviving rounds (multiple of 3)")
    ot.add_argument("--cheat-rounds", "--k", dest="k", type=int, help="attack: number of cheated round pairs")
    ot.add_argument("--backend", choices=("ideal", "nlbc"))
    ot.add_argument("--bc-n", dest="bc_n", type=int, help="nlbc backend: per-block parameter")
    ot.add_argument("--bc-k", dest="bc_k", type=int, help="nlbc backend: blocks per commitment")
    _common(ot)

    demo = sub.add_parser("demo", help="single-box delay demonstrations")
    demo.add_argument("action", choices=ACTIONS["demo"])
    demo.add_argument("--delay", action="store_true", default=None, help="receiver waits for the announcement")
    _common(demo)

    oracle = sub.add_parser("oracle", help="exact oracles")
    oracle.add_argument("action", choices=ACTIONS["oracle"])
    oracle.add_argument("--n", type=int)
    oracle.add_argument("--threshold", type=int, help="binomial: report Pr[S_n > threshold]")
    oracle.add_argument("--format", choices=("json", "table"))
    oracle.add_argument("--config")
    oracle.add_argument("--seed", type=int, help=argparse.SUPPRESS)

    audit = sub.add_parser("audit", help="box-level audits")
    audit.add_argument("action", choices=ACTIONS["audit"])
    _common(audit)
    return parser


_PARAM_KEYS = ("n", "k", "k_star", "k0", "y", "backend", "bc_n", "bc_k", "threshold", "delay")


def resolve_config(args: argparse.Namespace) -> dict:
    """defaults <- config file <- flags."""
    cfg: dict = {"command": args.command, "action": args.action, "params": {}}
    cfg.update({k: v for k, v in _DEFAULTS.items()})
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        loaded = loaded.get("config", loaded)
        if (loaded.get("command"), loaded.get("action")) not in ((None, None), (args.command, args.action)):
            raise InvalidArgument(
                f"config is for '{loaded.get('command')} {loaded.get('action')}', not '{args.command} {args.action}'"
            )
        for key in ("trials", "seed", "format", "workers", "timing"):
            if key in loaded:
                cfg[key] = loaded[key]
        cfg["params"].update(loaded.get("params", {}))
    for key in ("trials", "seed", "format", "workers", "timing"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    for key in _PARAM_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            cfg["params"][key] = v
    return cfg


def _scenario(cfg: dict) -> Scenario:
    params = dict(cfg["params"])
    if cfg["command"] == "demo":
        params["receiver"] = "delay" if params.pop("delay", False) else "sync"
    return Scenario(_KIND[(cfg["command"], cfg["action"])], params, cfg["trials"], cfg["seed"])


def _oracle(cfg: dict) -> tuple[dict, int]:
    p = cfg["params"]
    if cfg["action"] == "lemma1":
        table = oracles.bias_table(p.get("n", 1))
        doc = table.to_dict()
        doc["tight_witnesses"] = [{"c": c, "y": y} for c, y in table.tight_witnesses()]
        return doc, 0 if doc["within_bound"] else 1
    n = p.get("n")
    if n is None:
        raise InvalidArgument("oracle binomial needs --n")
    threshold = p.get("threshold", (2 * n) // 3)
    tail = oracles.binomial_tail(n, threshold)
    return {"n": n, "threshold": threshold, "tail": float(tail), "tail_exact": str(tail)}, 0


def _table(doc: dict, prefix: str = "") -> list[str]:
    lines = []
    for key in sorted(doc):
        v = doc[key]
        name = f"{prefix}{key}"
        if isinstance(v, dict):
            lines.extend(_table(v, name + "."))
        else:
            lines.append(f"{name:<40} {json.dumps(v)}")
    return lines


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "table":
        print("\n".join(_table(doc)))
    elif fmt == "jsonl":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(dumps(doc))


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.get("seed") is None and args.command != "oracle":
            cfg["seed"] = secrets.randbits(64)
            print(f"seed: {cfg['seed']}", file=sys.stderr)

        if args.command == "oracle":
            cfg = {k: cfg[k] for k in ("command", "action", "params", "format")}
            doc, code = _oracle(cfg)
            doc["config"] = cfg
            _emit(doc, cfg["format"] if cfg["format"] != "jsonl" else "json")
            return code

        scenario = _scenario(cfg)
        records = []
        want_records = bool(getattr(args, "out", None)) or cfg["format"] == "jsonl"
        sink = records.append if want_records else None
        summary = run_scenario(scenario, sink=sink, workers=cfg["workers"])
    except (InvalidArgument, ResourceLimit, OSError, json.JSONDecodeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"nlcrypt: error: {exc}", file=sys.stderr)
        return 2

    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            for r in records:
                fh.write(json.dumps(r, sort_keys=True) + "\n")
    if cfg["format"] == "jsonl":
        for r in records:
            print(json.dumps(r, sort_keys=True))

    doc = summary.to_dict(timing=cfg["timing"])
    failed = summary.verdict == VIOLATES
    if scenario.kind == "NoSignalingCheck":
        audit = no_signaling_audit(scenario.trials, scenario.seed)
        doc["audit"] = audit.to_dict()
        failed |= not audit.passed
    doc["config"] = cfg
    _emit(doc, cfg["format"])
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
