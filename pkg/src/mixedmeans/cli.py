"""Command-line front end.

Subcommands mirror the library: ``means``, ``check``, ``certify``,
``verify``, ``search``, ``scan``, ``gen-weights``.  Inputs are tiny JSON
files ({"w": [...]} for weights and heads, {"x": [...]} for samples);
outputs are JSON on stdout (floats at full round-trip precision) except
``scan``, which emits CSV, and ``gen-weights``, which prints one number.

Exit codes: 0 success / condition holds, 2 condition fails or violation
found, 1 usage or input error (one-line diagnostic on stderr).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .conditions import (
    NotApplicableError,
    critical_weight,
    gao_conditions,
    holland_condition,
    nanjundiah_condition,
)
from .functionals import (
    popoviciu_increment,
    rado_increment,
    violation_tolerance,
)
from .means import InputError, WeightSequence, as_samples, mixed_mean, partial_mean_sequence
from .reduction import certify
from .search import SCAN_FIELDS, SearchConfig, violation_search, weight_scan

__all__ = ["run", "main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _load_weights(path: str) -> WeightSequence:
    data = _load_json(path)
    if "w" not in data:
        raise InputError(f'{path}: missing "w" field')
    return WeightSequence(data["w"])


def _load_head(path: str) -> np.ndarray:
    data = _load_json(path)
    if "w" not in data:
        raise InputError(f'{path}: missing "w" field')
    return np.asarray(data["w"], dtype=float)


def _load_samples(path: str, n: int) -> np.ndarray:
    data = _load_json(path)
    if "x" not in data:
        raise InputError(f'{path}: missing "x" field')
    return as_samples(data["x"], n)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _cmd_means(args) -> int:
    w = _load_weights(args.weights)
    x = _load_samples(args.samples, w.n)
    out = {
        "r": args.r,
        "s": args.s,
        "partial_means_r": partial_mean_sequence(w, x, args.r).tolist(),
        "partial_means_s": partial_mean_sequence(w, x, args.s).tolist(),
        "mixed_s_of_r": mixed_mean(w, x, outer=args.s, inner=args.r),
        "mixed_r_of_s": mixed_mean(w, x, outer=args.r, inner=args.s),
    }
    _emit(out)
    return 0


def _cmd_check(args) -> int:
    w = _load_weights(args.weights)
    nan = nanjundiah_condition(w)
    hol = holland_condition(w)
    try:
        gao = gao_conditions(w)
        gao_dict = gao.to_dict()
        gao_holds = gao.holds
    except NotApplicableError:
        gao_dict = None
        gao_holds = False
    _emit({
        "n": w.n,
        "nanjundiah": nan.to_dict(),
        "holland": hol.to_dict(),
        "gao": gao_dict,
    })
    return 0 if (nan.holds or hol.holds or gao_holds) else 2


def _cmd_certify(args) -> int:
    w = _load_weights(args.weights)
    cert = certify(w, grid_resolution=args.resolution)
    _emit(cert.to_dict())
    return 2 if cert.route == "refuted-numeric" else 0


def _cmd_verify(args) -> int:
    w = _load_weights(args.weights)
    x = _load_samples(args.samples, w.n)
    levels = []
    failed = False
    tol = violation_tolerance(w, x)
    direction = 1.0 if args.s < 1.0 else -1.0
    for k in range(2, w.n + 1):
        inc = rado_increment(w, x, args.s, k)
        pop = popoviciu_increment(w, x, k)
        levels.append({
            "k": k,
            "rado_increment": inc,
            "popoviciu_increment": pop,
        })
        if args.s != 1.0 and direction * inc < -tol:
            failed = True
    _emit({"s": args.s, "levels": levels})
    return 2 if failed else 0


def _cmd_search(args) -> int:
    w = _load_weights(args.weights)
    config = SearchConfig(
        seed=args.seed, trials=args.trials, local_steps=args.local_steps
    )
    result = violation_search(w, args.s, config)
    _emit(result.to_dict())
    return 2 if result.violation else 0


def _cmd_scan(args) -> int:
    head = _load_head(args.head)
    try:
        lo_s, hi_s = args.range.split(":", 1)
        lo, hi = float(lo_s), float(hi_s)
    except ValueError as exc:
        raise InputError(f"--range must be LO:HI, got {args.range!r}") from exc
    rows = weight_scan(head, (lo, hi), args.steps, args.resolution)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(SCAN_FIELDS)
    for row in rows:
        writer.writerow(
            ["" if row[k] is None else repr(row[k]) for k in SCAN_FIELDS]
        )
    return 0


def _cmd_gen_weights(args) -> int:
    head = _load_head(args.head)
    sys.stdout.write("%.17g\n" % critical_weight(head))
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="mixedmeans", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("means", help="partial and mixed means for w, x, r, s")
    p.add_argument("weights")
    p.add_argument("samples")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--s", type=float, default=0.0)
    p.set_defaults(func=_cmd_means)

    p = sub.add_parser("check", help="all weight-condition reports")
    p.add_argument("weights")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("certify", help="certification route and slack")
    p.add_argument("weights")
    p.add_argument("--resolution", type=int, default=201)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify", help="increment values for k = 2..n")
    p.add_argument("weights")
    p.add_argument("samples")
    p.add_argument("--s", type=float, default=0.0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="multistart violation search")
    p.add_argument("weights")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--local-steps", type=int, default=8)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("scan", help="tail-weight region scan (CSV)")
    p.add_argument("head")
    p.add_argument("--range", required=True, help="LO:HI, geometric grid")
    p.add_argument("--steps", type=int, default=31)
    p.add_argument("--resolution", type=int, default=201)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("gen-weights", help="critical tail weight for a head")
    p.add_argument("head")
    p.set_defaults(func=_cmd_gen_weights)

    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, NotApplicableError) as exc:
        sys.stderr.write(f"mixedmeans: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
