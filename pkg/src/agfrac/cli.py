"""Command-line interface.

Subcommands: describe, encode, corrupt, decode-fractional, decode-interleaved,
experiment.  Field elements are serialized as integer indices, words as JSON
arrays of indices.  Exit codes: 0 on success (including decoder failures,
which are reported in the JSON payload), 1 on validation errors, 2 on I/O
errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .code import DecodeFailure, MiscorrectionDetected
from .fractional import fractional_decode, radius_report
from .harness import (ExperimentConfig, ReceivedWord, SeedStream, build_instance,
                      corrupt, describe, run_experiment)
from .interleaved import CollabConfig, collab_decode


def _load_config(path) -> ExperimentConfig:
    return ExperimentConfig.from_file(path)


def _load_word(path) -> list[int]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        for key in ("received", "codeword"):
            if key in data:
                data = data[key]
                break
    if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
        raise ValueError("word file must hold a JSON array of integer indices "
                         "(or an object with a 'codeword'/'received' entry)")
    return data


def _emit(payload: dict):
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_describe(args) -> int:
    print(describe(_load_config(args.config)))
    return 0


def cmd_encode(args) -> int:
    inst = build_instance(_load_config(args.config))
    order = inst.tower.ext.order
    if args.coefficients is not None:
        coeffs = [int(c) for c in args.coefficients.split(",")]
    else:
        rng = SeedStream(args.seed, "encode")
        coeffs = [rng.below(order) for _ in range(inst.code.k)]
    word = inst.code.encode(coeffs)
    _emit({"coefficients": coeffs, "codeword": word})
    return 0


def cmd_corrupt(args) -> int:
    config = _load_config(args.config)
    inst = build_instance(config)
    word = _load_word(args.word)
    rng = SeedStream(args.seed, "corrupt", args.weight)
    corrupted = corrupt(word, args.weight, inst.tower.ext, rng,
                        model=args.model, spec=inst.spec)
    _emit({"received": corrupted, "weight": args.weight, "model": args.model})
    return 0


def _decode_common(args, use_interleaved: bool) -> int:
    config = _load_config(args.config)
    inst = build_instance(config)
    spec = inst.spec
    received = ReceivedWord(_load_word(args.word), spec)
    payload = {"radii": radius_report(spec)}
    try:
        pi = received.project()
        if use_interleaved:
            t_prime = (args.locator_excess if args.locator_excess is not None
                       else spec.radii["guaranteed"])
            word, f = collab_decode(CollabConfig.for_spec(spec, t_prime), pi)
            payload["locator_excess"] = t_prime
        else:
            word, f = fractional_decode(spec, pi)
        payload.update({
            "status": "success",
            "codeword": word,
            "function": sorted([a, b, c] for (a, b), c in f.coeffs.items()),
        })
    except MiscorrectionDetected as exc:
        payload.update({"status": "miscorrection-detected", "detail": str(exc)})
    except DecodeFailure as exc:
        payload.update({"status": "failure", "detail": str(exc)})
    payload["downloaded_symbols"] = received.downloaded_symbols
    _emit(payload)
    return 0


def cmd_decode_fractional(args) -> int:
    return _decode_common(args, use_interleaved=False)


def cmd_decode_interleaved(args) -> int:
    return _decode_common(args, use_interleaved=True)


def cmd_experiment(args) -> int:
    config = _load_config(args.config)
    out_csv = args.out
    out_json = (out_csv[:-4] if out_csv.endswith(".csv") else out_csv) + ".json"
    rows = run_experiment(config, out_csv=out_csv, out_json=out_json)
    print(f"wrote {out_csv} and {out_json} ({len(rows)} aggregate rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agfrac",
        description="Fractional decoding of one-point algebraic geometry codes "
                    "over extension fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="print instance parameters and radii")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("encode", help="encode coefficients into a codeword")
    p.add_argument("--config", required=True)
    p.add_argument("--coefficients", help="comma-separated element indices")
    p.add_argument("--seed", type=int, default=0, help="seed for a random message")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("corrupt", help="inject errors into a word")
    p.add_argument("--config", required=True)
    p.add_argument("--word", required=True, help="JSON file with the word")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--model", choices=("uniform", "common-positions"),
                   default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("decode-fractional",
                       help="decode a received word from its projection")
    p.add_argument("--config", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_decode_fractional)

    p = sub.add_parser("decode-interleaved",
                       help="decode via the collaborative interleaved decoder")
    p.add_argument("--config", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--locator-excess", type=int, dest="locator_excess")
    p.set_defaults(func=cmd_decode_interleaved)

    p = sub.add_parser("experiment", help="run a seeded Monte Carlo sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
