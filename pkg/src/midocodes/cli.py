"""Command-line front end: construction, verification, analysis, simulation.

All state lives in flags; identical invocations with identical seeds produce
byte-identical output (wall-clock fields excepted).  Exit codes: 0 success,
1 failed verification/self-test, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from .analysis import (EXHAUSTIVE, SAMPLED, TARGETED, det_quantization_check,
                       min_det_exhaustive, min_det_sampled, min_det_targeted)
from .channel import report_to_csv, simulate_cer
from .codes import (CODE_IDS, build_code, descriptor_json, make_constellation)
from .decoder import ml_exhaustive, ml_fast
from .verify import verify_code


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _constellation_for(parser, desc, args):
    qam = getattr(args, "qam", None)
    hexm = getattr(args, "hex", None)
    if qam and hexm:
        parser.error("choose one of --qam / --hex")
    if qam:
        kind, m = "qam", qam
    elif hexm:
        kind, m = "hex", hexm
    else:
        kind, m = desc.constellation_kind, 4
    if kind != desc.constellation_kind:
        parser.error(f"{desc.id} is a {desc.constellation_kind.upper()} code")
    if m not in (4, 16, 64):
        parser.error("constellation size must be 4, 16 or 64")
    return make_constellation(kind, m)


def _code(parser, cid):
    try:
        return build_code(cid)
    except Exception as exc:
        parser.error(str(exc))


def _add_const_flags(sp):
    sp.add_argument("--qam", type=int, help="use M-QAM with this M")
    sp.add_argument("--hex", type=int, help="use M-HEX with this M")


def _parse_snr(parser, text):
    try:
        start, step, stop = (float(v) for v in text.split(":"))
    except ValueError:
        parser.error("--snr-db wants START:STEP:STOP")
    if step <= 0 or stop < start:
        parser.error("--snr-db wants START:STEP:STOP with positive step")
    out = []
    v = start
    while v <= stop + 1e-9:
        out.append(round(v, 10))
        v += step
    return out


def build_parser():
    parser = argparse.ArgumentParser(prog="midocodes",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-codes", help="print the registered code ids")

    sp = sub.add_parser("describe", help="dump a code descriptor")
    sp.add_argument("--code", required=True)
    sp.add_argument("--format", choices=["json"], default="json")
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="run the invariant suite for a code")
    sp.add_argument("--code", required=True)
    sp.add_argument("--quick", action="store_true", help="reduced sample counts")

    sp = sub.add_parser("mindet", help="minimum-determinant search")
    sp.add_argument("--code", required=True)
    _add_const_flags(sp)
    sp.add_argument("--mode", choices=[EXHAUSTIVE, SAMPLED, TARGETED], required=True)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = sub.add_parser("nvd-scan", help="integer quantization of |det|^2")
    sp.add_argument("--code", required=True)
    sp.add_argument("--box", type=int, default=2)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = sub.add_parser("decode-selftest", help="fast vs exhaustive ML agreement")
    sp.add_argument("--code", required=True)
    _add_const_flags(sp)
    sp.add_argument("--instances", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--snr-db", type=float, default=10.0)
    sp.add_argument("--out")

    sp = sub.add_parser("simulate", help="Monte Carlo codeword-error-rate sweep")
    sp.add_argument("--code", required=True)
    _add_const_flags(sp)
    sp.add_argument("--snr-db", required=True, metavar="START:STEP:STOP")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--decoder", choices=["fast", "exhaustive"], default="fast")
    sp.add_argument("--no-hard-limit", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list-codes":
        _emit("\n".join(CODE_IDS) + "\n", None)
        return 0

    if args.command == "describe":
        desc = _code(parser, args.code)
        _emit(descriptor_json(desc) + "\n", args.out)
        return 0

    if args.command == "verify":
        checks = verify_code(args.code, deep=not args.quick)
        failed = 0
        for name, ok, detail in checks:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
            failed += 0 if ok else 1
        print(f"{len(checks) - failed}/{len(checks)} checks passed")
        return 1 if failed else 0

    if args.command == "mindet":
        desc = _code(parser, args.code)
        const = _constellation_for(parser, desc, args)
        t0 = time.monotonic()
        if args.mode == EXHAUSTIVE:
            res = min_det_exhaustive(desc, const)
        elif args.mode == TARGETED:
            res = min_det_targeted(desc, const)
        else:
            res = min_det_sampled(desc, const, args.samples, seed=args.seed)
        obj = {
            "code": desc.id,
            "constellation": f"{const.m}-{const.kind}",
            "mode": res.mode,
            "delta_min": res.delta_min,
            "unnorm_min": res.unnorm_min,
            "achieving_diff": [[v.real, v.imag] for v in res.achieving_diff],
            "pairs_scanned": res.pairs_scanned,
            "seconds": time.monotonic() - t0,
        }
        _emit(json.dumps(obj) + "\n", args.out)
        return 0

    if args.command == "nvd-scan":
        desc = _code(parser, args.code)
        rep = det_quantization_check(desc, args.samples, args.box, seed=args.seed)
        obj = {
            "code": desc.id,
            "box": args.box,
            "samples": rep.samples,
            "seed": args.seed,
            "zero_cases": rep.zero_cases,
            "max_integer_deviation": rep.max_integer_deviation,
            "min_unnorm_detsq": rep.min_unnorm_detsq,
            "divisor": rep.divisor,
            "divisor_violations": rep.divisor_violations,
        }
        _emit(json.dumps(obj) + "\n", args.out)
        return 1 if rep.divisor_violations else 0

    if args.command == "decode-selftest":
        desc = _code(parser, args.code)
        const = _constellation_for(parser, desc, args)
        rho = 10.0 ** (args.snr_db / 10.0)
        rng = np.random.default_rng(args.seed)
        pts = np.array(const.points)
        worst = 0.0
        fast_evals = exh_evals = 0
        from .codes import encode
        for _ in range(args.instances):
            s = pts[rng.integers(0, const.m, size=desc.k)]
            h = (rng.normal(size=(2, desc.n_t)) + 1j * rng.normal(size=(2, desc.n_t))) / math.sqrt(2)
            n = (rng.normal(size=(2, desc.T)) + 1j * rng.normal(size=(2, desc.T))) / math.sqrt(2)
            y = math.sqrt(rho) * (h @ encode(desc, s, normalized=True, constellation=const)) + n
            re = ml_exhaustive(desc, const, y, h, rho)
            rf = ml_fast(desc, const, y, h, rho)
            worst = max(worst, abs(re.metric - rf.metric) / (1.0 + re.metric))
            fast_evals += rf.metric_evals
            exh_evals += re.metric_evals
        agree = worst <= 1e-9
        obj = {
            "code": desc.id,
            "constellation": f"{const.m}-{const.kind}",
            "instances": args.instances,
            "seed": args.seed,
            "snr_db": args.snr_db,
            "max_rel_metric_gap": worst,
            "agree": agree,
            "mean_fast_evals": fast_evals / args.instances,
            "mean_exhaustive_evals": exh_evals / args.instances,
        }
        _emit(json.dumps(obj) + "\n", args.out)
        return 0 if agree else 1

    if args.command == "simulate":
        desc = _code(parser, args.code)
        const = _constellation_for(parser, desc, args)
        snrs = _parse_snr(parser, args.snr_db)
        rep = simulate_cer(desc, const, snrs, args.trials, args.seed,
                           decoder=args.decoder, hard_limit=not args.no_hard_limit,
                           threads=args.threads)
        _emit(report_to_csv(rep), args.out)
        return 0

    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
