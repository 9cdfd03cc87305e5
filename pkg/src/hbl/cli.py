"""Command-line front end: ``hbl polytope | certify | check-b | extremize``.

Exit codes: 0 ok, 1 input error, 2 empty polytope, 3 certificate failure,
4 failed check, 5 numeric failure.  Set HBL_THREADS to bound FFT workers.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import os
import sys
from pathlib import Path

import numpy as np
import scipy.fft

from . import bfunc, flagbox, lab, polytope
from .io import (
    InputError,
    config_hash,
    load_json,
    parse_b,
    parse_instance,
    parse_subspaces,
    atomic_write_text,
    write_json,
    write_triple,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_CERT, EXIT_CHECK, EXIT_NUMERIC = range(6)


def _threads() -> int:
    raw = os.environ.get("HBL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise InputError(f"HBL_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise InputError("HBL_THREADS must be >= 1")
    return n


def _emit(path, report: dict) -> None:
    if path is None:
        import json
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        write_json(path, report)


def _instance(args):
    cfg = load_json(args.config)
    inst = parse_instance(cfg)
    E = parse_subspaces(cfg, inst.d)
    if E is None:
        E = polytope.generate_subspace_list(inst, int(cfg.get("depth", 1)))
    return cfg, inst, E


# ---------------------------------------------------------------- polytope


def cmd_polytope(args) -> int:
    cfg, inst, E = _instance(args)
    cs = polytope.build_constraints(inst, E)
    verts = polytope.enumerate_vertices(cs)
    report = {
        "command": "polytope", "config_hash": config_hash(cfg), "seed": args.seed,
        "d": inst.d, "dims": list(inst.dims), "vertices": verts,
        "constraints": [{"subspace": k.subspace, "coeffs": list(k.coeffs), "rhs": k.rhs}
                        for k in cs.inequalities],
    }
    _emit(args.output, report)
    if not verts:
        print("polytope is empty", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


# ---------------------------------------------------------------- certify


def _parse_sweep(text: str) -> range:
    try:
        name, span = text.split("=")
        lo, hi = span.split("..")
        if name.strip() not in ("m", "k"):
            raise ValueError
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise InputError(f"--sweep: expected m=LO..HI, got {text!r}") from exc


def _cert_row(c: flagbox.BoxCertificate) -> dict:
    return {"m": list(c.m), "primal": c.primal_value, "dual": c.dual_value,
            "trace_length": c.trace_length, "flag": c.flag,
            "box_edges": [[list(v), q] for v, q in c.box.edges],
            "volume_terms": c.box_volume.tolist(),
            "image_terms": [im.tolist() for im in c.image_volumes],
            "scale": c.scale, "log_volume": c.scaled_log_volume,
            "log_images": c.scaled_log_images, "margins": c.margins}


def cmd_certify(args) -> int:
    cfg, inst, E = _instance(args)
    h = config_hash(cfg, args.sweep)
    try:
        if args.sweep:
            certs = flagbox.certify_sweep(inst, _parse_sweep(args.sweep), E)
        else:
            certs = [flagbox.certify(inst, E)]
    except flagbox.CertificateError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERT
    if args.output and str(args.output).endswith(".csv"):
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"# config_hash={h} seed={args.seed}"])
        w.writerow(["m", "primal", "log_volume", "log_ratio"] + [f"margin_{j}" for j in range(inst.n)])
        for c in certs:
            w.writerow([" ".join(map(str, c.m)), str(c.primal_value), repr(c.scaled_log_volume),
                        repr(c.scaled_log_volume - float(c.primal_value))] + [repr(x) for x in c.margins])
        atomic_write_text(args.output, buf.getvalue())
    else:
        report = {"command": "certify", "config_hash": h, "seed": args.seed,
                  "certificates": [_cert_row(c) for c in certs]}
        if len(certs) > 1:
            report["log_ratio_range"] = list(flagbox.log_ratio_spread(certs))
        _emit(args.output, report)
    return EXIT_OK


# ---------------------------------------------------------------- check-b


CHECKS = ("condition2", "condition3", "scaling", "delta3", "rho", "monotone")


def cmd_check_b(args) -> int:
    cfg, inst, E = _instance(args)
    bcfg = load_json(args.b)
    B = parse_b(bcfg)
    if B.n != inst.n:
        raise InputError(f"B takes {B.n} arguments but the instance has {inst.n} maps")
    wanted = args.checks.split(",") if args.checks else list(CHECKS[:4])
    for name in wanted:
        if name not in CHECKS:
            raise InputError(f"--checks: unknown check {name!r}; choose from {', '.join(CHECKS)}")
    sampler = bfunc.Sampler(samples=args.samples, seed=args.seed)
    verts = polytope.enumerate_vertices(polytope.build_constraints(inst, E))
    if not verts and ({"condition2", "condition3"} & set(wanted)):
        print("polytope is empty", file=sys.stderr)
        return EXIT_INFEASIBLE
    reports = []
    for name in wanted:
        if name == "condition2":
            r = bfunc.check_polytope_conditions(B, verts, "max", sampler, args.bound)
        elif name == "condition3":
            r = bfunc.check_polytope_conditions(B, verts, "min", sampler, args.bound)
        elif name == "scaling":
            r = bfunc.check_scaling(B, inst.d, inst.dims, sampler, args.bound)
        elif name == "delta3":
            if B.n != 3:
                raise InputError("delta3 applies to B of three arguments")
            r = bfunc.check_delta3_nonneg(B, sampler)
        elif name == "rho":
            if not isinstance(B, bfunc.RhoComposed):
                raise InputError("the rho check needs a B of kind 'rho'")
            r = bfunc.check_rho_conditions(B.rho, len(B.inner), sampler, args.bound)
        else:
            r = bfunc.check_monotone(B, sampler)
        reports.append(r.to_dict())
    report = {"command": "check-b", "config_hash": config_hash(cfg, bcfg, wanted, args.samples, args.bound),
              "seed": args.seed, "B": B.to_spec(), "vertices": verts, "checks": reports,
              "passed": all(r["passed"] for r in reports)}
    _emit(args.output, report)
    return EXIT_OK if report["passed"] else EXIT_CHECK


# ---------------------------------------------------------------- extremize


def _parse_kv(text: str, keys: dict) -> dict:
    out = {}
    try:
        for part in text.split(","):
            k, v = part.split("=")
            out[k.strip()] = keys[k.strip()](v)
    except (KeyError, ValueError) as exc:
        raise InputError(f"--grid: expected L=<len>,N=<cells>, got {text!r}") from exc
    return out


def _parse_sigmas(text: str) -> list[float]:
    try:
        lo, hi, n = text.split(":")
        return [float(s) for s in np.geomspace(float(lo), float(hi), int(n))]
    except ValueError as exc:
        raise InputError(f"--sigmas: expected LO:HI:COUNT, got {text!r}") from exc


def cmd_extremize(args) -> int:
    bcfg = load_json(args.b)
    B = parse_b(bcfg)
    if B.n != 3:
        raise InputError("extremize needs B of three arguments")
    try:
        masses = tuple(float(m) for m in args.masses.split(","))
    except ValueError as exc:
        raise InputError(f"--masses: {exc}") from exc
    if len(masses) != 3 or min(masses) <= 0:
        raise InputError("--masses: need three positive numbers")
    g = _parse_kv(args.grid, {"L": float, "N": int})
    L, N = g.get("L", 16.0), g.get("N", 2048)
    sig = _parse_sigmas(args.sigmas)
    base_sig = _parse_sigmas(args.baseline_sigmas) if args.baseline_sigmas else sig
    h = config_hash(bcfg, masses, L, N, sig, base_sig, args.iters, args.eta, args.window)
    try:
        fit = lab.best_gaussian(B, masses, base_sig, L, N, refine=args.refine)
        res = lab.ascend(B, fit.triple, iters=args.iters, eta=args.eta)
        flat_best = lab.triple_flatness(B, fit.triple, args.window)
        table = lab.flatness_table(B, sig, masses, L, N, args.window) if args.table else []
    except lab.GridError as exc:
        raise InputError(str(exc)) from exc
    if not all(math.isfinite(v) for v in res.history):
        raise lab.NumericError("non-finite objective")
    outdir = Path(args.output)
    write_triple(outdir, fit.triple, "gaussian")
    write_triple(outdir, res.triple, "final", {"value": res.history[-1]})
    report = {
        "command": "extremize", "config_hash": h, "seed": args.seed, "B": B.to_spec(),
        "masses": list(masses), "grid": {"L": L, "N": N},
        "gaussian": {"value": fit.value, "sigmas": list(fit.sigmas),
                     "flatness": flat_best[0], "flatness_components": list(flat_best[1])},
        "ascent": {"history": res.history, "final": res.history[-1],
                   "improvement": res.history[-1] - fit.value},
        "window_sd": args.window,
    }
    if table:
        vals = [v for _, v in table]
        i = int(np.argmin(vals))
        report["flatness_table"] = {"min": vals[i], "argmin": list(table[i][0]), "size": len(vals)}
        csv_lines = ["sigma_f,sigma_g,sigma_h,flatness"]
        csv_lines += [",".join(repr(float(x)) for x in s) + f",{v!r}" for s, v in table]
        atomic_write_text(outdir / "flatness.csv", "\n".join(csv_lines) + "\n")
    write_json(outdir / "report.json", report)
    print(f"gaussian baseline {fit.value!r}; after ascent {res.history[-1]!r}")
    return EXIT_OK


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hbl", description="Brascamp-Lieb polytopes, box certificates "
                                "and trilinear-form experiments.")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in every report")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("polytope", help="list vertices and constraint provenance")
    sp.add_argument("-c", "--config", required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_polytope)

    sp = sub.add_parser("certify", help="build a box certificate (optionally over an m sweep)")
    sp.add_argument("-c", "--config", required=True)
    sp.add_argument("--sweep", help="m=LO..HI scales the instance's m by each k")
    sp.add_argument("-o", "--output", help=".json or .csv")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("check-b", help="sampled checks of a size function")
    sp.add_argument("-c", "--config", required=True)
    sp.add_argument("-b", required=True, help="B spec JSON")
    sp.add_argument("--checks", help=f"comma list from {','.join(CHECKS)}")
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--bound", type=float, default=1e2)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_check_b)

    sp = sub.add_parser("extremize", help="Gaussian baseline, ascent and residual flatness")
    sp.add_argument("-b", required=True, help="B spec JSON")
    sp.add_argument("--masses", default="1,1,1")
    sp.add_argument("--grid", default="L=16,N=2048")
    sp.add_argument("--sigmas", default="0.35:2.8:15", help="flatness grid LO:HI:COUNT")
    sp.add_argument("--baseline-sigmas", help="baseline grid LO:HI:COUNT (default: --sigmas)")
    sp.add_argument("--refine", action="store_true", help="polish the baseline with Nelder-Mead")
    sp.add_argument("--iters", type=int, default=50)
    sp.add_argument("--eta", type=float, default=0.1)
    sp.add_argument("--window", type=float, default=3.0, help="residual window in standard deviations")
    sp.add_argument("--no-table", dest="table", action="store_false")
    sp.add_argument("-o", "--output", default="extremize_out")
    sp.set_defaults(func=cmd_extremize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with scipy.fft.set_workers(_threads()):
            return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except polytope.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (lab.NumericError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except polytope.ClosureLimitError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
