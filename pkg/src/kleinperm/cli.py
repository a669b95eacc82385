"""Command-line front end: ``kleinperm <command> ...``.

Inputs ending in ``.kvd`` are diagram files, ``.mod`` files use the matrix
format and anything else is read as a catalogue label such as ``M7``.
Exit status is 0 on success, 1 when a mathematical check fails and 2 on
bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .catalogue import construct, format_label, parse_label
from .decomp import decompose
from .errors import DslError, FormatError, KleinpermError
from .gf2k import parse_field
from .homalg import check_exact, format_resolution, heller, parse_resolution
from .kv4mod import dual, format_module, parse_module
from .moddsl import catalogue_ast, lower, parse, render, render_ast
from .permdim import DEFAULT_BUDGET, ppdim, resolution_for_module, sweep_labels, sweep_row

SCHEMA = "kleinperm/1"


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    field: str = "gf2"
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    format: str = "text"
    verbose: int = 0


# ------------------------------------------------------------------ input

def load_input(arg: str, field):
    """Module from a .kvd or .mod file, or from a catalogue label."""
    path = Path(arg)
    if path.suffix in (".kvd", ".mod"):
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise UsageError(f"cannot read {arg}: {exc}") from None
        if path.suffix == ".kvd":
            try:
                return lower(parse(text))
            except DslError as exc:
                raise UsageError(f"{arg}:{exc}") from None
            except KleinpermError as exc:
                raise UsageError(f"{arg}: {exc}") from None
        try:
            return parse_module(text)
        except FormatError as exc:
            raise UsageError(f"{arg}: {exc}") from None
        except KleinpermError as exc:
            raise UsageError(f"{arg}: {exc}") from None
    try:
        label = parse_label(arg, field)
        return construct(label, field)
    except (KleinpermError, ValueError) as exc:
        raise UsageError(f"{arg!r} is neither a .kvd/.mod file nor a valid label: {exc}") from None


def module_text(m, path: str | None, seed: int) -> str:
    if path and path.endswith(".kvd"):
        return render(m, Path(path).stem.replace("-", "_") or "m", seed)
    return format_module(m)


def write_or_print(text: str, path: str | None):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def emit(cfg: CliConfig, command: str, text: str, payload: dict):
    if cfg.format == "json":
        print(json.dumps({"schema": SCHEMA, "command": command, **payload}, sort_keys=True))
    else:
        print(text)


def _labels(m, seed):
    return [format_label(x) for x in decompose(m, seed).labels]


# ------------------------------------------------------------------ commands

def cmd_construct(cfg, args, F):
    m = load_input(args.label, F)
    label = parse_label(args.label, F)
    if args.output and args.output.endswith(".kvd"):
        ast, groups = catalogue_ast([label], F, Path(args.output).stem.replace("-", "_") or "m")
        text = render_ast(ast, groups)
    else:
        text = format_module(m)
    if args.output:
        write_or_print(text, args.output)
        emit(cfg, "construct", f"wrote {format_label(label)} to {args.output}",
             {"label": format_label(label), "dim": label.dim, "output": args.output})
    elif cfg.format == "json":
        emit(cfg, "construct", "", {"label": format_label(label), "dim": label.dim, "module": text})
    else:
        write_or_print(text, None)
    return 0


def cmd_decompose(cfg, args, F):
    m = load_input(args.input, F)
    labels = _labels(m, cfg.seed)
    emit(cfg, "decompose", " + ".join(labels) if labels else "0", {"labels": labels, "dim": m.dim})
    return 0


def cmd_ppdim(cfg, args, F):
    m = load_input(args.input, F)
    r = ppdim(m, cfg.seed, certify=args.certify, method=args.method, budget=cfg.budget)
    ok = check_exact(r.upper_witness).ok
    cert = r.lower_certificate
    cert_dict = cert.to_dict() if hasattr(cert, "to_dict") else cert
    lines = [r.describe()]
    if args.certify:
        lines.append("summands: " + " + ".join(format_label(x) for x in r.labels))
        lines.append(f"upper witness: length {r.upper_witness.length}, exact {ok}")
        if hasattr(cert, "verified"):
            lines.append(f"lower certificate ({cert.method}): verified {cert.verified}, "
                         f"Heller shift {' + '.join(cert.omega_label)}, counts {cert.counts}")
            if cfg.verbose:
                for q in cert.quotients:
                    lines.append(f"  quotient by dim {q['submodule_dim']}: {' + '.join(q['quotient'])}")
        elif cert_dict:
            lines.append(f"lower bound: {cert_dict.get('kind')}")
        if r.open_question_flag:
            lines.append("note: a summand of value 2 inside a sum only bounds the value to [1,2]")
    payload = {"lower": r.lower, "upper": r.upper, "exact": r.exact,
               "open_question": r.open_question_flag,
               "labels": [format_label(x) for x in r.labels], "witness_exact": ok}
    if args.certify:
        payload["certificate"] = cert_dict
    emit(cfg, "ppdim", "\n".join(lines), payload)
    failed = not ok or (args.certify and hasattr(cert, "verified") and not cert.verified)
    return 1 if failed else 0


def cmd_resolve(cfg, args, F):
    m = load_input(args.input, F)
    r = resolution_for_module(m, cfg.seed)
    report = check_exact(r)
    text = format_resolution(r)
    if args.output:
        write_or_print(text, args.output)
    elif cfg.format == "text":
        write_or_print(text, None)
    terms = [" + ".join(_labels(t, cfg.seed)) or "0" for t in r.terms]
    summary = f"resolution of length {r.length}, exact {report.ok}"
    if args.output:
        emit(cfg, "resolve", summary, {"length": r.length, "exact": report.ok, "terms": terms,
                                       "output": args.output})
    elif cfg.format == "json":
        emit(cfg, "resolve", "", {"length": r.length, "exact": report.ok, "terms": terms,
                                  "resolution": text})
    return 0 if report.ok else 1


def cmd_verify(cfg, args, F):
    try:
        text = Path(args.resolution).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.resolution}: {exc}") from None
    try:
        r = parse_resolution(text)
    except KleinpermError as exc:
        raise UsageError(f"{args.resolution}: {exc}") from None
    report = check_exact(r)
    if report.ok:
        msg = f"OK: exact resolution of length {r.length}"
    else:
        msg = f"FAILED at position {report.position}: {report.failures[0][1]}"
    emit(cfg, "verify", msg, {"ok": report.ok, "length": r.length, "failures": report.failures,
                              "dims": report.dims})
    return 0 if report.ok else 1


def _transform(cfg, args, F, fn, command):
    m = load_input(args.input, F)
    out = fn(m)
    text = module_text(out, args.output, cfg.seed)
    labels = _labels(out, cfg.seed)
    if args.output:
        write_or_print(text, args.output)
        emit(cfg, command, f"wrote {' + '.join(labels) or '0'} to {args.output}",
             {"labels": labels, "dim": out.dim, "output": args.output})
    elif cfg.format == "json":
        emit(cfg, command, "", {"labels": labels, "dim": out.dim, "module": text})
    else:
        write_or_print(text, None)
    return 0


def cmd_dual(cfg, args, F):
    return _transform(cfg, args, F, dual, "dual")


def cmd_heller(cfg, args, F):
    return _transform(cfg, args, F, heller, "heller")


def _sweep_job(job):
    label, field_text, seed, method, budget = job
    return sweep_row(label, parse_field(field_text), seed, method, budget)


def cmd_sweep(cfg, args, F):
    labels = sweep_labels(args.max_dim, F)
    jobs = [(lab, str(F), cfg.seed, args.method, cfg.budget) for lab in labels]
    threads = max(1, int(os.environ.get("KLEINPERM_THREADS", "1") or 1))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(j) for j in jobs]
    all_ok = all(r.witness_ok and r.lower_ok for r in rows)
    top = max((r.value for r in rows), default=0)
    lines = [f"{'label':<16} {'dim':>4} {'ppdim':>5}  witness  lower"]
    for r in rows:
        lines.append(f"{format_label(r.label):<16} {r.label.dim:>4} {r.value:>5}  "
                     f"{'ok' if r.witness_ok else 'FAIL':<7}  {'ok' if r.lower_ok else 'FAIL'}")
    lines.append(f"labels: {len(rows)}  max ppdim: {top}  all verified: {all_ok}")
    emit(cfg, "sweep", "\n".join(lines),
         {"rows": [r.to_dict() for r in rows], "max_ppdim": top, "all_verified": all_ok})
    return 0 if all_ok else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="gf2", help="gf2 or gf2^e:<hex modulus> (default gf2)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="enumeration budget for certificates")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="kleinperm",
                                description="Modules over the Klein four-group in characteristic 2.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", parents=[common], help="build a catalogue module")
    s.add_argument("label")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("decompose", parents=[common], help="print the indecomposable summands")
    s.add_argument("input")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("ppdim", parents=[common], help="permutation dimension")
    s.add_argument("input")
    s.add_argument("--certify", action="store_true", help="print upper and lower evidence")
    s.add_argument("--method", choices=("images", "enumerate"), default="images")
    s.set_defaults(func=cmd_ppdim)

    s = sub.add_parser("resolve", parents=[common], help="write a permutation resolution")
    s.add_argument("input")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("verify", parents=[common], help="check a resolution file for exactness")
    s.add_argument("resolution")
    s.set_defaults(func=cmd_verify)

    for name, fn, text in (("dual", cmd_dual, "dual module"), ("heller", cmd_heller, "Heller shift")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("input")
        s.add_argument("-o", "--output")
        s.set_defaults(func=fn)

    s = sub.add_parser("sweep", parents=[common], help="ppdim table for every small label")
    s.add_argument("--max-dim", type=int, default=41)
    s.add_argument("--method", choices=("images", "enumerate"), default="images")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(args.field, args.seed, args.budget, args.format, args.verbose)
    try:
        F = parse_field(cfg.field)
    except (ValueError, KleinpermError) as exc:
        print(f"kleinperm: bad --field: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(cfg, args, F)
    except UsageError as exc:
        print(f"kleinperm: {exc}", file=sys.stderr)
        return 2
    except KleinpermError as exc:
        print(f"kleinperm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
