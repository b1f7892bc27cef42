"""Command line front end: `dgha <command> [--input file | --example name] ...`.

Every command prints one RunReport. Exit codes: 0 success or Holds, 2 Violated,
3 Inconclusive, 64 usage error, 65 bad input document.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field as dc_field

from . import generators as gen
from .invariants import HOLDS, INCONCLUSIVE, VIOLATED, bass_table, cohomological_depth, is_dualizing, is_gorenstein
from .presentation import (ParseError, PresentationDoc, ValidationError, build, corpus_names, load_example,
                           parse_presentation)
from .resolutions import (DEFAULT_CUTOFF, WindowTooWide, ZeroModule, hom_from_simple, hom_to_simple,
                          injective_dimension, minimal_ifij, minimal_sppj, projective_dimension)
from .verify import SUITES, run_suite

EXIT = {HOLDS: 0, VIOLATED: 2, INCONCLUSIVE: 3}
EX_USAGE = 64
EX_DATAERR = 65
DEFAULT_WINDOW = (-8, 8)

DOC_COMMANDS = ("cohomology", "pd", "injdim", "depth", "bass", "resolve", "gorenstein", "dualizing", "validate")


@dataclass
class RunReport:
    command: list
    input_sha256: str | None
    cutoff: int
    window: tuple
    seed: int
    results: dict
    verdict: str = HOLDS
    timings: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"command": self.command, "input_sha256": self.input_sha256, "cutoff": self.cutoff,
               "window": list(self.window), "seed": self.seed, "verdict": self.verdict, "results": self.results}
        if self.timings:
            out["timings"] = self.timings
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def text(self) -> str:
        lines = [f"{' '.join(self.command)}  [{self.verdict}]"]
        if self.input_sha256:
            lines.append(f"input {self.input_sha256}  cutoff {self.cutoff}  window {self.window[0]}:{self.window[1]}")
        for k, v in sorted(self.results.items()):
            if k == "reports":
                bad = {i: r for i, r in v.items() if r["verdict"] != HOLDS}
                lines.append(f"  reports: {len(v)} ({len(bad)} not Holds)")
                lines += [f"    #{i} {r['verdict']}: {r['instance']}" for i, r in bad.items()]
            elif k == "docs":
                lines += [f"  {json.dumps(d, sort_keys=True)}" for d in v]
            else:
                lines.append(f"  {k}: {json.dumps(v, sort_keys=True)}")
        for k, v in sorted(self.timings.items()):
            lines.append(f"  time {k}: {v:.3f}s")
        return "\n".join(lines)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as Violated
    def error(self, message):
        raise UsageError(message)


def _window(text: str) -> tuple:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like lo:hi, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _default_cutoff() -> int:
    env = os.environ.get("DGHA_CUTOFF")
    return int(env) if env else DEFAULT_CUTOFF


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="presentation JSON file ('-' for stdin)")
    common.add_argument("--example", choices=corpus_names(), help="use a bundled example document")
    common.add_argument("--cutoff", type=int, default=None, help="resolution length cutoff (env DGHA_CUTOFF, default 32)")
    common.add_argument("--window", type=_window, default=DEFAULT_WINDOW, help="degree window lo:hi (default -8:8)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=10)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-determinism)")

    p = _Parser(prog="dgha", description="Homological invariants of finite-dimensional DG algebras and modules.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("cohomology", parents=[common], help="cohomology dimensions, inf, sup, amp")
    sub.add_parser("pd", parents=[common], help="projective dimension via the minimal sppj resolution")
    sub.add_parser("injdim", parents=[common], help="injective dimension via the minimal ifij resolution")
    sub.add_parser("depth", parents=[common], help="depth from Bass numbers and from a regular sequence")
    b = sub.add_parser("bass", parents=[common], help="Bass numbers dim Hom(k, M[n])")
    b.add_argument("--source", choices=("ifij", "rhom", "dginj"), default="ifij")
    r = sub.add_parser("resolve", parents=[common], help="minimal sppj or ifij resolution")
    kind = r.add_mutually_exclusive_group(required=True)
    kind.add_argument("--sppj", action="store_true")
    kind.add_argument("--ifij", action="store_true")
    sub.add_parser("gorenstein", parents=[common], help="Gorenstein test for the base ring")
    sub.add_parser("dualizing", parents=[common], help="dualizing test for the module")
    sub.add_parser("validate", parents=[common], help="parse, build and check a document")
    v = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    g = sub.add_parser("generate", parents=[common], help="print seeded random presentations")
    g.add_argument("--family", choices=gen.FAMILIES, required=True)
    g.add_argument("--p", type=int, default=0, help="field characteristic (0 for Q)")
    return p


def _read_doc(args) -> PresentationDoc:
    if args.example:
        return load_example(args.example)
    if args.input is None:
        raise UsageError(f"{args.command} needs --input or --example")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    return parse_presentation(text)


def _dim(res) -> object:
    return res.value if res.finite else None


def run(args) -> RunReport:
    cutoff = args.cutoff if args.cutoff is not None else _default_cutoff()
    lo, hi = args.window
    doc = _read_doc(args) if args.command in DOC_COMMANDS else None
    rep = RunReport(_echo(args, cutoff), doc.digest() if doc else None, cutoff, (lo, hi), args.seed, {})
    t0 = time.perf_counter()
    built = build(doc) if doc else None
    if doc:
        rep.timings["build"] = time.perf_counter() - t0
    m = built.module if built else None
    res = rep.results
    c = args.command

    if c == "validate":
        res.update({"ring_dims": _keys(built.ring.dims), "module_dims": _keys(dict(m.dims)), "valid": True})
    elif c == "cohomology":
        res.update({"H": _keys(m.hdims), "inf": _inf(m.inf), "sup": _inf(m.sup), "amp": _inf(m.amp)})
    elif c == "pd":
        r = minimal_sppj(m, cutoff)
        d = projective_dimension(m, res=r)
        res.update({"pd": _dim(d), "ranks": r.ranks, "terminated": r.terminated})
        if not d.finite:
            res["exceeds_cutoff"] = r.cutoff
            rep.verdict = INCONCLUSIVE
    elif c == "injdim":
        r = minimal_ifij(m, cutoff)
        d = injective_dimension(m, res=r)
        res.update({"injdim": _dim(d), "multiplicities": r.mults, "terminated": r.terminated})
        if not d.finite:
            res["exceeds_cutoff"] = r.cutoff
            rep.verdict = INCONCLUSIVE
    elif c == "depth":
        d = cohomological_depth(m, seed=args.seed)
        res.update(d.to_json())
        if not d.completed:
            rep.verdict = INCONCLUSIVE
        elif d.via_bass != d.via_sequence:
            rep.verdict = VIOLATED
    elif c == "bass":
        t = bass_table(m, cutoff, source=args.source, window=(lo, hi))
        res.update({"bass": t.to_json()["entries"], "certified": t.to_json()["window"], "source": t.source})
    elif c == "resolve":
        if args.sppj:
            r = minimal_sppj(m, cutoff)
            res.update({"kind": "sppj", "ranks": r.ranks, "sups": r.sups, "terminated": r.terminated,
                        "length": r.length, "hom_to_k": hom_to_simple(m, res=r).to_json()})
        else:
            r = minimal_ifij(m, cutoff)
            res.update({"kind": "ifij", "multiplicities": r.mults, "infs": r.infs, "terminated": r.terminated,
                        "length": r.length, "hom_from_k": hom_from_simple(m, res=r).to_json()})
        if not r.terminated:
            rep.verdict = INCONCLUSIVE
    elif c == "gorenstein":
        g = is_gorenstein(built.ring, cutoff)
        res.update({"gorenstein": g.verdict, "bass": g.bass.to_json()["entries"], "shift": g.shift})
    elif c == "dualizing":
        g = is_dualizing(m, cutoff)
        res.update({"dualizing": g.verdict, "bass": g.bass.to_json()["entries"], "shift": g.shift})
    elif c == "verify":
        s = run_suite(args.suite, args.seed, args.count, cutoff)
        res.update(s.to_json())
        rep.verdict = s.verdict
    elif c == "generate":
        docs = gen.generate_instances(args.family, args.seed, args.count, args.p)
        res["docs"] = [d.to_json() for d in docs]
    rep.timings["total"] = time.perf_counter() - t0
    if not args.timings:
        rep.timings = {}
    return rep


def _keys(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items()) if v}


def _inf(v):
    return v if isinstance(v, int) else str(v)


def _echo(args, cutoff) -> list:
    out = [args.command]
    for k in ("input", "example", "suite", "family", "source"):
        v = getattr(args, k, None)
        if v is not None:
            out += [f"--{k}", str(v)]
    if getattr(args, "sppj", False):
        out.append("--sppj")
    if getattr(args, "ifij", False):
        out.append("--ifij")
    out += ["--cutoff", str(cutoff), "--window", f"{args.window[0]}:{args.window[1]}", "--seed", str(args.seed)]
    if args.command in ("verify", "generate"):
        out += ["--count", str(args.count)]
    return out


def _fail(fmt: str, code: str, message: str, **extra) -> None:
    err = {"error": {"code": code, "message": message, **extra}}
    if fmt == "json":
        print(json.dumps(err, sort_keys=True, indent=2))
    else:
        print(f"error [{code}]: {message}", file=sys.stderr)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # "--window -2:3" would otherwise be read as an unknown option
    for i in range(len(argv) - 1):
        if argv[i] == "--window" and argv[i + 1].startswith("-"):
            argv[i:i + 2] = [f"--window={argv[i + 1]}", ""]
    argv = [a for a in argv if a != ""]
    fmt = "json" if "json" in argv and "--format" in argv else "text"
    try:
        args = make_parser().parse_args(argv)
        fmt = args.format
        rep = run(args)
    except UsageError as e:
        _fail(fmt, "usage", str(e))
        return EX_USAGE
    except ParseError as e:
        _fail(fmt, "parse_error", e.message, path=e.path)
        return EX_DATAERR
    except ValidationError as e:
        _fail(fmt, "validation_error", str(e.witness), axiom=e.axiom)
        return EX_DATAERR
    except (OSError, KeyError) as e:
        _fail(fmt, "input_error", str(e))
        return EX_DATAERR
    except ZeroModule as e:
        _fail(fmt, "zero_module", str(e))
        return EX_DATAERR
    except WindowTooWide as e:
        _fail(fmt, "window_too_wide", str(e))
        return EXIT[INCONCLUSIVE]
    print(rep.dumps() if fmt == "json" else rep.text())
    return EXIT[rep.verdict]


if __name__ == "__main__":
    sys.exit(main())
