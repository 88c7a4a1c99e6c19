"""Command-line front end.

    genplateau construct --theorem T2 --params ex4.json --out out/
    genplateau verify f.json
    genplateau analyze f.json --out out/
    genplateau spectrum f.json
    genplateau reproduce --example 9

Reports are JSON (schema ``genplateau.report/1``) written to ``--out`` or to
standard output; one-line summaries go to standard error when ``--out`` is
used.  Exit codes: 0 success, 1 negative verdict (not plateaued, failed
claim, digest mismatch), 2 usage or input error, 3 precondition,
verification or size-guard failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .analysis import analyze
from .errors import NotPlateaued, PlateauError, SizeGuardExceeded
from .params import THEOREMS, build, load, output_size
from .walsh import GenFunction, classify, walsh_transform

SCHEMA = "genplateau.report/1"
DEFAULT_MAX_DOMAIN = 3**12

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit(name: str, payload: dict, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(_dump(payload))
    else:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(_dump(payload))


def _read_function(path: str, max_domain: int) -> GenFunction:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        f = GenFunction.from_dict(doc)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path} is not a function file") from exc
    _guard(f.space.size, max_domain)
    return f


def _guard(size: int, max_domain: int) -> None:
    if size > max_domain:
        raise SizeGuardExceeded(f"domain size {size} exceeds --max-domain {max_domain}", size=size, max_domain=max_domain)


def _report(command: str, **body) -> dict:
    return {"schema": SCHEMA, "command": command, **body}


def _verification(f: GenFunction, threads: int) -> tuple[dict, bool]:
    spec = walsh_transform(f, threads=threads)
    total = spec.parseval_sum()
    parseval = total.coeffs[0] == f.p ** (2 * f.n) and not any(total.coeffs[1:])
    try:
        rep = classify(f, spec)
        body = {"classification": rep.to_dict(full=True), "plateaued": True}
    except NotPlateaued as exc:
        body = {"classification": None, "plateaued": False, "detail": exc.to_dict()}
    body["parseval"] = parseval
    return body, body["plateaued"] and parseval


def cmd_construct(args) -> int:
    if not args.params:
        raise UsageError("construct needs --params")
    try:
        doc = load(args.params)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {args.params}: {exc}") from exc
    if args.theorem:
        declared = doc.get("theorem", args.theorem)
        # C3 is the indirect sum with the PS_ap family, so asking for T5 runs it unchanged
        if declared != args.theorem and (args.theorem, declared) != ("T5", "C3"):
            raise UsageError(f"--theorem {args.theorem} disagrees with the parameter file ({declared})")
        doc.setdefault("theorem", args.theorem)
    try:
        _guard(output_size(doc), args.max_domain)
        res = build(doc, args.threads)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed parameter file: {exc!r}") from exc
    out = Path(args.out) if args.out else None
    files = []
    for i, f in enumerate(res.functions):
        name = "function.json" if len(res.functions) == 1 else f"function_{i + 1}.json"
        files.append(name)
        if out is not None:
            _emit(name, f.to_dict(), out)
    verification = [f.meta.get("classification") or classify(f, threads=args.threads).to_dict() for f in res.functions]
    report = _report("construct", theorem=res.theorem, functions=files, verification=verification)
    if res.design is not None:
        report["design"] = res.design.to_dict()
    if out is None:
        report["function_tables"] = [f.to_dict() for f in res.functions]
    _emit("report.json", report, out)
    if out is not None:
        print(f"construct {res.theorem}: {len(res.functions)} function(s) written to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    f = _read_function(args.input, args.max_domain)
    body, ok = _verification(f, args.threads)
    _emit("verify.json", _report("verify", **body), Path(args.out) if args.out else None)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_analyze(args) -> int:
    f = _read_function(args.input, args.max_domain)
    body = analyze(f, args.threads)
    _emit("analyze.json", _report("analyze", **body), Path(args.out) if args.out else None)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    f = _read_function(args.input, args.max_domain)
    spec = walsh_transform(f, threads=args.threads)
    _emit("spectrum.json", _report("spectrum", spectrum=spec.to_dict()), Path(args.out) if args.out else None)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.example is None:
        raise UsageError("reproduce needs --example N or --example all")
    numbers = corpus.EXAMPLES if args.example == "all" else [int(args.example)]
    out = Path(args.out) if args.out else None
    status = EXIT_OK
    for n in numbers:
        rep, res = corpus.reproduce(n, args.threads)
        if out is not None:
            for i, f in enumerate(res.functions):
                suffix = "" if len(res.functions) == 1 else f"_{i + 1}"
                _emit(f"example{n}{suffix}.json", f.to_dict(), out)
        _emit(f"example{n}_report.json", _report("reproduce", **rep), out)
        verdict = "ok" if rep["ok"] else "FAILED"
        print(f"example {n} ({rep['theorem']}): {verdict}", file=sys.stderr)
        if not rep["ok"]:
            status = EXIT_NEGATIVE
    return status


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genplateau", description="Construct and verify generalized plateaued functions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for output files (default: JSON to stdout)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--max-domain", type=int, default=DEFAULT_MAX_DOMAIN, help="largest domain size accepted")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("construct", parents=[common], help="build a function from a parameter file")
    c.add_argument("--theorem", choices=THEOREMS)
    c.add_argument("--params")
    for name, helptext in (("verify", "classify and check Parseval"), ("analyze", "structural predicates"), ("spectrum", "dump the exact Walsh spectrum")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("input", help="function file (JSON)")
    r = sub.add_parser("reproduce", parents=[common], help="rebuild a corpus example and diff it")
    r.add_argument("--example", help="example number 1-11 or 'all'")
    return ap


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "analyze": cmd_analyze, "spectrum": cmd_spectrum, "reproduce": cmd_reproduce}


def main(argv=None) -> int:
    try:
        args = parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "reproduce" and args.example not in (None, "all"):
            if not args.example.isdigit() or int(args.example) not in corpus.EXAMPLES:
                raise UsageError(f"unknown example {args.example!r}")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stdout.write(_dump({"schema": SCHEMA, "error": "usage", "message": str(exc)}))
        return EXIT_USAGE
    except PlateauError as exc:
        sys.stdout.write(_dump({"schema": SCHEMA, **exc.to_dict()}))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
