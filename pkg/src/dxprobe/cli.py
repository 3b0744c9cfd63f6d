"""Command-line interface.

Subcommands: infer, sweep-bias, learn-demo, severity-demo, generate-kb,
serve. Tabular output is plain text by default, RFC-4180-style CSV with
``--csv`` (always CSV when written to ``--out``); numbers are printed with
6 significant digits. Exit codes: 0 success, 2 user/input error, 3
environment error. ``DX_LOG`` sets the log level.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import socket
import sys
from pathlib import Path

from .errors import DxProbeError
from .inference import posterior
from .kb import (
    KnowledgeBase,
    fixture_path,
    generate_synthetic_referral_kb,
    load_kb,
    save_kb,
    with_reporting,
)
from .learning import expected_params
from .network import Evidence
from .reports import OpenProbeResponse
from .session import (
    differential,
    param_posteriors,
    start_session,
    submit_open_probe,
)
from .severity import DEMO_CLOSED_FORM, build_severity_demo, severity_posterior_demo

log = logging.getLogger("dxprobe")

EXIT_OK = 0
EXIT_USER = 2
EXIT_ENV = 3


def fmt(x: float) -> str:
    return f"{x:.6g}"


class CliError(Exception):
    """User/input error: message printed to stderr, exit code 2."""


def _write_table(header: list[str], rows: list[list[str]], as_csv: bool,
                 out: str | None) -> None:
    if as_csv or out:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
        lines = ["  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip()
                 for row in [header] + rows]
        text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(path: str) -> KnowledgeBase:
    if path == "net-a" or path == "net-s":
        path = str(fixture_path(path))
    try:
        return load_kb(path)
    except DxProbeError as exc:
        raise CliError(str(exc)) from exc


def _parse_evidence(terms: str | None, kb: KnowledgeBase) -> Evidence:
    hard: dict[str, str] = {}
    virtual: dict[str, tuple[float, ...]] = {}
    if not terms:
        return Evidence()
    for term in terms.split(","):
        term = term.strip()
        if not term:
            continue
        if "~" in term:
            var, _, weights = term.partition("~")
            try:
                vec = tuple(float(w) for w in weights.split(":"))
            except ValueError:
                raise CliError(f"evidence term {term!r}: weights must be numbers")
            virtual[var.strip()] = vec
        elif "=" in term:
            var, _, state = term.partition("=")
            hard[var.strip()] = state.strip()
        else:
            raise CliError(f"evidence term {term!r}: expected var=state or var~w1:w2")
    try:
        ev = Evidence(hard, virtual)
        ev.validate(kb.network)
    except DxProbeError as exc:
        raise CliError(f"evidence: {exc}") from exc
    return ev


# --- subcommands -----------------------------------------------------------------


def cmd_infer(args) -> int:
    kb = _load(args.kb)
    evidence = _parse_evidence(args.evidence, kb)
    queries = []
    for q in args.query or []:
        queries.extend(s.strip() for s in q.split(",") if s.strip())
    if not queries:
        queries = list(kb.disorders)
    rows = []
    for q in queries:
        try:
            post = posterior(kb.network, q, evidence)
        except DxProbeError as exc:
            raise CliError(str(exc)) from exc
        for state, p in zip(post.states, post.probabilities):
            rows.append([q, state, fmt(p)])
    _write_table(["variable", "state", "probability"], rows, args.csv, args.out)
    return EXIT_OK


def cmd_sweep_bias(args) -> int:
    kb = _load(args.kb)
    symptoms = [s.strip() for s in args.symptoms.split(",") if s.strip()]
    if not symptoms:
        raise CliError("--symptoms must name at least one reported symptom")
    for s in symptoms:
        if s not in kb.symptom_ids:
            raise CliError(f"unknown symptom {s!r}")
    try:
        biases = [float(b) for b in args.bias.split(",") if b.strip()]
    except ValueError:
        raise CliError("--bias must be a comma-separated list of numbers")
    if not biases:
        raise CliError("--bias must list at least one value")
    response = OpenProbeResponse("initial", {s: "present" for s in symptoms})
    rows = []
    for b in biases:
        if b < 1.0:
            raise CliError(f"bias {b} must be >= 1")
        kb_b = with_reporting(kb, reportability=args.reportability, bias=b)
        session = start_session(kb_b, "fixed-params")
        try:
            diff = submit_open_probe(session, response)
        except DxProbeError as exc:
            raise CliError(str(exc)) from exc
        by_name = {p.variable: p for p in diff}
        rows.append([fmt(b)] + [fmt(1.0 - by_name[d].p("absent")) for d in kb.disorders])
    _write_table(["bias"] + list(kb.disorders), rows, args.csv, args.out)
    return EXIT_OK


def _parse_scenario(token: str, kb: KnowledgeBase) -> dict[str, str]:
    token = token.strip()
    if not token:
        raise CliError("empty scenario")
    symptoms = list(kb.symptom_ids)
    if token[-1] in ("p", "a") and token[:-1].isdigit():
        k = int(token[:-1])
        if k > len(symptoms):
            raise CliError(f"scenario {token!r}: only {len(symptoms)} symptoms available")
        state = "present" if token[-1] == "p" else "absent"
        return {s: state for s in symptoms[:k]}
    reported = {}
    for part in token.split("+"):
        var, eq, state = part.partition("=")
        if not eq:
            raise CliError(f"scenario term {part!r}: expected symptom=state")
        if var not in kb.symptom_ids:
            raise CliError(f"scenario references unknown symptom {var!r}")
        reported[var] = state
    return reported


def cmd_learn_demo(args) -> int:
    kb = _load(args.kb)
    tokens = [t for t in args.scenarios.split(",") if t.strip()]
    if not tokens:
        raise CliError("--scenarios must list at least one scenario")
    rows = []
    for token in tokens:
        reported = _parse_scenario(token, kb)
        session = start_session(kb, "learn-global")
        try:
            submit_open_probe(session, OpenProbeResponse("initial", reported))
        except DxProbeError as exc:
            raise CliError(f"scenario {token!r}: {exc}") from exc
        e_r, e_b = expected_params(param_posteriors(session))
        n_present = sum(1 for s in reported.values() if s != "absent")
        n_absent = sum(1 for s in reported.values() if s == "absent")
        rows.append([token.strip(), str(n_present), str(n_absent), fmt(e_r), fmt(e_b)])
    _write_table(
        ["scenario", "reported_present", "reported_absent",
         "expected_reportability", "expected_bias"],
        rows, args.csv, args.out,
    )
    return EXIT_OK


def cmd_severity_demo(args) -> int:
    if args.grid_points < 2:
        raise CliError("--grid-points must be at least 2")
    net, _ = build_severity_demo(grid_points=args.grid_points)
    _, heart = severity_posterior_demo(net, OpenProbeResponse("initial", {"rash": "present"}))
    rash, _ = severity_posterior_demo(net, OpenProbeResponse("initial", {"chest_pain": "present"}))
    rows = [
        ["minor_reported", "heart_attack", fmt(heart.p("present")),
         fmt(DEMO_CLOSED_FORM["minor_reported_major_posterior"])],
        ["major_reported", "rash_disease", fmt(rash.p("present")),
         fmt(DEMO_CLOSED_FORM["major_reported_minor_posterior"])],
    ]
    _write_table(["case", "disorder", "posterior", "closed_form"], rows, args.csv, args.out)
    return EXIT_OK


def cmd_generate_kb(args) -> int:
    try:
        kb = generate_synthetic_referral_kb(
            seed=args.seed,
            n_disorders=args.disorders,
            n_symptoms_per_disorder=args.symptoms_per_disorder,
            overlap_fraction=args.overlap,
            reportability=args.reportability,
            bias=args.bias,
        )
    except DxProbeError as exc:
        raise CliError(str(exc)) from exc
    save_kb(kb, args.out)
    print(f"wrote {args.out}: {len(kb.network)} variables, "
          f"{len(kb.reports)} report parameters")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    kbs = {}
    for path in args.kb:
        name = Path(path).stem if Path(path).suffix else path
        kbs[name] = _load(path)
    # Fail on an occupied port before uvicorn takes over the process.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.host, args.port))
    except OSError as exc:
        sys.stderr.write(f"cannot bind {args.host}:{args.port}: {exc}\n")
        return EXIT_ENV
    finally:
        probe.close()
    app = create_app(kbs, snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level=args.uvicorn_log_level)
    return EXIT_OK


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dxprobe",
        description="Diagnostic inference that also learns from unmentioned symptoms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kb(p):
        p.add_argument("kb", nargs="?", help="KB file path (or bundled name net-a / net-s)")
        p.add_argument("--kb", dest="kb_flag", help=argparse.SUPPRESS)

    def add_common(p):
        p.add_argument("--csv", action="store_true", help="emit CSV instead of a text table")
        p.add_argument("--out", help="write the table to this file (CSV)")

    p = sub.add_parser("infer", help="posterior queries on a KB")
    add_kb(p)
    p.add_argument("--evidence", help="comma-separated var=state and var~w1:w2 terms")
    p.add_argument("--query", action="append", help="variable to query (repeatable / comma list)")
    add_common(p)
    p.set_defaults(fn=cmd_infer)

    p = sub.add_parser("sweep-bias", help="differential vs global reporting bias")
    add_kb(p)
    p.add_argument("--symptoms", required=True, help="comma-separated reported-present symptoms")
    p.add_argument("--bias", default="1,2,5,10,20,50,100", help="comma-separated bias values")
    p.add_argument("--reportability", type=float, default=0.9)
    add_common(p)
    p.set_defaults(fn=cmd_sweep_bias)

    p = sub.add_parser("learn-demo", help="expected reporting parameters per scenario")
    add_kb(p)
    p.add_argument("--scenarios", default="0p,1p,2p,3p,1a",
                   help="comma list: Np / Na shorthands or symptom=state[+...]")
    add_common(p)
    p.set_defaults(fn=cmd_learn_demo)

    p = sub.add_parser("severity-demo", help="two-disease severity example with closed forms")
    p.add_argument("--grid-points", type=int, default=1000)
    add_common(p)
    p.set_defaults(fn=cmd_severity_demo)

    p = sub.add_parser("generate-kb", help="write a synthetic referral-clinic KB")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--disorders", type=int, default=5)
    p.add_argument("--symptoms-per-disorder", type=int, default=4)
    p.add_argument("--overlap", type=float, default=0.25)
    p.add_argument("--reportability", type=float, default=0.9)
    p.add_argument("--bias", type=float, default=5.0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_generate_kb)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("kb", nargs="+", help="KB files to serve (name = file stem)")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--snapshot-dir", help="persist evidence logs here and replay on restart")
    p.add_argument("--uvicorn-log-level", default="warning", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("DX_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse errors already use exit code 2
        return int(exc.code or 0)
    if hasattr(args, "kb_flag") and args.kb_flag:
        args.kb = args.kb_flag
    if hasattr(args, "kb") and args.kb is None and args.fn is not cmd_serve:
        sys.stderr.write(f"error: {args.command}: a KB path is required\n")
        return EXIT_USER
    try:
        return args.fn(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USER
    except DxProbeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USER
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
