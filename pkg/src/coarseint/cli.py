"""Command-line front end; every command emits a machine-readable report.

Each subcommand builds a typed request and runs it through the shared
handlers, either in process (the default) or against a running server
via --server.  Exit codes: 0 success, 1 violated precondition or usage
error, 2 an UNDECIDED verdict; undecided is an honest outcome distinct
from failure, so it never returns 0 and never pretends to be a crash.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import __version__
from .rectify import RectifyError
from .spectra import UndecidedError
from .service.handlers import HANDLERS, dispatch

__all__ = ["main", "build_parser"]

DEFAULT_PRIMES = "2,3,5,7,11,13"
CSV_COMMANDS = ("rep", "len", "dist")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for UNDECIDED here
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from None


def _parse_window(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"expected a window as lo:hi, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"expected integer window bounds, got {text!r}") from None


def _single_prime(primes: list[int], command: str) -> int:
    if len(primes) != 1:
        raise ValueError(f"{command} takes exactly one prime via --primes")
    return primes[0]


def build_parser() -> _Parser:
    parser = _Parser(prog="coarseint", description=__doc__)
    parser.add_argument("--version", action="version", version=f"coarseint {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    out = _Parser(add_help=False)
    out.add_argument("--format", choices=("json", "csv", "text"), default="json")
    out.add_argument("--out", default=None, help="write the report to this path")
    out.add_argument("--server", default=None, help="POST to a running server instead")

    def cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[out])

    p = cmd("rep", "balanced digit vector of one integer")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = cmd("len", "word length of one integer")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = cmd("dist", "distance between two integers, given as --k a,b")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--k", required=True, help="two integers, comma separated")

    p = cmd("oracle-check", "compare formula lengths against exhaustive search")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--window", default="-200:200")

    p = cmd("defect", "quasimorphism defect of a map over a window")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--window", default="-500:500")
    p.add_argument("--map", default="", help="identity, mul:N, or floordiv:N; default floordiv by g")

    p = cmd("witness", "divergent sequence with bounded image for one prime")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--primes", required=True, help="one prime not dividing g")
    p.add_argument("--imax", type=int, default=40)

    p = cmd("spectrum", "classify primes for one word-metric base")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--primes", default=DEFAULT_PRIMES)
    p.add_argument("--imax", type=int, default=40)
    p.add_argument("--threshold", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=20, help="bound for listing closure members")

    p = cmd("compare", "compare two spectra: --g/--g2 or --Q/--Q2")
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--g2", type=int, default=None)
    p.add_argument("--Q", default=None)
    p.add_argument("--Q2", default=None)
    p.add_argument("--primes", default=DEFAULT_PRIMES)
    p.add_argument("--imax", type=int, default=40)
    p.add_argument("--threshold", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = cmd("qstar", "positive integers with all prime factors in Q")
    p.add_argument("--Q", required=True)
    p.add_argument("--k", type=int, default=100, help="upper bound for members")

    p = cmd("inverse-seq", "modular inverses of one prime along the Q tower")
    p.add_argument("--Q", required=True)
    p.add_argument("--primes", required=True, help="one prime outside Q")
    p.add_argument("--imax", type=int, default=30)

    p = cmd("nonproper", "witness that multiplication by a prime outside Q is not proper")
    p.add_argument("--Q", required=True)
    p.add_argument("--primes", required=True, help="one prime outside Q")
    p.add_argument("--imax", type=int, default=30)
    p.add_argument("--threshold", type=int, default=2**20, help="magnitude bound for the signature")

    p = cmd("continuity", "sampled divisibility checks for floor division by a prime in Q")
    p.add_argument("--Q", required=True)
    p.add_argument("--primes", required=True, help="one prime")
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--precision", type=int, default=8, help="largest exponent in the moduli")
    p.add_argument("--seed", type=int, default=0)

    p = cmd("profinite-spectrum", "classify primes for one pro-Q space")
    p.add_argument("--Q", required=True)
    p.add_argument("--primes", default=DEFAULT_PRIMES)
    p.add_argument("--imax", type=int, default=30)
    p.add_argument("--threshold", type=int, default=2**20, help="magnitude bound for witnesses")
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=20, help="bound for listing closure members")

    p = cmd("partition", "blocks of the generator-translate partition over a window")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--window", required=True)

    p = cmd("rectify", "bijective replacement of a coarse map over a window")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--window", required=True)
    p.add_argument("--map", default="mul:2", help="identity, mul:N, or floordiv:N")

    p = sub.add_parser("serve", help="run the HTTP server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _request_payload(args: argparse.Namespace) -> dict:
    c = args.command
    if c in ("rep", "len"):
        return {"g": args.g, "k": args.k}
    if c == "dist":
        pair = _parse_int_list(args.k)
        if len(pair) != 2:
            raise ValueError("dist takes --k a,b with exactly two integers")
        return {"g": args.g, "a": pair[0], "b": pair[1]}
    if c in ("oracle-check",):
        lo, hi = _parse_window(args.window)
        return {"g": args.g, "lo": lo, "hi": hi}
    if c == "defect":
        lo, hi = _parse_window(args.window)
        return {"g": args.g, "lo": lo, "hi": hi, "map_spec": args.map}
    if c == "witness":
        prime = _single_prime(_parse_int_list(args.primes), c)
        return {"g": args.g, "prime": prime, "i_max": args.imax}
    if c == "spectrum":
        return {
            "g": args.g,
            "primes": _parse_int_list(args.primes),
            "i_max": args.imax,
            "threshold": args.threshold,
            "seed": args.seed,
            "member_bound": args.k,
        }
    if c == "compare":
        payload = {
            "primes": _parse_int_list(args.primes),
            "i_max": args.imax,
            "threshold": args.threshold,
            "seed": args.seed,
        }
        if args.g is not None or args.g2 is not None:
            payload["g_a"] = args.g
            payload["g_b"] = args.g2
        if args.Q is not None or args.Q2 is not None:
            payload["q_a"] = _parse_int_list(args.Q) if args.Q else None
            payload["q_b"] = _parse_int_list(args.Q2) if args.Q2 else None
        return payload
    if c == "qstar":
        return {"q": _parse_int_list(args.Q), "bound": args.k}
    if c == "inverse-seq":
        prime = _single_prime(_parse_int_list(args.primes), c)
        return {"q": _parse_int_list(args.Q), "prime": prime, "n_max": args.imax}
    if c == "nonproper":
        prime = _single_prime(_parse_int_list(args.primes), c)
        return {
            "q": _parse_int_list(args.Q),
            "prime": prime,
            "n_max": args.imax,
            "magnitude_threshold": args.threshold,
        }
    if c == "continuity":
        prime = _single_prime(_parse_int_list(args.primes), c)
        return {
            "q": _parse_int_list(args.Q),
            "prime": prime,
            "pairs": args.pairs,
            "max_exponent": args.precision,
            "seed": args.seed,
        }
    if c == "profinite-spectrum":
        return {
            "q": _parse_int_list(args.Q),
            "primes": _parse_int_list(args.primes),
            "n_max": args.imax,
            "magnitude_threshold": args.threshold,
            "continuity_pairs": args.pairs,
            "seed": args.seed,
            "member_bound": args.k,
        }
    if c == "partition":
        lo, hi = _parse_window(args.window)
        return {"g": args.g, "lo": lo, "hi": hi}
    if c == "rectify":
        lo, hi = _parse_window(args.window)
        return {"g": args.g, "lo": lo, "hi": hi, "map_spec": args.map}
    raise ValueError(f"unknown command {c!r}")


def _run_local(command: str, payload: dict) -> dict:
    model = HANDLERS[command][0]
    report = dispatch(command, model.model_validate(payload))
    return report.model_dump()


def _run_remote(server: str, command: str, payload: dict) -> dict:
    import httpx

    url = f"{server.rstrip('/')}/v1/{command}"
    try:
        response = httpx.post(url, json=payload, timeout=600.0)
    except httpx.HTTPError as exc:
        raise ValueError(f"request to {url} failed: {exc}") from None
    if response.status_code == 409:
        raise UndecidedError(response.json().get("detail", "undecided"))
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise ValueError(f"server returned {response.status_code}: {detail}")
    return response.json()


def _render_csv(report: dict) -> str:
    command = report["command"]
    if command not in CSV_COMMANDS:
        raise ValueError(f"csv output supports only {', '.join(CSV_COMMANDS)}")
    results = report["results"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if command == "rep":
        writer.writerow(["g", "k", "digits", "length"])
        writer.writerow(
            [results["base"], results["k"], ";".join(results["digits"]), results["length"]]
        )
    elif command == "len":
        writer.writerow(["g", "k", "length"])
        writer.writerow([results["base"], results["k"], results["length"]])
    else:
        writer.writerow(["g", "a", "b", "distance"])
        writer.writerow([results["base"], results["a"], results["b"], results["distance"]])
    return buf.getvalue()


def _render_text(report: dict) -> str:
    lines: list[str] = []

    def walk(prefix: str, value) -> None:
        if isinstance(value, dict):
            for key in sorted(value):
                walk(f"{prefix}.{key}" if prefix else str(key), value[key])
        elif isinstance(value, list):
            lines.append(f"{prefix}: {json.dumps(value)}")
        else:
            lines.append(f"{prefix}: {value}")

    for key in ("command", "version", "duration_ms"):
        lines.append(f"{key}: {report[key]}")
    walk("config", report["config"])
    walk("results", report["results"])
    for i, entry in enumerate(report["evidence"]):
        walk(f"evidence[{i}]", entry)
    return "\n".join(lines) + "\n"


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(report)
    return _render_text(report)


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _normalize_argv(argv: list[str]) -> list[str]:
    # argparse reads a leading dash in "--window -50:50" as a new option;
    # merge such values into --flag=value form
    value_flags = {"--window", "--k"}
    merged: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in value_flags and nxt and nxt.startswith("-") and not nxt.startswith("--"):
            merged.append(f"{tok}={nxt}")
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_normalize_argv(list(argv if argv is not None else sys.argv[1:])))

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    try:
        payload = _request_payload(args)
        if args.server:
            report = _run_remote(args.server, args.command, payload)
        else:
            report = _run_local(args.command, payload)
        text = _render(report, args.format)
        _emit(text, args.out)
    except UndecidedError as exc:
        print(f"UNDECIDED: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RectifyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if report["results"].get("undecided_primes"):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
